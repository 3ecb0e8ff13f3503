// Prints the Stokes-estimate fit from the dense-oracle pipeline, used to
// freeze the beta-hat regression fixture.
#include <cstdio>
#include <cstdlib>

#include "uns2d/experiments.hpp"

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 32;
  const long samples = argc > 2 ? std::atol(argv[2]) : 200;
  uns2d::SampleSpec spec;
  spec.seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 7;
  const uns2d::Grid2D grid(n, n);
  for (auto backend : {uns2d::StokesBackend::DenseOracle, uns2d::StokesBackend::Fast}) {
    const uns2d::FitResult fit = uns2d::verify_stokes_estimate(spec, samples, grid, backend);
    std::printf("%s n=%d samples=%ld seed=%llu beta_hat=%.17g c_hat=%.17g max_ratio=%.17g skipped=%ld\n",
                backend == uns2d::StokesBackend::Fast ? "fast " : "dense", n, samples,
                static_cast<unsigned long long>(spec.seed), fit.beta_hat, fit.c_hat, fit.max_ratio,
                fit.skipped);
  }
  return 0;
}
