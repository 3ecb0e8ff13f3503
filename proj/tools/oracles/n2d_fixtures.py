"""Strip-ratio fixtures for harmonic polynomials, in exact rational arithmetic.

Both p = x and p = x^2 - y^2 have exact nodal gradients under second-order
stencils, so the ratio only depends on the strip geometry: nodes with
distance to the boundary <= s, the normal of the nearest side (ties: left,
right, bottom, top), nodes with i or j index both within one cell of the
ends skipped, trapezoid weights.
"""
from fractions import Fraction as F
import sys


def ratio(n, s, grad):
    num = F(0)
    den = F(0)
    for j in range(n + 1):
        for i in range(n + 1):
            near_x = i < 2 or i > n - 2
            near_y = j < 2 or j > n - 2
            if near_x and near_y:
                continue
            d = [F(i, n), F(n - i, n), F(j, n), F(n - j, n)]
            side = min(range(4), key=lambda q: (d[q], q))
            if d[side] > s:
                continue
            w = F(1, n * n)
            if i in (0, n):
                w /= 2
            if j in (0, n):
                w /= 2
            gx, gy = grad(F(i, n), F(j, n))
            gn = gx if side < 2 else gy
            num += w * (gx * gx + gy * gy)
            den += w * gn * gn
    return num / den


def main():
    s = F(1, 10)
    for n in (32, 64):
        rx = ratio(n, s, lambda x, y: (F(1), F(0)))
        rq = ratio(n, s, lambda x, y: (2 * x, -2 * y))
        print(f"n={n} s=0.1 p=x ratio={float(rx):.15g} ({rx})")
        print(f"n={n} s=0.1 p=x^2-y^2 ratio={float(rq):.15g} ({rq})")


if __name__ == "__main__":
    sys.exit(main())
