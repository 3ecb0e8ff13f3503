"""Re-fit the divergence decay rate from decay.csv.

Usage: refit_decay.py decay.csv T0 T1

Fits log(div_norm) = a - rate * t over T0 <= t <= T1 by ordinary least
squares and prints the rate.
"""
import csv
import math
import statistics
import sys


def main(argv):
    if len(argv) != 4:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    path, t0, t1 = argv[1], float(argv[2]), float(argv[3])
    ts, ys = [], []
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            t = float(row["t"])
            d = float(row["div_norm"])
            if t0 - 1e-12 <= t <= t1 + 1e-12 and d > 0:
                ts.append(t)
                ys.append(math.log(d))
    if len(ts) < 2:
        print("not enough points in the window", file=sys.stderr)
        return 1
    slope, _ = statistics.linear_regression(ts, ys)
    print(f"{-slope:.17g}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
