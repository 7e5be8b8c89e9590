"""Scan the conjectural orders for every suitable prime up to a bound.

Prints one line per q = 7 (mod 8): class number, group shape, the real
number the formula produces, the rounded order, and its square root.
Every order should land within 10^-10 of a perfect square.

Usage: python3 sha_scan.py [limit]   (default 200)
"""

import sys
import time

from cmsha import is_prime, sha_order


def main(limit):
    print("%5s %3s %-6s %26s %10s %6s %9s" % (
        "q", "h", "clgp", "sha_real", "sha", "sqrt", "resid"))
    t0 = time.time()
    for q in range(7, limit + 1, 8):
        if not is_prime(q):
            continue
        rep = sha_order(q, 32)
        clgp = "x".join(str(d) for d in rep.clgp) or "1"
        print("%5d %3d %-6s %26.16g %10d %6d %9.1e%s" % (
            q, rep.h, clgp, float(rep.sha_real), rep.sha_round,
            rep.sha_sqrt, float(rep.residual),
            "" if rep.verified else "  UNVERIFIED"))
    print("total %.1fs" % (time.time() - t0))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 200)
