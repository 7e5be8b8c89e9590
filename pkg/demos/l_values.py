"""One L-value from the inside out, at q = 23 (class number 3).

Builds the canonical character psi of conductor (sqrt(-23)), prints its
values on the prime above 2 and the first Dirichlet coefficients of
each twist, then the three central values, their root numbers, and the
assembled product that feeds the final order.
"""

from fractions import Fraction

from cmsha import (build_psi, central_value, characters, class_group,
                   coefficients, make_context, total_L, truncation)

Q = 23
DIGITS = 32


def main():
    ctx = make_context(DIGITS)
    G = class_group(Q)
    psi = build_psi(G, ctx)

    print("q = %d, h = %d" % (Q, G.h))
    for f, v in zip(psi.gen_elements, psi.gen_values):
        print("psi on ideal class generator: alpha = %s -> %s" % (
            f, ctx.mp.nstr(v, 10)))
    print()

    # the default t-grid evaluates down to t = 4/5, which sets the length
    M = truncation(Q, DIGITS, Fraction(4, 5)) + 1
    series = [coefficients(psi, chi, M, Q) for chi in characters(G)]
    print("first coefficients a_1..a_12 of each twisted series:")
    for chi, ser in zip(characters(G), series):
        row = "  ".join(ctx.mp.nstr(ser.a[n], 4) for n in range(1, 13))
        print("    chi_%d: %s" % (chi.index, row))
    print()

    print("central values (smoothed approximate functional equation):")
    for chi, ser in zip(characters(G), series):
        cv = central_value(ser, Q, ctx)
        print("    chi_%d: |L| = %s   w = %s   residual = %s" % (
            chi.index,
            ctx.mp.nstr(abs(cv.L), 20),
            ctx.mp.nstr(cv.w, 10),
            ctx.mp.nstr(cv.residual, 3)))
    print()

    tot = total_L(Q, DIGITS)
    print("product over conjugate pairs: L_total = %s" %
          ctx.mp.nstr(tot.L_total, 25))


if __name__ == "__main__":
    main()
