"""Tour of the form class groups behind the computation.

For a handful of primes q = 7 (mod 8): list the reduced binary
quadratic forms of discriminant -q, the class number h, the invariant
factors of the group, and for q = 23 the full character table.
"""

from cmsha import characters, class_group, compose, make_context


def show_group(q):
    G = class_group(q)
    print("q = %d:  h = %d,  invariant factors %s" % (
        q, G.h, list(G.orders) or [1]))
    if G.h <= 8:
        for f, vec in zip(G.forms, G.dlogs):
            print("    (%3d, %3d, %3d)   dlog %s" % (f.a, f.b, f.c, list(vec)))
    else:
        a, b, c = G.forms[1].a, G.forms[1].b, G.forms[1].c
        print("    %d forms; first nontrivial (%d, %d, %d)" % (G.h, a, b, c))
    print()


def show_characters(q):
    ctx = make_context(32)
    G = class_group(q)
    print("character table for q = %d (rows chi, columns reduced forms):" % q)
    for chi in characters(G):
        row = [ctx.mp.nstr(z, 6) for z in chi.values_on(G, ctx)]
        print("    chi_%d: %s" % (chi.index, "  ".join(row)))
    g, d = G.generators[0]
    cube = compose(compose(g, g), g)
    print("generator (%d, %d, %d) has order %d; its cube is (%d, %d, %d)" % (
        g.a, g.b, g.c, d, cube.a, cube.b, cube.c))


if __name__ == "__main__":
    for q in (7, 23, 31, 71, 151, 479):
        show_group(q)
    show_characters(23)
