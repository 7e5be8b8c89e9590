import itertools

import pytest

from cmsha.classgroup import (ClassChar, QuadForm, characters, class_group,
                              compose, dlog, principal_form, reduce,
                              reduced_forms)
from cmsha.errors import InputError


def test_reduced_forms_reference_sets():
    assert reduced_forms(7) == [QuadForm(1, 1, 2)]
    assert reduced_forms(23) == [QuadForm(1, 1, 6), QuadForm(2, -1, 3),
                                 QuadForm(2, 1, 3)]
    assert len(reduced_forms(47)) == 5
    assert len(reduced_forms(71)) == 7
    for f in reduced_forms(71):
        assert f.disc() == -71
        assert abs(f.b) <= f.a <= f.c
        if f.a == f.c or f.a == abs(f.b):
            assert f.b >= 0


def test_q_validation():
    for bad in (4, 9, 13, 15, 1, -7):
        with pytest.raises(InputError):
            reduced_forms(bad)


def test_reduce_known_case():
    # (2, 3, 4) has discriminant -23 and reduces by one normalize step
    assert reduce(QuadForm(2, 3, 4)) == QuadForm(2, -1, 3)
    assert reduce(QuadForm(1, 1, 2)) == QuadForm(1, 1, 2)
    assert reduce(QuadForm(6, 1, 1)) == QuadForm(1, 1, 6)
    with pytest.raises(InputError):
        reduce(QuadForm(1, 0, 0))
    with pytest.raises(InputError):
        reduce(QuadForm(-1, 1, -2))


def test_reduce_preserves_class_q23():
    # translations and the swap generate the SL2(Z) action; spot check
    # that arbitrary unreduced representatives come back to their class
    G = class_group(23)
    f = QuadForm(2, 1, 3)
    # apply x -> x+1 translations: (a, b, c) -> (a, b + 2a, a + b + c)
    g = f
    for _ in range(3):
        g = QuadForm(g.a, g.b + 2 * g.a, g.a + g.b + g.c)
    assert g.disc() == -23 and g != f
    assert reduce(g) == f


def test_compose_group_axioms_q71():
    forms = reduced_forms(71)
    e = principal_form(71)
    for f in forms:
        assert compose(f, e) == f
        assert compose(f, f.inverse()) == e
    for f, g in itertools.product(forms, repeat=2):
        assert compose(f, g) == compose(g, f)
    for f, g, h in itertools.islice(
            itertools.product(forms, repeat=3), 0, None, 7):
        assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_compose_errors():
    with pytest.raises(InputError):
        compose(QuadForm(1, 1, 2), QuadForm(1, 1, 6))


def test_q23_generator_powers():
    g = QuadForm(2, 1, 3)
    g2 = compose(g, g)
    g3 = compose(g2, g)
    assert g2 == QuadForm(2, -1, 3)
    assert g3 == principal_form(23)


def test_class_group_structure():
    for q, orders in ((7, ()), (23, (3,)), (31, (3,)), (47, (5,)),
                      (71, (7,)), (311, (19,)), (479, (25,))):
        G = class_group(q)
        assert G.orders == orders
        total = 1
        for d in G.orders:
            total *= d
        assert total == max(G.h, 1) and G.h == len(G.forms)
        for d1, d2 in zip(G.orders, G.orders[1:]):
            assert d2 % d1 == 0


def test_dlogs_reproduce_forms():
    for q in (23, 47, 71):
        G = class_group(q)
        for i, f in enumerate(G.forms):
            acc = principal_form(q)
            for (gen, _), x in zip(G.generators, G.dlogs[i]):
                for _ in range(x):
                    acc = compose(acc, gen)
            assert acc == f
            assert dlog(G, f) == G.dlogs[i]


def test_index_and_inverse_index():
    G = class_group(23)
    for i, f in enumerate(G.forms):
        assert G.index_of(f) == i
        j = G.inverse_index(i)
        assert compose(f, G.forms[j]) == principal_form(23)
    with pytest.raises(InputError):
        G.index_of(QuadForm(1, 1, 2))


def test_characters_orthogonality(ctx32):
    for q in (23, 47, 71):
        G = class_group(q)
        chars = characters(G)
        assert len(chars) == G.h
        assert chars[0].exponents == tuple(0 for _ in G.orders)
        for chi in chars:
            tab = chi.values_on(G, ctx32)
            for z in tab:
                assert abs(abs(z) - 1) < ctx32.tol(6)
            s = sum(tab, ctx32.mp.mpc(0))
            if chi.index == 0:
                assert abs(s - G.h) < ctx32.tol(4)
            else:
                assert abs(s) < ctx32.tol(4)
        # column orthogonality at a non-principal class
        s = sum((chi.values_on(G, ctx32)[1] for chi in chars),
                ctx32.mp.mpc(0))
        assert abs(s) < ctx32.tol(4)


def test_character_value_on_unreduced(ctx32):
    G = class_group(23)
    chi = characters(G)[1]
    assert abs(chi.value(G, ctx32, QuadForm(2, 3, 4))
               - chi.values_on(G, ctx32)[G.index_of(QuadForm(2, -1, 3))]) == 0
