import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint
from sympy.functions.combinatorial.numbers import kronecker_symbol

from irreducibles.quadfield.forms import (
    compose,
    discriminant,
    form_power,
    inverse_form,
    is_reduced,
    principal_form,
    reduce_form,
    reduced_forms,
)


def fundamental(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


SQUAREFREE = [d for d in range(-400, 0) if all(e == 1 for e in factorint(-d).values())]


def analytic_class_number(disc: int) -> int:
    w = {-3: 6, -4: 4}.get(disc, 2)
    s = sum(a * kronecker_symbol(disc, a) for a in range(1, -disc))
    h = -w * s / (2 * -disc)
    assert h == int(h)
    return int(h)


@pytest.mark.parametrize("d", SQUAREFREE[::3])
def test_class_number_matches_analytic_formula(d):
    disc = fundamental(d)
    forms = reduced_forms(disc)
    assert len(forms) == analytic_class_number(disc)
    assert all(is_reduced(f) and discriminant(f) == disc for f in forms)


def test_known_class_numbers():
    assert reduced_forms(-20) == [(1, 0, 5), (2, 2, 3)]
    for disc, h in [(-4, 1), (-3, 1), (-23, 3), (-47, 5), (-71, 7), (-199, 9), (-3299, 27)]:
        assert len(reduced_forms(disc)) == h


@pytest.mark.parametrize("disc", [-20, -23, -84, -260, -1540, -3299])
def test_group_axioms(disc):
    forms = reduced_forms(disc)
    e = principal_form(disc)
    for f in forms:
        assert compose(f, e) == f
        assert compose(f, inverse_form(f)) == e
        for g in forms:
            fg = compose(f, g)
            assert fg in forms and fg == compose(g, f)
    for f in forms[:6]:
        for g in forms[:6]:
            for k in forms[:6]:
                assert compose(compose(f, g), k) == compose(f, compose(g, k))


@settings(max_examples=80)
@given(st.integers(1, 60), st.integers(-60, 60), st.sampled_from([-23, -20, -56, -84, -255]))
def test_reduction_preserves_discriminant(a, b, disc):
    if (b * b - disc) % (4 * a):
        return
    f = (a, b, (b * b - disc) // (4 * a))
    r = reduce_form(f)
    assert discriminant(r) == disc and is_reduced(r)
    assert reduce_form(r) == r


def test_powers():
    f = (2, 1, 3)  # order 3 in discriminant -23
    assert form_power(f, 3) == principal_form(-23)
    assert form_power(f, -1) == inverse_form(f)
    assert form_power(f, 0) == principal_form(-23)
