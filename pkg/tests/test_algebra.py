from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flatwave.algebra import (
    FIELD_PRIME,
    FactoredRational,
    LinearForm,
    PoleError,
    Polynomial,
    Ring,
    Variable,
    eval_rational,
    exactly_equal,
    poly_add,
    poly_mul,
    poly_sub,
    probably_equal,
    rational_add,
    rational_equal,
    rational_sum,
    substitute_shift,
)

R2 = Ring.for_graph_ids(2, ("A", "B"))  # bubble
X1, X2, YA, YB = (LinearForm.variable(R2, i) for i in range(4))
L1, L2 = X1 + YA + YB, X2 + YA + YB
LA, LB, LAB = X1 + X2 + YB.scale(2), X1 + X2 + YA.scale(2), X1 + X2

RC = Ring.for_graph_ids(2, ("e",))  # 2-site chain
CX1, CX2, CY = (LinearForm.variable(RC, i) for i in range(3))


def frac(ring, atoms, num=1, scalar=1):
    return FactoredRational(ring, num, atoms, scalar)


def test_variable_order_and_names():
    assert [v.name for v in R2.variables] == ["X1", "X2", "Y[A]", "Y[B]"]
    assert Variable("Y", "A").name == "Y[A]"


def test_poly_arith_examples():
    l1, l2, l12 = CX1 + CY, CX2 + CY, CX1 + CX2
    assert str(poly_sub(poly_add(l1.poly, l2.poly), l12.poly)) == "2*Y[e]"
    p = (X1.poly * X2.poly) + 3
    assert poly_add(p, Polynomial.constant(R2, 0)) == p
    assert str(poly_add(LB.poly, LA.poly)) == "2*X1 + 2*X2 + 2*Y[A] + 2*Y[B]"


def test_canonical_print_order():
    p = X1.poly * X1.poly - X2.poly * YA.poly + YB.poly * 4 - 7
    assert str(p) == "X1^2 - X2*Y[A] + 4*Y[B] - 7"
    assert str(Polynomial.constant(R2, 0)) == "0"


def test_substitute_shift_examples():
    assert str(substitute_shift(CX1.poly, 0, CY)) == "X1 + Y[e]"
    assert str(substitute_shift(CX1.poly * CX2.poly, 0, CY)) == "X1*X2 + X2*Y[e]"
    # the recursion step of the 2-site chain: 1/(X1 X2) shifted at both ends
    shifted = frac(RC, [CX1, CX2]).shift_many({0: CY, 1: CY})
    assert exactly_equal(shifted, frac(RC, [CX1 + CY, CX2 + CY]))


def test_rational_add_examples():
    l1, l2, l12 = CX1 + CY, CX2 + CY, CX1 + CX2
    got = rational_add(frac(RC, [l1, l12]), frac(RC, [l2, l12]), reduce=False)
    assert rational_equal(got, frac(RC, [l1, l2, l12], l1.poly + l2.poly))
    x = frac(RC, [l1])
    assert rational_equal(rational_add(x, FactoredRational.zero(RC)), x)
    got = rational_add(frac(R2, [L1, L2, LA, LAB]), frac(R2, [L1, L2, LB, LAB]))
    assert rational_equal(got, frac(R2, [L1, L2, LA, LB, LAB], LA.poly + LB.poly))


def test_rational_equal_examples():
    assert not rational_equal(frac(RC, [CX1]), frac(RC, [CX2]))
    assert rational_equal(frac(RC, [CX1.scale(2)]), frac(RC, [CX1], 1, Fraction(1, 2)))


def test_eval_examples():
    can = frac(R2, [L1, L2, LA, LB, LAB], LA.poly + LB.poly)
    assert eval_rational(can, [1, 1, 1, 1]) == Fraction(1, 36)
    chain = frac(RC, [CX1 + CY, CX2 + CY, CX1 + CX2])
    assert eval_rational(chain, [1, 2, 1]) == Fraction(1, 18)
    with pytest.raises(PoleError):
        eval_rational(frac(RC, [CX1 - CX2]), [1, 1, 5])
    point = {v: 1 for v in RC.variables}
    assert eval_rational(chain, point) == Fraction(1, 8)


def test_eval_rational_point():
    p = X1.poly * X1.poly + YB.poly * 3
    assert p.evaluate([Fraction(1, 2), 0, 0, Fraction(2, 3)]) == Fraction(9, 4)


def test_zero_representation():
    z = frac(RC, [CX1], 0, 5)
    assert z.is_zero() and z.denominator == {} and z.scalar == 1
    assert str(z) == "0"


def test_greedy_cancellation_and_soundness():
    num = CX1.poly * CY.poly * (CX1 + CX2).poly * 6
    r = frac(RC, [CX1, CY, CY, CX2], num)
    red = r.reduced()
    assert red.denominator == {CY: 1, CX2: 1}
    assert rational_equal(red, r)
    removed = Polynomial.constant(RC, 1)
    for a, k in r.denominator.items():
        for _ in range(k - red.denominator.get(a, 0)):
            removed = removed * a.poly
    assert red.numerator * removed * int(red.scalar / r.scalar) == r.numerator


def test_atoms_are_normalized():
    r = frac(RC, [CX1.scale(-2)])
    ((atom, k),) = r.denominator.items()
    assert atom == CX1 and k == 1 and r.scalar == Fraction(-1, 2)


def test_field_prime_is_prime_and_large():
    p = FIELD_PRIME
    assert p > 2**61
    # deterministic Miller-Rabin bases for 64-bit integers
    d, s = p - 1, 0
    while d % 2 == 0:
        d, s = d // 2, s + 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            pytest.fail(f"{p} is composite (witness {a})")


def test_probabilistic_check_resamples_at_poles():
    r = frac(RC, [CX1 - CX2])
    assert probably_equal(r, r, points=5, seed=1)


# random polynomials for ring-axiom checks
RING3 = Ring([Variable("X", 1), Variable("X", 2), Variable("Y", "a")])
monomials = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(monomials, st.integers(-50, 50), max_size=6).map(
    lambda d: Polynomial.from_terms(RING3, d))
forms = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)).filter(any).map(
    lambda c: LinearForm(RING3, c))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert poly_mul(a, b) == a * b


@given(st.lists(st.tuples(st.lists(forms, min_size=1, max_size=3), st.integers(-5, 5)),
                min_size=1, max_size=4))
def test_rational_sum_commutes_and_associates(shapes):
    terms = [frac(RING3, atoms, 1, c) for atoms, c in shapes]
    total = rational_sum(terms, ring=RING3)
    assert rational_equal(rational_sum(list(reversed(terms)), ring=RING3), total)
    left = terms[0]
    for t in terms[1:]:
        left = rational_add(left, t)
    assert rational_equal(left, total)
    point = [random.Random(0).randint(1, 9) for _ in range(3)]
    assert eval_rational(total, point) == sum(eval_rational(t, point) for t in terms)


@given(st.lists(st.tuples(st.lists(forms, min_size=1, max_size=3), st.integers(-5, 5)),
                min_size=1, max_size=4), st.integers(0, 2**32))
def test_precheck_agrees_with_exact(shapes, seed):
    a = rational_sum([frac(RING3, atoms, 1, c) for atoms, c in shapes], ring=RING3)
    b = rational_sum([frac(RING3, atoms, 1, c) for atoms, c in shapes[1:]], ring=RING3)
    for x, y in ((a, a), (a, b)):
        if probably_equal(x, y, seed=seed) != exactly_equal(x, y):
            pytest.fail("probabilistic check disagrees with cross-multiplication")
