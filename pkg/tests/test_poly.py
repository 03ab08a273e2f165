import itertools
import random

import pytest

from zassenhaus.field import field
from zassenhaus.liealg import algebra_from_name, build_algebra
from zassenhaus.poly import (SG, ST, DegreeBoundError, NotInvariantError, PolyElement, coordinates_in, gamma_shift,
                             invariant_basis, is_group_invariant_sg, is_lie_invariant_sg, is_weyl_invariant,
                             phi_inverse, phi_restrict, poly_from_json, sg_gens, st_gens, weyl_poly_act)


def sl2(p):
    alg = build_algebra("sl", 2, p)
    (h,) = st_gens(alg)
    return alg, h, sg_gens(alg)


def random_poly(alg, ambient, nvars, rng, degree=4, terms=5):
    out = PolyElement.const(alg, ambient, 0)
    for _ in range(terms):
        exps = [0] * nvars
        for _ in range(rng.randint(0, degree)):
            exps[rng.randrange(nvars)] += 1
        out = out + PolyElement(alg.F, ambient, nvars, {tuple(exps): rng.randrange(1, alg.p)}, alg)
    return out


# ----------------------------------------------------------------- restriction map

def test_phi_examples():
    alg, h, (F_, H, E) = sl2(5)
    assert phi_restrict(4 * E * F_ + H ** 2) == h ** 2
    assert phi_restrict(H ** 3) == h ** 3
    assert phi_restrict(E).is_zero()


@pytest.mark.parametrize("name,p", [("sl2", 3), ("gl2", 2)])
def test_phi_is_multiplicative_on_monomials(name, p):
    alg = algebra_from_name(name, p)
    gens = sg_gens(alg)
    monos = []
    for d in range(3):
        for combo in itertools.combinations_with_replacement(range(alg.dim), d):
            m = PolyElement.const(alg, SG, 1)
            for i in combo:
                m = m * gens[i]
            monos.append(m)
    for a, b in itertools.product(monos, repeat=2):
        assert phi_restrict(a * b) == phi_restrict(a) * phi_restrict(b)


# ----------------------------------------------------------------- Weyl actions and shift

def test_weyl_actions_on_sl2():
    alg, h, _ = sl2(5)
    s = alg.weyl.generators()[0]
    assert weyl_poly_act(alg, s, h) == -h
    assert weyl_poly_act(alg, s, h, "dot") == -h - 2
    assert weyl_poly_act(alg, s, (h + 1) ** 2, "dot") == (h + 1) ** 2


def test_gamma_examples():
    alg, h, _ = sl2(5)
    assert gamma_shift(alg, (h + 1) ** 2) == h ** 2
    s = alg.weyl.generators()[0]
    x = h ** 2
    assert gamma_shift(alg, weyl_poly_act(alg, s, x, "dot")) == weyl_poly_act(alg, s, gamma_shift(alg, x))


@pytest.mark.parametrize("name,p", [("sl2", 5), ("gl2", 3), ("sl3", 5)])
def test_gamma_round_trip(name, p):
    alg = algebra_from_name(name, p)
    rng = random.Random(4)
    for _ in range(20):
        s = random_poly(alg, ST, alg.rank, rng)
        assert gamma_shift(alg, gamma_shift(alg, s, "inv"), "fwd") == s
        assert gamma_shift(alg, gamma_shift(alg, s, "fwd"), "inv") == s


# ----------------------------------------------------------------- invariant bases

def _span_contains(basis, target):
    return coordinates_in(basis, target) is not None


def test_weyl_invariants_of_sl2():
    alg, h, _ = sl2(5)
    b = invariant_basis(alg, "S(t)^W", 2)
    assert b.dim == 2
    assert _span_contains(b, h ** 2) and _span_contains(b, PolyElement.const(alg, ST))
    assert not _span_contains(b, h)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_dot_invariants_of_sl2_against_brute_force(p):
    # oracle: test all polynomials of degree <= 2 pointwise (degree < p so functions determine polynomials)
    alg, h, _ = sl2(p)
    s = alg.weyl.generators()[0]
    count = 0
    for a, b, c in itertools.product(range(p), repeat=3):
        if all((a + b * x + c * x * x) % p == (a + b * (-x - 2) + c * (-x - 2) ** 2) % p for x in range(p)):
            count += 1
    inv = invariant_basis(alg, "S(t)^W.", 2)
    assert p ** inv.dim == count
    assert _span_contains(inv, (h + 1) ** 2)
    for el in inv.basis:
        assert weyl_poly_act(alg, s, el, "dot") == el
        assert is_weyl_invariant(alg, gamma_shift(alg, el))


def test_group_invariants_of_sl2_degree_two():
    alg, h, (F_, H, E) = sl2(5)
    b = invariant_basis(alg, "S(g)^G", 2)
    assert b.dim == invariant_basis(alg, "S(t)^W", 2).dim == 2
    assert _span_contains(b, 4 * E * F_ + H ** 2)
    for el in b.basis:
        assert is_group_invariant_sg(alg, el) and is_lie_invariant_sg(alg, el)


@pytest.mark.parametrize("name,p", [("sl2", 3), ("sl2", 5), ("gl2", 2), ("gl2", 3)])
def test_restriction_dimensions(name, p):
    alg = algebra_from_name(name, p)
    for d in range(5):
        assert invariant_basis(alg, "S(g)^G", d).dim == invariant_basis(alg, "S(t)^W", d).dim


def test_echelon_is_reduced():
    alg, _, _ = sl2(3)
    b = invariant_basis(alg, "S(g)^G", 4)
    pivots = []
    for row in b.echelon:
        lead = next(i for i, x in enumerate(row) if x)
        assert row[lead] == 1
        pivots.append(lead)
    assert pivots == sorted(pivots)
    for piv in pivots:
        assert sum(1 for row in b.echelon if row[piv]) == 1
    assert b.to_json()["dim"] == b.dim


def test_degree_bound_enforced():
    alg, _, _ = sl2(3)
    with pytest.raises(DegreeBoundError):
        invariant_basis(alg, "S(t)^W", 9)
    assert invariant_basis(alg, "S(t)^W", 9, bound=9).dim == 5


# ----------------------------------------------------------------- inverse restriction

def test_phi_inverse_examples():
    alg, h, (F_, H, E) = sl2(5)
    assert phi_inverse(alg, h ** 2) == 4 * E * F_ + H ** 2
    assert phi_inverse(alg, PolyElement.const(alg, ST)) == PolyElement.const(alg, SG)
    alg3, h3, (F3, H3, E3) = sl2(3)
    assert phi_inverse(alg3, -h3 ** 2) == -(E3 * F3 + H3 ** 2)


def test_phi_inverse_round_trip_gl2():
    alg = build_algebra("gl", 2, 3)
    a, b = st_gens(alg)
    for sigma in (a + b, a * a + b * b, a * b * (a + b)):
        s = phi_inverse(alg, sigma)
        assert phi_restrict(s) == sigma
        assert is_group_invariant_sg(alg, s)


def test_phi_inverse_rejects_non_invariant():
    alg, h, _ = sl2(5)
    with pytest.raises(NotInvariantError):
        phi_inverse(alg, h)


# ----------------------------------------------------------------- evaluation and serialization

def test_evaluation_over_extension():
    alg, h, (F_, H, E) = sl2(3)
    F9 = field(3, 2)
    x = F9.gen()
    assert (E * F_ + H ** 2).evaluate([x, F9.one, x]) == x * x + 1


def test_json_round_trip():
    alg, h, (F_, H, E) = sl2(3)
    s = 2 * E * F_ + H ** 3 + 1
    assert poly_from_json(alg, s.to_json()) == s
