import itertools

import pytest

from zassenhaus.center import (center_basis, eta_F0_factor_verify, eta_map, factor_polys, gr_center_dims,
                               group_invariant_basis, hc_identities_verify, psi_inverse, psi_project,
                               restriction_dims, sl2_elements, sl2_presentation_verify, veldkamp_count,
                               veldkamp_generators, veldkamp_verify)
from zassenhaus.liealg import build_algebra
from zassenhaus.pbw import UElement, gr_leading, is_central, is_group_invariant
from zassenhaus.poly import PolyElement, gamma_shift, phi_inverse, sg_gens, st_gens, ST


def sl2(p):
    alg = build_algebra("sl", 2, p)
    f, h, e = (UElement.gen(alg, i) for i in range(3))
    return alg, f, h, e


def veldkamp_lattice_count(p, d):
    # x^i y^j z^k c^l with p(i+j+k) + 2l <= d and l < p, enumerated directly
    n = 0
    for i, j, k in itertools.product(range(d // p + 1), repeat=3):
        for l in range(p):
            if p * (i + j + k) + 2 * l <= d:
                n += 1
    return n


# ----------------------------------------------------------------- eta and Psi

def test_eta_on_generators():
    for p in (3, 5):
        alg, f, h, e = sl2(p)
        F_, H, E = sg_gens(alg)
        assert eta_map(H) == h ** p - h
        assert eta_map(E) == e ** p


def test_eta_of_quadratic_invariant_at_p3():
    alg, f, h, e = sl2(3)
    F_, H, E = sg_gens(alg)
    el = sl2_elements(alg)
    image = eta_map(4 * E * F_ + H ** 2)
    assert image == 4 * el["x"] * el["y"] + el["z"] ** 2
    assert is_central(image)


def test_psi_examples():
    alg, f, h, e = sl2(5)
    (t,) = st_gens(alg)
    assert psi_project(4 * f * e + (h + 1) ** 2) == (t + 1) ** 2
    assert psi_project(f * f * e + h) == t
    assert psi_project(UElement.one(alg)) == PolyElement.const(alg, ST)


def test_psi_is_multiplicative_on_invariants():
    alg, f, h, e = sl2(3)
    basis = group_invariant_basis(alg, 4)
    for a, b in itertools.product(basis[:4], repeat=2):
        assert psi_project(a * b) == psi_project(a) * psi_project(b)


def test_psi_inverse_examples():
    alg, f, h, e = sl2(5)
    (t,) = st_gens(alg)
    c = 4 * f * e + (h + 1) ** 2
    assert psi_inverse(alg, (t + 1) ** 2) == c
    assert psi_inverse(alg, PolyElement.const(alg, ST)) == UElement.one(alg)
    alg3, f3, h3, e3 = sl2(3)
    (t3,) = st_gens(alg3)
    c3 = 4 * f3 * e3 + (h3 + 1) ** 2
    for a in range(3):
        u = psi_inverse(alg3, gamma_shift(alg3, a * a - t3 ** 2, "inv"))
        assert u == a * a - c3
        assert is_group_invariant(u)


# ----------------------------------------------------------------- bases of Z and U^G

@pytest.mark.parametrize("d,dim", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 6)])
def test_center_dimensions_sl2_p3(d, dim):
    alg, f, h, e = sl2(3)
    cb = center_basis(alg, d)
    assert cb.dim == dim == veldkamp_lattice_count(3, d)
    assert all(is_central(b) for b in cb.basis)


def test_center_degree_three_contains_p_center():
    alg, f, h, e = sl2(3)
    cb = center_basis(alg, 3)
    el = sl2_elements(alg)
    assert sum(cb.in_pcenter) == 4        # 1, x, y, z
    assert sum(cb.in_group_invariants) == 2
    from zassenhaus.poly import _solve_in_images
    for name in ("x", "y", "z", "c"):
        assert _solve_in_images(cb.basis, el[name]) is not None


def test_linear_group_invariants_are_scalars():
    alg, f, h, e = sl2(3)
    assert group_invariant_basis(alg, 1) == [UElement.one(alg)]


def test_group_invariants_strictly_smaller_than_center():
    alg, f, h, e = sl2(3)
    dims = [(len(group_invariant_basis(alg, d)), center_basis(alg, d, flags=False).dim) for d in range(4)]
    assert all(a <= b for a, b in dims)
    assert any(a < b for a, b in dims)


# ----------------------------------------------------------------- Veldkamp

def test_veldkamp_generators_sl2():
    alg, f, h, e = sl2(3)
    (t,) = st_gens(alg)
    gens = veldkamp_generators(alg)
    assert gens.degrees == [2]
    assert gens.sigma == [t ** 2]
    assert gens.u == [4 * f * e + (h + 1) ** 2]
    assert gr_leading(gens.u[0]) == gens.s[0]


def test_veldkamp_generators_gl2():
    for p in (2, 3):
        alg = build_algebra("gl", 2, p)
        gens = veldkamp_generators(alg)
        assert gens.degrees == [1, 2]
        for u, s in zip(gens.u, gens.s):
            assert gr_leading(u) == s
            assert is_group_invariant(u)


@pytest.mark.parametrize("d", range(7))
def test_veldkamp_count_matches_lattice_enumeration(d):
    assert veldkamp_count(3, 3, [2], d) == veldkamp_lattice_count(3, d)


def test_veldkamp_count_at_degree_six():
    assert veldkamp_count(3, 3, [2], 6) == 15


@pytest.mark.parametrize("name,p,degree", [("sl2", 3, 5), ("sl2", 5, 5), ("gl2", 2, 4), ("gl2", 3, 3)])
def test_veldkamp_reports(name, p, degree):
    kind, n = ("sl", 2) if name == "sl2" else ("gl", 2)
    alg = build_algebra(kind, n, p)
    for d in range(degree + 1):
        rep = veldkamp_verify(alg, d)
        assert rep.passed, rep.witness


# ----------------------------------------------------------------- identities

@pytest.mark.parametrize("kind,p", [("sl", 3), ("sl", 5), ("gl", 2), ("gl", 3)])
def test_harish_chandra_identities(kind, p):
    rep = hc_identities_verify(build_algebra(kind, 2, p), 4)
    assert rep.passed, rep.witness


def test_identity_chain_for_quadratic_element():
    alg, f, h, e = sl2(5)
    (t,) = st_gens(alg)
    c = 4 * f * e + (h + 1) ** 2
    from zassenhaus.poly import phi_restrict
    assert gamma_shift(alg, psi_project(c)) == t ** 2 == phi_restrict(gr_leading(c))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_sl2_relation(p):
    rep = sl2_presentation_verify(p)
    assert rep.passed
    assert rep.elements["univariate_ok"]


def test_sl2_relation_rejects_even_prime():
    with pytest.raises(ValueError):
        sl2_presentation_verify(2)


# ----------------------------------------------------------------- factorization

def test_torus_factorization_sl2_p3():
    alg = build_algebra("sl", 2, 3)
    (t,) = st_gens(alg)
    H = -t ** 2 * (t ** 2 - 1) ** 2
    prod = PolyElement.const(alg, ST, 1)
    for v in factor_polys(alg).values():
        prod = prod * v
    assert prod == H
    assert H == (t ** 3 - t) * ((-t) ** 3 + t)


def test_eta_F0_closed_form_sl2_p3():
    alg, f, h, e = sl2(3)
    rep = eta_F0_factor_verify(alg)
    assert rep.passed
    c = 4 * f * e + (h + 1) ** 2
    assert UElement.from_json(alg, rep.elements["eta_F0"]) == -c * (c - 1) ** 2
    (t,) = st_gens(alg)
    assert eta_map(phi_inverse(alg, -t ** 2)) == -c * (c - 1) ** 2


@pytest.mark.parametrize("kind,p", [("sl", 5), ("gl", 2), ("gl", 3)])
def test_eta_F0_factorization(kind, p):
    rep = eta_F0_factor_verify(build_algebra(kind, 2, p))
    assert rep.passed, rep.witness


# ----------------------------------------------------------------- dimension comparisons

@pytest.mark.parametrize("kind,p", [("sl", 3), ("sl", 5), ("gl", 2), ("gl", 3)])
def test_restriction_dims(kind, p):
    rep = restriction_dims(build_algebra(kind, 2, p), 4)
    assert rep.passed, rep.witness


def test_gr_center_dims_sl2_p3():
    rep = gr_center_dims(build_algebra("sl", 2, 3), 5)
    assert rep.passed, rep.witness
    assert [row["Z"] for row in rep.dims["table"]] == [1, 1, 2, 5, 6, 9]
