"""The centre Z of U(g): the p-centre map, Harish-Chandra projection, Veldkamp generators and checks."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from .liealg import LieAlgebra
from .linalg import kernel_of_images, rank, pmul, ptrim
from .pbw import UElement, adjoint_act, is_central, is_group_invariant, root_group_series, pbw_monomials, gr_leading
from .poly import (DEGREE_BOUND, SG, ST, SPACE_SG_G, SPACE_SG_LIE, SPACE_ST_DOT, SPACE_ST_W, PolyElement,
                   RestrictionTheoremViolation, NotInvariantError, column_order, eta_torus, gamma_shift,
                   invariant_basis, is_weyl_invariant, phi_inverse, phi_restrict, weight_zero, weight_zero_mod_p,
                   _check_bound, _solve_in_images)
from .reports import Report


# -- eta and Psi ----------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _eta_gen(alg: LieAlgebra, i: int) -> UElement:
    x = UElement.gen(alg, i)
    return x ** alg.p - UElement.from_vector(alg, alg.ppow[i])


def eta_map(s: PolyElement) -> UElement:
    """Algebra map S(g) -> Z_p with x -> x^p - x^[p] on basis vectors, extended linearly."""
    alg = s.alg
    if s.ambient != SG:
        raise ValueError("eta_map expects an element of S(g)")
    cache: dict = {}

    def power(i, a):
        if (i, a) not in cache:
            cache[(i, a)] = _eta_gen(alg, i) ** a
        return cache[(i, a)]

    out = UElement(alg)
    for m, c in s.terms.items():
        t = UElement.scalar(alg, alg.F.element(c))
        for i, a in enumerate(m):
            if a:
                t = t * power(i, a)
        out = out + t
    return out


def psi_project(u: UElement) -> PolyElement:
    """Keep pure-Cartan PBW monomials, read as polynomials on t*."""
    alg = u.alg
    hs = set(alg.h_index)
    out = {}
    for m, c in u.terms.items():
        if all(a == 0 for i, a in enumerate(m) if i not in hs):
            out[tuple(m[i] for i in alg.h_index)] = c
    return PolyElement(alg.F, ST, alg.rank, out, alg)


def top_part(s: PolyElement) -> PolyElement:
    return s.homogeneous_part(s.degree) if s.terms else s


# -- bases of Z and U^G ---------------------------------------------------------

def _u_conditions(alg, space, m):
    u = UElement(alg, {m: 1})
    img = {}
    if space == "Z":
        for i in range(alg.dim):
            for mm, c in adjoint_act(i, u).terms.items():
                img[(i, 0, mm)] = c
    else:
        for j, a in enumerate(alg.simple_roots()):
            for sign, root in ((0, a), (1, tuple(-x for x in a))):
                for k, d in enumerate(root_group_series(root, u)[1:], start=1):
                    for mm, c in d.terms.items():
                        img[(2 * j + sign, k, mm)] = c
    return img


@functools.lru_cache(maxsize=None)
def _u_kernel(alg, space, d):
    test = weight_zero if space == "UG" else weight_zero_mod_p
    monos = column_order([m for m in pbw_monomials(alg.dim, d) if test(alg, m)])
    images = [_u_conditions(alg, space, m) for m in monos]
    rows = kernel_of_images(images, alg.F)
    return monos, rows


def _u_basis(alg, space, d, bound):
    _check_bound(d, bound)
    monos, rows = _u_kernel(alg, space, d)
    return [UElement(alg, {m: c for m, c in zip(monos, r) if c}) for r in rows]


@dataclass
class CenterBasis:
    degree: int
    basis: list
    in_pcenter: list
    in_group_invariants: list

    @property
    def dim(self):
        return len(self.basis)

    def to_json(self):
        return {"degree": self.degree, "dim": self.dim,
                "basis": [{"element": b.to_json(), "in_Zp": zp, "in_UG": ug}
                          for b, zp, ug in zip(self.basis, self.in_pcenter, self.in_group_invariants)]}


def pcenter_span(alg: LieAlgebra, d: int) -> list[UElement]:
    """eta of every S(g) monomial m with p|m| <= d; spans the filtration-degree <= d part of Z_p."""
    out = []
    for m in column_order(pbw_monomials(alg.dim, d // alg.p)):
        out.append(eta_map(PolyElement(alg.F, SG, alg.dim, {m: 1}, alg)))
    return out


def center_basis(alg: LieAlgebra, d: int, bound: int = DEGREE_BOUND, flags: bool = True) -> CenterBasis:
    basis = _u_basis(alg, "Z", d, bound)
    zp, ug = [], []
    if flags:
        span = pcenter_span(alg, d)
        zp = [_solve_in_images(span, b) is not None for b in basis]
        ug = [is_group_invariant(b) for b in basis]
    return CenterBasis(d, basis, zp, ug)


def group_invariant_basis(alg: LieAlgebra, d: int, bound: int = DEGREE_BOUND) -> list[UElement]:
    return _u_basis(alg, "UG", d, bound)


def psi_inverse(alg: LieAlgebra, sigma: PolyElement, d: int | None = None, bound: int = DEGREE_BOUND) -> UElement:
    """The unique u in U^G of filtration degree <= deg(sigma) with Psi(u) = sigma."""
    if not is_weyl_invariant(alg, sigma, "dot"):
        raise NotInvariantError("argument is not dot-invariant")
    if sigma.is_zero():
        return UElement(alg)
    d = sigma.degree if d is None else d
    basis = group_invariant_basis(alg, d, bound)
    sol = _solve_in_images([psi_project(b) for b in basis], sigma)
    if sol is None:
        raise RestrictionTheoremViolation(f"no G-invariant preimage of {sigma!r} under Psi in degree <= {d}")
    out = UElement(alg)
    for c, b in zip(sol, basis):
        if c:
            out = out + b * alg.F.element(c)
    return out


# -- Veldkamp generators ----------------------------------------------------------

def _st_monomials_in(gens, degs, k):
    """All products of the given generators of total degree exactly k."""
    out = []
    n = len(gens)

    def rec(i, left, acc):
        if i == n:
            if left == 0:
                out.append(acc)
            return
        for a in range(left // degs[i] + 1):
            rec(i + 1, left - a * degs[i], acc * gens[i] ** a)

    if n == 0:
        return []
    rec(0, k, gens[0] ** 0)
    return out


def weyl_generators(alg: LieAlgebra, bound: int = DEGREE_BOUND) -> list[PolyElement]:
    """Homogeneous generators of S(t)^W, degree by degree: the first echelon rows outside the span
    of products of the generators already chosen."""
    gens: list[PolyElement] = []
    degs: list[int] = []
    for k in range(1, bound + 1):
        if len(gens) == alg.rank:
            break
        inv = invariant_basis(alg, SPACE_ST_W, k, bound)
        homog = [b for b in inv.basis if b.terms and b.is_homogeneous() and b.degree == k]
        span = _st_monomials_in(gens, degs, k)
        for b in homog:
            if not span or _solve_in_images(span, b) is None:
                gens.append(b)
                degs.append(k)
                span = span + [b]
    if len(gens) != alg.rank:
        raise RestrictionTheoremViolation("could not find rank-many generators within the degree bound")
    return gens


@dataclass
class VeldkampGenerators:
    sigma: list
    s: list
    u: list

    @property
    def degrees(self):
        return [x.degree for x in self.sigma]

    def to_json(self):
        return {"convention": "first echelon rows of S(t)^W outside the span of lower products, "
                              "columns ordered by degree then exponents descending",
                "sigma": [x.to_json() for x in self.sigma],
                "s": [x.to_json() for x in self.s],
                "u": [x.to_json() for x in self.u]}


@functools.lru_cache(maxsize=None)
def veldkamp_generators(alg: LieAlgebra, bound: int = DEGREE_BOUND) -> VeldkampGenerators:
    sigma = weyl_generators(alg, bound)
    s = [phi_inverse(alg, x, bound=bound) for x in sigma]
    u = [psi_inverse(alg, gamma_shift(alg, x, "inv"), bound=bound) for x in sigma]
    return VeldkampGenerators(sigma, s, u)


def veldkamp_count(dim: int, p: int, degrees, d: int) -> int:
    """#{(a, k) : p|a| + sum k_i deg_i <= d, 0 <= k_i < p} with a an exponent vector of length dim."""
    from math import comb
    total = 0
    for ks in itertools.product(range(p), repeat=len(degrees)):
        rest = d - sum(k * g for k, g in zip(ks, degrees))
        if rest < 0:
            continue
        n = rest // p
        total += comb(n + dim, dim)     # exponent vectors of total degree <= n
    return total


def veldkamp_products(alg: LieAlgebra, gens: VeldkampGenerators, d: int) -> list[UElement]:
    out = []
    degs = gens.degrees
    zp = pcenter_span(alg, d)
    zp_deg = [sum(m) * alg.p for m in column_order(pbw_monomials(alg.dim, d // alg.p))]
    for ks in itertools.product(range(alg.p), repeat=len(degs)):
        kd = sum(k * g for k, g in zip(ks, degs))
        if kd > d:
            continue
        prod = UElement.one(alg)
        for k, u in zip(ks, gens.u):
            if k:
                prod = prod * u ** k
        for z, zd in zip(zp, zp_deg):
            if zd + kd <= d:
                out.append(z * prod)
    return out


def veldkamp_verify(alg: LieAlgebra, d: int, bound: int = DEGREE_BOUND) -> Report:
    gens = veldkamp_generators(alg, bound)
    zb = center_basis(alg, d, bound, flags=False)
    prods = veldkamp_products(alg, gens, d)
    predicted = veldkamp_count(alg.dim, alg.p, gens.degrees, d)
    monos = sorted({m for x in prods + zb.basis for m in x.terms})
    pos = {m: i for i, m in enumerate(monos)}

    def vec(x):
        v = [0] * len(monos)
        for m, c in x.terms.items():
            v[pos[m]] = c
        return v

    prod_rank = rank([vec(x) for x in prods], alg.F) if prods else 0
    central = all(is_central(x) for x in prods)
    failures = [i for i, b in enumerate(zb.basis) if _solve_in_images(prods, b) is None]
    ok = (predicted == zb.dim == len(prods) == prod_rank) and central and not failures
    witness = None if ok else {"undecomposed": failures[:5], "non_central_products": not central}
    return Report("veldkamp", {"algebra": alg.name, "p": alg.p, "degree": d}, ok, witness,
                  {"predicted": predicted, "center": zb.dim, "products": len(prods), "product_rank": prod_rank},
                  ["Z free over Z_p on u^k, 0 <= k_i < p"],
                  {"generators": gens.to_json()})


# -- identities -----------------------------------------------------------------

def hc_identities_verify(alg: LieAlgebra, d: int, bound: int = DEGREE_BOUND) -> Report:
    """eta(Phi(s)) = Psi(eta(s)) on monomials, and gr(gamma(Psi x)) = gr(Psi x) = Phi(gr x) on U^G."""
    bad2 = []
    n2 = 0
    for m in column_order(pbw_monomials(alg.dim, d)):
        s = PolyElement(alg.F, SG, alg.dim, {m: 1}, alg)
        lhs = eta_torus(alg, phi_restrict(s))
        rhs = psi_project(eta_map(s))
        n2 += 1
        if lhs != rhs:
            bad2.append(list(m))
    bad1 = []
    n1 = 0
    for x in group_invariant_basis(alg, d, bound):
        ph = phi_restrict(gr_leading(x))
        if ph.is_zero():
            continue
        n1 += 1
        psi = psi_project(x)
        if not (top_part(gamma_shift(alg, psi, "fwd")) == top_part(psi) == ph):
            bad1.append(x.to_json())
    ok = not bad1 and not bad2 and n1 > 0
    witness = None if ok else {"eta_phi": bad2[:5], "gr_psi": bad1[:3]}
    return Report("hc-identities", {"algebra": alg.name, "p": alg.p, "degree": d}, ok, witness,
                  {"monomials_checked": n2, "invariants_checked": n1},
                  ["eta o Phi = Psi o eta", "gr(gamma(Psi(x))) = gr(Psi(x)) = Phi(gr(x))"])


def sl2_elements(alg: LieAlgebra):
    f, h, e = (UElement.gen(alg, i) for i in range(3))
    p = alg.p
    c = 4 * f * e + (h + 1) ** 2
    return {"x": e ** p, "y": f ** p, "z": h ** p - h, "c": c}


def sl2_presentation_verify(p: int) -> Report:
    from .liealg import build_algebra
    from .field import field
    if p % 2 == 0 or p > 7:
        raise ValueError("the sl2 relation check needs an odd prime p <= 7")
    alg = build_algebra("sl", 2, p)
    el = sl2_elements(alg)
    c, x, y, z = el["c"], el["x"], el["y"], el["z"]
    lhs = c ** p - 2 * c ** ((p + 1) // 2) + c
    rhs = 4 * x * y + z ** 2
    F = field(p)
    # T^p - 2T^((p+1)/2) + T  versus  T (T^((p-1)/2) - 1)^2
    uni = [0] * (p + 1)
    uni[1] = 1
    uni[(p + 1) // 2] = F.from_int(-2)
    uni[p] = 1
    half = [F.from_int(-1)] + [0] * ((p - 1) // 2 - 1) + [1]
    uni_rhs = pmul([0, 1], pmul(half, half, F), F)
    ok_u = ptrim(uni) == uni_rhs
    ok = lhs == rhs and ok_u
    return Report("sl2-relation", {"p": p}, ok, None if ok else {"difference": (lhs - rhs).to_json()},
                  {"lhs_terms": len(lhs.terms), "rhs_terms": len(rhs.terms)},
                  ["c^p - 2c^((p+1)/2) + c = 4xy + z^2", "c^p - 2c^((p+1)/2) + c = c(c^((p-1)/2) - 1)^2"],
                  {"lhs": lhs.to_json(), "rhs": rhs.to_json(), "univariate_ok": ok_u})


def coroot_poly(alg: LieAlgebra, root) -> PolyElement:
    F = alg.F
    r = alg.rank
    co = alg.coroots[tuple(root)]
    return PolyElement(F, ST, r, {tuple(int(i == k) for i in range(r)): F.from_int(co[k]) for k in range(r)}, alg)


def factor_polys(alg: LieAlgebra):
    """The polynomials H_a^Gamma in S(t), keyed by (a, orbit index)."""
    p = alg.p
    out = {}
    for gi, orbit in enumerate(alg.root_orbits()):
        roots = [r for r in orbit if p != 2 or alg.is_positive(r)]
        for a in range(p):
            prod = PolyElement.const(alg, ST, 1)
            for r in roots:
                prod = prod * (coroot_poly(alg, r) - a)
            out[(a, gi)] = prod
    return out


def eta_F0_factor_verify(alg: LieAlgebra, bound: int = DEGREE_BOUND) -> Report:
    p = alg.p
    one = PolyElement.const(alg, ST, 1)
    H0 = one
    H = one
    for r in alg.roots:
        hr = coroot_poly(alg, r)
        H0 = H0 * hr
        H = H * (hr ** p - hr)
    factors = factor_polys(alg)
    exponent = 2 if p == 2 else 1
    prod_t = one
    for v in factors.values():
        prod_t = prod_t * v ** exponent
    ok_t = prod_t == H
    F0 = phi_inverse(alg, H0, bound=bound)
    lhs = eta_map(F0)
    rhs = UElement.one(alg)
    lifted = {}
    for key, v in factors.items():
        u = psi_inverse(alg, gamma_shift(alg, v, "inv"), bound=bound)
        lifted[key] = u
        rhs = rhs * u ** exponent
    ok_u = lhs == rhs
    ok = ok_t and ok_u
    return Report("factor-eta-f0", {"algebra": alg.name, "p": p}, ok,
                  None if ok else {"torus_identity": ok_t, "enveloping_identity": ok_u},
                  {"factors": len(factors), "lhs_terms": len(lhs.terms)},
                  ["eta(F_0) = Psi^-1(gamma^-1(H))", "H = prod_a H_a"],
                  {"eta_F0": lhs.to_json(), "product": rhs.to_json(),
                   "factors": {f"a={a},orbit={g}": u.to_json() for (a, g), u in lifted.items()}})


# -- dimension comparisons ------------------------------------------------------------

def restriction_dims(alg: LieAlgebra, d: int, bound: int = DEGREE_BOUND) -> Report:
    """dim S(g)^G = dim S(t)^W and dim Psi(U^G) = dim S(t)^{W.} in degrees <= d."""
    rows = []
    ok = True
    for k in range(d + 1):
        sg = invariant_basis(alg, SPACE_SG_G, k, bound).dim
        sw = invariant_basis(alg, SPACE_ST_W, k, bound).dim
        sdot = invariant_basis(alg, SPACE_ST_DOT, k, bound)
        ug = group_invariant_basis(alg, k, bound)
        images = [psi_project(u) for u in ug]
        monos = sorted({m for x in images for m in x.terms})
        pos = {m: i for i, m in enumerate(monos)}
        vecs = []
        for x in images:
            v = [0] * len(monos)
            for m, c in x.terms.items():
                v[pos[m]] = c
            vecs.append(v)
        psi_dim = rank(vecs, alg.F) if vecs and monos else 0
        rows.append({"d": k, "SgG": sg, "StW": sw, "PsiUG": psi_dim, "StWdot": sdot.dim, "UG": len(ug)})
        ok = ok and sg == sw and psi_dim == sdot.dim
    return Report("restriction-dims", {"algebra": alg.name, "p": alg.p, "degree": d}, ok,
                  None if ok else rows, {"table": rows},
                  ["Phi: S(g)^G = S(t)^W", "Psi: U^G = S(t)^{W.}"])


def gr_center_dims(alg: LieAlgebra, d: int, bound: int = DEGREE_BOUND) -> Report:
    rows = []
    ok = True
    for k in range(d + 1):
        z = center_basis(alg, k, bound, flags=False).dim
        s = invariant_basis(alg, SPACE_SG_LIE, k, bound).dim
        rows.append({"d": k, "Z": z, "SgLie": s})
        ok = ok and z == s
    return Report("gr-center-dims", {"algebra": alg.name, "p": alg.p, "degree": d}, ok,
                  None if ok else rows, {"table": rows}, ["gr(Z) = S(g)^g"])
