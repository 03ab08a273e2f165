"""The acceptance battery: each criterion returns a list of reports."""

from __future__ import annotations

import random

from . import linalg as la
from .center import (center_basis, eta_F0_factor_verify, eta_map, gr_center_dims, hc_identities_verify,
                     restriction_dims, sl2_elements, sl2_presentation_verify, veldkamp_verify)
from .field import field
from .liealg import build_algebra, weyl_act_vector, weyl_orbit
from .pbw import UElement, root_group_series
from .poly import PolyElement, SG
from .reports import Report
from .zvariety import (Functional, GroupElement, baby_verma_scalar, bijection_report, check_jordan, coadjoint_act,
                       jordan_decompose, rational_param, rss_tests, star_act, zpoint_membership)


def dot_orbit_key(alg, lam):
    return tuple(v.code for v in weyl_orbit(alg, lam, "dot")[1])


HC_ALGEBRAS = (("sl", 2, 3), ("sl", 2, 5), ("gl", 2, 2), ("gl", 2, 3))


def c1_sl2_relation():
    return [sl2_presentation_verify(p) for p in (3, 5)]


def c2_hc_identities():
    return [hc_identities_verify(build_algebra(k, n, p), 4) for k, n, p in HC_ALGEBRAS]


def c3_restriction():
    return [restriction_dims(build_algebra(k, n, p), 6) for k, n, p in HC_ALGEBRAS]


def c4_veldkamp():
    sl2 = build_algebra("sl", 2, 3)
    out = [veldkamp_verify(sl2, d) for d in range(7)]
    d4 = out[4]
    out.append(Report("veldkamp-d4-value", {"algebra": "sl2", "p": 3}, d4.dims["center"] == 6,
                      dims={"center": d4.dims["center"], "expected": 6}))
    gl2 = build_algebra("gl", 2, 3)
    out += [veldkamp_verify(gl2, d) for d in range(5)]
    return out


def c5_gr_center():
    return [gr_center_dims(build_algebra("sl", 2, 3), 5)]


def c6_factorization():
    sl2 = build_algebra("sl", 2, 3)
    r1 = eta_F0_factor_verify(sl2)
    c = sl2_elements(sl2)["c"]
    expected = -(c * (c - 1) ** 2)
    r_exp = Report("eta-F0-closed-form", {"algebra": "sl2", "p": 3},
                   r1.elements["eta_F0"] == expected.to_json(), dims={"terms": len(expected.terms)})
    return [r1, r_exp, eta_F0_factor_verify(build_algebra("gl", 2, 2))]


def _random_group_element(rng, alg, K):
    n = alg.n
    while True:
        rows = [[rng.randrange(K.q) for _ in range(n)] for _ in range(n)]
        d = la.det(rows, K)
        if not d:
            continue
        if alg.kind == "sl":
            # rescale the first row to force determinant one
            inv = K.inv(d)
            rows[0] = [K.mul(inv, x) for x in rows[0]]
        return GroupElement.of(K, rows)


def geometry_reports(kind, n, p, q, samples=100, seed=1, workers=1):
    alg = build_algebra(kind, n, p)
    m = {p ** k: k for k in range(1, 8)}[q]
    K = field(p, m)
    out = [bijection_report(alg, q, workers=workers)]
    # membership of every image point
    bad = []
    total = 0
    for idx in range(q ** alg.dim):
        codes = []
        x = idx
        for _ in range(alg.dim):
            x, c = divmod(x, q)
            codes.append(c)
        chi = Functional.from_codes(alg, codes, K)
        if not rss_tests(chi)["is_in_O"]:
            continue
        total += 1
        zp = rational_param(chi)
        if not zpoint_membership(zp.chi, zp.lam_canonical)["member"]:
            bad.append(chi.to_json())
    out.append(Report("param-membership", {"algebra": alg.name, "p": p, "q": q}, not bad,
                      bad[:3] or None, {"points": total}))
    # star action: Fr(g) * chi = g . chi, and star-equivariance of the first component
    rng = random.Random(seed)
    star_bad, eq_bad, eq_checked = 0, 0, 0
    big = field(p, 2 * m)
    for _ in range(samples):
        g = _random_group_element(rng, alg, big)
        chi = Functional.from_codes(alg, [rng.randrange(big.q) for _ in range(alg.dim)], big)
        if star_act(g.frobenius("fwd"), chi) != coadjoint_act(g, chi):
            star_bad += 1
        g0 = _random_group_element(rng, alg, K)
        chi0 = Functional.from_codes(alg, [rng.randrange(K.q) for _ in range(alg.dim)], K)
        if rss_tests(chi0)["is_in_O"]:
            eq_checked += 1
            lhs = rational_param(coadjoint_act(g0, chi0)).chi
            rhs = star_act(g0, rational_param(chi0).chi)
            if lhs != rhs:
                eq_bad += 1
    out.append(Report("star-action", {"algebra": alg.name, "p": p, "q": q, "samples": samples, "seed": seed},
                      star_bad == 0 and eq_bad == 0, None,
                      {"relation_failures": star_bad, "equivariance_checked": eq_checked,
                       "equivariance_failures": eq_bad}))
    return out


def c7_geometry(workers=1):
    return geometry_reports("sl", 2, 3, 9, workers=workers) + geometry_reports("gl", 2, 2, 4, workers=workers)


def baby_verma_reports(p=3, q=9, degree=4):
    alg = build_algebra("sl", 2, p)
    m = {p ** k: k for k in range(1, 5)}[q]
    K = field(p, m)
    central = center_basis(alg, degree).basis
    c = sl2_elements(alg)["c"]
    etas = [(i, eta_map(PolyElement.var(alg, SG, i))) for i in range(alg.dim)]
    fi, hi = alg.f_index[0], alg.h_index[0]
    pairs = 0
    failures = []
    by_point: dict = {}
    for a in K.elements():
        for b in K.elements():
            chi = Functional.from_dict(alg, K, **{alg.labels[fi]: a, alg.labels[hi]: b})
            for lam in K.elements():
                if lam ** p - lam != b ** p:
                    continue
                pairs += 1
                try:
                    scalars = [baby_verma_scalar(chi, (lam,), u) for u in central]
                except RuntimeError as exc:
                    failures.append({"chi": chi.to_json(), "lambda": str(lam), "error": str(exc)})
                    continue
                for i, u in etas:
                    if baby_verma_scalar(chi, (lam,), u) != chi.values[i] ** p:
                        failures.append({"chi": chi.to_json(), "lambda": str(lam), "eta": alg.labels[i]})
                if baby_verma_scalar(chi, (lam,), c) != (lam + 1) ** 2:
                    failures.append({"chi": chi.to_json(), "lambda": str(lam), "c": True})
                key = (chi.codes, dot_orbit_key(alg, (lam,)))
                by_point.setdefault(key, set()).add(tuple(s.code for s in scalars))
    split = [k for k, v in by_point.items() if len(v) > 1]
    shared = sum(1 for v in by_point.values() if len(v) == 1)
    ok = pairs > 0 and not failures and not split
    return [Report("baby-verma", {"algebra": "sl2", "p": p, "q": q, "degree": degree}, ok,
                   (failures[:3] + split[:3]) or None,
                   {"pairs": pairs, "central_elements": len(central), "zpoints": len(by_point),
                    "orbit_classes_consistent": shared})]


def c8_baby_verma():
    return baby_verma_reports()


# -- criterion 9 ---------------------------------------------------------------------

def jordan_exhaustive(kind="gl", n=2, p=3):
    alg = build_algebra(kind, n, p)
    K = alg.F
    bad = []
    count = 0
    for idx in range(K.q ** alg.dim):
        codes = []
        x = idx
        for _ in range(alg.dim):
            x, c = divmod(x, K.q)
            codes.append(c)
        chi = Functional.from_codes(alg, codes, K)
        pair = jordan_decompose(chi)
        checks = check_jordan(pair)
        s_again = jordan_decompose(pair.chi_s)
        n_again = jordan_decompose(pair.chi_n)
        zero = Functional.zero(alg, K)
        idem = (s_again.chi_s == pair.chi_s and s_again.chi_n == zero
                and n_again.chi_s == zero and n_again.chi_n == pair.chi_n)
        count += 1
        if not (all(checks.values()) and idem):
            bad.append({"chi": chi.to_json(), **checks, "idempotent": idem})
    return Report("jordan-exhaustive", {"algebra": alg.name, "p": p}, not bad, bad[:3] or None, {"functionals": count})


def frobenius_bijective():
    bad = []
    for p, m in ((2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (3, 4), (5, 1), (5, 2), (7, 1), (7, 2)):
        F = field(p, m)
        els = F.elements()
        fw = [a.frobenius("fwd") for a in els]
        if len(set(fw)) != len(els):
            bad.append(f"{p}^{m}: fwd not injective")
        if any(a.frobenius("fwd").frobenius("inv") != a or a.frobenius("inv").frobenius("fwd") != a for a in els):
            bad.append(f"{p}^{m}: inverse fails")
    return Report("frobenius-bijective", {}, not bad, bad or None)


def dot_associativity(seed=7, trials=20):
    rng = random.Random(seed)
    F9 = field(3, 2)
    bad = []
    checked = 0
    for kind, n, p in (("sl", 2, 3), ("gl", 2, 3), ("gl", 3, 3), ("b2", None, 5)):
        alg = build_algebra(kind, n, p)
        F = F9 if p == 3 else field(p, 2)
        gens = alg.weyl.generators()
        for _ in range(trials):
            lam = tuple(F.element(rng.randrange(F.q)) for _ in range(alg.rank))
            for a in gens:
                for b in gens:
                    ab = alg.weyl.compose(a, b)
                    lhs = weyl_act_vector(alg, ab, lam, mode="dot")
                    rhs = weyl_act_vector(alg, a, weyl_act_vector(alg, b, lam, mode="dot"), mode="dot")
                    checked += 1
                    if lhs != rhs:
                        bad.append((alg.name, repr(a), repr(b)))
    return Report("dot-associativity", {"seed": seed}, not bad, bad[:3] or None, {"checked": checked})


def conjugation_series(alg, root, i):
    """Ad(x_root(t)) x_i via the matrices x(t) y x(t)^-1 with x(t) = 1 + t E, entries polynomial in t."""
    F = alg.F
    n = len(alg.rep_int[0])
    idx = alg.root_vector_index(root)
    e = alg.rep[idx]
    # x(t) = sum_k t^k e^k / k!, x(t)^-1 = x(-t); e is nilpotent in the defining representation
    powers = [la.identity(n)]
    while any(any(r) for r in powers[-1]):
        powers.append(la.matmul(powers[-1], e, F))
    powers.pop()
    fact = 1
    xs = []
    for k, pk in enumerate(powers):
        fact = fact * k if k else 1
        if fact % alg.p == 0:
            raise ValueError("exponential series not defined over F_p at this order")
        xs.append(la.matscale(F.inv(F.from_int(fact)), pk, F))
    xinv = [la.matscale(F.from_int((-1) ** k), xk, F) for k, xk in enumerate(xs)]
    y = alg.rep[i]
    out = {}
    for a, xa in enumerate(xs):
        for b, xb in enumerate(xinv):
            term = la.matmul(la.matmul(xa, y, F), xb, F)
            out[a + b] = la.matadd(out.get(a + b, [[0] * n for _ in range(n)]), term, F)
    series = []
    for k in range(max(out) + 1):
        mat = out.get(k)
        coords = alg.coords_of_matrix(mat, F) if mat else (0,) * alg.dim
        series.append(UElement.from_vector(alg, coords))
    while len(series) > 1 and series[-1].is_zero():
        series.pop()
    return series


def _series_product(s1, s2, alg):
    out = [UElement(alg) for _ in range(len(s1) + len(s2) - 1)]
    for a, x in enumerate(s1):
        for b, y in enumerate(s2):
            out[a + b] = out[a + b] + x * y
    while len(out) > 1 and out[-1].is_zero():
        out.pop()
    return out


def _trim(series):
    series = list(series)
    while series and series[-1].is_zero():
        series.pop()
    return series


def divided_power_consistency(seed=3, pairs=15):
    """Library divided powers against matrix conjugation, plus the divided Leibniz rule."""
    rng = random.Random(seed)
    bad = []
    checked = 0
    for kind, n, p in (("sl", 2, 3), ("sl", 2, 5), ("gl", 2, 3), ("sl", 3, 5)):
        alg = build_algebra(kind, n, p)
        for root in alg.roots:
            letters = {i: conjugation_series(alg, root, i) for i in range(alg.dim)}
            for i in range(alg.dim):
                for j in range(alg.dim):
                    u = UElement.gen(alg, i) * UElement.gen(alg, j)
                    oracle = _trim(_series_product(letters[i], letters[j], alg))
                    checked += 1
                    if _trim(root_group_series(root, u)) != oracle:
                        bad.append((alg.name, root, alg.labels[i], alg.labels[j]))
            for _ in range(pairs):
                u = _random_u(rng, alg, 2)
                v = _random_u(rng, alg, 2)
                lhs = _trim(root_group_series(root, u * v))
                rhs = _trim(_series_product(root_group_series(root, u) or [UElement(alg)],
                                            root_group_series(root, v) or [UElement(alg)], alg))
                checked += 1
                if lhs != rhs:
                    bad.append((alg.name, root, "leibniz"))
    return Report("divided-powers", {"seed": seed}, not bad, bad[:3] or None, {"checked": checked})


def _random_u(rng, alg, deg):
    from .pbw import pbw_monomials
    monos = pbw_monomials(alg.dim, deg)
    terms = {}
    for _ in range(3):
        terms[rng.choice(monos)] = rng.randrange(1, alg.p)
    return UElement(alg, terms)


def c9_properties():
    return [jordan_exhaustive(), frobenius_bijective(), dot_associativity(), divided_power_consistency()]


CRITERIA = [
    ("1 sl2 presentation", c1_sl2_relation),
    ("2 Harish-Chandra identities", c2_hc_identities),
    ("3 restriction theorems", c3_restriction),
    ("4 Veldkamp basis", c4_veldkamp),
    ("5 gr(Z) = S(g)^g", c5_gr_center),
    ("6 eta(F0) factorization", c6_factorization),
    ("7 Zassenhaus geometry", c7_geometry),
    ("8 baby Verma scalars", c8_baby_verma),
    ("9 property suites", c9_properties),
]


def run_all():
    return [(name, fn()) for name, fn in CRITERIA]
