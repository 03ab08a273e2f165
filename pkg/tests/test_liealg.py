import itertools
import random

import pytest

from zassenhaus.field import field
from zassenhaus.liealg import (HypothesisError, algebra_from_name, build_algebra, check_hypotheses, weyl_act_vector,
                               weyl_orbit)


def _commutator(a, b):
    n = len(a)
    ab = [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    ba = [[sum(b[i][k] * a[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return [[ab[i][j] - ba[i][j] for j in range(n)] for i in range(n)]


# ----------------------------------------------------------------- construction

def test_sl2_basis_and_brackets():
    alg = build_algebra("sl", 2, 3)
    assert alg.labels == ["f", "h", "e"]
    f, h, e = (alg.unit(i) for i in range(3))
    assert alg.bracket(e, f) == h
    assert alg.bracket(h, e) == (0, 0, 2)
    assert alg.bracket(h, f) == (1, 0, 0)          # -2 = 1 mod 3


@pytest.mark.parametrize("name,p", [("sl2", 3), ("gl2", 2), ("sl3", 5), ("gl3", 3), ("b2", 3), ("g2", 5)])
def test_structure_constants_match_matrix_commutators(name, p):
    alg = algebra_from_name(name, p)
    F = alg.F
    for i, j in itertools.product(range(alg.dim), repeat=2):
        comm = _commutator(alg.rep_int[i], alg.rep_int[j])
        reduced = [[F.from_int(x) for x in row] for row in comm]
        assert alg.coords_of_matrix(reduced) == alg.bracket(alg.unit(i), alg.unit(j))


def test_sl2_rejected_in_characteristic_two():
    rep = check_hypotheses("sl", 2, 2)
    assert not rep.ok
    assert rep.failed() == ["H3"]
    with pytest.raises(HypothesisError, match="H3"):
        build_algebra("sl", 2, 2)


def test_sl3_rejected_when_p_divides_n():
    assert check_hypotheses("sl", 3, 3).failed() == ["H3"]


def test_gl2_accepted_in_characteristic_two():
    assert check_hypotheses("gl", 2, 2).ok
    assert build_algebra("gl", 2, 2).dim == 4


@pytest.mark.parametrize("kind,n,p", [("G2", 2, 5), ("gl", 3, 3), ("B2", 2, 3), ("gl", 2, 2)])
def test_hypotheses_pass(kind, n, p):
    assert check_hypotheses(kind, p, n).failed() == []


@pytest.mark.parametrize("kind,p", [("B2", 2), ("G2", 2), ("G2", 3)])
def test_bad_primes_fail_h2(kind, p):
    rep = check_hypotheses(kind, p, 2)
    assert "H2" in rep.failed()
    assert not rep.to_json()["H2"]


# ---------------------------------------------------------------------- p-power

def test_p_power_examples():
    gl2 = build_algebra("gl", 2, 3)
    F9 = field(3, 2)
    a, b = F9.gen(), F9.gen() + 1
    diag = [F9.zero] * 4
    diag[gl2.index("E11")], diag[gl2.index("E22")] = a, b
    want = [F9.zero] * 4
    want[gl2.index("E11")], want[gl2.index("E22")] = a ** 3, b ** 3
    assert gl2.p_power(tuple(diag)) == tuple(want)
    for p in (3, 5, 7):
        sl2 = build_algebra("sl", 2, p)
        e, h = sl2.unit(sl2.index("e")), sl2.unit(sl2.index("h"))
        assert sl2.p_power(e) == (0, 0, 0)
        assert sl2.p_power(h) == h


@pytest.mark.parametrize("name,p", [("sl2", 5), ("gl3", 2), ("b2", 3)])
def test_ad_of_p_power_is_p_power_of_ad(name, p):
    from zassenhaus import linalg
    alg = algebra_from_name(name, p)
    rng = random.Random(7)
    for _ in range(5):
        x = tuple(rng.randrange(p) for _ in range(alg.dim))
        lhs = alg.ad_matrix(alg.p_power(x))
        rhs = linalg.matpow(alg.ad_matrix(x), p, alg.F)
        assert lhs == rhs


# ----------------------------------------------------------------- root data

@pytest.mark.parametrize("name,p,order", [("sl2", 3, 2), ("sl3", 2, 6), ("gl3", 2, 6), ("b2", 3, 8), ("g2", 5, 12)])
def test_weyl_group_orders_and_involutions(name, p, order):
    alg = algebra_from_name(name, p)
    assert len(alg.weyl) == order
    ident = alg.weyl.elements[0]
    for s in alg.weyl.generators():
        assert alg.weyl.compose(s, s) == ident


@pytest.mark.parametrize("name,p", [("sl2", 3), ("gl2", 2), ("sl3", 5), ("b2", 3), ("g2", 5)])
def test_rho_is_one_on_simple_coroots(name, p):
    alg = algebra_from_name(name, p)
    for a in alg.simple_roots():
        c = alg.coroots[tuple(a)]
        assert sum(r * x for r, x in zip(alg.rho, c)) == 1


@pytest.mark.parametrize("name,p", [("sl2", 5), ("gl2", 3), ("sl3", 5), ("b2", 5), ("g2", 7)])
def test_form_sends_coroot_to_multiple_of_root(name, p):
    alg = algebra_from_name(name, p)
    F = alg.F
    for root, c in alg.coroots.items():
        h = [0] * alg.dim
        for k, x in zip(alg.h_index, c):
            h[k] = F.from_int(x)
        vals = [alg.form(tuple(h), alg.unit(k)) for k in alg.h_index]
        scalars = {F.div(v, F.from_int(r)) for v, r in zip(vals, root) if r % p}
        assert len(scalars) == 1 and 0 not in scalars
        assert all(v == 0 for v, r in zip(vals, root) if r % p == 0)


def test_orbit_partition_of_g2_has_long_and_short():
    assert len(build_algebra("G2", 2, 5).root_orbits()) == 2
    assert len(build_algebra("sl", 3, 2).root_orbits()) == 1


# ------------------------------------------------------------------- orbits

def test_sl2_orbits_ordinary_and_dot():
    alg = build_algebra("sl", 2, 3, field(3, 2))
    F9 = field(3, 2)
    t = F9.gen()
    orbit, _ = weyl_orbit(alg, (t,))
    assert set(orbit) == {(t,), (-t,)}
    orbit, _ = weyl_orbit(alg, (t,), "dot")
    assert set(orbit) == {(t,), (-t - 2,)}
    assert weyl_orbit(alg, (F9(-1),), "dot")[0] == [(F9(-1),)]


def test_dot_action_on_t_is_rejected():
    alg = build_algebra("sl", 2, 3)
    w = alg.weyl.generators()[0]
    with pytest.raises(ValueError):
        weyl_act_vector(alg, w, (field(3)(1),), space="t", mode="dot")


@pytest.mark.parametrize("name", ["sl3", "b2"])
def test_dot_action_composes(name):
    alg = algebra_from_name(name, 5)
    F = field(5, 2)
    rng = random.Random(3)
    gens = alg.weyl.generators()
    for _ in range(10):
        lam = tuple(F.element(rng.randrange(F.q)) for _ in range(alg.rank))
        for a, b in itertools.product(gens, repeat=2):
            lhs = weyl_act_vector(alg, alg.weyl.compose(a, b), lam, mode="dot")
            rhs = weyl_act_vector(alg, a, weyl_act_vector(alg, b, lam, mode="dot"), mode="dot")
            assert lhs == rhs


@pytest.mark.parametrize("name,p", [("sl3", 5), ("b2", 5)])
def test_regular_functionals_have_trivial_stabilizer(name, p):
    alg = algebra_from_name(name, p)
    F = field(p, 2)
    for vec in itertools.islice(itertools.product(F.elements(), repeat=alg.rank), 0, None, 37):
        regular = all(sum((F(c) * v for c, v in zip(co, vec)), F.zero) != F.zero for co in alg.coroots.values())
        if regular:
            assert len(weyl_orbit(alg, vec)[0]) == len(alg.weyl)


def test_descriptor_serialization():
    assert build_algebra("sl", 2, 3).descriptor()["type"] == "sl"
    assert build_algebra("sl", 2, 3).descriptor()["n"] == 2
