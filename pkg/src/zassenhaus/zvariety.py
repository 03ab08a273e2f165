"""Geometry of g* over finite fields: Jordan decomposition, regular semisimple loci, the Zassenhaus
variety as a fibre product, its rational parametrization, point counts and baby Verma modules.

Only the matrix algebras gl_n and sl_n are supported here: functionals are transported to matrices
through the trace form.
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import linalg as la
from .field import GF, FieldElement, FieldError, field, restrict
from .liealg import LieAlgebra, build_algebra, weyl_act_vector, weyl_orbit
from .reports import Report

EXTENSION_LIMIT = 10**5     # largest extension field built for diagonalization
ENUMERATION_LIMIT = 10**7


class GuardError(ValueError):
    """A size guard was exceeded."""


class PreconditionError(ValueError):
    pass


def _require_matrix_type(alg: LieAlgebra):
    if alg.kind not in ("gl", "sl"):
        raise PreconditionError(f"{alg.name}: functionals are supported for gl_n and sl_n only")


def common_field(*fields: GF) -> GF:
    p = fields[0].p
    if any(F.p != p for F in fields):
        raise FieldError("fields of different characteristic")
    m = math.lcm(*(F.m for F in fields))
    return _guarded_field(p, m)


def _guarded_field(p: int, m: int) -> GF:
    if p ** m > EXTENSION_LIMIT:
        raise GuardError(f"extension field of size {p}^{m} exceeds the guard {EXTENSION_LIMIT}")
    return field(p, m)


def splitting_field(alg: LieAlgebra, K: GF) -> GF:
    """F_{q^k} with k = lcm(1..n): contains every eigenvalue of an n x n matrix over K."""
    return _guarded_field(K.p, K.m * math.lcm(*range(1, alg.n + 1)))


def embed_codes(codes, small: GF, big: GF):
    if small is big:
        return list(codes)
    table = small.embedding(big)
    return [table[c] for c in codes]


def embed_matrix(mat, small: GF, big: GF):
    if small is big:
        return [list(r) for r in mat]
    table = small.embedding(big)
    return [[table[c] for c in r] for r in mat]


# -- functionals -----------------------------------------------------------------

class Functional:
    """A linear form on g, stored as its values on the ordered basis."""

    __slots__ = ("alg", "values")

    def __init__(self, alg: LieAlgebra, values):
        values = tuple(values)
        if len(values) != alg.dim:
            raise ValueError(f"expected {alg.dim} values")
        F = values[0].field
        if any(v.field is not F for v in values):
            raise ValueError("mixed fields in a functional")
        self.alg = alg
        self.values = values

    @classmethod
    def from_codes(cls, alg, codes, K: GF):
        return cls(alg, [K.element(c) for c in codes])

    @classmethod
    def zero(cls, alg, K: GF):
        return cls.from_codes(alg, [0] * alg.dim, K)

    @classmethod
    def from_dict(cls, alg, K: GF, **vals):
        codes = [0] * alg.dim
        for label, v in vals.items():
            codes[alg.index(label)] = K(v).code
        return cls.from_codes(alg, codes, K)

    @property
    def field(self) -> GF:
        return self.values[0].field

    @property
    def codes(self):
        return tuple(v.code for v in self.values)

    def __call__(self, vec):
        F = self.field
        acc = 0
        for a, b in zip(self.codes, vec):
            if a and b:
                acc = F.add(acc, F.mul(a, b))
        return F.element(acc)

    def __getitem__(self, label):
        return self.values[self.alg.index(label) if isinstance(label, str) else label]

    def __add__(self, other):
        return Functional(self.alg, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        return Functional(self.alg, [a - b for a, b in zip(self.values, other.values)])

    def __eq__(self, other):
        return isinstance(other, Functional) and other.alg is self.alg and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def embed(self, big: GF) -> "Functional":
        return Functional.from_codes(self.alg, embed_codes(self.codes, self.field, big), big)

    def restrict(self, small: GF) -> "Functional | None":
        vals = [restrict(v, small) for v in self.values]
        if any(v is None for v in vals):
            return None
        return Functional(self.alg, vals)

    def torus_values(self):
        return tuple(self.values[i] for i in self.alg.h_index)

    def is_in_tstar(self) -> bool:
        return all(not self.values[i] for i in range(self.alg.dim) if i not in self.alg.h_index)

    def is_in_ustar(self) -> bool:
        return all(not self.values[i] for i in range(self.alg.dim) if i not in self.alg.f_index)

    def is_in_bstar(self) -> bool:
        return all(not self.values[i] for i in self.alg.e_index)

    def to_json(self):
        return [str(v) for v in self.values]

    def __repr__(self):
        return "Functional(" + ", ".join(f"{l}={v}" for l, v in zip(self.alg.labels, self.values) if v) + ")"


@functools.lru_cache(maxsize=None)
def _kappa_inverse(alg: LieAlgebra):
    return la.inverse(alg.kappa, alg.F)


def to_matrix(chi: Functional):
    """The matrix X with kappa(X, y) = chi(y) for all y."""
    alg = chi.alg
    _require_matrix_type(alg)
    K = chi.field
    kinv = embed_matrix(_kappa_inverse(alg), alg.F, K)
    coords = la.matmul(kinv, [[c] for c in chi.codes], K)
    return alg.matrix_of(tuple(r[0] for r in coords), K)


def from_matrix(alg: LieAlgebra, mat, K: GF) -> Functional:
    coords = alg.coords_of_matrix(mat, K)
    kap = embed_matrix(alg.kappa, alg.F, K)
    vals = la.matmul(kap, [[c] for c in coords], K)
    return Functional.from_codes(alg, [r[0] for r in vals], K)


@dataclass(frozen=True)
class GroupElement:
    F: GF
    rows: tuple

    @classmethod
    def of(cls, F, rows):
        return cls(F, tuple(tuple(r) for r in rows))

    def inverse(self):
        return GroupElement.of(self.F, la.inverse([list(r) for r in self.rows], self.F))

    def frobenius(self, direction="fwd"):
        f = self.F.frob if direction == "fwd" else self.F.frob_inv
        return GroupElement.of(self.F, [[f(x) for x in r] for r in self.rows])

    def det(self):
        return self.F.element(la.det([list(r) for r in self.rows], self.F))

    def to_json(self):
        return [[str(self.F.element(x)) for x in r] for r in self.rows]


def coadjoint_act(g: GroupElement, chi: Functional) -> Functional:
    """(g.chi)(y) = chi(g^-1 y g), evaluated basis vector by basis vector."""
    alg = chi.alg
    L = common_field(g.F, chi.field)
    gm = embed_matrix(g.rows, g.F, L)
    gi = la.inverse(gm, L)
    c = chi.embed(L)
    vals = []
    for i in range(alg.dim):
        y = alg.matrix_of(alg.unit(i), L)
        conj = la.matmul(la.matmul(gi, y, L), gm, L)
        vals.append(c(alg.coords_of_matrix(conj, L)).code)
    return Functional.from_codes(alg, vals, L)


def star_act(g: GroupElement, chi: Functional) -> Functional:
    """g * chi = Fr^-1(g) . chi with Fr^-1 applied to the matrix entries."""
    return coadjoint_act(g.frobenius("inv"), chi)


# -- Jordan decomposition ------------------------------------------------------------

def semisimple_part_matrix(x, K: GF):
    """S in the Jordan decomposition x = S + N, as a polynomial in x (Newton iteration on the radical)."""
    r = la.pradical(la.charpoly(x, K), K)
    dr = la.pderiv(r, K)
    s = [list(row) for row in x]
    for _ in range(2 * len(x) + 2):
        rs = la.mat_poly_eval(r, s, K)
        if not any(any(row) for row in rs):
            return s
        s = la.matsub(s, la.matmul(rs, la.inverse(la.mat_poly_eval(dr, s, K), K), K), K)
    raise RuntimeError("Newton iteration for the semisimple part did not converge")


@dataclass
class JordanPair:
    chi: Functional
    chi_s: Functional
    chi_n: Functional
    g: GroupElement
    eigenvalues: tuple     # diagonal of g S g^-1 over the splitting field

    def to_json(self):
        return {"chi": self.chi.to_json(), "chi_s": self.chi_s.to_json(), "chi_n": self.chi_n.to_json(),
                "g": self.g.to_json(), "eigenvalues": [str(e) for e in self.eigenvalues]}


def _adapted_basis(s, nmat, eigen, L):
    """Basis of the eigenspace of s for eigen, ordered along ker N subset ker N^2 subset ..."""
    n = len(s)
    shifted = la.matsub(s, la.matscale(eigen, la.identity(n), L), L)
    target = len(la.kernel(shifted, n, L))
    basis: list = []
    power = la.identity(n)
    while len(basis) < target:
        power = la.matmul(power, nmat, L)
        for v in la.kernel(shifted + power, n, L):
            if la.rank(basis + [v], L) > len(basis):
                basis.append(v)
    return basis


def jordan_decompose(chi: Functional) -> JordanPair:
    alg = chi.alg
    K = chi.field
    x = to_matrix(chi)
    s = semisimple_part_matrix(x, K)
    nm = la.matsub(x, s, K)
    chi_s = from_matrix(alg, s, K)
    chi_n = from_matrix(alg, nm, K)
    L = splitting_field(alg, K)
    sL = embed_matrix(s, K, L)
    nL = embed_matrix(nm, K, L)
    roots = la.proots(la.charpoly(sL, L), L)
    eig = sorted(set(roots), key=L.order_key)
    cols = []
    diag = []
    for d in eig:
        b = _adapted_basis(sL, nL, d, L)
        cols.extend(b)
        diag.extend([d] * len(b))
    pmat = [[cols[j][i] for j in range(len(cols))] for i in range(len(cols))]
    g = GroupElement.of(L, la.inverse(pmat, L))
    return JordanPair(chi, chi_s, chi_n, g, tuple(L.element(d) for d in diag))


def check_jordan(pair: JordanPair) -> dict:
    """Verify the decomposition: sum, commuting parts, conjugated shapes and the root-space condition."""
    alg = pair.chi.alg
    K = pair.chi.field
    xs, xn = to_matrix(pair.chi_s), to_matrix(pair.chi_n)
    sums = pair.chi_s + pair.chi_n == pair.chi
    commute = la.matmul(xs, xn, K) == la.matmul(xn, xs, K)
    nilpotent = not any(any(r) for r in la.matpow(xn, len(xn), K))
    gs = coadjoint_act(pair.g, pair.chi_s)
    gn = coadjoint_act(pair.g, pair.chi_n)
    compatible = True
    for k, root in enumerate(alg.pos_roots):
        val = _root_value(alg, gs.torus_values(), root)
        if val and gn.values[alg.f_index[k]]:
            compatible = False
    return {"sum": sums, "commute": commute, "nilpotent": nilpotent, "s_in_tstar": gs.is_in_tstar(),
            "n_in_ustar": gn.is_in_ustar(), "root_condition": compatible}


def _root_value(alg, tvals, root):
    """lambda(h_root) for lambda given by its values on the Cartan basis."""
    F = tvals[0].field
    co = alg.coroots[tuple(root)]
    acc = F.zero
    for c, v in zip(co, tvals):
        if c:
            acc = acc + v * c
    return acc


def _is_triangular(x) -> bool:
    n = len(x)
    upper = all(not x[i][j] for i in range(n) for j in range(i))
    lower = all(not x[i][j] for i in range(n) for j in range(i + 1, n))
    return upper or lower


def torus_conjugate(chi: Functional):
    """(L, values of a t*-conjugate of the semisimple part on the Cartan basis)."""
    alg = chi.alg
    K = chi.field
    L = splitting_field(alg, K)
    x = embed_matrix(to_matrix(chi), K, L)
    n = alg.n
    if _is_triangular(x):
        # the diagonal is already a t*-conjugate; keep its order
        roots = [x[i][i] for i in range(n)]
    else:
        roots = la.proots(la.charpoly(x, L), L)
    if len(roots) != n:
        raise RuntimeError("characteristic polynomial did not split in the splitting field")
    dmat = [[roots[i] if i == j else 0 for j in range(n)] for i in range(n)]
    return L, from_matrix(alg, dmat, L).torus_values()


def _restrict_or_keep(v: FieldElement, K: GF):
    r = restrict(v, K)
    return r if r is not None else v


def _restrict_vector(vec, K: GF) -> tuple:
    """vec over K when every entry lies in K, otherwise unchanged."""
    small = [restrict(v, K) for v in vec]
    return tuple(vec) if any(v is None for v in small) else tuple(small)


def rss_tests(chi: Functional) -> dict:
    alg = chi.alg
    K = chi.field
    L, tv = torus_conjugate(chi)
    p = alg.p
    f0 = L.one
    fv = L.one
    for root in alg.roots:
        v = _root_value(alg, tv, root)
        f0 = f0 * v
        fv = fv * (v ** p - v)
    return {"F0_value": _restrict_or_keep(f0, K), "F_value": _restrict_or_keep(fv, K),
            "is_rss": bool(f0), "is_in_O": bool(fv)}


def xi_map(alg: LieAlgebra, lam) -> tuple:
    """xi(lambda)(h_i) = lambda(h_i)^p - lambda(h_i) on the toral Cartan basis."""
    p = alg.p
    return tuple(a ** p - a for a in lam)


def zpoint_membership(chi: Functional, lam) -> dict:
    """First w (in Weyl-group order) with lambda(h)^p - lambda(h) = w(chi_s')(h)^p on the Cartan basis."""
    alg = chi.alg
    L0, tv = torus_conjugate(chi)
    lam = tuple(lam)
    L = common_field(L0, lam[0].field)
    tv = tuple(L.element(c) for c in embed_codes([v.code for v in tv], L0, L))
    lam = tuple(L.element(c) for c in embed_codes([v.code for v in lam], lam[0].field, L))
    lhs = xi_map(alg, lam)
    p = alg.p
    for w in alg.weyl:
        img = weyl_act_vector(alg, w, tv)
        if all(a == b ** p for a, b in zip(lhs, img)):
            return {"member": True, "witness": w}
    return {"member": False, "witness": None}


# -- the rational parametrization ------------------------------------------------------

@functools.lru_cache(maxsize=None)
def dot_generators(alg: LieAlgebra):
    """gamma^-1 of the chosen W-invariant generators: generators of S(t)^{W.}."""
    from .center import weyl_generators
    from .poly import gamma_shift
    return tuple(gamma_shift(alg, s, "inv") for s in weyl_generators(alg))


def dot_invariants(alg: LieAlgebra, lam) -> tuple:
    return tuple(g.evaluate(lam) for g in dot_generators(alg))


def p_power_functional(chi: Functional) -> Functional:
    """chi^[p]: the p-mapping carried to g* through kappa."""
    K = chi.field
    x = to_matrix(chi)
    return from_matrix(chi.alg, la.matpow(x, chi.alg.p, K), K)


@dataclass
class ZPoint:
    chi: Functional
    lam: tuple
    lam_canonical: tuple
    invariants: tuple

    @property
    def key(self):
        return (self.chi.codes, tuple(v.code for v in self.invariants))

    def to_json(self, witness=None):
        return {"chi": self.chi.to_json(), "lambda": [str(v) for v in self.lam_canonical],
                "invariants": [str(v) for v in self.invariants],
                "witness_w": None if witness is None else repr(witness)}


def rational_param(chi: Functional) -> ZPoint:
    alg = chi.alg
    K = chi.field
    if not rss_tests(chi)["is_in_O"]:
        raise PreconditionError("rational_param needs F(chi) != 0")
    diff = p_power_functional(chi) - chi
    first = Functional(alg, [v.frobenius("inv") for v in diff.values])
    L, tv = torus_conjugate(chi)
    rho = [L.from_int(r) for r in alg.rho]
    shifted = tuple(L.element(L.sub(v.code, r)) for v, r in zip(tv, rho))
    _, canon = weyl_orbit(alg, shifted, "dot")
    inv = tuple(_restrict_or_keep(v, K) for v in dot_invariants(alg, canon))
    return ZPoint(first, _restrict_vector(shifted, K), _restrict_vector(canon, K), inv)


# -- enumeration --------------------------------------------------------------------

def _decode(index: int, q: int, dim: int):
    codes = []
    for _ in range(dim):
        index, c = divmod(index, q)
        codes.append(c)
    return codes


def _o_chunk(args):
    kind, n, p, m, start, stop, keep = args
    alg = build_algebra(kind, n, p)
    K = field(p, m)
    count = 0
    pts = []
    for idx in range(start, stop):
        chi = Functional.from_codes(alg, _decode(idx, K.q, alg.dim), K)
        if rss_tests(chi)["is_in_O"]:
            count += 1
            if keep:
                pts.append(rational_param(chi).key)
    return count, pts


def _lambda_table(alg, K):
    """One lambda over the splitting field for each F_q-rational value vector of the dot generators."""
    L = splitting_field(alg, K)
    if L.q ** alg.rank > 10**6:
        raise GuardError("too many torus points to tabulate")
    table = {}
    for idx in range(L.q ** alg.rank):
        lam = tuple(L.element(c) for c in _decode(idx, L.q, alg.rank))
        vals = [restrict(v, K) for v in dot_invariants(alg, lam)]
        if any(v is None for v in vals):
            continue
        key = tuple(v.code for v in vals)
        table.setdefault(key, lam)
    return table


def _zrss_chunk(args):
    kind, n, p, m, start, stop, keep = args
    alg = build_algebra(kind, n, p)
    K = field(p, m)
    table = _lambda_table(alg, K)
    count = 0
    pts = []
    for idx in range(start, stop):
        chi = Functional.from_codes(alg, _decode(idx, K.q, alg.dim), K)
        if not rss_tests(chi)["is_rss"]:
            continue
        for key, lam in table.items():
            if zpoint_membership(chi, lam)["member"]:
                count += 1
                if keep:
                    pts.append((chi.codes, key))
    return count, pts


def enumerate_points(alg: LieAlgebra, mode: str, q: int, *, workers: int = 1, keep: bool = False):
    """Count F_q-points of O = {F != 0} (mode "O") or of the regular semisimple part of the
    Zassenhaus variety (mode "Zrss").  Returns (count, sorted point keys if keep)."""
    _require_matrix_type(alg)
    m = round(math.log(q, alg.p))
    if alg.p ** m != q:
        raise ValueError(f"q={q} is not a power of p={alg.p}")
    total = q ** alg.dim
    if total > ENUMERATION_LIMIT:
        raise GuardError(f"{total} candidates exceed the enumeration guard {ENUMERATION_LIMIT}")
    fn = {"O": _o_chunk, "Zrss": _zrss_chunk}.get(mode)
    if fn is None:
        raise ValueError(f"unknown mode {mode!r}")
    workers = max(1, workers)
    step = -(-total // workers)
    jobs = [(alg.kind, alg.n, alg.p, m, s, min(s + step, total), keep) for s in range(0, total, step)]
    if workers == 1:
        results = [fn(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(fn, jobs))
    count = sum(c for c, _ in results)
    pts = sorted(x for _, ps in results for x in ps) if keep else None
    return count, pts


def bijection_report(alg: LieAlgebra, q: int, workers: int = 1) -> Report:
    """|O(F_q)| versus |Zrss(F_q)|, plus injectivity of rational_param and equality of the point sets."""
    n_o, img = enumerate_points(alg, "O", q, workers=workers, keep=True)
    n_z, zset = enumerate_points(alg, "Zrss", q, workers=workers, keep=True)
    injective = len(set(img)) == len(img)
    same = sorted(set(img)) == zset
    ok = injective and n_o == n_z and same
    flagged = injective and not ok
    return Report("enumerate", {"algebra": alg.name, "p": alg.p, "q": q}, ok,
                  None if ok else {"injective": injective, "image_equals_Zrss": same},
                  {"O": n_o, "Zrss": n_z, "image": len(set(img))},
                  ["O = {F != 0} isomorphic to Z_rss"], flagged=flagged)


# -- baby Verma modules --------------------------------------------------------------------

def baby_verma_matrices(alg: LieAlgebra, chi: Functional, lam):
    """Matrices of the basis of g on Z_chi(lambda), basis f^i v (0 <= i < p); needs one positive root."""
    _require_matrix_type(alg)
    if alg.n != 2:
        raise PreconditionError("baby Verma modules are implemented for rank-one semisimple part only")
    if not chi.is_in_bstar():
        raise PreconditionError("chi must vanish on the positive root vectors")
    lam = tuple(lam)
    L = common_field(chi.field, lam[0].field)
    chi = chi.embed(L)
    lam = tuple(L.element(c) for c in embed_codes([v.code for v in lam], lam[0].field, L))
    p = alg.p
    for h, (a, c) in enumerate(zip(lam, chi.torus_values())):
        if a ** p - a != c ** p:
            raise PreconditionError(f"lambda is not compatible with chi on the Cartan basis vector {h}")
    fi, ei = alg.f_index[0], alg.e_index[0]
    alpha = alg.weights[ei]
    hvec = alg.bracket(alg.unit(ei), alg.unit(fi))          # [e, f] in the Cartan
    hco = [hvec[i] for i in alg.h_index]
    lam_h = L.zero
    alpha_h = 0
    for c, v, a in zip(hco, lam, alpha):
        lam_h = lam_h + v * c
        alpha_h += c * a
    mats = {}
    zero = [[0] * p for _ in range(p)]
    f = [list(r) for r in zero]
    for i in range(p - 1):
        f[i + 1][i] = 1
    f[0][p - 1] = (chi.values[fi] ** p).code
    mats[fi] = f
    e = [list(r) for r in zero]
    for i in range(1, p):
        # e f^i v = (i lambda(H) - alpha(H) i(i-1)/2) f^(i-1) v with H = [e, f]
        val = lam_h * i - alpha_h * (i * (i - 1) // 2)
        e[i - 1][i] = val.code
    mats[ei] = e
    for k, hi in enumerate(alg.h_index):
        d = [list(r) for r in zero]
        for i in range(p):
            d[i][i] = (lam[k] - alpha[k] * i).code
        mats[hi] = d
    return L, mats


def baby_verma_scalar(chi: Functional, lam, u) -> FieldElement:
    """The scalar by which the central element u acts on Z_chi(lambda)."""
    alg = chi.alg
    L, mats = baby_verma_matrices(alg, chi, lam)
    p = alg.p
    total = [[0] * p for _ in range(p)]
    cache = {}

    def pw(i, a):
        if (i, a) not in cache:
            cache[(i, a)] = la.matpow(mats[i], a, L)
        return cache[(i, a)]

    for mono, c in u.terms.items():
        m = la.identity(p)
        for i, a in enumerate(mono):
            if a:
                m = la.matmul(m, pw(i, a), L)
        total = la.matadd(total, la.matscale(L.from_int(c), m, L), L)
    s = total[0][0]
    if any(total[i][j] != (s if i == j else 0) for i in range(p) for j in range(p)):
        raise RuntimeError("element does not act by a scalar; it is not central")
    return L.element(s)
