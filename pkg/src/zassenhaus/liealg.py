"""Split reductive Lie algebras over F_p with Chevalley bases.

Supported realizations: gl_n, sl_n (defining representation), B2 (as sp_4)
and G2 (7-dimensional representation).  Structure constants are computed
over the integers from explicit matrices and then reduced mod p.  The
p-mapping is the matrix p-th power in the defining representation of gl_n
and sl_n, and in the adjoint representation of B2 and G2.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import linalg
from .field import GF, FieldElement, field

BAD_PRIMES = {"A": (), "B": (2,), "C": (2,), "D": (2,), "E6": (2, 3), "E7": (2, 3),
              "F4": (2, 3), "G2": (2, 3), "E8": (2, 3, 5)}
WEYL_ORDERS = {"B2": 8, "G2": 12}
ALGEBRA_ALIASES = {"sl2": ("sl", 2), "gl2": ("gl", 2), "sl3": ("sl", 3), "gl3": ("gl", 3),
                   "b2": ("B2", 2), "g2": ("G2", 2)}


class HypothesisError(ValueError):
    """The requested (type, p) violates one of the standing hypotheses."""


class InternalError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# integral construction
# ---------------------------------------------------------------------------

def _mat(n, entries):
    m = [[0] * n for _ in range(n)]
    for (i, j), c in entries.items():
        m[i][j] += c
    return m


def _mmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _bracket(a, b):
    ab, ba = _mmul(a, b), _mmul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


def _flat(m):
    return [x for r in m for x in r]


def _scale(m, c):
    return [[x * c for x in r] for r in m]


class _RationalCoords:
    """Coordinates of matrices with respect to a fixed independent family."""

    def __init__(self, mats):
        self.n = len(mats)
        cols = [_flat(m) for m in mats]
        dim = len(cols[0])
        aug = [[Fraction(cols[i][k]) for i in range(self.n)] + [Fraction(int(k == t)) for t in range(dim)]
               for k in range(dim)]
        # row-reduce [A | I] to get a left inverse on the column space
        r, self.pivots = 0, []
        for c in range(self.n):
            piv = next((i for i in range(r, dim) if aug[i][c] != 0), None)
            if piv is None:
                raise InternalError("matrices are linearly dependent")
            aug[r], aug[piv] = aug[piv], aug[r]
            inv = 1 / aug[r][c]
            aug[r] = [x * inv for x in aug[r]]
            for i in range(dim):
                if i != r and aug[i][c] != 0:
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
            r += 1
        self.left = [row[self.n:] for row in aug[: self.n]]
        self.check = [row[self.n:] for row in aug[self.n:]]

    def __call__(self, m):
        v = _flat(m)
        for row in self.check:
            if sum(a * b for a, b in zip(row, v) if b) != 0:
                raise InternalError("matrix outside the span of the basis")
        return [sum(a * b for a, b in zip(row, v) if b) for row in self.left]


def _type_a(kind, n):
    """Explicit Chevalley basis of gl_n or sl_n."""
    E = lambda i, j: _mat(n, {(i, j): 1})
    pos = sorted(((i, j) for i in range(n) for j in range(i + 1, n)), key=lambda ij: (ij[1] - ij[0], ij))
    if kind == "gl":
        cartan = [E(i, i) for i in range(n)]
        rank = n
        root_vec = lambda i, j: tuple((k == i) - (k == j) for k in range(n))
        coroot = lambda i, j: tuple((k == i) - (k == j) for k in range(n))
        rho = tuple(n - 1 - k for k in range(n))
    else:
        cartan = [_mat(n, {(k, k): 1, (k + 1, k + 1): -1}) for k in range(n - 1)]
        rank = n - 1
        root_vec = lambda i, j: tuple(((k == i) - (k == j)) - ((k + 1 == i) - (k + 1 == j)) for k in range(n - 1))
        coroot = lambda i, j: tuple(int(i <= k < j) for k in range(n - 1))
        rho = tuple(1 for _ in range(n - 1))
    roots = [root_vec(i, j) for i, j in pos]
    coroots = [coroot(i, j) for i, j in pos]
    simple = [pos.index((i, i + 1)) for i in range(n - 1)]
    es = [E(i, j) for i, j in pos]
    fs = [E(j, i) for i, j in pos]
    if kind == "sl" and n == 2:
        labels = (["f"], ["h"], ["e"])
    elif kind == "sl":
        labels = ([f"f{i+1}{j+1}" for i, j in pos], [f"h{k+1}" for k in range(rank)], [f"e{i+1}{j+1}" for i, j in pos])
    else:
        labels = ([f"E{j+1}{i+1}" for i, j in pos], [f"E{k+1}{k+1}" for k in range(n)], [f"E{i+1}{j+1}" for i, j in pos])
    return dict(rank=rank, cartan=cartan, roots=roots, coroots=coroots, simple=simple, es=es, fs=fs,
                rho=rho, labels=labels, root_type=("A", n - 1), adjoint_rep=False)


def _generated(simple_e, simple_f, expected_dim, root_type):
    """Chevalley basis generated from simple root vectors of a matrix realization."""
    r = len(simple_e)
    cartan = [_bracket(e, f) for e, f in zip(simple_e, simple_f)]
    csolve = _RationalCoords(cartan)

    def weight(x):
        # alpha(h_j) from [h_j, x] = alpha(h_j) x
        vals = []
        fx = _flat(x)
        k = next(i for i, v in enumerate(fx) if v != 0)
        for h in cartan:
            vals.append(Fraction(_flat(_bracket(h, x))[k], fx[k]))
        return tuple(int(v) for v in vals)

    roots = [weight(e) for e in simple_e]
    es = list(simple_e)
    fs = list(simple_f)
    frontier = list(range(r))
    while frontier:
        new = []
        for idx in frontier:
            for i in range(r):
                y = _bracket(simple_e[i], es[idx])
                if not any(_flat(y)):
                    continue
                gamma = tuple(a + b for a, b in zip(roots[idx], roots[i]))
                if gamma in roots:
                    continue
                rr = 0
                while tuple(a - (rr + 1) * b for a, b in zip(roots[idx], roots[i])) in roots:
                    rr += 1
                es.append(_scale(y, Fraction(1, rr + 1)))
                fs.append(_scale(_bracket(simple_f[i], fs[idx]), Fraction(1, rr + 1)))
                roots.append(gamma)
                new.append(len(roots) - 1)
        frontier = new
    coroots = []
    for k, gamma in enumerate(roots):
        hc = csolve(_bracket(es[k], fs[k]))
        if sum(a * b for a, b in zip(gamma, hc)) < 0:
            fs[k] = _scale(fs[k], -1)
            hc = [-c for c in hc]
        coroots.append(tuple(int(c) for c in hc))
    # heights in terms of simple roots
    simple_mat = [roots[i] for i in range(r)]
    heights = []
    for gamma in roots:
        coeffs = _RationalCoords([[[Fraction(v)] for v in s] for s in simple_mat])([[Fraction(v)] for v in gamma])
        heights.append(int(sum(coeffs)))
    order = sorted(range(len(roots)), key=lambda k: (heights[k], roots[k]))
    roots = [roots[k] for k in order]
    coroots = [coroots[k] for k in order]
    es = [es[k] for k in order]
    fs = [fs[k] for k in order]
    simple = [order.index(i) for i in range(r)]
    if expected_dim is not None and 2 * len(roots) + r != expected_dim:
        raise InternalError("generated algebra has the wrong dimension")
    labels = ([f"f{k+1}" for k in range(len(roots))], [f"h{k+1}" for k in range(r)], [f"e{k+1}" for k in range(len(roots))])
    return dict(rank=r, cartan=cartan, roots=roots, coroots=coroots, simple=simple, es=es, fs=fs,
                rho=tuple(1 for _ in range(r)), labels=labels, root_type=root_type, adjoint_rep=True)


def _b2():
    n = 4
    E = lambda i, j: _mat(n, {(i - 1, j - 1): 1})
    sub = lambda a, b: [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]
    e1, f1 = sub(E(1, 2), E(4, 3)), sub(E(2, 1), E(3, 4))
    e2, f2 = E(2, 4), E(4, 2)
    return _generated([e1, e2], [f1, f2], 10, ("B", 2))


def _g2():
    n = 7
    E = lambda i, j: {(i - 1, j - 1): 1}
    def M(*terms):
        acc = {}
        for c, d in terms:
            for k, v in d.items():
                acc[k] = acc.get(k, 0) + c * v
        return _mat(n, acc)
    f1 = M((1, E(2, 1)), (1, E(4, 3)), (2, E(5, 4)), (1, E(7, 6)))
    e1 = M((1, E(1, 2)), (2, E(3, 4)), (1, E(4, 5)), (1, E(6, 7)))
    f2 = M((1, E(3, 2)), (1, E(6, 5)))
    e2 = M((1, E(2, 3)), (1, E(5, 6)))
    return _generated([e1, e2], [f1, f2], 14, ("G2", 2))


@functools.lru_cache(maxsize=None)
def integral_data(kind: str, n: int):
    """Integer Chevalley data independent of p."""
    if kind in ("gl", "sl"):
        if n < 2:
            raise ValueError("n must be >= 2")
        raw = _type_a(kind, n)
    elif kind == "B2":
        raw = _b2()
    elif kind == "G2":
        raw = _g2()
    else:
        raise ValueError(f"unsupported type {kind!r}")
    nroot = len(raw["roots"])
    basis_mats = list(raw["fs"]) + list(raw["cartan"]) + list(raw["es"])
    dim = len(basis_mats)
    coords = _RationalCoords(basis_mats)
    brackets = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            c = coords(_bracket(basis_mats[i], basis_mats[j]))
            if any(x.denominator != 1 for x in c):
                raise InternalError("structure constants are not integral")
            brackets[i][j] = {k: int(x) for k, x in enumerate(c) if x}
    if raw["adjoint_rep"]:
        rep = [[[brackets[i][j].get(k, 0) for j in range(dim)] for k in range(dim)] for i in range(dim)]
    else:
        rep = [[[int(x) for x in row] for row in m] for m in basis_mats]
    gram = [[sum(_mmul(rep[i], rep[j])[k][k] for k in range(len(rep[i]))) for j in range(dim)] for i in range(dim)]
    g = 0
    for row in gram:
        for x in row:
            g = math.gcd(g, x)
    gram = [[x // g for x in row] for row in gram]
    return dict(raw, dim=dim, nroot=nroot, brackets=brackets, rep=rep, gram=gram, form_scale=g)


# ---------------------------------------------------------------------------
# Weyl group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeylElement:
    word: tuple[int, ...]          # simple reflection indices, applied right to left
    on_tstar: tuple[tuple[int, ...], ...]   # matrix acting on value vectors (lambda(h_1),...)
    on_t: tuple[tuple[int, ...], ...]       # matrix acting on Cartan coordinates

    def __repr__(self):
        return "id" if not self.word else "s" + ".s".join(str(i + 1) for i in self.word)


class WeylGroup:
    """Finite reflection group generated by simple reflections, in shortlex order."""

    def __init__(self, roots, coroots, simple, rank):
        self.rank = rank
        self.gens_tstar = []
        self.gens_t = []
        for s in simple:
            a, c = roots[s], coroots[s]
            self.gens_tstar.append(tuple(tuple(int(j == k) - a[j] * c[k] for k in range(rank)) for j in range(rank)))
            self.gens_t.append(tuple(tuple(int(k == j) - c[k] * a[j] for j in range(rank)) for k in range(rank)))
        ident = tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))
        self.elements = [WeylElement((), ident, ident)]
        seen = {ident}
        frontier = [self.elements[0]]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(len(simple)):
                    m = _imul(self.gens_tstar[i], w.on_tstar)
                    if m in seen:
                        continue
                    seen.add(m)
                    el = WeylElement((i,) + w.word, m, _imul(self.gens_t[i], w.on_t))
                    self.elements.append(el)
                    nxt.append(el)
            frontier = nxt

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def generators(self):
        return [self.elements[1 + i] for i in range(len(self.gens_tstar))]

    def compose(self, a: WeylElement, b: WeylElement) -> WeylElement:
        m = _imul(a.on_tstar, b.on_tstar)
        return next(w for w in self.elements if w.on_tstar == m)


def _imul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def apply_int_matrix(mat, vec, F: GF):
    """Integer matrix times a vector of codes in F."""
    out = []
    for row in mat:
        acc = 0
        for c, v in zip(row, vec):
            if c and v:
                acc = F.add(acc, F.mul(F.from_int(c), v))
        out.append(acc)
    return tuple(out)


# ---------------------------------------------------------------------------
# the algebra over F_p
# ---------------------------------------------------------------------------

@dataclass
class HypothesisReport:
    algebra: str
    p: int
    H1: bool
    H2: bool
    H3: bool
    details: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.H1 and self.H2 and self.H3

    def failed(self) -> list[str]:
        return [h for h in ("H1", "H2", "H3") if not getattr(self, h)]

    def to_json(self) -> dict:
        return {"algebra": self.algebra, "p": self.p, "H1": self.H1, "H2": self.H2, "H3": self.H3,
                "verdict": "pass" if self.ok else "fail", "details": self.details}


def _normalize_type(kind, n):
    if kind.lower() in ALGEBRA_ALIASES and n is None:
        return ALGEBRA_ALIASES[kind.lower()]
    up = {"b2": "B2", "g2": "G2", "b": "B2", "g": "G2"}
    k = up.get(kind.lower(), kind)
    if k in ("B2", "G2"):
        return k, 2
    if k not in ("gl", "sl"):
        raise ValueError(f"unsupported algebra type {kind!r}")
    if n is None:
        raise ValueError("matrix size n required for gl/sl")
    return k, int(n)


def _minors_gcd(rows):
    r = len(rows)
    ncol = len(rows[0])
    g = 0
    for cols in itertools.combinations(range(ncol), r):
        sub = [[Fraction(rows[i][c]) for c in cols] for i in range(r)]
        g = math.gcd(g, int(_fdet(sub)))
    return g


def _fdet(m):
    m = [list(r) for r in m]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def check_hypotheses(kind: str, p: int, n: int | None = None) -> HypothesisReport:
    """Evaluate (H1) simply connected derived group, (H2) p good, (H3) nondegenerate invariant form."""
    kind, n = _normalize_type(kind, n)
    data = integral_data(kind, n)
    label = descriptor_label(kind, n)
    family = data["root_type"][0]
    simple_coroots = [data["coroots"][s] for s in data["simple"]]
    details = {}
    if simple_coroots:
        g = _minors_gcd(simple_coroots)
        h1 = g == 1
        details["coroot_lattice_torsion"] = g
    else:
        h1 = True
    bad = BAD_PRIMES[family if family != "G2" else "G2"]
    h2 = p not in bad
    details["bad_primes"] = list(bad)
    F = field(p)
    gram = [[F.from_int(x) for x in row] for row in data["gram"]]
    d = linalg.det(gram, F)
    h3 = d != 0
    details["form_determinant_mod_p"] = d
    return HypothesisReport(label, p, h1, h2, h3, details)


def descriptor_label(kind, n):
    return f"{kind}{n}" if kind in ("gl", "sl") else kind


class LieAlgebra:
    """Chevalley-basis data of a split reductive Lie algebra over F_p.

    Basis order: negative root vectors, Cartan basis, positive root vectors;
    root vectors ordered by height then by root.  ``F`` is the prime field;
    ``ext`` is the coefficient field requested for functionals.
    """

    def __init__(self, kind: str, n: int | None, p: int, fld: GF | None = None, *, verify: bool = True):
        kind, n = _normalize_type(kind, n)
        report = check_hypotheses(kind, p, n)
        if not report.ok:
            raise HypothesisError(f"{report.algebra} at p={p} violates {', '.join(report.failed())}")
        self.hypotheses = report
        self.kind, self.n, self.p = kind, n, p
        self.F = field(p)
        self.ext = fld or self.F
        if self.ext.p != p:
            raise ValueError("coefficient field has the wrong characteristic")
        data = integral_data(kind, n)
        self._data = data
        F = self.F
        self.rank = data["rank"]
        self.nroot = data["nroot"]
        self.dim = data["dim"]
        fl, hl, el = data["labels"]
        self.labels = list(fl) + list(hl) + list(el)
        self.pos_roots = [tuple(r) for r in data["roots"]]
        self.simple = list(data["simple"])
        # basis index helpers
        self.f_index = list(range(self.nroot))
        self.h_index = list(range(self.nroot, self.nroot + self.rank))
        self.e_index = list(range(self.nroot + self.rank, self.dim))
        self.weights = ([tuple(-a for a in r) for r in self.pos_roots] + [(0,) * self.rank] * self.rank
                        + list(self.pos_roots))
        self.roots = list(self.pos_roots) + [tuple(-a for a in r) for r in self.pos_roots]
        self.coroots = {}
        for r, c in zip(self.pos_roots, data["coroots"]):
            self.coroots[r] = tuple(c)
            self.coroots[tuple(-a for a in r)] = tuple(-x for x in c)
        self.rho = tuple(data["rho"])
        self.int_brackets = data["brackets"]
        self.brackets = [[{k: F.from_int(v) for k, v in self.int_brackets[i][j].items() if v % p}
                          for j in range(self.dim)] for i in range(self.dim)]
        self.rep_int = data["rep"]
        self.rep = [[[F.from_int(x) for x in row] for row in m] for m in self.rep_int]
        self.kappa_int = data["gram"]
        self.kappa = [[F.from_int(x) for x in row] for row in self.kappa_int]
        self.weyl = WeylGroup(self.pos_roots, [self.coroots[r] for r in self.pos_roots],
                              self.simple, self.rank)
        self._rep_flat = [[x for row in m for x in row] for m in self.rep]
        self.ppow = [self._p_power_codes(self.unit(i)) for i in range(self.dim)]
        self._divided = {}
        if verify:
            self.verify()

    # -- elements of g as code vectors ---------------------------------------
    def unit(self, i: int) -> tuple[int, ...]:
        return tuple(int(k == i) for k in range(self.dim))

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def root_of(self, i: int):
        return self.weights[i]

    def bracket(self, x, y, F: GF | None = None):
        """Lie bracket of coordinate vectors (codes in F, default prime field)."""
        F = F or self.F
        out = [0] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = F.mul(a, b)
                for k, c in self.brackets[i][j].items():
                    out[k] = F.add(out[k], F.mul(ab, c))
        return tuple(out)

    def matrix_of(self, x, F: GF | None = None):
        F = F or self.F
        size = len(self.rep[0])
        m = [[0] * size for _ in range(size)]
        for i, a in enumerate(x):
            if a:
                for r in range(size):
                    row = self.rep_int[i][r]
                    for c in range(size):
                        if row[c]:
                            m[r][c] = F.add(m[r][c], F.mul(a, F.from_int(row[c])))
        return m

    def coords_of_matrix(self, m, F: GF | None = None):
        F = F or self.F
        flat = [x for row in m for x in row]
        vecs = [[F.from_int(x) for row in mi for x in row] for mi in self.rep_int]
        sol = linalg.solve_combination(vecs, flat, F)
        if sol is None:
            raise InternalError("matrix not in the span of the basis")
        return tuple(sol)

    def _p_power_codes(self, x, F: GF | None = None):
        F = F or self.F
        return self.coords_of_matrix(linalg.matpow(self.matrix_of(x, F), self.p, F), F)

    def p_power(self, x, F: GF | None = None):
        """x^{[p]} for a coordinate vector of codes (or FieldElements)."""
        if x and isinstance(x[0], FieldElement):
            F = x[0].field
            res = self._p_power_codes(tuple(a.code for a in x), F)
            return tuple(F.element(c) for c in res)
        return self._p_power_codes(tuple(x), F)

    def ad_matrix(self, x, F: GF | None = None):
        F = F or self.F
        cols = [self.bracket(x, self.unit(j), F) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def form(self, x, y, F: GF | None = None) -> int:
        F = F or self.F
        acc = 0
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b and self.kappa_int[i][j] % self.p:
                        acc = F.add(acc, F.mul(F.mul(a, b), F.from_int(self.kappa_int[i][j])))
        return acc

    # -- divided powers of ad e_alpha ----------------------------------------
    def root_vector_index(self, root) -> int:
        root = tuple(root)
        if root in self.pos_roots:
            return self.e_index[self.pos_roots.index(root)]
        neg = tuple(-a for a in root)
        return self.f_index[self.pos_roots.index(neg)]

    def divided_ad(self, root) -> list[list[list[int]]]:
        """[(ad x_root)^m / m! for m = 0, 1, ...] over F_p, computed integrally; ends before the first zero."""
        root = tuple(root)
        if root in self._divided:
            return self._divided[root]
        idx = self.root_vector_index(root)
        dim = self.dim
        ad = [[self.int_brackets[idx][j].get(i, 0) for j in range(dim)] for i in range(dim)]
        mats = []
        cur = [[int(i == j) for j in range(dim)] for i in range(dim)]
        m = 0
        while any(any(r) for r in cur):
            mats.append(cur)
            m += 1
            nxt = [[sum(ad[i][k] * cur[k][j] for k in range(dim) if ad[i][k]) for j in range(dim)] for i in range(dim)]
            if any(x % m for r in nxt for x in r):
                raise InternalError("divided power is not integral")
            cur = [[x // m for x in r] for r in nxt]
        F = self.F
        red = [[[F.from_int(x) for x in r] for r in mat] for mat in mats]
        self._divided[root] = red
        return red

    def root_group_series(self, root, i: int) -> list[dict[int, int]]:
        """Ad(x_root(t)) x_i = sum_m t^m D^(m)(x_i); returns [D^(m)(x_i)] as sparse dicts."""
        out = []
        for mat in self.divided_ad(root):
            col = {k: mat[k][i] for k in range(self.dim) if mat[k][i]}
            out.append(col)
        while out and not out[-1]:
            out.pop()
        return out

    # -- torus and Weyl data ----------------------------------------------------
    def simple_roots(self):
        return [self.pos_roots[s] for s in self.simple]

    def root_orbits(self) -> list[list[tuple]]:
        """Sigma/W as lists of roots, closure under the simple reflections."""
        remaining = list(self.roots)
        orbits = []
        while remaining:
            start = remaining[0]
            orbit = [start]
            frontier = [start]
            while frontier:
                nxt = []
                for r in frontier:
                    for g in self.weyl.gens_tstar:
                        img = tuple(sum(g[j][k] * r[k] for k in range(self.rank)) for j in range(self.rank))
                        if img not in orbit:
                            orbit.append(img)
                            nxt.append(img)
                frontier = nxt
            orbit.sort(key=self.roots.index)
            orbits.append(orbit)
            remaining = [r for r in remaining if r not in orbit]
        return orbits

    def is_positive(self, root) -> bool:
        return tuple(root) in self.pos_roots

    # -- checks ------------------------------------------------------------------
    def verify(self):
        F, dim = self.F, self.dim
        br = self.brackets
        for i in range(dim):
            if br[i][i]:
                raise InternalError("[x,x] != 0")
            for j in range(dim):
                if {k: F.neg(v) for k, v in br[j][i].items()} != br[i][j]:
                    raise InternalError("antisymmetry fails")
        units = [self.unit(i) for i in range(dim)]
        for i, j, k in itertools.combinations(range(dim), 3):
            x, y, z = units[i], units[j], units[k]
            total = [0] * dim
            for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                t = self.bracket(a, self.bracket(b, c))
                total = [F.add(u, v) for u, v in zip(total, t)]
            if any(total):
                raise InternalError("Jacobi identity fails")
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    lhs = F.add(self.form(self.bracket(units[i], units[j]), units[k]),
                                self.form(units[j], self.bracket(units[i], units[k])))
                    if lhs:
                        raise InternalError("form is not invariant")
        for i in self.f_index + self.e_index:
            if any(self.ppow[i]):
                raise InternalError("root vector p-power is nonzero")
        for i in self.h_index:
            if self.ppow[i] != units[i]:
                raise InternalError("Cartan basis element is not toral")
        for i in range(dim):
            lhs = self.ad_matrix(self.ppow[i])
            rhs = linalg.matpow(self.ad_matrix(units[i]), self.p, F)
            if lhs != rhs:
                raise InternalError("ad(x^[p]) != ad(x)^p")
        for s in self.simple:
            a = self.pos_roots[s]
            if sum(x * y for x, y in zip(self.rho, self.coroots[a])) != 1:
                raise InternalError("rho(h_alpha) != 1 for a simple root")
        simple_h = [[F.from_int(x) for x in self.coroots[self.pos_roots[s]]] for s in self.simple]
        if simple_h and linalg.rank(simple_h, F) != len(simple_h):
            raise InternalError("simple coroots are dependent mod p")
        for g in self.weyl.gens_tstar:
            if _imul(g, g) != self.weyl.elements[0].on_tstar:
                raise InternalError("simple reflection is not an involution")
        expected = math.factorial(self.n) if self.kind in ("gl", "sl") else WEYL_ORDERS[self.kind]
        if len(self.weyl) != expected:
            raise InternalError("Weyl group has the wrong order")

    # -- serialization -------------------------------------------------------------
    def descriptor(self) -> dict:
        return {"type": self.kind, "n": self.n, "p": self.p, "field": self.ext.to_json()}

    @property
    def name(self) -> str:
        return descriptor_label(self.kind, self.n)

    def structure_constants_json(self) -> str:
        tensor = [[[self.brackets[i][j].get(k, 0) for k in range(self.dim)] for j in range(self.dim)]
                  for i in range(self.dim)]
        return json.dumps({"algebra": self.descriptor(), "basis": self.labels, "c": tensor})

    def __repr__(self):
        return f"LieAlgebra({self.name}, p={self.p})"

    def __reduce__(self):
        return (build_algebra, (self.kind, self.n, self.p, self.ext))


@functools.lru_cache(maxsize=None)
def build_algebra(kind: str, n: int | None = None, p: int = 3, fld: GF | None = None) -> LieAlgebra:
    """Cached constructor for :class:`LieAlgebra`."""
    return LieAlgebra(kind, n, p, fld)


def algebra_from_name(name: str, p: int, fld: GF | None = None) -> LieAlgebra:
    kind, n = ALGEBRA_ALIASES[name.lower()]
    return build_algebra(kind, n, p, fld)


def p_power(alg: LieAlgebra, x):
    return alg.p_power(x)


# -- Weyl orbits on vectors -------------------------------------------------------

def weyl_act_vector(alg: LieAlgebra, w: WeylElement, vec, *, space: str = "tstar", mode: str = "ordinary"):
    """Act by w on a vector of FieldElements (values on the Cartan basis, or Cartan coordinates)."""
    F = vec[0].field
    codes = tuple(a.code for a in vec)
    if space == "t":
        if mode != "ordinary":
            raise ValueError("dot action is only defined on t*")
        return tuple(F.element(c) for c in apply_int_matrix(w.on_t, codes, F))
    if mode == "ordinary":
        return tuple(F.element(c) for c in apply_int_matrix(w.on_tstar, codes, F))
    if mode == "dot":
        rho = tuple(F.from_int(r) for r in alg.rho)
        shifted = tuple(F.add(a, b) for a, b in zip(codes, rho))
        img = apply_int_matrix(w.on_tstar, shifted, F)
        return tuple(F.element(F.sub(a, b)) for a, b in zip(img, rho))
    raise ValueError(f"unknown mode {mode!r}")


def weyl_orbit(alg: LieAlgebra, vec, mode: str = "ordinary", *, space: str = "tstar"):
    """(orbit list in Weyl-group order without repeats, canonical minimal representative)."""
    vec = tuple(vec)
    orbit = []
    for w in alg.weyl:
        img = weyl_act_vector(alg, w, vec, space=space, mode=mode)
        if img not in orbit:
            orbit.append(img)
    canon = min(orbit, key=lambda v: tuple(a.field.order_key(a.code) for a in v))
    return orbit, canon
