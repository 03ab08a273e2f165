"""The enveloping algebra U(g) in PBW normal form.

A PBW monomial is an exponent tuple over the ordered basis of the algebra
(negative root vectors < Cartan < positive root vectors).  Products are
brought to normal form by the single-swap rule x_j x_i -> x_i x_j + [x_j, x_i]
for j > i, memoized per algebra.
"""

from __future__ import annotations

import sys
import threading

from .field import FieldElement
from .liealg import LieAlgebra

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

TERM_GUARD = 10**6


class TermOverflowError(RuntimeError):
    """Intermediate expression exceeded the term-count guard."""


class _Engine:
    """Per-algebra straightening caches; a lock keeps concurrent inserts consistent."""

    def __init__(self, alg: LieAlgebra):
        self.alg = alg
        self.F = alg.F
        self.n = alg.dim
        self.left = {}
        self.mono = {}
        self.series = {}
        self.lock = threading.Lock()

    def _add_into(self, acc: dict, terms: dict, c: int):
        F = self.F
        for m, v in terms.items():
            nv = F.add(acc.get(m, 0), F.mul(c, v))
            if nv:
                acc[m] = nv
            else:
                acc.pop(m, None)
        if len(acc) > TERM_GUARD:
            raise TermOverflowError("PBW expansion exceeded the term guard")

    def left_mul(self, i: int, m: tuple) -> dict:
        """x_i * m in normal form."""
        key = (i, m)
        hit = self.left.get(key)
        if hit is not None:
            return hit
        j = next((k for k, a in enumerate(m) if a), None)
        if j is None or i <= j:
            nm = list(m)
            nm[i] += 1
            res = {tuple(nm): 1}
        else:
            rest = list(m)
            rest[j] -= 1
            rest = tuple(rest)
            res = {}
            for mm, c in self.left_mul(i, rest).items():
                self._add_into(res, self.left_mul(j, mm), c)
            for k, c in self.alg.brackets[i][j].items():
                self._add_into(res, self.left_mul(k, rest), c)
        with self.lock:
            self.left[key] = res
        return res

    def mono_mul(self, a: tuple, b: tuple) -> dict:
        key = (a, b)
        hit = self.mono.get(key)
        if hit is not None:
            return hit
        first = next((k for k in range(self.n) if a[k]), None)
        if first is None:
            res = {b: 1}
        else:
            # a = x_first * a'; form a' * b, then multiply by x_first on the left
            ap = list(a)
            ap[first] -= 1
            ap = tuple(ap)
            res = {}
            for mm, c in self.mono_mul(ap, b).items():
                self._add_into(res, self.left_mul(first, mm), c)
        with self.lock:
            self.mono[key] = res
        return res

    def mul_terms(self, u: dict, v: dict) -> dict:
        F = self.F
        res = {}
        for a, ca in u.items():
            for b, cb in v.items():
                self._add_into(res, self.mono_mul(a, b), F.mul(ca, cb))
        return res

    def root_series(self, root, m: tuple) -> list:
        """Coefficient list of Ad(x_root(t)) applied to the monomial m."""
        key = (tuple(root), m)
        hit = self.series.get(key)
        if hit is not None:
            return hit
        first = next((k for k, a in enumerate(m) if a), None)
        if first is None:
            res = [{m: 1}]
        else:
            rest = list(m)
            rest[first] -= 1
            rest = tuple(rest)
            gen = [{_unit(self.n, k): c for k, c in d.items()} for d in self.alg.root_group_series(root, first)]
            tail = self.root_series(root, rest)
            res = [dict() for _ in range(len(gen) + len(tail) - 1)]
            for i, gi in enumerate(gen):
                for j, tj in enumerate(tail):
                    self._add_into(res[i + j], self.mul_terms(gi, tj), 1)
            while len(res) > 1 and not res[-1]:
                res.pop()
        with self.lock:
            self.series[key] = res
        return res


def _unit(n, k):
    return tuple(int(i == k) for i in range(n))


_ENGINES: dict[int, _Engine] = {}
_ENGINE_LOCK = threading.Lock()


def engine(alg: LieAlgebra) -> _Engine:
    with _ENGINE_LOCK:
        eng = _ENGINES.get(id(alg))
        if eng is None or eng.alg is not alg:
            eng = _Engine(alg)
            _ENGINES[id(alg)] = eng
        return eng


class UElement:
    """Element of U(g): a finite map from PBW exponent tuples to nonzero codes in F_p."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: LieAlgebra, terms: dict | None = None):
        self.alg = alg
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    # -- constructors --------------------------------------------------------
    @classmethod
    def one(cls, alg):
        return cls(alg, {(0,) * alg.dim: 1})

    @classmethod
    def scalar(cls, alg, c):
        return cls(alg, {(0,) * alg.dim: _code(alg, c)})

    @classmethod
    def gen(cls, alg, i):
        if isinstance(i, str):
            i = alg.index(i)
        return cls(alg, {_unit(alg.dim, i): 1})

    @classmethod
    def from_vector(cls, alg, vec):
        """Embed an element of g given by its coordinate codes."""
        return cls(alg, {_unit(alg.dim, i): c for i, c in enumerate(vec) if c})

    @classmethod
    def monomial(cls, alg, exps, c=1):
        return cls(alg, {tuple(exps): _code(alg, c)})

    # -- arithmetic --------------------------------------------------------------
    def _same(self, other):
        if not isinstance(other, UElement) or other.alg is not self.alg:
            raise ValueError("elements of different enveloping algebras")

    def _lift(self, other):
        if isinstance(other, UElement):
            self._same(other)
            return other
        return UElement.scalar(self.alg, other)

    def __add__(self, other):
        other = self._lift(other)
        F = self.alg.F
        res = dict(self.terms)
        for m, c in other.terms.items():
            res[m] = F.add(res.get(m, 0), c)
        return UElement(self.alg, res)

    __radd__ = __add__

    def __neg__(self):
        F = self.alg.F
        return UElement(self.alg, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, UElement):
            self._same(other)
            return UElement(self.alg, engine(self.alg).mul_terms(self.terms, other.terms))
        c = _code(self.alg, other)
        F = self.alg.F
        return UElement(self.alg, {m: F.mul(c, v) for m, v in self.terms.items()})

    def __rmul__(self, other):
        c = _code(self.alg, other)
        F = self.alg.F
        return UElement(self.alg, {m: F.mul(c, v) for m, v in self.terms.items()})

    def __pow__(self, k: int):
        result = UElement.one(self.alg)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = UElement.scalar(self.alg, other)
        if not isinstance(other, UElement):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, exps) -> FieldElement:
        return self.alg.F.element(self.terms.get(tuple(exps), 0))

    @property
    def degree(self) -> int:
        if not self.terms:
            raise ValueError("the zero element has no degree")
        return max(sum(m) for m in self.terms)

    def weight(self, m):
        w = [0] * self.alg.rank
        for i, a in enumerate(m):
            if a:
                for k, v in enumerate(self.alg.weights[i]):
                    w[k] += a * v
        return tuple(w)

    def has_weight_zero(self) -> bool:
        zero = (0,) * self.alg.rank
        return all(self.weight(m) == zero for m in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_json(self) -> dict:
        F = self.alg.F
        return {"terms": [{"exps": list(m), "coeff": str(F.element(c))} for m, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, alg, data):
        from .field import deserialize
        return cls(alg, {tuple(t["exps"]): deserialize(t["coeff"]).code for t in data["terms"]})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        labels = self.alg.labels
        for m, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0]))):
            word = "*".join(labels[i] + (f"^{a}" if a > 1 else "") for i, a in enumerate(m) if a)
            parts.append(f"{c}" + (f"*{word}" if word else ""))
        return " + ".join(parts)


def _code(alg, c) -> int:
    if isinstance(c, FieldElement):
        if c.field is not alg.F:
            raise ValueError("scalar is not in the prime field of the algebra")
        return c.code
    if isinstance(c, int):
        return c % alg.p
    raise TypeError(f"cannot use {type(c).__name__} as a scalar")


def pbw_multiply(u: UElement, v: UElement) -> UElement:
    return u * v


def _as_u(alg, x):
    if isinstance(x, UElement):
        return x
    if isinstance(x, (str, int)):
        return UElement.gen(alg, x)
    return UElement.from_vector(alg, x)


def adjoint_act(x, u: UElement) -> UElement:
    """x . u = xu - ux for x in g (basis index, label, coordinate vector or UElement of degree 1)."""
    xu = _as_u(u.alg, x)
    return xu * u - u * xu


def root_group_series(root, u: UElement) -> list[UElement]:
    """[D^(0)(u), D^(1)(u), ...] where Ad(x_root(t)) u = sum t^m D^(m)(u)."""
    eng = engine(u.alg)
    acc: list[dict] = []
    for m, c in u.terms.items():
        ser = eng.root_series(root, m)
        while len(acc) < len(ser):
            acc.append({})
        for k, terms in enumerate(ser):
            eng._add_into(acc[k], terms, c)
    while acc and not acc[-1]:
        acc.pop()
    return [UElement(u.alg, t) for t in acc]


def divided_power_act(root, m: int, u: UElement) -> UElement:
    """D_root^(m)(u), the t^m coefficient of the root subgroup action."""
    if m < 0:
        raise ValueError("order must be nonnegative")
    ser = root_group_series(root, u)
    return ser[m] if m < len(ser) else UElement(u.alg)


def termination_bound(u: UElement) -> int:
    """deg(u) times the longest nonzero divided power of ad on g."""
    alg = u.alg
    longest = max(len(alg.divided_ad(r)) - 1 for r in alg.roots)
    return (u.degree if u.terms else 0) * longest


def is_central(u: UElement) -> bool:
    return all(adjoint_act(i, u).is_zero() for i in range(u.alg.dim))


def is_group_invariant(u: UElement) -> bool:
    """Weight zero and killed by every D^(m), m >= 1, of the simple root subgroups (both signs)."""
    if not u.has_weight_zero():
        return False
    alg = u.alg
    for s in alg.simple_roots():
        for root in (s, tuple(-a for a in s)):
            if any(not d.is_zero() for d in root_group_series(root, u)[1:]):
                return False
    return True


def filtration_degree(u: UElement) -> int:
    return u.degree


def gr_leading(u: UElement):
    """Top filtration-degree part of u as an element of S(g)."""
    from .poly import PolyElement
    if u.is_zero():
        raise ValueError("gr of the zero element is undefined")
    d = u.degree
    return PolyElement(u.alg.F, "S(g)", u.alg.dim, {m: c for m, c in u.terms.items() if sum(m) == d}, alg=u.alg)


def pbw_monomials(n: int, max_degree: int, min_degree: int = 0):
    """All exponent tuples in n variables with min_degree <= total degree <= max_degree, lex order."""
    out = []

    def rec(prefix, left):
        if len(prefix) == n:
            if sum(prefix) >= min_degree:
                out.append(tuple(prefix))
            return
        for a in range(left + 1):
            rec(prefix + [a], left - a)

    rec([], max_degree)
    return out
