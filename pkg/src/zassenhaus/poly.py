"""Commutative side: S(g), S(t), the restriction Phi, the shift gamma, Weyl actions and invariants."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field

from .field import GF, FieldElement
from .liealg import LieAlgebra, WeylElement
from .linalg import kernel_of_images, solve_combination
from .pbw import pbw_monomials

DEGREE_BOUND = 8

SG = "S(g)"
ST = "S(t)"

SPACE_SG_G = "S(g)^G"
SPACE_SG_LIE = "S(g)^g"
SPACE_ST_W = "S(t)^W"
SPACE_ST_DOT = "S(t)^W."
SPACES = (SPACE_SG_G, SPACE_SG_LIE, SPACE_ST_W, SPACE_ST_DOT)


class DegreeBoundError(ValueError):
    pass


class NotInvariantError(ValueError):
    pass


class RestrictionTheoremViolation(AssertionError):
    """A preimage that must exist was not found; indicates a bug, never a user error."""


class PolyElement:
    """Sparse commutative polynomial: exponent tuple -> nonzero code in F."""

    __slots__ = ("F", "ambient", "nvars", "terms", "alg")

    def __init__(self, F: GF, ambient: str, nvars: int, terms: dict | None = None, alg: LieAlgebra | None = None):
        self.F = F
        self.ambient = ambient
        self.nvars = nvars
        self.alg = alg
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def _new(self, terms):
        return PolyElement(self.F, self.ambient, self.nvars, terms, self.alg)

    @classmethod
    def const(cls, alg: LieAlgebra, ambient: str, c=1):
        n = alg.dim if ambient == SG else alg.rank
        return cls(alg.F, ambient, n, {(0,) * n: _code(alg.F, c)}, alg)

    @classmethod
    def var(cls, alg: LieAlgebra, ambient: str, i):
        n = alg.dim if ambient == SG else alg.rank
        if isinstance(i, str):
            i = alg.index(i) if ambient == SG else alg.labels.index(i) - alg.nroot
        return cls(alg.F, ambient, n, {tuple(int(k == i) for k in range(n)): 1}, alg)

    # -- arithmetic --------------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, PolyElement):
            if other.ambient != self.ambient or other.nvars != self.nvars or other.F is not self.F:
                raise ValueError("polynomials live in different rings")
            return other
        return self._new({(0,) * self.nvars: _code(self.F, other)})

    def __add__(self, other):
        other = self._lift(other)
        F = self.F
        res = dict(self.terms)
        for m, c in other.terms.items():
            res[m] = F.add(res.get(m, 0), c)
        return self._new(res)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: self.F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        F = self.F
        if not isinstance(other, PolyElement):
            c = _code(F, other)
            return self._new({m: F.mul(c, v) for m, v in self.terms.items()})
        other = self._lift(other)
        res: dict = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                m = tuple(x + y for x, y in zip(a, b))
                res[m] = F.add(res.get(m, 0), F.mul(ca, cb))
        return self._new(res)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = self._new({(0,) * self.nvars: 1})
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
            other = self._lift(other)
        if not isinstance(other, PolyElement):
            return NotImplemented
        return self.ambient == other.ambient and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.ambient, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    @property
    def degree(self) -> int:
        if not self.terms:
            raise ValueError("the zero polynomial has no degree")
        return max(sum(m) for m in self.terms)

    def homogeneous_part(self, k: int):
        return self._new({m: c for m, c in self.terms.items() if sum(m) == k})

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def coeff(self, exps) -> FieldElement:
        return self.F.element(self.terms.get(tuple(exps), 0))

    def substitute(self, images: list["PolyElement"]):
        """Ring map sending variable i to images[i] (same target ring for all)."""
        target = images[0]
        out = target._new({})
        powers: dict = {}

        def pw(i, a):
            key = (i, a)
            if key not in powers:
                powers[key] = images[i] ** a
            return powers[key]

        for m, c in self.terms.items():
            t = target._new({(0,) * target.nvars: c})
            for i, a in enumerate(m):
                if a:
                    t = t * pw(i, a)
            out = out + t
        return out

    def evaluate(self, point) -> FieldElement:
        """Value at a point given as FieldElements of a field containing F_p."""
        point = list(point)
        big = point[0].field if point else self.F
        acc = big.zero
        for m, c in self.terms.items():
            t = big.element(big.from_int(c)) if self.F.m == 1 else big.element(c)
            for x, a in zip(point, m):
                if a:
                    t = t * x ** a
            acc = acc + t
        return acc

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_json(self) -> dict:
        return {"ambient": self.ambient,
                "terms": [{"exps": list(m), "coeff": str(self.F.element(c))} for m, c in self.sorted_terms()]}

    def _labels(self):
        if self.alg is None:
            return [f"x{i}" for i in range(self.nvars)]
        if self.ambient == SG:
            return self.alg.labels
        return [self.alg.labels[i] for i in self.alg.h_index]

    def __repr__(self):
        if not self.terms:
            return "0"
        labels = self._labels()
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0]))):
            word = "*".join(labels[i] + (f"^{a}" if a > 1 else "") for i, a in enumerate(m) if a)
            parts.append(f"{c}" + (f"*{word}" if word else ""))
        return " + ".join(parts)


def _code(F: GF, c) -> int:
    if isinstance(c, FieldElement):
        if c.field is not F:
            raise ValueError("scalar from a different field")
        return c.code
    if isinstance(c, int):
        return F.from_int(c)
    raise TypeError(f"cannot use {type(c).__name__} as a scalar")


def poly_from_json(alg: LieAlgebra, data: dict) -> PolyElement:
    from .field import deserialize
    amb = data["ambient"]
    n = alg.dim if amb == SG else alg.rank
    return PolyElement(alg.F, amb, n, {tuple(t["exps"]): deserialize(t["coeff"]).code for t in data["terms"]}, alg)


def st_gens(alg: LieAlgebra) -> list[PolyElement]:
    return [PolyElement.var(alg, ST, i) for i in range(alg.rank)]


def sg_gens(alg: LieAlgebra) -> list[PolyElement]:
    return [PolyElement.var(alg, SG, i) for i in range(alg.dim)]


# -- Phi, gamma, Weyl ------------------------------------------------------------

def phi_restrict(s: PolyElement) -> PolyElement:
    """Restriction S(g) -> S(t): drop every monomial involving a root vector."""
    alg = s.alg
    if s.ambient != SG:
        raise ValueError("phi_restrict expects an element of S(g)")
    hs = alg.h_index
    out = {}
    for m, c in s.terms.items():
        if all(m[i] == 0 for i in range(alg.dim) if i not in hs):
            out[tuple(m[i] for i in hs)] = c
    return PolyElement(s.F, ST, alg.rank, out, alg)


def st_to_sg(s: PolyElement) -> PolyElement:
    """Inclusion S(t) -> S(g)."""
    alg = s.alg
    out = {}
    for m, c in s.terms.items():
        full = [0] * alg.dim
        for i, a in zip(alg.h_index, m):
            full[i] = a
        out[tuple(full)] = c
    return PolyElement(s.F, SG, alg.dim, out, alg)


def _linear_image(alg, col, shift=0):
    """Polynomial sum_k col[k] h_k + shift in S(t)."""
    F = alg.F
    r = alg.rank
    terms = {tuple(int(i == k) for i in range(r)): F.from_int(col[k]) for k in range(r)}
    if shift:
        terms[(0,) * r] = F.from_int(shift)
    return PolyElement(F, ST, r, terms, alg)


def weyl_poly_act(alg: LieAlgebra, w: WeylElement, s: PolyElement, mode: str = "ordinary") -> PolyElement:
    """Ordinary: h -> w(h).  Dot: h -> w(h) + rho(w h) - rho(h)."""
    if s.ambient != ST:
        raise ValueError("Weyl actions are defined on S(t)")
    r = alg.rank
    images = []
    for j in range(r):
        col = [w.on_t[k][j] for k in range(r)]
        shift = 0
        if mode == "dot":
            shift = sum(alg.rho[k] * col[k] for k in range(r)) - alg.rho[j]
        elif mode != "ordinary":
            raise ValueError(f"unknown mode {mode!r}")
        images.append(_linear_image(alg, col, shift))
    return s.substitute(images)


def gamma_shift(alg: LieAlgebra, s: PolyElement, direction: str = "fwd") -> PolyElement:
    """h_i -> h_i - rho(h_i) (fwd) or h_i + rho(h_i) (inv)."""
    sign = {"fwd": -1, "inv": 1}[direction]
    r = alg.rank
    images = [_linear_image(alg, [int(k == j) for k in range(r)], sign * alg.rho[j]) for j in range(r)]
    return s.substitute(images)


def is_weyl_invariant(alg: LieAlgebra, s: PolyElement, mode: str = "ordinary") -> bool:
    return all(weyl_poly_act(alg, w, s, mode) == s for w in alg.weyl.generators())


def eta_torus(alg: LieAlgebra, s: PolyElement) -> PolyElement:
    """The p-centre map on S(t) = U(t): h_i -> h_i^p - h_i (the Cartan basis is toral)."""
    p = alg.p
    images = [g ** p - g for g in st_gens(alg)]
    return s.substitute(images)


# -- actions on S(g) -----------------------------------------------------------

def derivation_act(alg: LieAlgebra, i: int, s: PolyElement) -> PolyElement:
    """x_i acting on S(g) as the derivation extending ad x_i."""
    F = alg.F
    out: dict = {}
    for m, c in s.terms.items():
        for k, a in enumerate(m):
            if not a:
                continue
            coef = F.mul(c, F.from_int(a))
            base = list(m)
            base[k] -= 1
            for l, b in alg.brackets[i][k].items():
                nm = list(base)
                nm[l] += 1
                nm = tuple(nm)
                out[nm] = F.add(out.get(nm, 0), F.mul(coef, b))
    return PolyElement(F, SG, alg.dim, out, alg)


def _sg_monomial_series(alg: LieAlgebra, root, m: tuple) -> list[dict]:
    return _sg_series_cached(alg, tuple(root), m)


@functools.lru_cache(maxsize=None)
def _sg_series_cached(alg, root, m):
    F = alg.F
    first = next((k for k, a in enumerate(m) if a), None)
    if first is None:
        return [{m: 1}]
    rest = list(m)
    rest[first] -= 1
    tail = _sg_series_cached(alg, root, tuple(rest))
    gen = alg.root_group_series(root, first)
    res = [dict() for _ in range(len(gen) + len(tail) - 1)]
    for i, gi in enumerate(gen):
        for j, tj in enumerate(tail):
            acc = res[i + j]
            for k, c in gi.items():
                for mm, d in tj.items():
                    nm = list(mm)
                    nm[k] += 1
                    nm = tuple(nm)
                    acc[nm] = F.add(acc.get(nm, 0), F.mul(c, d))
    res = [{k: v for k, v in r.items() if v} for r in res]
    while len(res) > 1 and not res[-1]:
        res.pop()
    return res


def root_group_series_sg(alg: LieAlgebra, root, s: PolyElement) -> list[PolyElement]:
    """Coefficients of t^m in Ad(x_root(t)) s, for s in S(g)."""
    F = alg.F
    acc: list[dict] = []
    for m, c in s.terms.items():
        ser = _sg_monomial_series(alg, root, m)
        while len(acc) < len(ser):
            acc.append({})
        for k, terms in enumerate(ser):
            for mm, v in terms.items():
                acc[k][mm] = F.add(acc[k].get(mm, 0), F.mul(c, v))
    out = [PolyElement(F, SG, alg.dim, t, alg) for t in acc]
    while out and out[-1].is_zero():
        out.pop()
    return out


def is_group_invariant_sg(alg: LieAlgebra, s: PolyElement) -> bool:
    if not all(_weight(alg, m) == (0,) * alg.rank for m in s.terms):
        return False
    for a in alg.simple_roots():
        for root in (a, tuple(-x for x in a)):
            if any(not d.is_zero() for d in root_group_series_sg(alg, root, s)[1:]):
                return False
    return True


def is_lie_invariant_sg(alg: LieAlgebra, s: PolyElement) -> bool:
    return all(derivation_act(alg, i, s).is_zero() for i in range(alg.dim))


def _weight(alg, m):
    w = [0] * alg.rank
    for i, a in enumerate(m):
        if a:
            for k, v in enumerate(alg.weights[i]):
                w[k] += a * v
    return tuple(w)


def weight_zero(alg, m) -> bool:
    return not any(_weight(alg, m))


def weight_zero_mod_p(alg, m) -> bool:
    return all(x % alg.p == 0 for x in _weight(alg, m))


# -- invariant bases -------------------------------------------------------------

def column_order(monos):
    """Degree descending, then lexicographically descending exponents."""
    return sorted(monos, key=lambda m: (-sum(m), tuple(-a for a in m)))


@dataclass
class InvariantBasis:
    space: str
    degree: int
    monomials: list
    echelon: list          # rows over `monomials`, reduced echelon form
    basis: list = dc_field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {"space": self.space, "degree": self.degree, "dim": self.dim,
                "monomials": [list(m) for m in self.monomials],
                "echelon": [list(r) for r in self.echelon],
                "basis": [b.to_json() for b in self.basis]}


def _check_bound(d, bound):
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if d > bound:
        raise DegreeBoundError(f"degree {d} exceeds the configured bound {bound}")


def _sg_conditions(alg, space, m):
    """Sparse image of the monomial m under all invariance conditions for the given space."""
    s = PolyElement(alg.F, SG, alg.dim, {m: 1}, alg)
    img = {}
    if space == SPACE_SG_LIE:
        for i in range(alg.dim):
            for mm, c in derivation_act(alg, i, s).terms.items():
                img[(i, 0, mm)] = c
    else:
        for j, a in enumerate(alg.simple_roots()):
            for sign, root in ((0, a), (1, tuple(-x for x in a))):
                for k, d in enumerate(root_group_series_sg(alg, root, s)[1:], start=1):
                    for mm, c in d.terms.items():
                        img[(2 * j + sign, k, mm)] = c
    return img


def _st_conditions(alg, mode, m):
    s = PolyElement(alg.F, ST, alg.rank, {m: 1}, alg)
    img = {}
    for j, w in enumerate(alg.weyl.generators()):
        diff = weyl_poly_act(alg, w, s, mode) - s
        for mm, c in diff.terms.items():
            img[(j, mm)] = c
    return img


@functools.lru_cache(maxsize=None)
def _homogeneous_sg(alg, space, k):
    """Kernel for the homogeneous degree-k piece of S(g); all conditions preserve degree."""
    test = weight_zero if space == SPACE_SG_G else weight_zero_mod_p
    monos = column_order([m for m in pbw_monomials(alg.dim, k, k) if test(alg, m)])
    images = [_sg_conditions(alg, space, m) for m in monos]
    return monos, kernel_of_images(images, alg.F)


def invariant_basis(alg: LieAlgebra, space: str, d: int, bound: int = DEGREE_BOUND) -> InvariantBasis:
    """Basis of the invariants of total degree <= d in the given space."""
    _check_bound(d, bound)
    F = alg.F
    if space in (SPACE_SG_G, SPACE_SG_LIE):
        monos, rows = [], []
        pieces = [_homogeneous_sg(alg, space, k) for k in range(d, -1, -1)]
        total = sum(len(pm) for pm, _ in pieces)
        offset = 0
        for pm, ker in pieces:
            for v in ker:
                row = [0] * total
                row[offset:offset + len(pm)] = v
                rows.append(row)
            monos.extend(pm)
            offset += len(pm)
        ambient, nvars = SG, alg.dim
    elif space in (SPACE_ST_W, SPACE_ST_DOT):
        mode = "ordinary" if space == SPACE_ST_W else "dot"
        monos = column_order(pbw_monomials(alg.rank, d))
        images = [_st_conditions(alg, mode, m) for m in monos]
        rows = kernel_of_images(images, F)
        ambient, nvars = ST, alg.rank
    else:
        raise ValueError(f"unknown space {space!r}; expected one of {SPACES}")
    basis = [PolyElement(F, ambient, nvars, {m: c for m, c in zip(monos, r) if c}, alg) for r in rows]
    return InvariantBasis(space, d, monos, rows, basis)


def coordinates_in(basis: InvariantBasis, s: PolyElement) -> list[int] | None:
    """Coordinates of s in the basis, or None when s is outside the span."""
    pos = {m: i for i, m in enumerate(basis.monomials)}
    if any(m not in pos for m in s.terms):
        return None
    target = [0] * len(basis.monomials)
    for m, c in s.terms.items():
        target[pos[m]] = c
    return solve_combination(basis.echelon, target, s.F)


def phi_inverse(alg: LieAlgebra, sigma: PolyElement, d: int | None = None, bound: int = DEGREE_BOUND) -> PolyElement:
    """The G-invariant s in S(g) of degree <= d with Phi(s) = sigma."""
    if not is_weyl_invariant(alg, sigma, "ordinary"):
        raise NotInvariantError("argument is not W-invariant")
    if sigma.is_zero():
        return PolyElement(alg.F, SG, alg.dim, {}, alg)
    d = sigma.degree if d is None else d
    inv = invariant_basis(alg, SPACE_SG_G, d, bound)
    images = [phi_restrict(b) for b in inv.basis]
    sol = _solve_in_images(images, sigma)
    if sol is None:
        raise RestrictionTheoremViolation(f"no G-invariant preimage of {sigma!r} in degree <= {d}")
    out = PolyElement(alg.F, SG, alg.dim, {}, alg)
    for c, b in zip(sol, inv.basis):
        if c:
            out = out + b * alg.F.element(c)
    return out


def _solve_in_images(images, target):
    """Coefficients expressing target as a combination of images (sparse polynomials or U-elements)."""
    monos = sorted({m for im in images for m in im.terms} | set(target.terms))
    pos = {m: i for i, m in enumerate(monos)}

    def vec(x):
        v = [0] * len(monos)
        for m, c in x.terms.items():
            v[pos[m]] = c
        return v

    F = target.F if isinstance(target, PolyElement) else target.alg.F
    return solve_combination([vec(im) for im in images], vec(target), F)
