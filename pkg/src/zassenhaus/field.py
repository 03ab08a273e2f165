"""Exact arithmetic in F_p and F_{p^m}.

Elements are encoded internally as integer codes ``c0 + c1*p + ... + c_{m-1}*p^(m-1)``
where ``c_i`` are the coefficients of the polynomial representative modulo
the defining irreducible.  Code order is also the enumeration order, so the
prime subfield always comes first.  Heavy kernels (PBW straightening, linear
algebra) work on the codes directly through the ``GF`` methods; the
``FieldElement`` wrapper is the public value type.

The scalar field of the constructions is algebraically closed in theory.  All
identities verified by this package are identities between structure
constants with F_p coefficients, so checking them over a concrete F_{p^m}
loses nothing.
"""

from __future__ import annotations

import functools
import itertools
import re

MAX_ENUMERATION = 10**6
_TABLE_LIMIT = 1024


class FieldError(ValueError):
    """Raised for invalid field construction or mixed-field arithmetic."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    # mod is monic, constant term first
    a = list(a)
    dm = len(mod) - 1
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k] % p
        if c:
            for i in range(dm + 1):
                a[k - dm + i] = (a[k - dm + i] - c * mod[i]) % p
    a = [c % p for c in a[:dm]]
    return a + [0] * (dm - len(a))


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    m = len(poly) - 1
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not any(_poly_mod(list(poly), divisor, p)):
                return False
    return True


def canonical_modulus(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m, constant term first."""
    if m == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=m):
        poly = tuple(low) + (1,)
        if low[0] != 0 and _is_irreducible(poly, p):
            return poly
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")


class GF:
    """The finite field F_{p^m} with the canonical modulus.

    Use :func:`field` to obtain instances; fields are cached singletons.
    """

    def __init__(self, p: int, m: int = 1):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be >= 1")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = canonical_modulus(p, m)
        if not _is_irreducible(self.modulus, p) and m > 1:
            raise FieldError("modulus is reducible")
        self._digits = None
        self._exp = None
        self._log = None
        self._add = None
        self._embeddings: dict[tuple[int, int], list[int]] = {}
        self.ordered_codes = tuple(range(self.q))
        if m > 1:
            self._build_tables()

    # -- construction helpers -------------------------------------------
    def _to_digits(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def _from_digits(self, digits) -> int:
        code = 0
        for c in reversed(list(digits)):
            code = code * self.p + (c % self.p)
        return code

    def _build_tables(self):
        q, p = self.q, self.p
        self._digits = [self._to_digits(c) for c in range(q)]
        self.ordered_codes = tuple(sorted(range(q), key=self._digits.__getitem__))
        mod = list(self.modulus)

        def mulx(d, g):
            prod = [0] * (2 * self.m - 1)
            for i, a in enumerate(d):
                if a:
                    for j, b in enumerate(g):
                        prod[i + j] += a * b
            return tuple(_poly_mod(prod, mod, p))

        one = (1,) + (0,) * (self.m - 1)
        for g in range(2, q):
            gd = self._digits[g]
            acc, order = gd, 1
            while acc != one:
                acc = mulx(acc, gd)
                order += 1
                if order > q - 1:
                    break
            if order == q - 1:
                break
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        acc = one
        for k in range(q - 1):
            c = self._from_digits(acc)
            exp[k] = c
            log[c] = k
            acc = mulx(acc, gd)
        for k in range(q - 1, 2 * (q - 1)):
            exp[k] = exp[k - (q - 1)]
        self._exp, self._log = exp, log
        self.generator_code = g
        if q <= _TABLE_LIMIT:
            dg = self._digits
            self._add = [
                [self._from_digits(tuple((x + y) % p for x, y in zip(dg[a], dg[b]))) for b in range(q)]
                for a in range(q)
            ]

    # -- code-level arithmetic ------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a][b]
        return self._from_digits(x + y for x, y in zip(self._digits[a], self._digits[b]))

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self._from_digits(-x for x in self._digits[a])

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero in finite field")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n == 0:
            return 1
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 0
        if self.m == 1:
            return pow(a, n % (self.p - 1) if n < 0 else n, self.p)
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def frob(self, a: int) -> int:
        return self.pow(a, self.p)

    def frob_inv(self, a: int) -> int:
        return self.pow(a, self.p ** (self.m - 1))

    def from_int(self, n: int) -> int:
        return n % self.p

    def is_prime_field(self, a: int) -> bool:
        return a < self.p

    def digits(self, a: int) -> tuple[int, ...]:
        return self._to_digits(a) if self.m > 1 else (a,)

    # -- public value helpers -------------------------------------------
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) > self.m:
                raise FieldError("too many coefficients")
            return FieldElement(self, self._from_digits(list(value) + [0] * (self.m - len(value))))
        return FieldElement(self, int(value) % self.p)

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def gen(self) -> "FieldElement":
        """The class of x modulo the defining polynomial."""
        return FieldElement(self, self.p if self.m > 1 else 0)

    def order_key(self, code: int) -> tuple[int, ...]:
        """Sort key of the field order: coefficient vectors, constant term most significant."""
        return self._digits[code] if self._digits is not None else (code,)

    def elements(self) -> list["FieldElement"]:
        return enumerate_field(self)

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __reduce__(self):
        return (field, (self.p, self.m))

    # -- towers ----------------------------------------------------------
    def embedding(self, big: "GF") -> list[int]:
        """Code map self -> big sending x to the smallest root of self.modulus."""
        if big.p != self.p or big.m % self.m:
            raise FieldError(f"{self} does not embed in {big}")
        key = (big.p, big.m)
        if key in self._embeddings:
            return self._embeddings[key]
        if self.m == 1:
            table = list(range(self.p))
        else:
            root = None
            for r in range(big.q):
                acc, power = 0, 1
                for c in self.modulus:
                    acc = big.add(acc, big.mul(c, power))
                    power = big.mul(power, r)
                if acc == 0:
                    root = r
                    break
            powers = [1]
            for _ in range(self.m - 1):
                powers.append(big.mul(powers[-1], root))
            table = []
            for code in range(self.q):
                acc = 0
                for c, pw in zip(self._to_digits(code), powers):
                    acc = big.add(acc, big.mul(c, pw))
                table.append(acc)
        self._embeddings[key] = table
        return table

    def embed(self, a: "FieldElement", big: "GF") -> "FieldElement":
        return FieldElement(big, self.embedding(big)[a.code])


@functools.lru_cache(maxsize=None)
def field(p: int, m: int = 1) -> GF:
    """Cached constructor; equal parameters give the identical field object."""
    if p > 13:
        raise FieldError("only primes p <= 13 are supported")
    return GF(p, m)


def restrict(a: "FieldElement", small: GF) -> "FieldElement | None":
    """Preimage of ``a`` under the canonical embedding small -> a.field, or None."""
    table = small.embedding(a.field)
    try:
        return FieldElement(small, table.index(a.code))
    except ValueError:
        return None


@functools.total_ordering
class FieldElement:
    """Immutable element of a finite field."""

    __slots__ = ("field", "code")

    def __init__(self, fld: GF, code: int):
        object.__setattr__(self, "field", fld)
        object.__setattr__(self, "code", code)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError(f"mismatched fields {self.field} and {other.field}")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def _wrap(self, code):
        return FieldElement(self.field, code)

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(b, self.code))

    def __neg__(self):
        return self._wrap(self.field.neg(self.code))

    def __pow__(self, n: int):
        return self._wrap(self.field.pow(self.code, n))

    def inverse(self):
        return self._wrap(self.field.inv(self.code))

    def frobenius(self, direction: str = "fwd") -> "FieldElement":
        if direction == "fwd":
            return self._wrap(self.field.frob(self.code))
        if direction == "inv":
            return self._wrap(self.field.frob_inv(self.code))
        raise ValueError(f"unknown direction {direction!r}")

    def order(self) -> int:
        """Multiplicative order."""
        if self.code == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n, acc = 1, self.code
        while acc != 1:
            acc = self.field.mul(acc, self.code)
            n += 1
        return n

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field._to_digits(self.code)

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.field.p
        return NotImplemented

    def __lt__(self, other):
        if not isinstance(other, FieldElement) or other.field is not self.field:
            return NotImplemented
        return self.field.order_key(self.code) < other.field.order_key(other.code)

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.code))

    def __str__(self):
        return serialize(self)

    def __repr__(self):
        if self.field.m == 1:
            return f"{self.code} (mod {self.field.p})"
        return f"FieldElement({serialize(self)})"

    def __reduce__(self):
        return (_rebuild, (self.field.p, self.field.m, self.code))


def _rebuild(p, m, code):
    return FieldElement(field(p, m), code)


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if not isinstance(a, FieldElement) or not isinstance(b, FieldElement) or a.field is not b.field:
        raise FieldError("operands must share the same field")
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    return ops[op](b)


def frobenius(a: FieldElement, direction: str = "fwd") -> FieldElement:
    return a.frobenius(direction)


def enumerate_field(fld: GF) -> list[FieldElement]:
    """All elements in the field order (constant term most significant)."""
    if fld.q > MAX_ENUMERATION:
        raise FieldError(f"field of size {fld.q} exceeds enumeration guard {MAX_ENUMERATION}")
    return [FieldElement(fld, c) for c in fld.ordered_codes]


def serialize(a: FieldElement) -> str:
    return f"{a.field.p}^{a.field.m}:[{','.join(str(c) for c in a.coeffs)}]"


_SER = re.compile(r"^(\d+)\^(\d+):\[([\d,\s]*)\]$")


def deserialize(text: str) -> FieldElement:
    match = _SER.match(text.strip())
    if not match:
        raise FieldError(f"malformed field element {text!r}")
    p, m = int(match.group(1)), int(match.group(2))
    coeffs = [int(c) for c in match.group(3).split(",") if c.strip()]
    if len(coeffs) != m or any(not 0 <= c < p for c in coeffs):
        raise FieldError(f"malformed coefficients in {text!r}")
    return field(p, m)(coeffs)


def field_from_json(data: dict) -> GF:
    fld = field(int(data["p"]), int(data["m"]))
    if "modulus" in data and tuple(data["modulus"]) != fld.modulus:
        raise FieldError("serialized modulus does not match the canonical modulus")
    return fld
