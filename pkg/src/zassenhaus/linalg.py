"""Dense exact linear algebra and univariate polynomials over a GF, on element codes."""

from __future__ import annotations

from .field import GF


class SingularMatrixError(ArithmeticError):
    pass


def rref(rows: list[list[int]], F: GF) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = F.inv(mat[r][c])
        row = [F.mul(inv, x) for x in mat[r]]
        mat[r] = row
        nz = [j for j in range(c, ncols) if row[j]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                target = mat[i]
                for j in nz:
                    target[j] = F.sub(target[j], F.mul(f, row[j]))
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: list[list[int]], F: GF) -> int:
    return len(rref(rows, F)[1])


def kernel(rows: list[list[int]], ncols: int, F: GF) -> list[list[int]]:
    """Basis of {v : rows * v = 0}, returned in reduced echelon form."""
    red, pivots = rref(rows, F) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for row, pc in zip(red, pivots):
            if row[free]:
                v[pc] = F.neg(row[free])
        basis.append(v)
    return rref(basis, F)[0] if basis else []


def solve_combination(vectors: list[list[int]], target: list[int], F: GF) -> list[int] | None:
    """Coefficients a with sum a_i vectors_i == target, or None."""
    n = len(vectors)
    if n == 0:
        return [] if not any(target) else None
    dim = len(target)
    aug = [[vectors[i][k] for i in range(n)] + [target[k]] for k in range(dim)]
    red, pivots = rref(aug, F)
    if n in pivots:
        return None
    sol = [0] * n
    for row, pc in zip(red, pivots):
        sol[pc] = row[n]
    return sol


def matmul(a, b, F: GF):
    n, k, m = len(a), len(b), len(b[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] = F.add(oi[j], F.mul(x, bt[j]))
    return out


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matadd(a, b, F: GF):
    return [[F.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matsub(a, b, F: GF):
    return [[F.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matscale(c: int, a, F: GF):
    return [[F.mul(c, x) for x in r] for r in a]


def matpow(a, n: int, F: GF):
    result = identity(len(a))
    base = a
    while n:
        if n & 1:
            result = matmul(result, base, F)
        base = matmul(base, base, F)
        n >>= 1
    return result


def inverse(a, F: GF):
    n = len(a)
    aug = [list(a[i]) + identity(n)[i] for i in range(n)]
    red, pivots = rref(aug, F)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise SingularMatrixError("matrix is singular")
    return [row[n:] for row in red]


def det(a, F: GF) -> int:
    n = len(a)
    mat = [list(r) for r in a]
    result = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if mat[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            result = F.neg(result)
        result = F.mul(result, mat[c][c])
        inv = F.inv(mat[c][c])
        for i in range(c + 1, n):
            if mat[i][c]:
                f = F.mul(mat[i][c], inv)
                for j in range(c, n):
                    mat[i][j] = F.sub(mat[i][j], F.mul(f, mat[c][j]))
    return result


def map_matrix(a, table):
    return [[table[x] for x in r] for r in a]


# -- univariate polynomials: lists of codes, constant term first ---------

def ptrim(f: list[int]) -> list[int]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def padd(f, g, F: GF):
    n = max(len(f), len(g))
    return ptrim([F.add(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n)])


def psub(f, g, F: GF):
    n = max(len(f), len(g))
    return ptrim([F.sub(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n)])


def pmul(f, g, F: GF):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
    return ptrim(out)


def pdivmod(f, g, F: GF):
    g = ptrim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = ptrim(f)
    if len(f) < len(g):
        return [], f
    quo = [0] * (len(f) - len(g) + 1)
    rem = list(f)
    inv = F.inv(g[-1])
    for k in range(len(f) - len(g), -1, -1):
        c = F.mul(rem[k + len(g) - 1], inv)
        quo[k] = c
        if c:
            for i, b in enumerate(g):
                rem[k + i] = F.sub(rem[k + i], F.mul(c, b))
    return ptrim(quo), ptrim(rem[: len(g) - 1])


def pmonic(f, F: GF):
    f = ptrim(f)
    if not f:
        return f
    inv = F.inv(f[-1])
    return [F.mul(inv, c) for c in f]


def pgcd(f, g, F: GF):
    f, g = ptrim(f), ptrim(g)
    while g:
        f, g = g, pdivmod(f, g, F)[1]
    return pmonic(f, F)


def pderiv(f, F: GF):
    return ptrim([F.mul(F.from_int(i), f[i]) for i in range(1, len(f))])


def peval(f, x: int, F: GF) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def p_pth_root(f, F: GF):
    """g with g^p == f, for f a polynomial in x^p."""
    p = F.p
    if any(c for i, c in enumerate(f) if i % p):
        raise ValueError("not a p-th power")
    return ptrim([F.frob_inv(f[i]) for i in range(0, len(f), p)])


def pradical(f, F: GF):
    """Product of the distinct monic irreducible factors of f."""
    f = pmonic(f, F)
    if len(f) <= 1:
        return [1]
    d = pderiv(f, F)
    if not d:
        return pradical(p_pth_root(f, F), F)
    g = pgcd(f, d, F)
    r = pmonic(pdivmod(f, g, F)[0], F)
    h = g
    while True:
        common = pgcd(h, r, F)
        if len(common) <= 1:
            break
        h = pdivmod(h, common, F)[0]
    if len(ptrim(h)) <= 1:
        return r
    return pmul(r, pradical(h, F), F)


def proots(f, F: GF) -> list[int]:
    """Roots (with multiplicity) of f in F by exhaustive search, in the field order."""
    roots = []
    f = ptrim(f)
    for x in F.ordered_codes:
        while len(f) > 1 and peval(f, x, F) == 0:
            roots.append(x)
            f = pdivmod(f, [F.neg(x), 1], F)[0]
    return roots


def mat_poly_eval(f, a, F: GF):
    n = len(a)
    acc = [[0] * n for _ in range(n)]
    for c in reversed(f):
        acc = matmul(acc, a, F)
        for i in range(n):
            acc[i][i] = F.add(acc[i][i], c)
    return acc


def charpoly(a, F: GF) -> list[int]:
    """det(xI - a), constant term first (Laplace expansion memoized on column sets)."""
    n = len(a)
    entries = [[([F.neg(a[i][j]), 1] if i == j else ptrim([F.neg(a[i][j])])) for j in range(n)] for i in range(n)]
    memo: dict[int, list[int]] = {}

    def minor(row: int, cols: int) -> list[int]:
        if row == n:
            return [1]
        if cols in memo:
            return memo[cols]
        acc: list[int] = []
        sign = 0
        for j in range(n):
            if cols >> j & 1:
                continue
            e = entries[row][j]
            if e:
                term = pmul(e, minor(row + 1, cols | (1 << j)), F)
                acc = psub(acc, term, F) if sign else padd(acc, term, F)
            sign ^= 1
        memo[cols] = acc
        return acc

    return minor(0, 0)


def sum_codes(xs, F: GF) -> int:
    acc = 0
    for x in xs:
        acc = F.add(acc, x)
    return acc


def kernel_of_images(images: list[dict], F: GF) -> list[list[int]]:
    """Kernel of the linear map sending column j to the sparse vector images[j] (key -> code).

    Returns coefficient vectors over the columns, in reduced echelon form.
    """
    keys = sorted({k for img in images for k in img})
    pos = {k: i for i, k in enumerate(keys)}
    rows = [[0] * len(images) for _ in keys]
    for j, img in enumerate(images):
        for k, c in img.items():
            rows[pos[k]][j] = c
    return kernel(rows, len(images), F)
