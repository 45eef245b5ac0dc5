"""Positive definite integral lattices given by Gram matrices.

Everything here is exact.  Fincke-Pohst pruning works with the integral
Gram-Schmidt data (d_i, lambda_ij) of the Gram matrix, so the bounds are
integers and no floating point is involved.  The Gram convention is
Q(v) = v G v^T.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Sequence

__all__ = [
    "GramLattice", "NotPositiveDefiniteError", "cholesky_rational", "integral_gram_schmidt",
    "lll_gram", "vectors_of_norm", "iter_vectors", "short_vectors", "hnf", "integer_solve",
    "mat_mul", "transpose", "det_int",
]


class NotPositiveDefiniteError(ValueError):
    def __init__(self, index: int):
        super().__init__(f"Gram matrix is not positive definite (leading minor {index + 1})")
        self.index = index


def mat_mul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def det_int(A) -> int:
    """Bareiss determinant of an integer matrix."""
    M = [list(r) for r in A]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k]:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


class GramLattice:
    """Z^n with a positive definite symmetric Gram matrix (rank <= 16 in practice)."""

    def __init__(self, gram: Sequence[Sequence]):
        G = [[Fraction(x) for x in row] for row in gram]
        n = len(G)
        if any(len(r) != n for r in G):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if G[i][j] != G[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.gram = G
        self.rank = n
        self.cholesky = cholesky_rational(G)

    def norm(self, v) -> Fraction:
        G = self.gram
        return sum(v[i] * G[i][j] * v[j] for i in range(self.rank) for j in range(self.rank))


def cholesky_rational(G):
    """LDL^T data: returns (R, D) with R upper unitriangular and G = R^T diag(D) R.

    Raises NotPositiveDefiniteError naming the first non-positive pivot.
    """
    n = len(G)
    A = [[Fraction(x) for x in row] for row in G]
    R = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for i in range(n):
        piv = A[i][i]
        if piv <= 0:
            raise NotPositiveDefiniteError(i)
        D[i] = piv
        for j in range(i + 1, n):
            R[i][j] = A[i][j] / piv
        for j in range(i + 1, n):
            for k in range(j, n):
                A[j][k] -= R[i][j] * A[i][k]
                A[k][j] = A[j][k]
    return R, D


def _as_int_gram(G):
    den = 1
    for row in G:
        for x in row:
            x = Fraction(x)
            den = den * x.denominator // gcd(den, x.denominator)
    return [[int(Fraction(x) * den) for x in row] for row in G], den


def integral_gram_schmidt(G):
    """Integral Gram-Schmidt data of an integer Gram matrix.

    Returns (d, lam) with d[i] the (i+1)-th leading principal minor and
    lam[k][j] = d[j] * mu[k][j] integral (j < k).
    """
    n = len(G)
    d = [0] * n
    lam = [[0] * n for _ in range(n)]
    for k in range(n):
        for j in range(k + 1):
            u = G[k][j]
            for i in range(j):
                u = (d[i] * u - lam[k][i] * lam[j][i]) // (d[i - 1] if i else 1)
            if j < k:
                lam[k][j] = u
            else:
                if u <= 0:
                    raise NotPositiveDefiniteError(k)
                d[k] = u
    return d, lam


def lll_gram(G, delta: Fraction = Fraction(3, 4)):
    """Integral LLL on a Gram matrix (de Weger's all-integer variant).

    Returns (G', T) with T unimodular and G' = T G T^T.
    """
    G = [list(map(int, r)) for r in G]
    n = len(G)
    T = [[int(i == j) for j in range(n)] for i in range(n)]
    if n <= 1:
        return G, T
    num, den = delta.numerator, delta.denominator
    d = [0] * (n + 1)  # d[i+1] is the i-th minor; d[0] = 1
    d[0] = 1
    lam = [[0] * n for _ in range(n)]

    def dd(i):
        return d[i + 1]

    def red(k, l):
        if 2 * abs(lam[k][l]) > dd(l):
            q = (2 * lam[k][l] + dd(l)) // (2 * dd(l))
            T[k] = [a - q * b for a, b in zip(T[k], T[l])]
            G[k] = [a - q * b for a, b in zip(G[k], G[l])]
            for r in range(n):
                G[r][k] -= q * G[r][l]
            lam[k][l] -= q * dd(l)
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        T[k], T[k - 1] = T[k - 1], T[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for r in range(n):
            G[r][k], G[r][k - 1] = G[r][k - 1], G[r][k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (dd(k - 2) * dd(k) + lm * lm) // dd(k - 1)
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (dd(k) * lam[i][k - 1] - lm * t) // dd(k - 1)
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // dd(k)
        d[k] = B

    d[1] = G[0][0]
    if d[1] <= 0:
        raise NotPositiveDefiniteError(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = G[k][j]
                for i in range(j):
                    u = (dd(i) * u - lam[k][i] * lam[j][i]) // dd(i - 1)
                if j < k:
                    lam[k][j] = u
                else:
                    if u <= 0:
                        raise NotPositiveDefiniteError(k)
                    d[k + 1] = u
        while True:
            red(k, k - 1)
            # Lovasz: d_k d_{k-2} >= delta d_{k-1}^2 - lam^2, scaled by den
            if den * dd(k) * dd(k - 2) < num * dd(k - 1) ** 2 - den * lam[k][k - 1] ** 2:
                swap(k, kmax)
                if k > 1:
                    k -= 1
            else:
                break
        for l in range(k - 2, -1, -1):
            red(k, l)
        k += 1
    return G, T


def iter_vectors(G, bound, exact: bool = True, fixed_last: int | None = None) -> Iterator[list[int]]:
    """Yield integer vectors v with v G v^T == bound (or <= bound if not exact).

    Depth first from the last coordinate to the first, candidate values
    ascending.  G must be an integer (or rational) positive definite Gram
    matrix.  ``fixed_last`` restricts the last coordinate to one value.
    """
    Gi, scale = _as_int_gram(G)
    bound = Fraction(bound) * scale
    n = len(Gi)
    if n == 0:
        if bound == 0 or not exact:
            yield []
        return
    d, lam = integral_gram_schmidt(Gi)
    dm = [1] + d[:-1]  # d_{i-1}
    W = 1
    for i in range(n):
        t = d[i] * dm[i]
        W = W * t // gcd(W, t)
    w = [W // (d[i] * dm[i]) for i in range(n)]
    top = bound * W
    if top.denominator != 1:
        if exact:
            return
        top = Fraction(top.numerator // top.denominator)
    top = int(top)
    if top < 0:
        return
    x = [0] * n
    S = [0] * n  # S[i] = sum_{j>i} lam[j][i] x_j
    budget = [0] * (n + 1)
    budget[n] = top
    lo = [0] * n
    hi = [0] * n

    def bounds(i):
        B = budget[i + 1]
        m = isqrt(B // w[i])
        s, di = S[i], d[i]
        a = -((m + s) // di)  # ceil((-m - s)/di)
        b = (m - s) // di
        return a, b

    i = n - 1
    a, b = bounds(i)
    if fixed_last is not None:
        a, b = max(a, fixed_last), min(b, fixed_last)
    lo[i], hi[i] = a, b
    x[i] = a - 1
    while True:
        x[i] += 1
        if x[i] > hi[i]:
            i += 1
            if i >= n:
                return
            continue
        # remove the old contribution of x[i] from lower S and add the new one
        t = d[i] * x[i] + S[i]
        rem = budget[i + 1] - w[i] * t * t
        if rem < 0:
            continue
        budget[i] = rem
        if i == 0:
            if not exact or rem == 0:
                yield list(x)
            continue
        # descend
        i -= 1
        S[i] = sum(lam[j][i] * x[j] for j in range(i + 1, n))
        a, b = bounds(i)
        lo[i], hi[i] = a, b
        x[i] = a - 1


def vectors_of_norm(G, target, half: bool = False) -> list[list[int]]:
    """All v in Z^n with v G v^T = target, sorted lexicographically.

    With ``half=True`` only the vector of each pair {v, -v} whose first
    nonzero coordinate is positive is returned.
    """
    if Fraction(target) <= 0:
        raise ValueError("target must be positive")
    out = list(iter_vectors(G, target))
    if half:
        out = [v for v in out if next(c for c in v if c) > 0]
    out.sort()
    return out


def short_vectors(G, target, exact: bool = True, reduce: bool = True, fixed_last=None):
    """Vectors of norm target (or <= target) of an integer Gram matrix, LLL first.

    Yields vectors in the original coordinates; order follows the reduced basis.
    """
    Gi, scale = _as_int_gram(G)
    if reduce and fixed_last is None and len(Gi) > 2:
        Gr, T = lll_gram(Gi)
        for v in iter_vectors(Gr, Fraction(target) * scale, exact):
            yield [sum(v[k] * T[k][j] for k in range(len(v))) for j in range(len(v))]
    else:
        yield from iter_vectors(Gi, Fraction(target) * scale, exact, fixed_last=fixed_last)


# ------------------------------------------------------------------ HNF

def hnf(rows, with_transform: bool = False):
    """Row Hermite normal form of an integer matrix.

    Returns the nonzero rows of the HNF (upper echelon, positive pivots,
    entries above pivots reduced into [0, pivot)).  With ``with_transform``
    returns (H, U, r) where U is unimodular, U A = [H; 0] and r = rank.
    """
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    if m == 0:
        return ([], [], 0) if with_transform else []
    n = len(A[0])
    U = [[int(i == j) for j in range(m)] for i in range(m)] if with_transform else None
    r = 0
    for c in range(n):
        if r >= m:
            break
        # gcd-combine all rows >= r in column c
        piv = None
        for i in range(r, m):
            if A[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        if U is not None:
            U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, m):
            if A[i][c] == 0:
                continue
            a, b = A[r][c], A[i][c]
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            Ar, Ai = A[r], A[i]
            A[r] = [s * x + t * y for x, y in zip(Ar, Ai)]
            A[i] = [ag * y - bg * x for x, y in zip(Ar, Ai)]
            if U is not None:
                Ur, Ui = U[r], U[i]
                U[r] = [s * x + t * y for x, y in zip(Ur, Ui)]
                U[i] = [ag * y - bg * x for x, y in zip(Ur, Ui)]
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            if U is not None:
                U[r] = [-x for x in U[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                if U is not None:
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    if with_transform:
        return A[:r], U, r
    return A[:r]


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def integer_solve(A, b=None):
    """Integer solutions of x A = b (x a row vector).

    Returns (x0, K): a particular solution (None if none exists, or if b is
    None) and a basis K of the integer kernel {x : x A = 0}.
    """
    H, U, r = hnf(A, with_transform=True)
    m = len(A)
    K = [U[i] for i in range(r, m)]
    if b is None:
        return None, K
    b = [int(v) for v in b]
    n = len(A[0])
    y = [0] * r
    res = list(b)
    row = 0
    for c in range(n):
        if row < r and H[row][c] != 0:
            q, rem = divmod(res[c], H[row][c])
            if rem:
                return None, K
            y[row] = q
            if q:
                res = [x - q * h for x, h in zip(res, H[row])]
            row += 1
        elif res[c] != 0:
            return None, K
    if any(res):
        return None, K
    x0 = [sum(y[i] * U[i][j] for i in range(r)) for j in range(m)]
    return x0, K
