"""Parahoric flag spaces over residue fields O_F/P.

Vectors are rows of residue-ring indices (see exactnum.ResidueRing); all
arithmetic goes through the ring's add/mul tables so that batches of
matrices can be handled with numpy fancy indexing.  Flags are row spans and
a matrix g acts on the right, x -> x g.

Siegel flags are isotropic planes, Klingen flags are points of P^3 and Borel
flags are pairs (line, isotropic plane) with the line inside the plane.  The
pairing is J = [[0, 1], [-1, 0]] in the basis e1, e2, f1, f2.

Plücker coordinates of the plane spanned by rows x, y are the minors
(a0, ..., a5) = (p12, p13, p14, p23, p24, p34), p_ij = x_i y_j - x_j y_i.
They satisfy the Klein quadric a0 a5 - a1 a4 + a2 a3 = 0, and the plane is
isotropic for J exactly when a1 + a4 = 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .exactnum import PrimeIdeal, ResidueRing, residue_field

__all__ = [
    "SIEGEL", "KLINGEN", "BOREL", "VARIANTS", "SymplecticSpace", "Flag", "FlagSpace",
    "enumerate_flags", "act", "plucker", "flag_count_formula", "brute_force_count",
    "rank_over", "rmatmul", "normalize_points", "plane_codes", "symplectic_basis",
    "standard_J",
]

SIEGEL, KLINGEN, BOREL = "siegel", "klingen", "borel"
VARIANTS = (SIEGEL, KLINGEN, BOREL)


# ---------------------------------------------------------------- batched ring arithmetic

def rmatmul(R: ResidueRing, A, B) -> np.ndarray:
    """Matrix product over R of index arrays (broadcasting over leading axes)."""
    A = np.asarray(A)
    B = np.asarray(B)
    k = A.shape[-1]
    out = R.mul[A[..., :, 0, None], B[..., None, 0, :]]
    for t in range(1, k):
        out = R.add[out, R.mul[A[..., :, t, None], B[..., None, t, :]]]
    return out


def rdot(R: ResidueRing, x, y) -> np.ndarray:
    x = np.asarray(x)
    y = np.asarray(y)
    out = R.mul[x[..., 0], y[..., 0]]
    for t in range(1, x.shape[-1]):
        out = R.add[out, R.mul[x[..., t], y[..., t]]]
    return out


def rank_over(R: ResidueRing, M) -> int:
    """Rank of a matrix over a residue field."""
    A = [list(map(int, r)) for r in np.asarray(M)]
    if not A:
        return 0
    r = 0
    for c in range(len(A[0])):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = int(R.inv[A[r][c]])
        A[r] = [int(R.mul[x, inv]) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [int(R.sub[x, R.mul[f, y]]) for x, y in zip(A[i], A[r])]
        r += 1
    return r


def inverse_over(R: ResidueRing, M) -> np.ndarray:
    n = len(M)
    A = [list(map(int, r)) + [R.one if i == j else 0 for j in range(n)] for i, r in enumerate(np.asarray(M))]
    for c in range(n):
        p = next((i for i in range(c, n) if R.is_unit[A[i][c]]), None)
        if p is None:
            raise ValueError("matrix is not invertible")
        A[c], A[p] = A[p], A[c]
        inv = int(R.inv[A[c][c]])
        A[c] = [int(R.mul[x, inv]) for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [int(R.sub[x, R.mul[f, y]]) for x, y in zip(A[i], A[c])]
    return np.array([r[n:] for r in A], dtype=np.int64)


def standard_J(R: ResidueRing) -> np.ndarray:
    J = np.zeros((4, 4), dtype=np.int64)
    mone = int(R.neg[R.one])
    J[0, 2] = J[1, 3] = R.one
    J[2, 0] = J[3, 1] = mone
    return J


def normalize_points(R: ResidueRing, X) -> tuple[np.ndarray, np.ndarray]:
    """Scale each row so its first nonzero entry is 1; returns (rows, pivot values)."""
    X = np.asarray(X)
    nz = X != 0
    if not nz.any(axis=-1).all():
        raise ValueError("zero vector has no projective point")
    piv = np.argmax(nz, axis=-1)
    lead = np.take_along_axis(X, piv[..., None], axis=-1)[..., 0]
    return R.mul[X, R.inv[lead][..., None]], lead


def point_codes(R: ResidueRing, X) -> np.ndarray:
    """Integer code of the projective point of each row."""
    Y, _ = normalize_points(R, X)
    q = R.size
    w = q ** np.arange(Y.shape[-1] - 1, -1, -1, dtype=np.int64)
    return (Y * w).sum(axis=-1)


_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def plucker_raw(R: ResidueRing, W) -> np.ndarray:
    W = np.asarray(W)
    x, y = W[..., 0, :], W[..., 1, :]
    out = [R.sub[R.mul[x[..., i], y[..., j]], R.mul[x[..., j], y[..., i]]] for i, j in _PAIRS]
    return np.stack(out, axis=-1)


def plane_codes(R: ResidueRing, W) -> np.ndarray:
    """Integer code of the plane spanned by the two rows (normalized Plücker point)."""
    return point_codes(R, plucker_raw(R, W))


def plucker(R: ResidueRing, W) -> tuple[int, ...]:
    """Normalized Plücker point (first nonzero coordinate 1) of a rank-2 basis."""
    p = plucker_raw(R, np.asarray(W))
    if not p.any():
        raise ValueError("plucker needs a rank-2 input")
    Y, _ = normalize_points(R, p[None])
    return tuple(int(v) for v in Y[0])


def symplectic_basis(R: ResidueRing, B) -> np.ndarray:
    """S with S B S^T = J (rows e1, e2, f1, f2) for a nondegenerate alternating B over a field."""
    B = np.asarray(B)
    n = B.shape[0]
    vecs = [np.eye(n, dtype=np.int64)[i] * R.one for i in range(n)]
    pairing = lambda u, v: int(rdot(R, rmatmul(R, u[None, :], B)[0], v))
    es, fs = [], []
    pool = list(vecs)
    while pool:
        e = pool.pop(0)
        if not e.any():
            continue
        j = next((k for k, v in enumerate(pool) if pairing(e, v)), None)
        if j is None:
            raise ValueError("form is degenerate")
        f = pool.pop(j)
        c = int(R.inv[pairing(e, f)])
        f = R.mul[f, c]
        new = []
        for v in pool:
            # v <- v - <v, f> e + <v, e> f
            a, b = pairing(v, f), pairing(v, e)
            v = R.sub[v, R.mul[e, a]]
            v = R.add[v, R.mul[f, b]]
            new.append(v)
        pool = new
        es.append(e)
        fs.append(f)
    return np.array(es + fs, dtype=np.int64)


# ---------------------------------------------------------------- spaces and flags

@dataclass(frozen=True)
class SymplecticSpace:
    ring: ResidueRing

    @property
    def q(self) -> int:
        return self.ring.size

    @property
    def J(self) -> np.ndarray:
        return standard_J(self.ring)

    def pair(self, x, y) -> np.ndarray:
        return rdot(self.ring, rmatmul(self.ring, np.asarray(x)[..., None, :], self.J)[..., 0, :], y)


@dataclass(frozen=True)
class Flag:
    variant: str
    data: tuple  # canonical: Klingen point; Siegel Plücker point; Borel (point, Plücker point)


def flag_count_formula(q: int, variant: str) -> int:
    """Closed formulas at prime level of norm q."""
    N = Fraction(q)
    if variant == SIEGEL:
        v = N ** 3 * (1 + 1 / N) * (1 + 1 / N ** 2)
    elif variant == KLINGEN:
        v = (N ** 4 - 1) / (N - 1)
    elif variant == BOREL:
        v = N ** 4 * (1 + 1 / N) ** 2 * (1 + 1 / N ** 2)
    else:
        raise ValueError(variant)
    assert v.denominator == 1
    return int(v)


def _rref_planes(R: ResidueRing) -> np.ndarray:
    """All planes in R^4 as reduced row echelon bases, by pivot pattern."""
    q = R.size
    one = R.one
    out = []
    for p0, p1 in combinations(range(4), 2):
        free = [(0, j) for j in range(p0 + 1, 4) if j != p1] + [(1, j) for j in range(p1 + 1, 4)]
        vals = np.array(list(product(range(q), repeat=len(free))), dtype=np.int64).reshape(q ** len(free), len(free))
        W = np.zeros((len(vals), 2, 4), dtype=np.int64)
        W[:, 0, p0] = one
        W[:, 1, p1] = one
        for k, (i, j) in enumerate(free):
            W[:, i, j] = vals[:, k]
        out.append(W)
    return np.concatenate(out)


def _points(R: ResidueRing, n: int = 4) -> np.ndarray:
    q = R.size
    out = []
    for p in range(n):
        vals = np.array(list(product(range(q), repeat=n - 1 - p)), dtype=np.int64).reshape(q ** (n - 1 - p), n - 1 - p)
        X = np.zeros((len(vals), n), dtype=np.int64)
        X[:, p] = R.one
        X[:, p + 1:] = vals
        out.append(X)
    return np.concatenate(out)


def lagrangian_planes(R: ResidueRing, B=None) -> np.ndarray:
    """All planes isotropic for B (default J), as (n, 2, 4) bases."""
    J = standard_J(R)
    W = _rref_planes(R)
    iso = rmatmul(R, rmatmul(R, W[:, :1, :], J), np.swapaxes(W[:, 1:, :], -1, -2))[:, 0, 0] == 0
    W = W[iso]
    if B is not None:
        S = symplectic_basis(R, B)
        W = rmatmul(R, W, S)
    return W


class FlagSpace:
    """All flags of one variant over O_F/P, in canonical order with a code index.

    ``reps`` holds (n, 2, 4) plane bases (Siegel, Borel: row 0 spans the line)
    or (n, 4) points (Klingen).
    """

    def __init__(self, prime: PrimeIdeal | None, variant: str, ring: ResidueRing | None = None):
        if variant not in VARIANTS:
            raise ValueError(f"unknown parahoric {variant!r}")
        self.prime = prime
        self.variant = variant
        self.ring = ring if ring is not None else residue_field(prime)
        R = self.ring
        if variant == KLINGEN:
            reps = _points(R)
        else:
            planes = lagrangian_planes(R)
            if variant == SIEGEL:
                reps = planes
            else:
                # lines a1 x + a2 y in each plane: P^1 points
                lines = _points(R, 2)  # (q+1, 2)
                L = rmatmul(R, lines[None, :, :], planes)  # (n, q+1, 4)
                P = np.repeat(planes[:, None], len(lines), axis=1)
                comp = np.where(lines[:, 0] == 0, 0, 1)  # complementary basis vector index
                other = np.take_along_axis(P, np.broadcast_to(comp[None, :, None, None], P.shape[:2] + (1, 4)), axis=2)
                reps = np.concatenate([L[:, :, None, :], other], axis=2).reshape(-1, 2, 4)
        codes = self.codes(reps)
        order = np.argsort(codes, kind="stable")
        self.reps = reps[order]
        self.sorted_codes = codes[order]
        if len(np.unique(self.sorted_codes)) != len(self.sorted_codes):
            raise AssertionError("duplicate flags")
        expected = flag_count_formula(R.size, variant)
        if len(self.reps) != expected:
            raise AssertionError(f"{variant} flag count {len(self.reps)} != {expected}")

    def __len__(self):
        return len(self.reps)

    def codes(self, X) -> np.ndarray:
        R = self.ring
        if self.variant == KLINGEN:
            return point_codes(R, X)
        if self.variant == SIEGEL:
            return plane_codes(R, X)
        q = R.size
        return plane_codes(R, X) * q ** 4 + point_codes(R, X[..., 0, :])

    def index(self, X) -> np.ndarray:
        """Positions of flags (given by any bases) in the canonical list."""
        c = self.codes(X)
        pos = np.searchsorted(self.sorted_codes, c)
        pos = np.minimum(pos, len(self.sorted_codes) - 1)
        if not (self.sorted_codes[pos] == c).all():
            raise ValueError("not a flag of this space")
        return pos

    def act(self, X, g) -> np.ndarray:
        """x g for bases X (..., 2, 4) or points (..., 4) and 4x4 matrices g."""
        R = self.ring
        X = np.asarray(X)
        if self.variant == KLINGEN:
            return rmatmul(R, X[..., None, :], g)[..., 0, :]
        return rmatmul(R, X, g)

    def flag(self, k: int) -> Flag:
        X = self.reps[k]
        R = self.ring
        if self.variant == KLINGEN:
            return Flag(KLINGEN, tuple(int(v) for v in X))
        if self.variant == SIEGEL:
            return Flag(SIEGEL, plucker(R, X))
        line, _ = normalize_points(R, X[None, 0])
        return Flag(BOREL, (tuple(int(v) for v in line[0]), plucker(R, X)))


def enumerate_flags(P: PrimeIdeal, variant: str) -> FlagSpace:
    return FlagSpace(P, variant)


def _check_similitude(R: ResidueRing, g) -> int:
    J = standard_J(R)
    g = np.asarray(g)
    lhs = rmatmul(R, rmatmul(R, g, J), g.T)
    lam = int(lhs[0, 2])
    if lam == 0 or not R.is_unit[lam] or not (lhs == R.mul[J, lam]).all():
        raise ValueError("g is not a symplectic similitude")
    return lam


def act(space: FlagSpace, g, k: int) -> int:
    """Index of (flag k) g; g must be a similitude of J."""
    _check_similitude(space.ring, g)
    return int(space.index(space.act(space.reps[k], np.asarray(g)))[()])


# ---------------------------------------------------------------- brute-force oracles

def brute_force_count(R: ResidueRing, variant: str) -> int:
    """Flag counts from ordered pairs of vectors, independent of the echelon enumeration."""
    q = R.size
    J = standard_J(R)
    V = np.array(list(product(range(q), repeat=4)), dtype=np.int64)[1:]
    n_pts = len(V) // (q - 1)
    if variant == KLINGEN:
        return n_pts
    JV = rmatmul(R, V[:, None, :], J)[:, 0, :]
    # isotropic ordered pairs (x, y) with y not a multiple of x
    pairs = 0
    for i in range(len(V)):
        d = rdot(R, JV[i][None, :], V)
        iso = d == 0
        # multiples of V[i]: q - 1 nonzero ones, all isotropic
        pairs += int(iso.sum()) - (q - 1)
    # ordered bases of a fixed plane: (q^2 - 1)(q^2 - q)
    planes = pairs // ((q * q - 1) * (q * q - q))
    if variant == SIEGEL:
        return planes
    return planes * (q + 1)


def group_closure(R: ResidueRing, gens, limit: int = 10 ** 6) -> np.ndarray:
    """All products of the generators (small groups only)."""
    gens = [np.asarray(g) for g in gens]
    n = gens[0].shape[0]
    I = np.eye(n, dtype=np.int64) * R.one
    seen = {I.tobytes(): I}
    frontier = [I]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                m = rmatmul(R, h, g)
                k = m.tobytes()
                if k not in seen:
                    seen[k] = m
                    nxt.append(m)
                    if len(seen) > limit:
                        raise RuntimeError("group too large")
        frontier = nxt
    return np.array(list(seen.values()))
