"""Hecke modules of trivial weight, Brandt matrices and eigensystems.

The module at level r (a prime, with a parahoric variant) has the basis
(class a, Gamma_a-orbit O on the flag space).  Flags live in standard
symplectic coordinates: a row x of the Morita picture of L_a in gamma
coordinates becomes x Phi_a with Phi_a = rho_r(alpha_a) P, P the permutation
taking diag(J, J) to the standard J.

Away from the level, a neighbour M = O^2 delta of L_a (delta gamma_a
delta-bar^T = u gamma_b) transports a flag x of L_a to x t with
t = Phi_a^{-1} rho_r(delta)^{-1} Phi_b, and

    B[(a, O), (b, O')] = #{neighbours M of L_a : x t_M in O'}     (x in O fixed).

At the level prime two conventions are available.  The default keeps the
formula above with the integral matrix u delta^{-1} reduced mod r in place of
rho_r(delta)^{-1}; flags whose image degenerates are dropped.  For T_1 the
image of x is a flag iff x is transversal to the kernel, and for T_2 the
reduction has rank one, so T_2(r) acts by zero.  The other convention
(Siegel parahoric only) uses the parahoric double cosets of diag(1, 1, p, p)
and diag(1, p, p^2, p):

* T_1(r): the new lattice is the preimage L_1 of the flag W, and the new
  flag runs over the Lagrangians of L_1/pL_1 transversal to pL/pL_1.
* T_2(r): the new lattice N is a T_2(r)-neighbour whose point lies in W,
  and the new flag runs over the Lagrangians of N/pN meeting Y, the image
  of pL_1, in a line and avoiding ell, the image of p^2 L.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
import sympy
from sympy.polys.matrices import DomainMatrix

from .exactnum import PrimeIdeal, factor_integer
from .flags import (KLINGEN, SIEGEL, FlagSpace, inverse_over, plucker_raw, rdot,
                    rmatmul, standard_J)
from .hermlat import ClassSet, mat2_conj_t, mat2_mul
from .neighbors import NeighborData, NeighborKeys, compute_neighbors, morita_form
from .quatalg import local_splitting

__all__ = [
    "HeckeModule", "BrandtMatrix", "Eigensystem", "SKParams", "build_module", "brandt_matrix",
    "eisenstein_and_cusp", "charpoly", "charpoly_factor", "eigensystems", "sk_eigenvalues",
    "sk_detect", "NeighborStore", "degree", "fundamental_discriminant",
]


def degree(N: int, i: int) -> int:
    """Number of neighbours counted by T_i at a prime of norm N (level prime excluded)."""
    return N ** (i - 1) * (N + 1) * (N * N + 1)


def level_degree(N: int, i: int) -> int:
    return N ** 3 if i == 1 else N ** 3 * (N + 1)


class NeighborStore:
    """Memoizes neighbour data; ``load``/``save`` hooks give persistence."""

    def __init__(self, classes: ClassSet, load: Callable | None = None, save: Callable | None = None,
                 log: Callable | None = None):
        self.classes = classes
        self._mem: dict = {}
        self._load, self._save, self.log = load, save, log

    def get(self, a: int, P: PrimeIdeal, i: int) -> NeighborData:
        key = (a, P.label(), i)
        if key not in self._mem:
            d = self._load(key) if self._load else None
            if d is None:
                d = compute_neighbors(self.classes, a, P, i, log=self.log)
                if self._save:
                    self._save(key, d)
            self._mem[key] = d
        return self._mem[key]


# ---------------------------------------------------------------- the module

@dataclass
class HeckeModule:
    classes: ClassSet
    level: PrimeIdeal | None
    variant: str | None
    flags: FlagSpace | None = None
    rho: object = None
    phi: list = field(default_factory=list)
    phi_inv: list = field(default_factory=list)
    G: list = field(default_factory=list)  # stabilizers in standard coordinates
    orbit_of: list = field(default_factory=list)
    orbit_reps: list = field(default_factory=list)
    orbit_sizes: list = field(default_factory=list)

    @property
    def offsets(self) -> list[int]:
        out, k = [], 0
        for reps in self.orbit_reps:
            out.append(k)
            k += len(reps)
        return out

    @property
    def dim(self) -> int:
        return sum(len(r) for r in self.orbit_reps)

    @property
    def basis(self) -> list[tuple[int, int]]:
        return [(a, o) for a, reps in enumerate(self.orbit_reps) for o in range(len(reps))]


def _perm_matrix(R) -> np.ndarray:
    Pm = np.zeros((4, 4), dtype=np.int64)
    for j, p in enumerate([0, 2, 1, 3]):
        Pm[p, j] = R.one
    return Pm


def build_module(classes: ClassSet, level: PrimeIdeal | None = None, variant: str = SIEGEL) -> HeckeModule:
    h = len(classes)
    if level is None:
        return HeckeModule(classes, None, None, orbit_reps=[[0] for _ in range(h)],
                           orbit_sizes=[[1] for _ in range(h)])
    if level.norm_int % 2 == 0:
        raise ValueError("the level must be an odd prime")
    if classes.aux_prime is not None and classes.aux_prime == level:
        raise ValueError("the level collides with the auxiliary prime")
    O = classes.classes[0].order
    rho = local_splitting(O, level, 1)
    R = rho.ring
    FS = FlagSpace(level, variant, R)
    M = HeckeModule(classes, level, variant, FS, rho)
    Pm = _perm_matrix(R)
    J = standard_J(R)
    for L in classes.classes:
        dinv = int(R.inv[R.from_int(L.alpha_den)])
        A = R.mul[rho.matrix(L.alpha_num), dinv]
        phi = rmatmul(R, A, Pm)
        phi_inv = inverse_over(R, phi)
        B = morita_form(rho, L.form.gamma)
        if not (rmatmul(R, rmatmul(R, phi, J), phi.T) == B).all():
            raise ArithmeticError("Phi does not carry the standard form to the class form")
        G = rmatmul(R, rmatmul(R, phi_inv[None], rho.matrix(L.stabilizer)), phi[None])
        orbit_of = np.full(len(FS), -1, dtype=np.int64)
        reps, sizes = [], []
        for k in range(len(FS)):
            if orbit_of[k] >= 0:
                continue
            idx = np.unique(FS.index(FS.act(FS.reps[k], G)))
            orbit_of[idx] = len(reps)
            reps.append(k)
            sizes.append(len(idx))
        M.phi.append(phi)
        M.phi_inv.append(phi_inv)
        M.G.append(G)
        M.orbit_of.append(orbit_of)
        M.orbit_reps.append(reps)
        M.orbit_sizes.append(sizes)
    return M


# ---------------------------------------------------------------- Brandt matrices

@dataclass
class BrandtMatrix:
    i: int
    prime: str
    matrix: np.ndarray
    at_level: bool = False

    @property
    def label(self) -> str:
        return f"T{self.i}({self.prime})"


def _transport(M: HeckeModule, a: int, b: int, delta) -> np.ndarray:
    R = M.rho.ring
    d = M.rho.matrix(delta)
    return rmatmul(R, rmatmul(R, M.phi_inv[a], inverse_over(R, d)), M.phi[b])


def brandt_matrix(M: HeckeModule, i: int, P: PrimeIdeal, store: NeighborStore, check: bool = True,
                  level_mode: str = "transport") -> BrandtMatrix:
    """Matrix of T_i(P) on the orbit basis (rows: source basis element).

    At the level prime ``level_mode`` picks the operator: "transport" moves
    flags by the reduction of u delta^{-1} and drops degenerate images (for
    T_2 every image is degenerate and the matrix vanishes), "parahoric" uses
    the parahoric double cosets described in the module docstring.
    """
    if M.level is not None and P == M.level:
        if level_mode == "parahoric":
            return _level_brandt(M, i, P, store)
        if level_mode != "transport":
            raise ValueError(f"unknown level mode {level_mode!r}")
        return _level_transport(M, i, P, store)
    h = len(M.classes)
    n = M.dim
    off = M.offsets
    B = np.zeros((n, n), dtype=np.int64)
    for a in range(h):
        nd = store.get(a, P, i)
        if M.level is None:
            for o in nd.orbits:
                B[a, o.target] += o.size
            continue
        FS = M.flags
        N = len(M.G[a])
        ts = [(o.target, o.size, _transport(M, a, o.target, o.delta)) for o in nd.orbits]
        for oi, rep in enumerate(M.orbit_reps[a]):
            XG = FS.act(FS.reps[rep], M.G[a])
            acc = np.zeros(n, dtype=np.int64)
            for b, size, t in ts:
                idx = FS.index(FS.act(XG, t))
                cnt = np.bincount(M.orbit_of[b][idx], minlength=len(M.orbit_reps[b]))
                acc[off[b]:off[b] + len(cnt)] += cnt * size
            if (acc % N).any():
                raise ArithmeticError("transition counts are not divisible by the stabilizer order")
            B[off[a] + oi] = acc // N
        if check and len(M.orbit_reps[a]) and M.level is not None:
            _check_base_point(M, a, ts, B[off[a]])
    deg = degree(P.norm_int, i)
    if not (B.sum(axis=1) == deg).all():
        raise ArithmeticError(f"row sums of T_{i}({P.label()}) differ from {deg}")
    return BrandtMatrix(i, P.label(), B)


def _check_base_point(M: HeckeModule, a: int, ts, row) -> None:
    """Recompute the first row of class a from a second flag of the same orbit."""
    FS = M.flags
    members = np.nonzero(M.orbit_of[a] == 0)[0]
    if len(members) < 2:
        return
    x = FS.reps[members[-1]]
    XG = FS.act(x, M.G[a])
    n = M.dim
    off = M.offsets
    acc = np.zeros(n, dtype=np.int64)
    for b, size, t in ts:
        idx = FS.index(FS.act(XG, t))
        cnt = np.bincount(M.orbit_of[b][idx], minlength=len(M.orbit_reps[b]))
        acc[off[b]:off[b] + len(cnt)] += cnt * size
    if not (acc // len(M.G[a]) == row).all():
        raise ArithmeticError("Brandt row depends on the base point of the orbit")


# ---- level prime

def _level_transport(M: HeckeModule, i: int, P: PrimeIdeal, store: NeighborStore) -> BrandtMatrix:
    FS = M.flags
    R = FS.ring
    O = M.classes.classes[0].order
    n = M.dim
    off = M.offsets
    B = np.zeros((n, n), dtype=np.int64)
    for a, L in enumerate(M.classes.classes):
        nd = store.get(a, P, i)
        N = len(M.G[a])
        ga = M.rho.matrix(L.form.gamma)
        ts = []
        for o in nd.orbits:
            gb_inv = inverse_over(R, M.rho.matrix(M.classes.classes[o.target].form.gamma))
            # u delta^{-1} = gamma_a delta-bar^T gamma_b^{-1}
            ud = rmatmul(R, rmatmul(R, ga, M.rho.matrix(mat2_conj_t(O, o.delta))), gb_inv)
            ts.append((o.target, o.size, rmatmul(R, rmatmul(R, M.phi_inv[a], ud), M.phi[o.target])))
        for oi, rep in enumerate(M.orbit_reps[a]):
            XG = FS.act(FS.reps[rep], M.G[a])
            acc = np.zeros(n, dtype=np.int64)
            for b, size, t in ts:
                Y = FS.act(XG, t)
                ok = Y.any(axis=-1) if FS.variant == KLINGEN else plucker_raw(R, Y).any(axis=-1)
                if not ok.any():
                    continue
                idx = FS.index(Y[ok])
                cnt = np.bincount(M.orbit_of[b][idx], minlength=len(M.orbit_reps[b]))
                acc[off[b]:off[b] + len(cnt)] += cnt * size
            if (acc % N).any():
                raise ArithmeticError("transition counts are not divisible by the stabilizer order")
            B[off[a] + oi] = acc // N
    return BrandtMatrix(i, P.label(), B, at_level=True)


def _pdet(R, P, Q) -> np.ndarray:
    """det[P; Q] for planes via Plücker coordinates (zero iff P and Q meet)."""
    a, b = plucker_raw(R, P), plucker_raw(R, Q)
    m = R.mul
    terms = [m[a[..., 0], b[..., 5]], m[a[..., 2], b[..., 3]], m[a[..., 3], b[..., 2]], m[a[..., 5], b[..., 0]]]
    neg = [m[a[..., 1], b[..., 4]], m[a[..., 4], b[..., 1]]]
    out = terms[0]
    for t in terms[1:]:
        out = R.add[out, t]
    for t in neg:
        out = R.sub[out, t]
    return out


def _left_kernel(R, A) -> np.ndarray:
    """Basis (rows) of {y : y A = 0} over a field."""
    A = np.asarray(A)
    m, n = A.shape
    # row reduce [A | I]
    M = [list(map(int, A[r])) + [R.one if r == c else 0 for c in range(m)] for r in range(m)]
    row = 0
    for c in range(n):
        p = next((r for r in range(row, m) if M[r][c]), None)
        if p is None:
            continue
        M[row], M[p] = M[p], M[row]
        inv = int(R.inv[M[row][c]])
        M[row] = [int(R.mul[x, inv]) for x in M[row]]
        for r in range(m):
            if r != row and M[r][c]:
                f = M[r][c]
                M[r] = [int(R.sub[x, R.mul[f, y]]) for x, y in zip(M[r], M[row])]
        row += 1
    return np.array([M[r][n:] for r in range(row, m)], dtype=np.int64).reshape(-1, m)


def _key_lookup(keys: NeighborKeys, nd: NeighborData):
    """code -> (orbit index, stabilizer index) over all neighbour keys of a class."""
    G = keys.rho.matrix(keys.L.stabilizer)
    codes, which, gidx = [], [], []
    for k, o in enumerate(nd.orbits):
        c = keys.codes(keys.act(o.rows, G))
        u, first = np.unique(c, return_index=True)
        codes.append(u)
        which.append(np.full(len(u), k))
        gidx.append(first)
    codes = np.concatenate(codes)
    order = np.argsort(codes)
    return codes[order], np.concatenate(which)[order], np.concatenate(gidx)[order]


def _lookup(table, code):
    codes, which, gidx = table
    p = int(np.searchsorted(codes, code))
    if p >= len(codes) or codes[p] != code:
        raise ArithmeticError("neighbour key not found")
    return int(which[p]), int(gidx[p])


def _level_brandt(M: HeckeModule, i: int, P: PrimeIdeal, store: NeighborStore) -> BrandtMatrix:
    if M.variant != SIEGEL:
        raise NotImplementedError("operators at the level prime are implemented for the Siegel parahoric")
    FS = M.flags
    R = FS.ring
    q = R.size
    n = M.dim
    off = M.offsets
    h = len(M.classes)
    J = standard_J(R)
    B = np.zeros((n, n), dtype=np.int64)
    for a in range(h):
        L = M.classes.classes[a]
        nd = store.get(a, P, i)
        keys = NeighborKeys(L, P, i)
        table = _key_lookup(keys, nd)
        for oi, rep in enumerate(M.orbit_reps[a]):
            W = rmatmul(R, FS.reps[rep], M.phi_inv[a])  # flag in gamma_a coordinates
            acc = np.zeros(n, dtype=np.int64)
            if i == 1:
                news = [(W, None)]
            else:
                lines = np.array([[R.one, t] for t in range(q)] + [[0, R.one]], dtype=np.int64)
                V = rmatmul(R, lines, W)
                news = [(keys.lift_isotropic(V[k:k + 1], np.array([c]))[0], W)
                        for k in range(len(V)) for c in range(q)]
            for key, Wg in news:
                k, g = _lookup(table, int(keys.codes(key if i == 2 else key)[()]))
                o = nd.orbits[k]
                delta = mat2_mul(L.order, o.delta, L.stabilizer[g])
                b = o.target
                d1 = M.rho.matrix(delta)
                if i == 1:
                    K = _left_kernel(R, d1)
                    if len(K) != 2:
                        raise ArithmeticError("T_1(r) neighbour has the wrong reduction rank")
                    Ks = rmatmul(R, K, M.phi[b])
                    mask = _pdet(R, FS.reps, Ks[None]) != 0
                else:
                    Y, ell = _level_T2_spaces(keys, delta, Wg)
                    Ys = rmatmul(R, Y, M.phi[b])
                    ls = rmatmul(R, ell, M.phi[b])[0]
                    meets = _pdet(R, FS.reps, Ys[None]) == 0
                    same = FS.codes(FS.reps) == FS.codes(Ys[None])[0]
                    lJ = rmatmul(R, ls[None], J)[0]
                    avoids = (rdot(R, FS.reps, lJ[None, :]) != 0).any(axis=-1)
                    mask = meets & ~same & avoids
                cnt = np.bincount(M.orbit_of[b][mask], minlength=len(M.orbit_reps[b]))
                acc[off[b]:off[b] + len(cnt)] += cnt
            B[off[a] + oi] = acc
    deg = level_degree(q, i)
    if not (B.sum(axis=1) == deg).all():
        raise ArithmeticError(f"row sums of T_{i} at the level differ from {deg}")
    return BrandtMatrix(i, P.label(), B, at_level=True)


def _level_T2_spaces(keys: NeighborKeys, delta, W):
    """Y (image of p L_1) and ell (image of p^2 L) in N/pN, N = O^2 delta, in gamma_b coordinates.

    phi(k) = k-hat delta / pi is a map K1 -> L/pL modulo the point v of N.
    """
    R1, R2 = keys.R1, keys.R2
    d1 = keys.rho1.matrix(delta)
    d2 = keys.rho2.matrix(delta)
    K1 = _left_kernel(R1, d1)
    if len(K1) != 3:
        raise ArithmeticError("T_2(r) neighbour has the wrong reduction rank")
    phi = rmatmul(R2, keys.lift[K1], d2)
    phi = keys.divpi[phi]
    if (phi < 0).any():
        raise ArithmeticError("kernel vectors do not map into p L")
    # condition phi(k) in W  <=>  <phi(k), w_j> = 0 for the two rows w_j of W
    BW = rmatmul(R1, keys.B1, np.asarray(W).T)  # (4, 2)
    cond = rmatmul(R1, phi, BW)  # (3, 2)
    cY = _left_kernel(R1, cond)
    # phi is only defined modulo the point v of the neighbour (spanned by the rows of d1)
    v = d1[np.argmax(d1.any(axis=1))]
    cl = _left_kernel(R1, np.vstack([phi, v[None]]))[:, :3]
    if len(cY) != 2 or len(cl) != 1:
        raise ArithmeticError("unexpected dimensions of the level flag data")
    return rmatmul(R1, cY, K1), rmatmul(R1, cl, K1)


# ---------------------------------------------------------------- linear algebra

def charpoly(A) -> list[int]:
    """Characteristic polynomial coefficients (leading first), fraction free over Z."""
    A = np.asarray(A)
    if A.shape[0] == 0:
        return [1]
    dm = DomainMatrix([[sympy.ZZ(int(v)) for v in row] for row in A.tolist()], A.shape, sympy.ZZ)
    return [int(c) for c in dm.charpoly()]


def charpoly_factor(A) -> list[tuple[list[int], int]]:
    """Irreducible factors over Z (monic, coefficient lists) with multiplicities."""
    x = sympy.Symbol("x")
    cp = sympy.Poly(charpoly(A), x)
    _, facs = sympy.factor_list(cp)
    out = [([int(c) for c in sympy.Poly(f, x).all_coeffs()], e) for f, e in facs]
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def eisenstein_and_cusp(M: HeckeModule, brandts: list[BrandtMatrix]):
    """(Eisenstein vector, cusp quotient matrices).

    The all-ones vector spans the Eisenstein part; the cusp space is the
    quotient by it, with coordinates f_0 - f_{n-1}, ..., f_{n-2} - f_{n-1}.
    """
    n = M.dim
    ones = np.ones(n, dtype=np.int64)
    for T in brandts:
        v = T.matrix @ ones
        if not (v == v[0]).all():
            raise ArithmeticError(f"{T.label} does not fix the constant functions")
    quots = []
    for T in brandts:
        A = T.matrix
        Q = A[:-1, :-1] - A[-1:, :-1]
        quots.append(Q)
    return ones, quots


# ---------------------------------------------------------------- eigensystems

def fundamental_discriminant(n: int) -> tuple[int, int]:
    """(D, f) with n = f^2 D and D a fundamental discriminant."""
    if n == 0:
        raise ValueError("zero has no discriminant")
    sign = -1 if n < 0 else 1
    core, f = sign, 1
    for p, e in factor_integer(abs(n)).items():
        f *= p ** (e // 2)
        if e % 2:
            core *= p
    if core % 4 != 1:
        core *= 4
        if f % 2:
            raise ValueError(f"{n} is not a discriminant")
        f //= 2
    return core, f


@dataclass
class Eigensystem:
    dim: int
    disc: int | None  # None: rational; else fundamental discriminant d' of the eigenvalue field
    values: dict  # label -> (x, y) meaning x + y omega_{d'}
    factor: list | None = None  # char poly factor when the field has degree > 2
    cuspidal: bool = True
    factor_operator: str | None = None

    @property
    def kind(self) -> int:
        """0 rational, 1 quadratic, 2 larger field."""
        return 2 if not self.values else (0 if self.disc is None else 1)

    def value(self, label):
        return self.values[label]

    def conjugate(self) -> "Eigensystem":
        if self.disc is None:
            return self
        vals = {}
        for k, (x, y) in self.values.items():
            vals[k] = (x, -y) if self.disc % 4 == 0 else (x + y, -y)
        return Eigensystem(self.dim, self.disc, vals, self.factor, self.cuspidal, self.factor_operator)

    def format_value(self, label) -> str:
        x, y = self.values[label]
        if self.disc is None or y == 0:
            return str(x)
        w = f"w{self.disc}"
        ys = "" if abs(y) == 1 else str(abs(y))
        if x == 0:
            return f"{'-' if y < 0 else ''}{ys}{w}"
        return f"{x}{'-' if y < 0 else '+'}{ys}{w}"


def _restrict(A: sympy.Matrix, V: sympy.Matrix) -> sympy.Matrix:
    """C with A V = V C for a stable subspace spanned by the columns of V."""
    AV = A * V
    # least squares is exact here; solve using the pivot rows of V
    C = (V.T * V).LUsolve(V.T * AV)
    if V * C != AV:
        raise ArithmeticError("subspace is not stable")
    return C


def _poly_at(coeffs, C: sympy.Matrix) -> sympy.Matrix:
    n = C.shape[0]
    out = sympy.zeros(n, n)
    for c in coeffs:
        out = out * C + c * sympy.eye(n)
    return out


def _factor_q(C: sympy.Matrix) -> list[tuple[list[int], int]]:
    """charpoly_factor for a rational matrix whose char poly is integral."""
    x = sympy.Symbol("x")
    dm = DomainMatrix.from_Matrix(C).convert_to(sympy.QQ)
    cp = [sympy.Rational(c) for c in dm.charpoly()]
    if any(c.q != 1 for c in cp):
        raise ArithmeticError("restricted operator has a non-integral char poly")
    _, facs = sympy.factor_list(sympy.Poly(cp, x))
    out = [([int(c) for c in sympy.Poly(f, x).all_coeffs()], e) for f, e in facs]
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def _split(A: sympy.Matrix, V: sympy.Matrix):
    C = _restrict(A, V)
    facs = _factor_q(C) if C.shape[0] else []
    if len(facs) <= 1:
        return [V]
    out = []
    for f, e in facs:
        K = (_poly_at(f, C) ** e).nullspace()
        W = V * sympy.Matrix.hstack(*K)
        out.append(W)
    return out


def eigensystems(quots: list[np.ndarray], labels: list[str], split_on: list[int] | None = None) -> list[Eigensystem]:
    """Common eigen-constituents of commuting integer matrices.

    The space is split by the kernels of factor powers of the operators in
    ``split_on`` (default: all); every constituent then gets its eigenvalues
    for all operators.  Fields of degree <= 2 are reported in the
    omega_{d'} convention, larger ones by their char-poly factor.
    """
    n = quots[0].shape[0]
    if n == 0:
        return []
    mats = [sympy.Matrix(Q.tolist()) for Q in quots]
    pieces = [sympy.eye(n)]
    for k in (split_on if split_on is not None else range(len(mats))):
        new = []
        for V in pieces:
            new += _split(mats[k], V)
        pieces = new
    out = []
    for V in pieces:
        Cs = [_restrict(A, V) for A in mats]
        out.append(_constituent(Cs, labels))
    if sum(e.dim for e in out) != n:
        raise ArithmeticError("constituent dimensions do not add up")
    out.sort(key=lambda e: (e.kind, e.dim, [e.values[l] for l in labels] if e.values else e.factor))
    return out


def _constituent(Cs: list[sympy.Matrix], labels: list[str]) -> Eigensystem:
    d = Cs[0].shape[0]
    if all(C.is_diagonal() and len(set(C.diagonal())) == 1 for C in Cs):
        vals = {l: (int(C[0, 0]), 0) for l, C in zip(labels, Cs)}
        return Eigensystem(d, None, vals)
    # generator: an operator whose char poly on the piece is irreducible of degree d
    gen = None
    for C in Cs:
        facs = _factor_q(C)
        if len(facs) == 1 and facs[0][1] == 1:
            gen = (C, facs[0][0])
            break
    if gen is None or d > 2:
        # report the char poly factor of the first operator that generates the field
        k = next((k for k, C in enumerate(Cs) if len(_factor_q(C)) == 1 and _factor_q(C)[0][1] == 1), None)
        if k is None:
            k = max(range(len(Cs)), key=lambda k: len(_factor_q(Cs[k])[0][0]))
        return Eigensystem(d, None, {}, factor=_factor_q(Cs[k])[0][0], factor_operator=labels[k])
    C0, (one, b, c) = gen
    disc = b * b - 4 * c
    D0, f = fundamental_discriminant(disc)
    # theta = (-b + f sqrt D0)/2 in terms of omega
    if D0 % 4 == 0:
        th = (Fraction(-b, 2), Fraction(f))
    else:
        th = (Fraction(-b - f, 2), Fraction(f))
    i, j = (0, 1) if C0[0, 1] != 0 else (1, 0)
    vals = {}
    for l, C in zip(labels, Cs):
        # C = alpha + beta C0, read off from an off-diagonal entry
        beta = sympy.Rational(C[i, j]) / C0[i, j]
        alpha = sympy.Rational(C[0, 0]) - beta * C0[0, 0]
        if C - alpha * sympy.eye(2) - beta * C0 != sympy.zeros(2, 2):
            raise ArithmeticError("operators on a constituent are not polynomials in the generator")
        x = Fraction(int(alpha.p), int(alpha.q)) + Fraction(int(beta.p), int(beta.q)) * th[0]
        y = Fraction(int(beta.p), int(beta.q)) * th[1]
        if x.denominator != 1 or y.denominator != 1:
            raise ArithmeticError("eigenvalue is not an algebraic integer")
        vals[l] = (int(x), int(y))
    return Eigensystem(d, D0, vals)


# ---------------------------------------------------------------- Saito-Kurokawa

@dataclass
class SKParams:
    k: int
    a: dict  # label -> a_P


def sk_eigenvalues(a: int, N: int, k: int = 4) -> tuple[int, int]:
    """(lambda_1, lambda_2) of a Saito-Kurokawa lift at a prime of norm N."""
    if k % 2:
        raise ValueError("k must be even")
    e = Fraction(4 - k, 2)
    s = Fraction(N) ** int(e) if e.denominator == 1 else None
    if s is None:
        raise ValueError("weight gives a non-integral power")
    l1 = a * s + N * N + N
    l2 = a * s * (N + 1) + N * N - 1
    return int(l1), int(l2)


def sk_detect(E: Eigensystem, primes: list[tuple[str, int]], k: int = 4) -> list[int] | None:
    """a_P = lambda_1 - N^2 - N per prime if both relations hold everywhere, else None."""
    if E.disc is not None or not E.values:
        return None
    out = []
    for label, N in primes:
        l1 = E.values[f"T1({label})"][0]
        l2 = E.values[f"T2({label})"][0]
        e = (4 - k) // 2
        a = Fraction(l1 - N * N - N, 1) / Fraction(N) ** e
        if a.denominator != 1:
            return None
        a = int(a)
        if sk_eigenvalues(a, N, k) != (l1, l2):
            return None
        out.append(a)
    return out
