"""Quaternionic hermitian forms and lattices in D^2.

A lattice class is stored through its Gram matrix gamma = alpha alpha-bar^T
with entries in O_D.  All computations are then done in "gamma coordinates":
the lattice is O_D^2 (row vectors, Z-coordinates of length 16) with the form
H(x, y) = x gamma y-bar^T.  Vector enumeration uses the positive definite
Z-form x -> Tr_{F/Q} trd(H(x, x) c) for a totally positive scaling c.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from .exactnum import (FieldElement, Ideal, PrimeIdeal, QuadraticField, factor_integer,
                       factor_rational_prime, is_totally_positive, tp_units_mod_squares,
                       zeta_special_values, narrow_class_number_one)
from .quatalg import OrderIdeal, QuatElement, QuatOrder, ramified_primes
from .zlattice import det_int, hnf, integer_solve, iter_vectors, lll_gram

__all__ = [
    "HermitianMatrix", "HermForm", "LatticeRep", "ClassSet", "ThetaSeries", "det_D",
    "lattice_invariants", "lattice_index", "genus_tests", "represent_hermitian",
    "solve_alpha", "stabilizer", "equivalence_test", "theta_coeffs", "mass",
    "enumerate_classes", "hecke_theta_sets", "mat2", "mat2_mul", "mat2_conj_t",
    "paper_gamma2",
]


# ---------------------------------------------------------------- 2x2 matrices over O
# a 2x2 matrix over the order is an int array of shape (..., 2, 2, 8)

def mat2_mul(O: QuatOrder, g, h) -> np.ndarray:
    g = np.asarray(g)
    h = np.asarray(h)
    return np.einsum("...iam,...ajn,mnk->...ijk", g, h, O.mult)


def mat2_conj_t(O: QuatOrder, g) -> np.ndarray:
    g = np.asarray(g)
    return np.swapaxes(g, -3, -2) @ O.conj_matrix


def mat2(O: QuatOrder, entries) -> np.ndarray:
    """Coordinates of a 2x2 matrix of QuatElements lying in M_2(O)."""
    return np.array([[O.coords(e) for e in row] for row in entries], dtype=np.int64)


def mat2_elements(O: QuatOrder, g, den=1) -> list[list[QuatElement]]:
    return [[O.element(g[i, j]) / den for j in range(2)] for i in range(2)]


def right_action_matrix(O: QuatOrder, g) -> np.ndarray:
    """16x16 integer matrix R with (x g) = x @ R for row vectors x in O^2."""
    g = np.asarray(g, dtype=np.int64)
    # (x g)_j = sum_i x_i g_ij; x_i = sum_l c_l b_l, b_l g_ij = sum_m g_ij[m] mult[l, m]
    blk = np.einsum("ijm,lmk->iljk", g, O.mult)  # (i, l, j, k)
    return blk.reshape(16, 16)


# ---------------------------------------------------------------- hermitian matrices

class HermitianMatrix:
    """[[s, r-bar], [r, t]] with s, t in F and r in D."""

    def __init__(self, s, r: QuatElement, t):
        self.D = r.D
        F = self.D.F
        self.s = F.coerce(s)
        self.t = F.coerce(t)
        self.r = r

    @classmethod
    def identity(cls, D) -> "HermitianMatrix":
        return cls(1, D(0), 1)

    @classmethod
    def from_matrix(cls, m) -> "HermitianMatrix":
        (a, b), (c, d) = m
        if not (a.is_scalar() and d.is_scalar() and b == c.conj()):
            raise ValueError("matrix is not hermitian")
        return cls(a.c[0], c, d.c[0])

    def matrix(self) -> list[list[QuatElement]]:
        D = self.D
        return [[D(self.s), self.r.conj()], [self.r, D(self.t)]]

    def det_D(self) -> FieldElement:
        return self.s * self.t - self.r.nr()

    def is_totally_positive(self) -> bool:
        return is_totally_positive(self.s) and is_totally_positive(self.det_D())

    def scale(self, m) -> "HermitianMatrix":
        m = self.D.F.coerce(m)
        return HermitianMatrix(self.s * m, self.r * m, self.t * m)

    def transform(self, a) -> "HermitianMatrix":
        """a H a-bar^T for a 2x2 matrix a of QuatElements."""
        m = self.matrix()
        am = [[a[i][0] * m[0][j] + a[i][1] * m[1][j] for j in range(2)] for i in range(2)]
        out = [[am[i][0] * a[j][0].conj() + am[i][1] * a[j][1].conj() for j in range(2)] for i in range(2)]
        return HermitianMatrix.from_matrix(out)

    def __eq__(self, o):
        return isinstance(o, HermitianMatrix) and (self.s, self.r, self.t) == (o.s, o.r, o.t)

    def __repr__(self):
        return f"HermitianMatrix(s={self.s}, r={self.r}, t={self.t})"


def det_D(A: HermitianMatrix) -> FieldElement:
    return A.det_D()


def paper_gamma2(O: QuatOrder) -> HermitianMatrix:
    """[[2, r-bar], [r, 2]] with r = ((2+sqrt2) + (-2+sqrt2) i)/2 in (-1,-1 / Q(sqrt2))."""
    D = O.D
    F = D.F
    r = D(F(1, Fraction(1, 2)), F(-1, Fraction(1, 2)))
    return HermitianMatrix(2, r, 2)


# ---------------------------------------------------------------- the integer engine

class HermForm:
    """H_gamma on O^2 for an integral hermitian gamma, as integer tensors."""

    def __init__(self, O: QuatOrder, A: HermitianMatrix):
        self.O = O
        self.A = A
        self.gamma = mat2(O, A.matrix())
        O_ = O
        # T[a, b] = H(e_a, e_b), e_{8i+l} = b_l in slot i
        bl = np.eye(8, dtype=np.int64)
        T = np.zeros((2, 8, 2, 8, 8), dtype=np.int64)
        cb = bl @ O_.conj_matrix  # conj(b_m)
        for i in range(2):
            for j in range(2):
                left = O_.mul(bl, self.gamma[i, j])  # b_l gamma_ij, (8, 8)
                T[i, :, j, :, :] = np.einsum("lp,mq,pqk->lmk", left, cb, O_.mult)
        self.T = T.reshape(16, 16, 8)

    def H(self, x, y) -> np.ndarray:
        return np.einsum("...a,...b,abk->...k", np.asarray(x), np.asarray(y), self.T)

    def H_rows(self, X, y) -> np.ndarray:
        """H(X_a, y) for the rows X_a of X, as a (k, 8) matrix."""
        return np.einsum("ra,b,abk->rk", np.asarray(X), np.asarray(y), self.T)

    def value(self, x) -> tuple[int, int]:
        """H(x, x) in F as O_F coordinates."""
        t = self.O.trd(self.H(x, x))
        if t[0] % 2 or t[1] % 2:
            raise ArithmeticError("H(x, x) is not integral")
        return int(t[0]) // 2, int(t[1]) // 2

    def values(self, X) -> np.ndarray:
        X = np.asarray(X)
        t = np.einsum("...a,...b,abk->...k", X, X, self.T) @ self.O.trd_matrix
        return t // 2

    def trace_functional(self, c: FieldElement) -> list[Fraction]:
        """l_c(z) = Tr_{F/Q}(trd(z) c) on the Z-basis of O."""
        F = self.O.F
        return [(F.from_coords(int(a), int(b)) * c).trace() for a, b in self.O.trd_matrix]

    def gram(self, c: FieldElement | int = 1, basis=None) -> list[list[int]]:
        """Integer Gram matrix of x -> Tr trd(H(x, x) c), optionally on a sublattice basis.

        Raises if the result is not integral.
        """
        c = self.O.F.coerce(c)
        l = self.trace_functional(c)
        den = 1
        for t in l:
            den = den * t.denominator // gcd(den, t.denominator)
        li = np.array([int(t * den) for t in l], dtype=np.int64)
        G = self.T @ li  # (16, 16)
        if basis is not None:
            B = np.asarray(basis, dtype=np.int64)
            G = B @ G @ B.T
        if den > 1:
            if (G % den).any():
                raise ArithmeticError("trace form is not integral on this lattice")
            G = G // den
        return G.tolist()


# ---------------------------------------------------------------- representation solver

def _fe(F, ab):
    return F.from_coords(int(ab[0]), int(ab[1]))


def represent_hermitian(O: QuatOrder, A: HermitianMatrix, eta: HermitianMatrix,
                        rows=None, limit: int | None = None, scale=None,
                        form: HermForm | None = None) -> list[np.ndarray]:
    """All delta with rows in the lattice ``rows`` (default O^2) and delta A delta-bar^T = eta.

    The row with the smaller trace is enumerated by Fincke-Pohst on the
    scaled trace form; the other row is then constrained linearly by the
    off-diagonal entry and found by an inhomogeneous enumeration.
    ``scale`` (default 1) is the totally positive c of the trace form
    Tr trd(H c); it must make the form integral on ``rows``.
    """
    if not (A.is_totally_positive() and eta.is_totally_positive()):
        raise ValueError("represent_hermitian needs totally positive A and eta")
    F = O.F
    form = form or HermForm(O, A)
    c = F.coerce(1 if scale is None else scale)
    B = np.eye(16, dtype=np.int64) if rows is None else np.asarray(rows, dtype=np.int64)
    n = B.shape[0]
    G = form.gram(c, B)
    Gr, T = lll_gram(G)
    Bred = np.array(T, dtype=np.int64) @ B
    Gr_np = np.array(Gr, dtype=object)
    swap = (eta.t * c).trace() < (eta.s * c).trace()
    s_first, s_second = (eta.t, eta.s) if swap else (eta.s, eta.t)
    off = eta.r.conj() if swap else eta.r  # required H(second, first)
    off_c = np.array(O.coords(off), dtype=np.int64)
    s1 = s_first.int_coords()
    s2 = s_second.int_coords()
    tx = 2 * (s_first * c).trace()
    ty = 2 * (s_second * c).trace()
    out: list[np.ndarray] = []
    for z in iter_vectors(Gr, tx):
        x = np.array(z, dtype=np.int64) @ Bred
        if form.value(x) != s1:
            continue
        C = form.H_rows(Bred, x)  # (n, 8): H(Bred_a, x)
        w0, K = integer_solve(C.tolist(), off_c.tolist())
        if w0 is None:
            continue
        # HNF kernel bases can exceed int64; stay in Python ints until LLL has reduced them
        K = np.array(K, dtype=object).reshape(len(K), n)
        GK = K.dot(Gr_np).dot(K.T) if len(K) else np.zeros((0, 0), dtype=object)
        w0 = np.array(w0, dtype=object)
        if not w0.any():
            GKl, TK = lll_gram(GK.tolist())
            Kr = np.array(TK, dtype=object).reshape(len(K), len(K)).dot(K).astype(np.int64)
            cand = (np.array(v, dtype=np.int64) @ Kr for v in iter_vectors(GKl, ty))
        else:
            GKl, TK = lll_gram(GK.tolist())
            Kr = np.array(TK, dtype=object).dot(K)
            w0 = _babai(w0, Kr, np.array(GKl, dtype=object), Gr_np)
            Bh = np.vstack([Kr, w0[None, :]])
            Gh = Bh.dot(Gr_np).dot(Bh.T).tolist()
            Bh64 = Bh.astype(np.int64)
            cand = (np.array(v, dtype=np.int64) @ Bh64 for v in iter_vectors(Gh, ty, fixed_last=1))
        for zy in cand:
            y = zy @ Bred
            if form.value(y) != s2:
                continue
            delta = np.stack([y, x]) if swap else np.stack([x, y])
            out.append(delta.reshape(2, 2, 8))
            if limit is not None and len(out) >= limit:
                return out
    return out


def _babai(w0, Kr, GK, G):
    """Shift w0 by an integral combination of the rows of Kr towards the orthogonal complement."""
    if len(Kr) == 0:
        return w0
    # solve GK a = Kr G w0 over Q, round a
    rhs = Kr.dot(G).dot(w0)
    n = len(Kr)
    M = [[Fraction(int(GK[i][j])) for j in range(n)] + [Fraction(int(rhs[i]))] for i in range(n)]
    for col in range(n):
        p = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[p] = M[p], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    a = [round(M[i][n]) for i in range(n)]
    return w0 - np.array(a, dtype=object).dot(Kr)


# ---------------------------------------------------------------- lattices and classes

@dataclass
class LatticeRep:
    """L = (O_D + a^{-1}) alpha with a = (1); alpha stored as numerator coordinates / den."""

    order: QuatOrder
    gamma: HermitianMatrix
    alpha_num: np.ndarray | None = None  # (2, 2, 8) coordinates
    alpha_den: int = 1
    stabilizer: np.ndarray | None = None  # (N, 2, 2, 8) elements in gamma coordinates
    ideal_a: OrderIdeal | None = None

    @cached_property
    def form(self) -> HermForm:
        return HermForm(self.order, self.gamma)

    @property
    def stabilizer_order(self) -> int:
        return 0 if self.stabilizer is None else len(self.stabilizer)

    def alpha(self) -> list[list[QuatElement]]:
        return mat2_elements(self.order, self.alpha_num, self.alpha_den)

    @cached_property
    def discriminant(self) -> Ideal:
        return Ideal.principal(self.gamma.det_D())

    @cached_property
    def min_count(self) -> int:
        """Number of x with H(x, x) = 1 (an isometry invariant)."""
        return count_vectors(self.form, 1)


def count_vectors(form: HermForm, value, basis=None, scale=1) -> int:
    F = form.O.F
    value = F.coerce(value)
    c = F.coerce(scale)
    G = form.gram(c, basis)
    Gr, T = lll_gram(G)
    tgt = value.int_coords()
    B = np.eye(16, dtype=np.int64) if basis is None else np.asarray(basis, dtype=np.int64)
    Bred = np.array(T, dtype=np.int64) @ B
    vs = list(iter_vectors(Gr, 2 * (value * c).trace()))
    if not vs:
        return 0
    X = np.array(vs, dtype=np.int64) @ Bred
    vals = form.values(X)
    # values are H(x, x) scaled by nothing; compare with value * (1) in original form
    return int(((vals[:, 0] == tgt[0]) & (vals[:, 1] == tgt[1])).sum())


@dataclass
class ClassSet:
    classes: list[LatticeRep]
    mass: Fraction
    sigma_u: tuple = ((), ())
    aux_prime: PrimeIdeal | None = None

    @property
    def stabilizer_orders(self) -> list[int]:
        return [L.stabilizer_order for L in self.classes]

    def __len__(self):
        return len(self.classes)


def stabilizer(O: QuatOrder, L: LatticeRep) -> np.ndarray:
    """Gamma-bar of L in gamma coordinates: the union over u in U_F^+ of S(u; L, L).

    Both g and -g are kept; they are distinct elements of the finite group.
    """
    out = []
    for u in tp_units_mod_squares(O.F):
        out += represent_hermitian(O, L.gamma, L.gamma.scale(u), form=L.form)
    return np.array(out, dtype=np.int64)


def mass(F: QuadraticField, sigma=()) -> Fraction:
    if sigma:
        raise NotImplementedError("only Sigma = empty is supported")
    return Fraction(1, 16) * zeta_special_values(F, -1) * zeta_special_values(F, -3)


def equivalence_test(O: QuatOrder, L1: LatticeRep | HermitianMatrix, L2: LatticeRep | HermitianMatrix,
                     return_witness: bool = False):
    """Is there beta in GL_2(O) and n in U_F^+ with beta gamma_1 beta-bar^T = n gamma_2 ?"""
    g1 = L1.gamma if isinstance(L1, LatticeRep) else L1
    g2 = L2.gamma if isinstance(L2, LatticeRep) else L2
    f1 = L1.form if isinstance(L1, LatticeRep) else HermForm(O, g1)
    f2 = L2.form if isinstance(L2, LatticeRep) else HermForm(O, g2)
    if Ideal.principal(g1.det_D()) != Ideal.principal(g2.det_D()):
        return (False, None) if return_witness else False
    if count_vectors(f1, 1) != count_vectors(f2, 1):
        return (False, None) if return_witness else False
    for n in tp_units_mod_squares(O.F):
        sol = represent_hermitian(O, g1, g2.scale(n), limit=1, form=f1)
        if sol:
            return (True, sol[0]) if return_witness else True
    return (False, None) if return_witness else False


def _ideals_of_norm(F: QuadraticField, n: int) -> list[Ideal]:
    fac = factor_integer(n)
    opts = [[Ideal.unit(F)]]
    for p, e in fac.items():
        choices = []
        primes = factor_rational_prime(p, F)
        if len(primes) == 2:
            P1, P2 = primes[0][0], primes[1][0]
            for k in range(e + 1):
                choices.append(P1 ** k * P2 ** (e - k))
        else:
            P, ram = primes[0]
            if P.f == 2:
                if e % 2:
                    return []
                choices.append(P ** (e // 2))
            else:
                choices.append(P ** e)
        opts.append(choices)
    out = []
    for combo in product(*opts):
        I = Ideal.unit(F)
        for J in combo:
            I = I * J
        out.append(I)
    return out


def _tp_elements_by_norm(F: QuadraticField, max_norm: int):
    """Totally positive integers modulo unit squares, ordered by (norm, trace)."""
    units = tp_units_mod_squares(F)
    for n in range(1, max_norm + 1):
        batch = []
        for I in _ideals_of_norm(F, n):
            try:
                g = I.tp_generator()
            except ValueError:
                continue
            for u in units:
                batch.append(g * u)
        batch.sort(key=lambda a: (a.trace(), a.y))
        yield from batch


def _coset_reps(O: QuatOrder, s: FieldElement) -> list[np.ndarray]:
    """Representatives of O / sO, lexicographic in Z-coordinates."""
    rows = O.mul(O.scalar(*s.int_coords())[None, :], np.eye(8, dtype=np.int64))
    H = hnf(rows.tolist())
    diag = [H[i][i] for i in range(8)]
    reps = []
    for c in product(*[range(d) for d in diag]):
        reps.append(np.array(c, dtype=np.int64))
    return reps


def enumerate_classes(O: QuatOrder, max_s_norm: int = 64, aux_prime: PrimeIdeal | None = None,
                      log=None) -> ClassSet:
    """Class set of the principal genus (Algorithm: candidates [[s, r-bar], [r, t]]).

    Candidates are tried with s by (norm, trace), r over O/sO, and
    t = (nr(r) + u)/s; new classes are accepted until the accumulated mass
    equals the mass formula.
    """
    F = O.F
    D = O.D
    if not narrow_class_number_one(F):
        raise ValueError("the narrow class number of F must be 1")
    fin, inf = ramified_primes(D)
    if fin or len(inf) != 2:
        raise ValueError("D must be ramified exactly at the two infinite places")
    target = mass(F)
    if aux_prime is None:
        aux_prime = factor_rational_prime(2, F)[0][0]
    classes: list[LatticeRep] = []
    acc = Fraction(0)
    units = tp_units_mod_squares(F)
    for s in _tp_elements_by_norm(F, max_s_norm):
        for rc in _coset_reps(O, s):
            r = O.element(rc)
            for u in units:
                t = (r.nr() + u) / s
                if not t.is_integral():
                    continue
                gam = HermitianMatrix(s, r, t)
                cand = LatticeRep(O, gam)
                if any(equivalence_test(O, L, cand) for L in classes):
                    continue
                cand.stabilizer = stabilizer(O, cand)
                a_num, a_den = solve_alpha(O, gam, aux_prime)
                cand.alpha_num, cand.alpha_den = a_num, a_den
                classes.append(cand)
                acc += Fraction(1, len(cand.stabilizer))
                if log:
                    log(f"class {len(classes)}: s={s} |Gamma|={len(cand.stabilizer)} mass {acc}/{target}")
                if acc == target:
                    return ClassSet(classes, acc, ((), (aux_prime,)), aux_prime)
                if acc > target:
                    raise ArithmeticError("accumulated mass exceeds the mass formula")
    raise RuntimeError(f"mass not reached with s of norm <= {max_s_norm} ({acc} < {target})")


# ---------------------------------------------------------------- alpha

def _element_of_norm(O: QuatOrder, value: FieldElement) -> np.ndarray | None:
    """Some x in O with nr(x) = value (value totally positive integral)."""
    F = O.F
    # Gram of Tr trd(x x-bar) = 2 Tr nr(x) on O
    l = [(F.from_coords(int(a), int(b))).trace() for a, b in O.trd_matrix]
    Gn = np.zeros((8, 8), dtype=object)
    for i in range(8):
        for j in range(8):
            z = O.mul(np.eye(8, dtype=np.int64)[i], O.conj(np.eye(8, dtype=np.int64)[j]))
            Gn[i, j] = int(sum(int(z[k]) * int(l[k]) for k in range(8)))
    tgt = value.int_coords()
    Gr, T = lll_gram(Gn.tolist())
    T = np.array(T, dtype=np.int64)
    for v in iter_vectors(Gr, 2 * value.trace()):
        x = np.array(v, dtype=np.int64) @ T
        n = O.nr(x)
        if (int(n[0]), int(n[1])) == tgt:
            return x
    return None


def solve_alpha(O: QuatOrder, gamma: HermitianMatrix, q: PrimeIdeal, max_k: int = 8):
    """alpha lower triangular with alpha alpha-bar^T = gamma, entries in O[1/q].

    Returns (numerator coordinates (2, 2, 8), integer denominator m) so that
    alpha = numerator / m.  m is a power of N(q) up to sign-free scaling.
    """
    F = O.F
    D = O.D
    pi = q.tp_generator()
    s, r, t = gamma.s, gamma.r, gamma.t
    dt = gamma.det_D()
    xs = None
    for k in range(max_k + 1):
        x = _element_of_norm(O, s * pi ** (2 * k))
        if x is not None:
            xs = (O.element(x) / pi ** k, k)
            break
    if xs is None:
        raise ValueError(f"no element of norm s*q^2k found for k <= {max_k}")
    xq, _ = xs
    yq = r * xq / s  # y x-bar = r
    zq = None
    for k in range(max_k + 1):
        v = dt / s * pi ** (2 * k)
        if not v.is_integral():
            continue
        z = _element_of_norm(O, v)
        if z is not None:
            zq = O.element(z) / pi ** k
            break
    if zq is None:
        raise ValueError(f"no element of norm det/s * q^2k found for k <= {max_k}")
    alpha = [[xq, D(0)], [yq, zq]]
    # clear denominators by a power of the norm of pi (a rational integer)
    m = 1
    N = abs(int(pi.norm()))
    while True:
        try:
            num = mat2(O, [[e * m for e in row] for row in alpha])
            break
        except ValueError:
            m *= N
            if m > N ** (4 * max_k + 8):
                raise
    check = HermitianMatrix.identity(D).transform(alpha)
    if check != gamma:
        raise ArithmeticError("alpha alpha-bar^T != gamma")
    return num, m


# ---------------------------------------------------------------- invariants

def _zbasis_rows(O: QuatOrder, alpha_num, den: int):
    """Rational Z-basis (rows, Q^16 coordinates) of O^2 alpha."""
    B = []
    for i in range(2):
        for l in range(8):
            e = np.zeros(8, dtype=np.int64)
            e[l] = 1
            row = [O.mul(e, alpha_num[i, j]) for j in range(2)]
            B.append([Fraction(int(v), den) for v in np.concatenate(row)])
    return B


def lattice_invariants(O: QuatOrder, L: LatticeRep, A: HermitianMatrix | None = None):
    """(nr(nu_A(L)), Z-basis of L^# in gamma coordinates, discriminant ideal, [L^# : L]).

    The norm ideal nu_A(L) is a two-sided O_D-ideal; it is returned through its
    reduced norm, an O_F ideal (so nu = c O_D gives (c)^2).

    In gamma coordinates L is O^2 with form gamma, so L^# = {u : H(u, O^2) in O}.
    Also returns the Z-index [L^# : L], which equals N(disc)^4.
    """
    form = L.form
    F = O.F
    # norm ideal: generated by H(e_a, e_b) entries; as O_F ideal take nr and traces
    gens = []
    T = form.T
    els = set()
    for a in range(16):
        for b in range(16):
            z = T[a, b]
            if z.any():
                els.add(tuple(int(v) for v in z))
    two_sided = OrderIdeal(O, [O.element(np.array(z)) for z in els]) if els else None
    nu = two_sided.nr() if two_sided is not None else None
    # dual: u with sum_a u_a T[a, b, :] integral for all b
    C = T.transpose(0, 1, 2).reshape(16, 16 * 8)
    H = hnf(C.T.tolist())  # lattice spanned by columns of C, rows of H
    # L^# = dual lattice of span(columns) -> inverse transpose
    M = [[Fraction(v) for v in row] for row in H]
    inv = _inv_frac(M)
    dual = [list(r) for r in zip(*inv)]
    idx = abs(det_int(H))
    disc = Ideal.principal(L.gamma.det_D())
    return nu, dual, disc, idx


def _inv_frac(M):
    n = len(M)
    A = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [r[n:] for r in A]


def lattice_index(O: QuatOrder, g) -> Ideal:
    """[L : L g] for g in GL_2(D) given as 2x2 QuatElements: the ideal (det_D(g g-bar^T))."""
    D = O.D
    h = HermitianMatrix.identity(D).transform(g)
    return Ideal.principal(h.det_D())


def genus_tests(O: QuatOrder, L: LatticeRep | HermitianMatrix) -> dict:
    """Modularity and principal-genus verdicts (both criteria are computed)."""
    gam = L.gamma if isinstance(L, LatticeRep) else L
    if not gam.is_totally_positive():
        return {"is_modular": False, "in_principal_genus": False, "reason": "not totally positive"}
    try:
        mat2(O, gam.matrix())
    except ValueError:
        return {"is_modular": False, "in_principal_genus": False, "reason": "not integral"}
    rep = L if isinstance(L, LatticeRep) else LatticeRep(O, gam)
    nu, dual, disc, idx = lattice_invariants(O, rep)
    dsq = disc.is_square()
    modular = _is_modular(O, rep, nu)
    # for a maximal (here: modular) lattice, a totally positive gamma with square
    # det_D lies in the principal genus; both readings must then agree
    crit_prop = gam.is_totally_positive() and dsq
    crit_cor = modular and dsq
    if modular and crit_prop != crit_cor:
        raise AssertionError("principal-genus criteria disagree")
    return {"is_modular": modular, "in_principal_genus": crit_cor, "index": idx}


def _ideal_sqrt(I: Ideal) -> Ideal | None:
    out = Ideal.unit(I.F)
    for P, e in I.factor().items():
        if e % 2:
            return None
        out = out * P ** (e // 2)
    return out


def _is_modular(O, L, nu) -> bool:
    # nu_A(L) = c O_D with nr = (c)^2; L^# = nu^{-1} L iff H/c is unimodular,
    # i.e. the Gram of Tr trd(H/c) has the determinant of the standard form
    if not nu.is_integral():
        return False
    root = _ideal_sqrt(nu)
    if root is None:
        return False
    form = L.form
    try:
        G = form.gram(root.tp_generator().inverse())
    except (ArithmeticError, ValueError):
        return False
    return abs(det_int(G)) == _unimodular_det(O)


def _unimodular_det(O):
    form = HermForm(O, HermitianMatrix.identity(O.D))
    return abs(det_int(form.gram(1)))


# ---------------------------------------------------------------- theta series

@dataclass
class ThetaSeries:
    counts: dict  # ideal label (norm, generator) -> number of Gamma-orbits
    raw: dict = field(default_factory=dict)  # same keys -> number of vectors
    tag: str = "(1)"


def _orbits_of_vectors(group_R, X) -> list[int]:
    """Orbit sizes of the rows of X under right multiplication by the matrices group_R."""
    keys = {tuple(r): i for i, r in enumerate(X.tolist())}
    seen = np.zeros(len(X), dtype=bool)
    sizes = []
    for i in range(len(X)):
        if seen[i]:
            continue
        imgs = np.einsum("a,gab->gb", X[i], group_R)
        orb = {keys[tuple(r)] for r in imgs.tolist()}
        for j in orb:
            seen[j] = True
        sizes.append(len(orb))
    return sizes


def theta_coeffs(O: QuatOrder, L: LatticeRep, bound: int) -> ThetaSeries:
    """r_L(m) for integral m with N(m) <= bound: Gamma-orbits of vectors v with (H(v, v)) = m."""
    F = O.F
    form = L.form
    if L.stabilizer is None:
        L.stabilizer = stabilizer(O, L)
    R = np.array([right_action_matrix(O, g) for g in L.stabilizer])
    counts, raw = {}, {}
    for n in range(1, bound + 1):
        for I in _ideals_of_norm(F, n):
            try:
                g = I.tp_generator()
            except ValueError:
                continue
            X = []
            for u in tp_units_mod_squares(F):
                X += _vectors_with_value(form, g * u)
            key = (n, str(g))
            if not X:
                counts[key] = raw[key] = 0
                continue
            X = np.array(X, dtype=np.int64)
            sizes = _orbits_of_vectors(R, X)
            counts[key] = len(sizes)
            raw[key] = len(X)
    return ThetaSeries(counts, raw)


def _vectors_with_value(form: HermForm, value: FieldElement) -> list:
    G = form.gram(1)
    Gr, T = lll_gram(G)
    T = np.array(T, dtype=np.int64)
    tgt = value.int_coords()
    out = []
    for v in iter_vectors(Gr, 2 * value.trace()):
        x = np.array(v, dtype=np.int64) @ T
        if form.value(x) == tgt:
            out.append(x)
    return out


# ---------------------------------------------------------------- Hecke sets (direct route)

def hecke_theta_sets(O: QuatOrder, i: int, P: PrimeIdeal, La: LatticeRep, Lb: LatticeRep):
    """Gamma_a-orbit representatives of S(u; a, b) = {g : g gamma_b g-bar^T = u gamma_a}, (u) = P^i.

    Each g maps L_b onto a sublattice of L_b isometric to L_a scaled by u,
    so len(result) = |Theta_i(P; a, b)|.  Rank of the reduction is checked
    for i = 1 (rank 2 in M_4(F_P)).
    """
    from .quatalg import local_splitting
    u = P.tp_generator() ** i
    sols = represent_hermitian(O, Lb.gamma, La.gamma.scale(u), form=Lb.form)
    if not sols:
        return []
    S = np.array(sols, dtype=np.int64)
    G = La.stabilizer
    keys = {s.tobytes(): k for k, s in enumerate(S)}
    seen = np.zeros(len(S), dtype=bool)
    reps = []
    for k in range(len(S)):
        if seen[k]:
            continue
        imgs = mat2_mul(O, G, S[k][None])
        for im in imgs:
            j = keys.get(np.ascontiguousarray(im).tobytes())
            if j is None:
                raise ArithmeticError("S(u) is not stable under the stabilizer")
            seen[j] = True
        reps.append(S[k])
    if i == 1 and len(reps):
        rho = local_splitting(O, P, 1)
        from .flags import rank_over
        for g in reps:
            if rank_over(rho.ring, rho.matrix(g)) != 2:
                raise AssertionError("an element of Theta_1 does not have rank 2 mod P")
    return reps
