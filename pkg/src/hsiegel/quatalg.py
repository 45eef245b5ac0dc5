"""Quaternion algebras (a, b / F) over a real quadratic field, their orders
and splitting maps modulo prime powers.

Orders are handled through integer coordinates: an O_F-basis f_1..f_4 of the
order fixes the Z-basis (f_1, .., f_4, w f_1, .., w f_4), and all products,
conjugates, norms and traces become integer tensors.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import gcd

import numpy as np

from .exactnum import (FieldElement, Ideal, PrimeIdeal, QuadraticField, ResidueRing,
                       factor_integer, factor_rational_prime, residue_field, residue_ring)
from .zlattice import det_int, hnf

__all__ = [
    "QuatAlgebra", "QuatElement", "QuatOrder", "OrderIdeal", "SplittingMap",
    "conj_nr_tr", "ramified_primes", "verify_maximal_order", "local_splitting",
    "hamilton_order", "RamifiedPrimeError",
]


class RamifiedPrimeError(ValueError):
    pass


class QuatAlgebra:
    """D = (a, b / F): i^2 = a, j^2 = b, k = ij = -ji."""

    def __init__(self, F: QuadraticField, a, b):
        self.F = F
        self.a = F.coerce(a)
        self.b = F.coerce(b)
        if not self.a or not self.b:
            raise ValueError("structure constants must be nonzero")

    def __repr__(self):
        return f"QuatAlgebra(d={self.F.d}, a={self.a}, b={self.b})"

    def __eq__(self, o):
        return isinstance(o, QuatAlgebra) and (self.F, self.a, self.b) == (o.F, o.a, o.b)

    def __hash__(self):
        return hash((self.F.d, self.a, self.b))

    def __call__(self, w=0, x=0, y=0, z=0) -> "QuatElement":
        return QuatElement(self, w, x, y, z)

    def one(self) -> "QuatElement":
        return QuatElement(self, 1)

    def basis(self):
        return [self(1), self(0, 1), self(0, 0, 1), self(0, 0, 0, 1)]


class QuatElement:
    __slots__ = ("D", "c")

    def __init__(self, D: QuatAlgebra, w=0, x=0, y=0, z=0):
        F = D.F
        self.D = D
        self.c = (F.coerce(w), F.coerce(x), F.coerce(y), F.coerce(z))

    @classmethod
    def _raw(cls, D, c):
        e = object.__new__(cls)
        e.D, e.c = D, c
        return e

    def __add__(self, o):
        o = self._co(o)
        return QuatElement._raw(self.D, tuple(s + t for s, t in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._co(o)
        return QuatElement._raw(self.D, tuple(s - t for s, t in zip(self.c, o.c)))

    def __rsub__(self, o):
        return self._co(o) - self

    def __neg__(self):
        return QuatElement._raw(self.D, tuple(-s for s in self.c))

    def _co(self, o) -> "QuatElement":
        if isinstance(o, QuatElement):
            if o.D != self.D:
                raise TypeError("quaternions from different algebras")
            return o
        return QuatElement(self.D, o)

    def __mul__(self, o):
        if not isinstance(o, QuatElement):
            s = self.D.F.coerce(o)
            return QuatElement._raw(self.D, tuple(t * s for t in self.c))
        a, b = self.D.a, self.D.b
        w1, x1, y1, z1 = self.c
        w2, x2, y2, z2 = o.c
        ab = a * b
        return QuatElement._raw(self.D, (
            w1 * w2 + a * x1 * x2 + b * y1 * y2 - ab * z1 * z2,
            w1 * x2 + x1 * w2 - b * y1 * z2 + b * z1 * y2,
            w1 * y2 + y1 * w2 + a * x1 * z2 - a * z1 * x2,
            w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
        ))

    def __rmul__(self, o):
        return self * o  # scalars are central

    def __truediv__(self, o):
        if isinstance(o, QuatElement):
            return self * o.inverse()
        s = self.D.F.coerce(o).inverse()
        return self * s

    def inverse(self):
        return self.conj() * self.nr().inverse()

    def __eq__(self, o):
        if not isinstance(o, QuatElement):
            o = QuatElement(self.D, o)
        return self.D == o.D and self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return "QuatElement(" + ", ".join(str(t) for t in self.c) + ")"

    def conj(self) -> "QuatElement":
        w, x, y, z = self.c
        return QuatElement._raw(self.D, (w, -x, -y, -z))

    def nr(self) -> FieldElement:
        a, b = self.D.a, self.D.b
        w, x, y, z = self.c
        return w * w - a * x * x - b * y * y + a * b * z * z

    def trd(self) -> FieldElement:
        return self.c[0] * 2

    def is_scalar(self) -> bool:
        return not any(self.c[1:])

    def qcoords(self) -> list[Fraction]:
        """Coordinates over Q in the basis (1, sqrt d) x (1, i, j, k)."""
        return [t for e in self.c for t in (e.x, e.y)]


def conj_nr_tr(u: QuatElement):
    return u.conj(), u.nr(), u.trd()


def _inv_rational(M):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [x / pv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


class QuatOrder:
    """An O_F-order of D, free over O_F with basis f_1..f_4.

    Integer coordinates refer to the Z-basis (f_1, .., f_4, w f_1, .., w f_4).
    """

    def __init__(self, D: QuatAlgebra, of_basis, check: bool = True):
        self.D = D
        self.F = D.F
        self.of_basis = [D(*b.c) if isinstance(b, QuatElement) else D(*b) for b in of_basis]
        if len(self.of_basis) != 4:
            raise ValueError("an O_F-basis of a quaternion order has 4 elements")
        w = self.F.omega
        self.zbasis = self.of_basis + [b * w for b in self.of_basis]
        Q = [b.qcoords() for b in self.zbasis]
        if det_int([[x * _den(Q) for x in r] for r in Q]) == 0:
            raise ValueError("basis is degenerate")
        self._Q = Q
        self._Qinv = _inv_rational(Q)
        if check:
            self.check_order()

    def __repr__(self):
        return f"QuatOrder({self.D!r})"

    # ------------------------------------------------------------ coordinates
    def coords(self, u: QuatElement, exact: bool = True):
        """Z-coordinates of u (Fractions unless u lies in the order)."""
        q = u.qcoords()
        v = [sum(q[i] * self._Qinv[i][j] for i in range(8)) for j in range(8)]
        if exact:
            if any(t.denominator != 1 for t in v):
                raise ValueError(f"{u} is not in the order")
            return [int(t) for t in v]
        return v

    def contains(self, u: QuatElement) -> bool:
        return all(t.denominator == 1 for t in self.coords(u, exact=False))

    def element(self, c) -> QuatElement:
        out = self.D(0)
        for ci, b in zip(c, self.zbasis):
            if ci:
                out = out + b * int(ci)
        return out

    def check_order(self):
        if not self.contains(self.D.one()):
            raise ValueError("order does not contain 1")
        for b in self.zbasis:
            if not (b.nr().is_integral() and b.trd().is_integral()):
                raise ValueError(f"basis element {b} is not integral")
        for x in self.zbasis:
            for y in self.zbasis:
                if not self.contains(x * y):
                    raise ValueError("basis is not closed under multiplication")

    # ------------------------------------------------------------ integer tensors
    @cached_property
    def mult(self) -> np.ndarray:
        """mult[i, j, :] = coordinates of b_i * b_j."""
        T = np.zeros((8, 8, 8), dtype=np.int64)
        for i, x in enumerate(self.zbasis):
            for j, y in enumerate(self.zbasis):
                T[i, j] = self.coords(x * y)
        return T

    @cached_property
    def conj_matrix(self) -> np.ndarray:
        """Row vector x -> x @ C gives the coordinates of conj(x)."""
        return np.array([self.coords(b.conj()) for b in self.zbasis], dtype=np.int64)

    @cached_property
    def one_coords(self) -> np.ndarray:
        return np.array(self.coords(self.D.one()), dtype=np.int64)

    @cached_property
    def omega_coords(self) -> np.ndarray:
        return np.array(self.coords(self.D.one() * self.F.omega), dtype=np.int64)

    @cached_property
    def trd_matrix(self) -> np.ndarray:
        """x @ T gives the O_F-coordinates (a, b) of trd(x) = a + b w."""
        return np.array([b.trd().int_coords() for b in self.zbasis], dtype=np.int64)

    @cached_property
    def nr_forms(self) -> np.ndarray:
        """Upper triangular U with nr(x) coordinates = (x U[0] x, x U[1] x)."""
        U = np.zeros((2, 8, 8), dtype=np.int64)
        zb = self.zbasis
        for i in range(8):
            U[:, i, i] = zb[i].nr().int_coords()
            for j in range(i + 1, 8):
                U[:, i, j] = (zb[i] * zb[j].conj()).trd().int_coords()
        return U

    @cached_property
    def of_struct(self) -> np.ndarray:
        """O_F structure constants: f_i f_j = sum_k s[i, j, k] f_k with s as (a, b) pairs."""
        S = np.zeros((4, 4, 4, 2), dtype=np.int64)
        for i in range(4):
            for j in range(4):
                c = self.mult[i, j]
                S[i, j, :, 0] = c[:4]
                S[i, j, :, 1] = c[4:]
        return S

    def mul(self, x, y) -> np.ndarray:
        """Batched product of coordinate vectors."""
        return np.einsum("...i,...j,ijk->...k", x, y, self.mult)

    def conj(self, x) -> np.ndarray:
        return np.asarray(x) @ self.conj_matrix

    def nr(self, x) -> np.ndarray:
        x = np.asarray(x)
        return np.stack([np.einsum("...i,ij,...j->...", x, self.nr_forms[k], x) for k in range(2)], axis=-1)

    def trd(self, x) -> np.ndarray:
        return np.asarray(x) @ self.trd_matrix

    def scalar(self, a, b=0) -> np.ndarray:
        """Coordinates of the scalar a + b w."""
        return a * self.one_coords + b * self.omega_coords

    def scalar_mul(self, c: FieldElement, x) -> np.ndarray:
        a, b = c.int_coords()
        return self.mul(self.scalar(a, b), x)

    @cached_property
    def discriminant_norm(self) -> int:
        """N(disc(O)) from the Gram determinant of Tr_{F/Q} o trd(xy)."""
        G = [[int((x * y).trd().trace()) for y in self.zbasis] for x in self.zbasis]
        det = abs(det_int(G))
        D4 = self.F.disc ** 4
        if det % D4:
            raise ValueError("unexpected discriminant")
        n2 = det // D4
        r = int(round(n2 ** 0.5))
        while r * r > n2:
            r -= 1
        while (r + 1) * (r + 1) <= n2:
            r += 1
        if r * r != n2:
            raise ValueError("discriminant is not a square")
        return r


def _den(Q):
    den = 1
    for r in Q:
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
    return den


class OrderIdeal:
    """A Z-lattice of rank 8 in D stable under an order (left, right or both)."""

    def __init__(self, order: QuatOrder, gens, side: str = "two-sided"):
        self.order = order
        self.side = side
        rows = []
        den = 1
        coords = [order.coords(g, exact=False) for g in gens]
        for c in coords:
            for t in c:
                den = den * t.denominator // gcd(den, t.denominator)
        for c in coords:
            rows.append([int(t * den) for t in c])
        # close under the order action
        mt = order.mult
        while True:
            cur = hnf(rows)
            new = list(cur)
            for r in cur:
                rv = np.array(r, dtype=object)
                for i in range(8):
                    e = np.zeros(8, dtype=object)
                    e[i] = 1
                    if side in ("left", "two-sided"):
                        new.append(list(np.einsum("i,j,ijk->k", e, rv, mt.astype(object))))
                    if side in ("right", "two-sided"):
                        new.append(list(np.einsum("i,j,ijk->k", rv, e, mt.astype(object))))
            nxt = hnf(new)
            if nxt == cur:
                break
            rows = nxt
        self.basis = cur
        self.den = den

    @classmethod
    def unit(cls, order: QuatOrder) -> "OrderIdeal":
        return cls(order, [order.D.one()])

    def __eq__(self, o):
        return isinstance(o, OrderIdeal) and (self.basis, self.den) == (o.basis, o.den)

    def index_norm(self) -> Fraction:
        return Fraction(abs(det_int(self.basis)), self.den ** 8)

    def nr(self) -> Ideal:
        """Reduced norm ideal, generated by nr of the basis and trd of products."""
        els = [self.order.element(r) / self.den for r in self.basis]
        gens = [e.nr() for e in els] + [(x * y.conj()).trd() for x in els for y in els]
        return Ideal.from_generators(self.order.F, gens)


def hamilton_order(d: int = 2) -> QuatOrder:
    """The maximal order Z[sqrt2][e1, e2] of (-1,-1 / Q(sqrt 2)).

    e1 = (1+i)/sqrt2, e2 = (1+j)/sqrt2, e3 = e1 e2 = (1+i+j+k)/2, e4 = e2 e1.
    For other d the Hurwitz order O_F<1, i, j, (1+i+j+k)/2> is returned.
    """
    F = QuadraticField(d)
    D = QuatAlgebra(F, -1, -1)
    if d == 2:
        s = F(0, Fraction(1, 2))  # 1/sqrt2
        e1 = D(1, 1) * s
        e2 = D(1, 0, 1) * s
        return QuatOrder(D, [D.one(), e1, e2, e1 * e2])
    h = D(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    return QuatOrder(D, [D.one(), D(0, 1), D(0, 0, 1), h])


# ------------------------------------------------------------ ramification

def _hilbert_odd(a: FieldElement, b: FieldElement, P: PrimeIdeal) -> int:
    F = a.F
    va, vb = Ideal.principal(a).valuation(P), Ideal.principal(b).valuation(P)
    pi = _uniformizer(P)
    u = a / pi ** va
    v = b / pi ** vb
    k = residue_field(P)
    q = k.q
    ue, ve = k.element(u), k.element(v)
    sign = -1 if (va * vb * (q - 1) // 2) % 2 else 1
    leg = lambda t: 1 if _power(k, t, (q - 1) // 2) == k.one else -1
    return sign * (leg(ue) ** vb) * (leg(ve) ** va)


def _power(k: ResidueRing, t: int, e: int) -> int:
    out = k.one
    while e:
        if e & 1:
            out = int(k.mul[out, t])
        t = int(k.mul[t, t])
        e >>= 1
    return out


def _uniformizer(P: PrimeIdeal) -> FieldElement:
    F = P.F
    for g in P.generators() + [a + b for a in P.generators() for b in P.generators()]:
        if Ideal.principal(g).valuation(P) == 1:
            return g
    if P.e == 1 and P.f == 2:
        return F(P.p)
    raise ValueError("no uniformizer found")


def ramified_primes(D: QuatAlgebra) -> tuple[list[PrimeIdeal], list[int]]:
    """Finite primes and real places (0 = sqrt d > 0, 1 = conjugate) where D ramifies.

    Odd primes use the tame Hilbert symbol; the dyadic places are fixed by
    the product formula when 2 has a single prime above it and otherwise by
    the 2-adic Hilbert symbol through the embedding F -> Q_2.
    """
    F = D.F
    a, b = D.a, D.b
    inf = [v for v in range(2) if a.signs()[v] < 0 and b.signs()[v] < 0]
    n = abs(a.norm() * b.norm())
    primes = set(factor_integer(n.numerator)) | set(factor_integer(n.denominator)) | {2}
    fin = []
    dyadic = []
    for p in sorted(primes):
        for P, _ in factor_rational_prime(p, F):
            if p == 2:
                dyadic.append(P)
            elif _hilbert_odd(a, b, P) == -1:
                fin.append(P)
    if len(dyadic) == 1:
        if (len(fin) + len(inf)) % 2:
            fin.append(dyadic[0])
    else:
        for P in dyadic:
            if _hilbert_q2(a, b, P) == -1:
                fin.append(P)
    fin.sort(key=lambda P: (P.norm_int, P.key()))
    return fin, inf


def _hilbert_q2(a: FieldElement, b: FieldElement, P: PrimeIdeal) -> int:
    """Hilbert symbol at a split dyadic prime, where F_P = Q_2."""
    F = a.F
    K = 40
    mod = 2 ** K
    # root of x^2 - wt x - wn in Z_2 lying in P, by Hensel lifting
    r = next(t for t in range(2) if P.contains(F.omega - t))
    for _ in range(K):
        f = r * r - F.wt * r - F.wn
        fp = 2 * r - F.wt
        r = (r - f * pow(fp, -1, mod)) % mod

    def image(x: FieldElement):
        u, v = x.coords()
        num = (u.numerator * v.denominator + v.numerator * u.denominator * r)
        den = u.denominator * v.denominator
        return num, den

    def split(x):
        num, den = image(x)
        e = 0
        while num % 2 == 0:
            num //= 2
            e += 1
        while den % 2 == 0:
            den //= 2
            e -= 1
        return e, (num * pow(den, -1, 8)) % 8

    al, u = split(a)
    be, v = split(b)
    eps = lambda t: ((t - 1) // 2) % 2
    om = lambda t: ((t * t - 1) // 8) % 2
    e = eps(u) * eps(v) + al * om(v) + be * om(u)
    return -1 if e % 2 else 1


def verify_maximal_order(O: QuatOrder, D: QuatAlgebra | None = None) -> bool:
    """Maximal iff N(reduced discriminant) equals the product of N(P), P ramified."""
    D = D or O.D
    O.check_order()
    fin, _ = ramified_primes(D)
    target = 1
    for P in fin:
        target *= P.norm_int
    return O.discriminant_norm == target


# ------------------------------------------------------------ splitting

def _rank_ring(R: ResidueRing, rows) -> int:
    """Rank over a residue field (rows of index arrays)."""
    A = [list(map(int, r)) for r in rows]
    if not A:
        return 0
    n = len(A[0])
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
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


def _inverse_ring(R: ResidueRing, M):
    """Inverse of a square matrix over a local residue ring (unit pivots)."""
    n = len(M)
    A = [list(map(int, r)) + [R.one if i == j else 0 for j in range(n)] for i, r in enumerate(M)]
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
    return [r[n:] for r in A]


class SplittingMap:
    """Ring homomorphism O -> M_2(O_F/P^k), surjective with kernel P^k O.

    ``images[l]`` is the 2x2 image of the l-th Z-basis element, stored both as
    ring indices and as integer O_F-coordinates (u, v) so that batches of
    coordinate vectors can be mapped with two integer matrix products.
    """

    def __init__(self, order: QuatOrder, P: PrimeIdeal, k: int, images_uv: np.ndarray):
        self.order = order
        self.prime = P
        self.k = k
        self.ring = residue_ring(P ** k) if k > 1 else residue_field(P)
        self.uv = images_uv  # (8, 2, 2, 2) integer O_F coordinates
        self.images = self.ring.reduce(images_uv[..., 0], images_uv[..., 1])

    def __call__(self, x) -> np.ndarray:
        """Images of coordinate vectors (..., 8) as (..., 2, 2) ring indices."""
        x = np.asarray(x, dtype=np.int64)
        U = np.einsum("...l,lab->...ab", x, self.uv[..., 0])
        V = np.einsum("...l,lab->...ab", x, self.uv[..., 1])
        return self.ring.reduce(U, V)

    def vector(self, x) -> np.ndarray:
        """Images of vectors in O^2, (..., 16) -> (..., 2, 4) (Morita picture)."""
        x = np.asarray(x, dtype=np.int64)
        a = self(x[..., :8])
        b = self(x[..., 8:])
        return np.concatenate([a, b], axis=-1)

    def matrix(self, g) -> np.ndarray:
        """Image of a 2x2 matrix over O, (..., 2, 2, 8) -> (..., 4, 4)."""
        g = np.asarray(g, dtype=np.int64)
        m = self(g)  # (..., 2, 2, 2, 2)
        top = np.concatenate([m[..., 0, 0, :, :], m[..., 0, 1, :, :]], axis=-1)
        bot = np.concatenate([m[..., 1, 0, :, :], m[..., 1, 1, :, :]], axis=-1)
        return np.concatenate([top, bot], axis=-2)

    @cached_property
    def preimages(self) -> np.ndarray:
        """preimages[a, b] = Z-coordinates of an element mapping to E_ab."""
        R = self.ring
        # R-linear map R^4 (O_F-coordinates of f_1..f_4) -> M_2(R)
        M = [[int(self.images[l].reshape(4)[t]) for t in range(4)] for l in range(4)]
        Minv = _inverse_ring(R, M)  # rows: E_t = sum_l Minv[t][l] f_l
        out = np.zeros((2, 2, 8), dtype=np.int64)
        for t in range(4):
            for l in range(4):
                u, v = R.reps[Minv[t][l]]
                out[t // 2, t % 2, l] += u
                out[t // 2, t % 2, l + 4] += v
        # the w f_l part: element (u + v w) f_l has coordinates u at l and v at l+4
        return out

    def lift_matrix(self, m) -> np.ndarray:
        """Z-coordinates of an element of O with image m (2x2 ring indices)."""
        R = self.ring
        pre = self.preimages
        out = np.zeros(8, dtype=np.int64)
        O = self.order
        for a in range(2):
            for b in range(2):
                t = int(m[a][b])
                if t:
                    u, v = R.reps[t]
                    out += O.mul(O.scalar(int(u), int(v)), pre[a, b])
        return out

    def lift_vector(self, row) -> np.ndarray:
        """Element x of O^2 whose image is [row; 0] for a length-4 row of ring indices."""
        z = [0, 0]
        x1 = self.lift_matrix([[row[0], row[1]], z])
        x2 = self.lift_matrix([[row[2], row[3]], z])
        return np.concatenate([x1, x2])


@lru_cache(maxsize=None)
def local_splitting(O: QuatOrder, P: PrimeIdeal, k: int = 1) -> SplittingMap:
    """Splitting O/P^k O = M_2(O_F/P^k) for P unramified in D.

    A zero divisor z with nonzero trace is found by lexicographic search over
    small coordinate vectors; e = z/trd(z) is a rank one idempotent mod P,
    lifted to P^k by e <- 3e^2 - 2e^3.  The order then acts by left
    multiplication on the free rank two module (O/P^k O) e.
    """
    fin, _ = ramified_primes(O.D)
    if P in fin:
        raise RamifiedPrimeError(f"{P} ramifies in D")
    R1 = residue_field(P)
    R = residue_ring(P ** k) if k > 1 else R1
    S = O.of_struct  # (4,4,4,2)

    def to_ring(c8, ring):
        c8 = np.asarray(c8, dtype=np.int64)
        return ring.reduce(c8[..., :4], c8[..., 4:])

    # left multiplication by f_i on R^4, as index arrays: L[i][j] = f_i f_j in R^4
    fstruct = R.reduce(S[..., 0], S[..., 1])  # (4,4,4)

    def rmul(ring, fs, x, y):
        """Product of two R^4 vectors (O_F-coordinates over f_1..f_4)."""
        out = np.zeros(4, dtype=np.int64)
        for i in range(4):
            if x[i] == 0:
                continue
            for j in range(4):
                if y[j] == 0:
                    continue
                c = ring.mul[x[i], y[j]]
                out = ring.add[out, ring.mul[c, fs[i, j]]]
        return out

    fs1 = R1.reduce(S[..., 0], S[..., 1])
    one1 = to_ring(O.one_coords, R1)
    trd_map = O.trd_matrix[:4]  # trd(f_i) coordinates
    nrU = O.nr_forms

    # search z in R1^4 (canonical reps) lexicographically
    def nr_tr(x):
        lift = np.zeros(8, dtype=np.int64)
        for i in range(4):
            u, v = R1.reps[x[i]]
            lift[i], lift[i + 4] = u, v
        n = O.nr(lift)
        t = O.trd(lift)
        return R1.reduce(n[0], n[1]), R1.reduce(t[0], t[1])

    z = None
    for x in product(range(R1.size), repeat=4):
        if not any(x):
            continue
        n, t = nr_tr(x)
        if n == 0 and t != 0:
            z, tz = np.array(x), t
            break
    if z is None:
        raise RamifiedPrimeError("no split idempotent found")
    e1 = np.array([R1.mul[c, R1.inv[tz]] for c in z])
    # lift e to R
    e = np.array([R.reduce(*R1.reps[c]) for c in e1])
    for _ in range(k):
        e2 = rmul(R, fstruct, e, e)
        e3 = rmul(R, fstruct, e2, e)
        e = R.sub[R.mul[R.from_int(3), e2], R.mul[R.from_int(2), e3]]
    # basis of (O/P^k) e: f_a e, f_b e independent mod P
    fe = [rmul(R, fstruct, np.eye(4, dtype=np.int64)[i] * R.one, e) for i in range(4)]
    red = lambda v: [R1.reduce(*R.reps[c]) for c in v]
    basis = None
    for a in range(4):
        for b in range(a + 1, 4):
            if _rank_ring(R1, [red(fe[a]), red(fe[b])]) == 2:
                basis = (fe[a], fe[b])
                break
        if basis:
            break
    V = np.stack(basis, axis=1)  # 4x2
    # choose a 2x2 minor of V that is a unit
    minor = None
    for r1 in range(4):
        for r2 in range(r1 + 1, 4):
            det = R.sub[R.mul[V[r1, 0], V[r2, 1]], R.mul[V[r1, 1], V[r2, 0]]]
            if R.is_unit[det]:
                minor = (r1, r2)
                break
        if minor:
            break
    Minv = _inverse_ring(R, [list(V[minor[0]]), list(V[minor[1]])])
    images_uv = np.zeros((8, 2, 2, 2), dtype=np.int64)
    w_idx = R.reduce(*O.F.omega.int_coords())
    for i in range(4):
        fi = np.eye(4, dtype=np.int64)[i] * R.one
        cols = []
        for j in range(2):
            w = rmul(R, fstruct, fi, V[:, j])
            rhs = [w[minor[0]], w[minor[1]]]
            c = [R.add[R.mul[Minv[r][0], rhs[0]], R.mul[Minv[r][1], rhs[1]]] for r in range(2)]
            cols.append(c)
        mat = np.array(cols).T  # column j = coordinates of f_i v_j
        for s in range(2):
            for t in range(2):
                images_uv[i, s, t] = R.reps[mat[s, t]]
                images_uv[i + 4, s, t] = R.reps[R.mul[w_idx, mat[s, t]]]
    return SplittingMap(O, P, k, images_uv)
