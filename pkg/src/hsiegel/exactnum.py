"""Exact arithmetic for real quadratic fields.

Elements of F = Q(sqrt d) are pairs of Fractions, integers of O_F are handled
as integer coordinates in the basis {1, w} (w = sqrt d, or (1 + sqrt d)/2 when
d = 1 mod 4), and ideals are stored in Hermite normal form over that basis.
Finite quotients O_F/I are tabulated so that vectorised code can work with
plain integer indices.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt
from typing import Iterable

import numpy as np

Rational = Fraction

__all__ = [
    "Rational", "QuadraticField", "FieldElement", "Ideal", "PrimeIdeal",
    "ResidueRing", "ResidueField", "FieldMismatchError", "factor_rational_prime",
    "factor_integer", "is_totally_positive", "tp_units_mod_squares",
    "zeta_special_values", "residue_field", "residue_ring", "narrow_class_number_one",
]


class FieldMismatchError(TypeError):
    """Raised when elements of two different quadratic fields are combined."""


def _squarefree(d: int) -> bool:
    if d <= 1:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def factor_integer(n: int) -> dict[int, int]:
    """Trial division; the integers met here are small."""
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _sign(x: Fraction, y: Fraction, d: int) -> int:
    """Sign of x + y*sqrt(d), decided without floating point."""
    if y == 0:
        return (x > 0) - (x < 0)
    if x == 0:
        return (y > 0) - (y < 0)
    if (x > 0) == (y > 0):
        return 1 if x > 0 else -1
    lhs, rhs = x * x, d * y * y
    if lhs == rhs:
        return 0
    if lhs > rhs:
        return 1 if x > 0 else -1
    return 1 if y > 0 else -1


@lru_cache(maxsize=None)
def _field(d: int) -> "QuadraticField":
    return QuadraticField._make(d)


class QuadraticField:
    """The real quadratic field Q(sqrt d), d > 1 squarefree.

    Instances are interned, so ``QuadraticField(2) is QuadraticField(2)``.
    """

    def __new__(cls, d: int):
        return _field(int(d))

    @classmethod
    def _make(cls, d: int) -> "QuadraticField":
        if not _squarefree(d):
            raise ValueError(f"d = {d} is not a squarefree integer > 1")
        self = object.__new__(cls)
        self.d = d
        self.disc = d if d % 4 == 1 else 4 * d
        # w^2 = wt*w + wn
        if d % 4 == 1:
            self.wt, self.wn = 1, (d - 1) // 4
        else:
            self.wt, self.wn = 0, d
        return self

    def __reduce__(self):
        return (QuadraticField, (self.d,))

    def __repr__(self) -> str:
        return f"QuadraticField({self.d})"

    def __call__(self, x=0, y=0) -> "FieldElement":
        return FieldElement(self, x, y)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1, 0)

    @property
    def omega(self) -> "FieldElement":
        if self.d % 4 == 1:
            return FieldElement(self, Fraction(1, 2), Fraction(1, 2))
        return FieldElement(self, 0, 1)

    def from_coords(self, a, b) -> "FieldElement":
        """a + b*w."""
        if self.d % 4 == 1:
            return FieldElement(self, Fraction(a) + Fraction(b, 2), Fraction(b, 2))
        return FieldElement(self, a, b)

    def coerce(self, v) -> "FieldElement":
        if isinstance(v, FieldElement):
            if v.F is not self:
                raise FieldMismatchError(f"element of Q(sqrt {v.F.d}) used in Q(sqrt {self.d})")
            return v
        return FieldElement(self, v, 0)

    # integer coordinate arithmetic in the basis {1, w}
    def mul_coords(self, x1, y1, x2, y2):
        return (x1 * x2 + self.wn * y1 * y2, x1 * y2 + x2 * y1 + self.wt * y1 * y2)

    def norm_coords(self, x, y):
        # N(x + y w) = x^2 + wt*x*y - wn*y^2
        return x * x + self.wt * x * y - self.wn * y * y

    def conj_coords(self, x, y):
        # conj(w) = wt - w
        return (x + self.wt * y, -y)

    @cached_property
    def fundamental_unit(self) -> "FieldElement":
        """Smallest unit > 1, found by scanning the w-coordinate."""
        d = self.d
        y = 1
        while True:
            for target in (-4, 4) if d % 4 == 1 else (-1, 1):
                x2 = d * y * y + target
                if x2 > 0:
                    x = isqrt(x2)
                    if x * x == x2:
                        if d % 4 == 1:
                            if (x - y) % 2 == 0:
                                return FieldElement(self, Fraction(x, 2), Fraction(y, 2))
                        else:
                            return FieldElement(self, x, y)
            y += 1

    def units_up_to(self, k: int) -> list["FieldElement"]:
        eps = self.fundamental_unit
        out = []
        for e in range(-k, k + 1):
            u = eps ** e
            out += [u, -u]
        return out

    def element_of_norm(self, n: int, ideal: "Ideal | None" = None) -> "FieldElement | None":
        """An integer of norm +-n (lying in ``ideal`` if given), or None."""
        eps = self.fundamental_unit
        ebound = 2 * int(abs(eps.x)) + 2
        d = self.d
        ymax = isqrt(4 * abs(n) * ebound * ebound // d + 1) + 2
        for y in range(0, ymax + 1):
            for yy in ((y, -y) if y else (0,)):
                for target in (abs(n), -abs(n)):
                    # solve x^2 + wt*x*yy - wn*yy^2 = target
                    disc = self.wt * self.wt * yy * yy + 4 * (self.wn * yy * yy + target)
                    if disc < 0:
                        continue
                    s = isqrt(disc)
                    if s * s != disc:
                        continue
                    for num in (-self.wt * yy + s, -self.wt * yy - s):
                        if num % 2:
                            continue
                        a = self.from_coords(num // 2, yy)
                        if ideal is None or ideal.contains(a):
                            return a
        return None

    def tp_generator(self, ideal: "Ideal") -> "FieldElement":
        """Totally positive generator of an integral ideal with smallest trace."""
        a = self.element_of_norm(ideal.norm_int, ideal)
        if a is None or Ideal.principal(a) != ideal:
            raise ValueError(f"{ideal} is not principal")
        s1, s2 = a.signs()
        if s1 != s2:
            eps = self.fundamental_unit
            if eps.norm() != -1:
                raise ValueError(f"{ideal} has no totally positive generator")
            a = a * eps
            s1, _ = a.signs()
        if s1 < 0:
            a = -a
        eps = self.fundamental_unit
        if eps.norm() == 1:
            step = eps if is_totally_positive(eps) else -eps
        else:
            step = eps * eps
        best = None
        for b in (a,):
            while (b * step).trace() < b.trace():
                b = b * step
            while (b / step).trace() < b.trace():
                b = b / step
            key = (b.trace(), abs(b.y), -b.y)
            if best is None or key < best[0]:
                best = (key, b)
        return best[1]


class FieldElement:
    """x + y*sqrt(d) with rational x, y."""

    __slots__ = ("F", "x", "y")

    def __init__(self, F: QuadraticField, x=0, y=0):
        self.F = F
        self.x = Fraction(x)
        self.y = Fraction(y)

    def _c(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.F is not self.F:
                raise FieldMismatchError(f"Q(sqrt {self.F.d}) vs Q(sqrt {other.F.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.F, other, 0)
        return NotImplemented

    def __add__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return o
        return FieldElement(self.F, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.F, -self.x, -self.y)

    def __sub__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return o
        return FieldElement(self.F, self.x - o.x, self.y - o.y)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return o
        d = self.F.d
        return FieldElement(self.F, self.x * o.x + d * self.y * o.y, self.x * o.y + self.y * o.x)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in a quadratic field")
        return FieldElement(self.F, self.x / n, -self.y / n)

    def __truediv__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self._c(o) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = FieldElement(self.F, 1, 0)
        b = self
        while e:
            if e & 1:
                out = out * b
            b = b * b
            e >>= 1
        return out

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.y == 0 and self.x == o
        if not isinstance(o, FieldElement):
            return NotImplemented
        return self.F is o.F and self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.F.d, self.x, self.y))

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def __repr__(self):
        return f"FieldElement(d={self.F.d}, {self.x}, {self.y})"

    def __str__(self):
        if self.y == 0:
            return str(self.x)
        root = f"sqrt{self.F.d}"
        ys = "" if abs(self.y) == 1 else str(abs(self.y)) + "*"
        if self.x == 0:
            return ("-" if self.y < 0 else "") + ys + root
        return f"{self.x}{'-' if self.y < 0 else '+'}{ys}{root}"

    def conj(self) -> "FieldElement":
        return FieldElement(self.F, self.x, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x - self.F.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def signs(self) -> tuple[int, int]:
        """Signs under the embeddings sqrt d -> +sqrt d and -sqrt d."""
        return _sign(self.x, self.y, self.F.d), _sign(self.x, -self.y, self.F.d)

    def coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates (a, b) with self = a + b*w."""
        if self.F.d % 4 == 1:
            return self.x - self.y, 2 * self.y
        return self.x, self.y

    def is_integral(self) -> bool:
        a, b = self.coords()
        return a.denominator == 1 and b.denominator == 1

    def int_coords(self) -> tuple[int, int]:
        a, b = self.coords()
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError(f"{self} is not integral")
        return int(a), int(b)

    def to_json(self) -> list[str]:
        """[x, y, d] with x, y rendered as exact decimal/fraction strings."""
        return [str(self.x), str(self.y), str(self.F.d)]


def is_totally_positive(a: FieldElement) -> bool:
    s1, s2 = a.signs()
    return s1 > 0 and s2 > 0


def tp_units_mod_squares(F: QuadraticField) -> list[FieldElement]:
    """Totally positive units modulo squares of units."""
    eps = F.fundamental_unit
    if eps.norm() == -1:
        return [F.one]
    return [F.one, eps if is_totally_positive(eps) else -eps]


def narrow_class_number_one(F: QuadraticField) -> bool:
    """True iff h+(F) = 1: every prime up to the Minkowski bound is principal and N(eps) = -1."""
    if F.fundamental_unit.norm() != -1:
        return False
    bound = isqrt(F.disc) // 2 + 1
    for p in range(2, bound + 1):
        if len(factor_integer(p)) == 1 and factor_integer(p).get(p) == 1:
            for P, _ in factor_rational_prime(p, F):
                a = F.element_of_norm(P.norm_int, P)
                if a is None or Ideal.principal(a) != P:
                    return False
    return True


# ---------------------------------------------------------------- ideals

def _hnf2(vecs: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF (a, b, c) of the Z-span of integer pairs: basis a*(1,0), (b, c), 0 <= b < a."""
    rows = [list(v) for v in vecs if v[0] or v[1]]
    # gcd on second coordinate
    c, piv = 0, None
    for r in rows:
        if r[1] == 0:
            continue
        if piv is None:
            piv = r[:]
            continue
        # extended gcd combine piv and r on coordinate 1
        x, y = piv[1], r[1]
        g, s, t = _xgcd(x, y)
        new_piv = [s * piv[0] + t * r[0], g]
        other = [(y // g) * piv[0] - (x // g) * r[0], 0]
        piv = new_piv
        rows.append(other)
    a = 0
    for r in rows:
        if r[1] == 0:
            a = gcd(a, r[0])
    if piv is None:
        raise ValueError("rank deficient ideal basis")
    if piv[1] < 0:
        piv = [-piv[0], -piv[1]]
    c = piv[1]
    if a == 0:
        raise ValueError("rank deficient ideal basis")
    b = piv[0] % a
    return a, b, c


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class Ideal:
    """Fractional ideal (1/den) * J of O_F, J integral with HNF basis {a, b + c*w}."""

    __slots__ = ("F", "den", "a", "b", "c")

    def __init__(self, F: QuadraticField, a: int, b: int, c: int, den: int = 1):
        g = gcd(gcd(a, b), gcd(c, den))
        self.F = F
        self.a, self.b, self.c, self.den = a // g, b // g, c // g, den // g

    @classmethod
    def from_generators(cls, F: QuadraticField, gens) -> "Ideal":
        gens = [F.coerce(g) for g in gens]
        gens = [g for g in gens if g]
        if not gens:
            raise ZeroDivisionError("zero ideal")
        den = 1
        for g in gens:
            for t in g.coords():
                den = den * t.denominator // gcd(den, t.denominator)
        vecs = []
        w = F.omega
        for g in gens:
            for h in (g * den, g * den * w):
                vecs.append(h.int_coords())
        a, b, c = _hnf2(vecs)
        return cls(F, a, b, c, den)

    @classmethod
    def principal(cls, g) -> "Ideal":
        return cls.from_generators(g.F, [g])

    @classmethod
    def unit(cls, F: QuadraticField) -> "Ideal":
        return cls(F, 1, 0, 1)

    def generators(self) -> list[FieldElement]:
        F = self.F
        return [F(Fraction(self.a, self.den)), F.from_coords(self.b, self.c) / self.den]

    def __mul__(self, o: "Ideal") -> "Ideal":
        if isinstance(o, (FieldElement, int, Fraction)):
            o = Ideal.principal(self.F.coerce(o))
        return Ideal.from_generators(self.F, [g * h for g in self.generators() for h in o.generators()])

    def __add__(self, o: "Ideal") -> "Ideal":
        return Ideal.from_generators(self.F, self.generators() + o.generators())

    def conj(self) -> "Ideal":
        return Ideal.from_generators(self.F, [g.conj() for g in self.generators()])

    def norm(self) -> Fraction:
        return Fraction(self.a * self.c, self.den * self.den)

    @property
    def norm_int(self) -> int:
        n = self.norm()
        if n.denominator != 1:
            raise ValueError("fractional ideal has no integer norm")
        return int(n)

    def inverse(self) -> "Ideal":
        n = self.norm()
        return Ideal.from_generators(self.F, [g / n for g in self.conj().generators()])

    def __truediv__(self, o: "Ideal") -> "Ideal":
        return self * o.inverse()

    def __pow__(self, e: int) -> "Ideal":
        if e < 0:
            return self.inverse() ** (-e)
        out = Ideal.unit(self.F)
        for _ in range(e):
            out = out * self
        return out

    def key(self):
        return (self.F.d, self.den, self.a, self.b, self.c)

    def __eq__(self, o):
        return isinstance(o, Ideal) and self.key() == o.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Ideal(d={self.F.d}, a={self.a}, b={self.b}, c={self.c}, den={self.den})"

    def is_integral(self) -> bool:
        return self.den == 1

    def contains(self, x) -> bool:
        x = self.F.coerce(x) * self.den
        if not x.is_integral():
            return False
        u, v = x.int_coords()
        if v % self.c:
            return False
        u -= (v // self.c) * self.b
        return u % self.a == 0

    def divides(self, o: "Ideal") -> bool:
        """self | o, i.e. o is contained in self."""
        return all(self.contains(g) for g in o.generators())

    def factor(self) -> dict["PrimeIdeal", int]:
        n = self.norm()
        ps = set(factor_integer(n.numerator)) | set(factor_integer(n.denominator))
        out: dict[PrimeIdeal, int] = {}
        for p in sorted(ps):
            for P, _ in factor_rational_prime(p, self.F):
                v = self.valuation(P)
                if v:
                    out[P] = v
        return out

    def valuation(self, P: "PrimeIdeal") -> int:
        v = 0
        J = self * Ideal.from_generators(self.F, [self.den])  # integral multiple
        v -= _int_valuation(self.den, P)
        while P.divides(J):
            J = J / P
            v += 1
        return v

    def is_square(self) -> bool:
        return all(e % 2 == 0 for e in self.factor().values())

    def tp_generator(self) -> FieldElement:
        if not self.is_integral():
            raise ValueError("tp_generator needs an integral ideal")
        return self.F.tp_generator(self)


def _int_valuation(n: int, P: "PrimeIdeal") -> int:
    vp = 0
    while n % P.p == 0:
        n //= P.p
        vp += 1
    return vp * P.e


class PrimeIdeal(Ideal):
    __slots__ = ("p", "e", "f")

    def __init__(self, ideal: Ideal, p: int, e: int, f: int):
        super().__init__(ideal.F, ideal.a, ideal.b, ideal.c, ideal.den)
        self.p, self.e, self.f = p, e, f

    def __repr__(self):
        return f"PrimeIdeal(d={self.F.d}, p={self.p}, e={self.e}, f={self.f}, norm={self.norm_int})"

    def label(self) -> str:
        return str(self.tp_generator())


@lru_cache(maxsize=None)
def factor_rational_prime(p: int, F: QuadraticField) -> list[tuple[PrimeIdeal, int]]:
    """Dedekind factorisation of (p) using the minimal polynomial of w."""
    if isinstance(F, int):
        F = QuadraticField(F)
    t, n = F.wt, F.wn
    roots = [r for r in range(p) if (r * r - t * r - n) % p == 0]
    w = F.omega
    if not roots:
        return [(PrimeIdeal(Ideal.from_generators(F, [p]), p, 1, 2), 1)]
    if len(roots) == 1 or (p == 2 and len(roots) == 2 and roots[0] == roots[1]):
        P = Ideal.from_generators(F, [p, w - roots[0]])
        return [(PrimeIdeal(P, p, 2, 1), 2)]
    # double root when p divides the discriminant
    if F.disc % p == 0:
        P = Ideal.from_generators(F, [p, w - roots[0]])
        return [(PrimeIdeal(P, p, 2, 1), 2)]
    return [(PrimeIdeal(Ideal.from_generators(F, [p, w - r]), p, 1, 1), 1) for r in roots]


def primes_up_to_norm(F: QuadraticField, bound: int) -> list[PrimeIdeal]:
    """Prime ideals of norm <= bound, ordered by (norm, tp generator coordinates)."""
    out = []
    for p in range(2, bound + 1):
        if factor_integer(p) != {p: 1}:
            continue
        for P, _ in factor_rational_prime(p, F):
            if P.norm_int <= bound:
                out.append(P)
    out.sort(key=lambda P: (P.norm_int, tuple(-v for v in P.tp_generator().coords())))
    return out


# ------------------------------------------------------------ residue rings

class ResidueRing:
    """O_F / I for an integral ideal I, with elements numbered 0 .. N(I)-1.

    The element with index ``u + a*v`` is the class of u + v*w, 0 <= u < a,
    0 <= v < c, where {a, b + c*w} is the HNF basis of I.
    """

    def __init__(self, I: Ideal):
        if not I.is_integral():
            raise ValueError("residue ring of a fractional ideal")
        self.F = I.F
        self.ideal = I
        self.a, self.b, self.c = I.a, I.b, I.c
        self.size = self.a * self.c
        idx = np.arange(self.size)
        self.reps = np.stack([idx % self.a, idx // self.a], axis=1).astype(np.int64)
        u1, v1 = self.reps[:, 0][:, None], self.reps[:, 1][:, None]
        u2, v2 = self.reps[:, 0][None, :], self.reps[:, 1][None, :]
        self.add = self.reduce(u1 + u2, v1 + v2)
        pu, pv = self.F.mul_coords(u1, v1, u2, v2)
        self.mul = self.reduce(pu, pv)
        self.neg = self.reduce(-self.reps[:, 0], -self.reps[:, 1])
        self.sub = self.add[:, self.neg]
        self.zero = 0
        self.one = int(self.reduce(1, 0))
        inv = np.full(self.size, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.mul == self.one)
        inv[rows] = cols
        self.inv = inv
        self.is_unit = inv >= 0

    def reduce(self, u, v):
        """Index of the class of u + v*w (numpy broadcasting)."""
        u = np.asarray(u, dtype=object if _big(u, v) else np.int64)
        v = np.asarray(v, dtype=u.dtype)
        k = v // self.c
        v = v - k * self.c
        u = (u - k * self.b) % self.a
        out = u + self.a * v
        if out.dtype == object:
            out = out.astype(np.int64)
        return out if out.shape else int(out)

    def from_int(self, n) -> int:
        return self.reduce(n, 0)

    def element(self, x) -> int:
        """Reduce a FieldElement whose denominator is prime to I."""
        x = self.F.coerce(x)
        a, b = x.coords()
        den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        num = self.reduce(int(a * den), int(b * den))
        dinv = self.inv[self.from_int(den)]
        if dinv < 0:
            raise ValueError(f"denominator of {x} is not prime to the modulus")
        return int(self.mul[num, dinv])

    def lift(self, k) -> FieldElement:
        u, v = self.reps[k]
        return self.F.from_coords(int(u), int(v))

    def matmul(self, A, B):
        """Matrix product over the ring; A (..., n, m), B (..., m, k) index arrays."""
        A = np.asarray(A)
        B = np.asarray(B)
        out = None
        for t in range(A.shape[-1]):
            term = self.mul[A[..., :, t, None], B[..., None, t, :]]
            out = term if out is None else self.add[out, term]
        return out

    def dot(self, x, y):
        """Sum over the last axis of x*y."""
        out = None
        for t in range(x.shape[-1]):
            term = self.mul[x[..., t], y[..., t]]
            out = term if out is None else self.add[out, term]
        return out


def _big(u, v) -> bool:
    for t in (u, v):
        if isinstance(t, int) and abs(t) > 2**62:
            return True
        if isinstance(t, np.ndarray) and t.dtype == object:
            return True
    return False


class ResidueField(ResidueRing):
    """O_F/P for a prime ideal P; F_p when f = 1, else F_p[t]/(min poly of w)."""

    def __init__(self, P: PrimeIdeal):
        super().__init__(P)
        self.prime = P
        self.p, self.q = P.p, P.norm_int
        self.is_prime_field = P.f == 1
        if not self.is_unit[1:].all():
            raise ValueError("not a field")
        self.sqrt_d = self.element(P.F(0, 1))

    def __repr__(self):
        return f"ResidueField(q={self.q}, p={self.p})"


@lru_cache(maxsize=None)
def residue_field(P: PrimeIdeal) -> ResidueField:
    if not isinstance(P, PrimeIdeal):
        raise ValueError("residue_field needs a prime ideal")
    return ResidueField(P)


@lru_cache(maxsize=None)
def residue_ring(I: Ideal) -> ResidueRing:
    return ResidueRing(I)


# ---------------------------------------------------------------- zeta values

def _sigma(n: int, k: int) -> int:
    return sum(e ** k for e in range(1, n + 1) if n % e == 0)


def zeta_special_values(d, s: int) -> Fraction:
    """zeta_F(s) for s in {-1, -3} by Siegel's divisor-sum formula."""
    F = d if isinstance(d, QuadraticField) else QuadraticField(d)
    D = F.disc
    if s == -1:
        k, c = 1, Fraction(1, 60)
    elif s == -3:
        k, c = 3, Fraction(1, 120)
    else:
        raise ValueError(f"unsupported s = {s}")
    total = 0
    b = D % 2
    while b * b < D:
        n = (D - b * b) // 4
        total += _sigma(n, k) * (1 if b == 0 else 2)
        b += 2
    return c * total
