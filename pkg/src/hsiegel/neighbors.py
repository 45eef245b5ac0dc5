"""P-neighbours of the class representatives, up to the stabilizer.

For a class L_a (gamma coordinates, O^2 with form H) and a prime P with
totally positive generator pi, the sublattices counted by T_i(P) are read off
in the Morita picture: x in O^2 maps to the 2x4 matrix rho(x) over O_F/P^k,
and H becomes the alternating form B = rho(gamma) diag(J, J), since
rho(H(x, y)) J = rho(x) B rho(y)^T.

* T_1: M is the preimage of a Lagrangian W of B mod P (key: Plücker code).
* T_2: M = O x + pi (x^perp) + pi^2 L for x isotropic mod P^2; M depends on
  the point v = x mod P and on c = <x, v-hat>/pi in F_P (key: (v, c)).

Each neighbour M comes with u = pi^i and an isometry delta whose rows are an
O-basis of M: delta gamma_a delta-bar^T = u gamma_b.  Only one neighbour per
Gamma_a-orbit is identified; the others are rep * g.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exactnum import PrimeIdeal
from .flags import _points, lagrangian_planes, normalize_points, plane_codes, point_codes, rdot, rmatmul
from .hermlat import ClassSet, count_vectors, represent_hermitian
from .quatalg import local_splitting
from .zlattice import det_int, hnf

__all__ = ["NeighborOrbit", "NeighborData", "NeighborKeys", "compute_neighbors", "morita_form"]


@dataclass
class NeighborOrbit:
    target: int
    delta: np.ndarray  # (2, 2, 8)
    size: int
    key: int
    rows: np.ndarray  # the key itself (plane mod P or vector mod P^2)


@dataclass
class NeighborData:
    source: int
    i: int
    prime: str
    u: tuple  # coordinates of pi^i
    orbits: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(o.size for o in self.orbits)

    def row(self, h: int) -> list[int]:
        r = [0] * h
        for o in self.orbits:
            r[o.target] += o.size
        return r

    def to_json(self) -> dict:
        return {
            "source": self.source, "i": self.i, "prime": self.prime, "u": [str(v) for v in self.u],
            "orbits": [{"target": o.target, "size": o.size, "key": str(o.key),
                        "delta": [str(int(v)) for v in o.delta.reshape(-1)],
                        "rows": [str(int(v)) for v in o.rows.reshape(-1)]} for o in self.orbits],
        }

    @classmethod
    def from_json(cls, d) -> "NeighborData":
        orbits = [NeighborOrbit(o["target"], np.array([int(v) for v in o["delta"]], dtype=np.int64).reshape(2, 2, 8),
                                o["size"], int(o["key"]),
                                np.array([int(v) for v in o["rows"]], dtype=np.int64).reshape((2, 4) if d["i"] == 1 else (4,)))
                  for o in d["orbits"]]
        return cls(d["source"], d["i"], d["prime"], tuple(int(v) for v in d["u"]), orbits)


def _jj(R) -> np.ndarray:
    m = np.zeros((4, 4), dtype=np.int64)
    mone = int(R.neg[R.one])
    m[0, 1] = m[2, 3] = R.one
    m[1, 0] = m[3, 2] = mone
    return m


def morita_form(rho, gamma) -> np.ndarray:
    """B = rho(gamma) diag(J, J) over the ring of rho."""
    return rmatmul(rho.ring, rho.matrix(gamma), _jj(rho.ring))


def _left_span(O, x) -> np.ndarray:
    """Z-generators of O x for x in O^2: the rows b_l x."""
    E = np.eye(8, dtype=np.int64)
    return np.concatenate([O.mul(E, x[None, :8]), O.mul(E, x[None, 8:])], axis=1)


def _scalar_vec(O, s, x) -> np.ndarray:
    sc = O.scalar(*s.int_coords())
    return np.concatenate([O.mul(sc, x[:8]), O.mul(sc, x[8:])])


def _orbits(codes_sorted, key_rows, image_codes) -> list[tuple[int, int]]:
    """Orbit representatives (position, size) given a function of a key row -> image codes."""
    n = len(codes_sorted)
    seen = np.zeros(n, dtype=bool)
    out = []
    for k in range(n):
        if seen[k]:
            continue
        c = image_codes(key_rows[k])
        pos = np.searchsorted(codes_sorted, c)
        if not (codes_sorted[np.minimum(pos, n - 1)] == c).all():
            raise ArithmeticError("stabilizer image is not a neighbour key")
        pos = np.unique(pos)
        if seen[pos].any():
            raise ArithmeticError("orbits overlap")
        seen[pos] = True
        out.append((k, len(pos)))
    return out


def _identify(classes: ClassSet, a: int, basis, u, min_counts) -> tuple[int, np.ndarray]:
    O = classes.classes[a].order
    L = classes.classes[a]
    F = O.F
    cnt = count_vectors(L.form, u, basis=basis, scale=u.inverse())
    cands = [b for b, m in enumerate(min_counts) if m == cnt]
    for b in cands:
        Lb = classes.classes[b]
        sol = represent_hermitian(O, L.gamma, Lb.gamma.scale(u), rows=basis, limit=1,
                                  scale=u.inverse(), form=L.form)
        if sol:
            return b, sol[0]
    raise ArithmeticError(f"neighbour of class {a} matches no class (count {cnt})")


class NeighborKeys:
    """Keys of the T_i(P)-neighbours of one class and the action of its stabilizer on them."""

    def __init__(self, L, P: PrimeIdeal, i: int):
        if i not in (1, 2):
            raise ValueError("i must be 1 or 2")
        self.L = L
        self.O = O = L.order
        self.P = P
        self.i = i
        self.pi = P.tp_generator()
        self.u = self.pi ** i
        self.q = q = P.norm_int
        self.rho1 = local_splitting(O, P, 1)
        self.R1 = self.rho1.ring
        self.B1 = morita_form(self.rho1, L.form.gamma)
        if i == 2:
            self.rho2 = rho2 = local_splitting(O, P, 2)
            R1, R2 = self.R1, rho2.ring
            self.R2 = R2
            self.B2 = morita_form(rho2, L.form.gamma)
            self.lift = np.array([R2.element(R1.lift(s)) for s in range(q)], dtype=np.int64)
            self.red = np.array([R1.element(R2.lift(t)) for t in range(R2.size)], dtype=np.int64)
            self.pi2 = R2.element(self.pi)
            self.divpi = np.full(R2.size, -1, dtype=np.int64)
            for s in range(q):
                self.divpi[R2.mul[self.pi2, self.lift[s]]] = s

    @property
    def ring(self):
        return self.R1 if self.i == 1 else self.R2

    @property
    def rho(self):
        return self.rho1 if self.i == 1 else self.rho2

    def codes(self, X) -> np.ndarray:
        """Codes of keys: planes (..., 2, 4) mod P for T_1, vectors (..., 4) mod P^2 for T_2."""
        if self.i == 1:
            return plane_codes(self.R1, X)
        R1, R2 = self.R1, self.R2
        X = np.asarray(X)
        v, _ = normalize_points(R1, self.red[X])
        piv = np.argmax(v != 0, axis=-1)
        lead = np.take_along_axis(X, piv[..., None], axis=-1)[..., 0]
        Xn = R2.mul[X, R2.inv[lead][..., None]]
        pr = rdot(R2, rmatmul(R2, Xn[..., None, :], self.B2)[..., 0, :], self.lift[v])
        c = self.divpi[pr]
        if (c < 0).any():
            raise ArithmeticError("x is not isotropic mod P^2")
        return point_codes(R1, v) * self.q + c

    def lift_isotropic(self, v, c) -> np.ndarray:
        """x = v-hat + pi c w-hat mod P^2 with <w, v> = 1, for points v (n, 4) and c in F_P."""
        R1, R2 = self.R1, self.R2
        v = np.atleast_2d(v)
        Bv = rmatmul(R1, self.B1, v.T).T  # entry j = <e_j, v>
        j = np.argmax(Bv != 0, axis=1)
        w = np.zeros_like(v)
        w[np.arange(len(v)), j] = R1.inv[Bv[np.arange(len(v)), j]]
        return R2.add[self.lift[v], R2.mul[self.pi2, R2.mul[self.lift[np.asarray(c)][..., None], self.lift[w]]]]

    def all_keys(self) -> np.ndarray:
        if self.i == 1:
            return lagrangian_planes(self.R1, self.B1)
        V = _points(self.R1)
        return np.concatenate([self.lift_isotropic(V, np.full(len(V), c)) for c in range(self.q)])

    def act(self, X, G) -> np.ndarray:
        """Images of one key under the ring matrices G (N, 4, 4)."""
        if self.i == 1:
            return rmatmul(self.R1, np.asarray(X)[None], G)
        return rmatmul(self.R2, np.asarray(X)[None, None, :], G)[:, 0, :]

    def lattice_basis(self, X) -> np.ndarray:
        """Z-basis (HNF rows, gamma coordinates) of the neighbour with key X."""
        O, pi, q = self.O, self.pi, self.q
        if self.i == 1:
            gens = [_left_span(O, self.rho1.lift_vector(row)) for row in X]
            gens.append(np.array([_scalar_vec(O, pi, e) for e in np.eye(16, dtype=np.int64)]))
            index = q ** 4
        else:
            v = self.red[X]
            col = rmatmul(self.R1, self.B1, v[:, None])[:, 0]
            gens = [_left_span(O, self.rho2.lift_vector(X))]
            for z in _kernel_row(self.R1, col):
                gens.append(_left_span(O, _scalar_vec(O, pi, self.rho1.lift_vector(z))))
            gens.append(np.array([_scalar_vec(O, pi * pi, e) for e in np.eye(16, dtype=np.int64)]))
            index = q ** 8
        basis = np.array(hnf(np.concatenate(gens).tolist()), dtype=np.int64)
        if abs(det_int(basis.tolist())) != index:
            raise ArithmeticError(f"T_{self.i} neighbour has the wrong index")
        return basis


def compute_neighbors(classes: ClassSet, a: int, P: PrimeIdeal, i: int, log=None) -> NeighborData:
    """Gamma_a-orbits of T_i(P)-neighbours of class a, each identified with a class."""
    L = classes.classes[a]
    K = NeighborKeys(L, P, i)
    q = K.q
    X = K.all_keys()
    codes = K.codes(X)
    order = np.argsort(codes)
    X, codes = X[order], codes[order]
    expected = (q + 1) * (q * q + 1) * (q if i == 2 else 1)
    if len(np.unique(codes)) != len(codes) or len(codes) != expected:
        raise ArithmeticError(f"T_{i} keys are not distinct")
    G = K.rho.matrix(L.stabilizer)
    reps = _orbits(codes, X, lambda x: K.codes(K.act(x, G)))
    min_counts = [C.min_count for C in classes.classes]
    data = NeighborData(a, i, P.label(), K.u.int_coords())
    for k, size in reps:
        basis = K.lattice_basis(X[k])
        b, delta = _identify(classes, a, basis, K.u, min_counts)
        data.orbits.append(NeighborOrbit(b, delta, size, int(codes[k]), X[k].copy()))
    if log:
        log(f"T_{i}({P.label()}) class {a}: {len(data.orbits)} orbits, {data.total} neighbours")
    return data


def _kernel_row(R, col) -> list[np.ndarray]:
    """Basis of {y in R^4 : sum_j y_j col_j = 0} for a nonzero column."""
    col = [int(c) for c in col]
    p = next(j for j, c in enumerate(col) if c)
    inv = int(R.inv[col[p]])
    out = []
    for j in range(4):
        if j == p:
            continue
        y = np.zeros(4, dtype=np.int64)
        y[j] = R.one
        y[p] = int(R.neg[R.mul[col[j], inv]])
        out.append(y)
    return out
