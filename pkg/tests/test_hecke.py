import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hsiegel.hecke import (Eigensystem, brandt_matrix, build_module, charpoly, charpoly_factor, degree,
                           eisenstein_and_cusp, fundamental_discriminant, level_degree, sk_detect,
                           sk_eigenvalues)
from hsiegel.zlattice import hnf

x = sympy.Symbol("x")


# ---------------------------------------------------------------- characteristic polynomials

IRREDUCIBLE = [[1, -4], [1, 15], [1, 0, -2], [1, -1, -1], [1, 2, -10], [1, 0, 0, -2], [1, -3, 0, 1]]


def companion(c):
    n = len(c) - 1
    C = np.zeros((n, n), dtype=np.int64)
    C[1:, :-1] = np.eye(n - 1, dtype=np.int64)
    C[:, -1] = [-v for v in reversed(c[1:])]
    return C


@settings(max_examples=40, deadline=None)
@given(picks=st.lists(st.sampled_from(range(len(IRREDUCIBLE))), min_size=1, max_size=4),
       seed=st.integers(0, 2 ** 16))
def test_charpoly_construct_and_recover(picks, seed):
    polys = [IRREDUCIBLE[k] for k in picks]
    n = sum(len(p) - 1 for p in polys)
    A = np.zeros((n, n), dtype=np.int64)
    o = 0
    for p in polys:
        d = len(p) - 1
        A[o:o + d, o:o + d] = companion(p)
        o += d
    # conjugate by a unimodular matrix built from elementary moves
    rng = np.random.default_rng(seed)
    U = np.eye(n, dtype=np.int64)
    for _ in range(2 * n):
        i, j = rng.choice(n, 2, replace=False) if n > 1 else (0, 0)
        if i != j:
            U[i] += int(rng.integers(-2, 3)) * U[j]
    Ui = np.array(sympy.Matrix(U.tolist()).inv().tolist(), dtype=np.int64)
    B = U @ A @ Ui
    expected = sympy.Poly(sympy.prod(sympy.Poly(p, x).as_expr() for p in polys), x)
    assert charpoly(B) == [int(c) for c in expected.all_coeffs()]
    got = {(tuple(f), e) for f, e in charpoly_factor(B)}
    want = {}
    for p in polys:
        want[tuple(p)] = want.get(tuple(p), 0) + 1
    assert got == {(k, v) for k, v in want.items()}


def test_factor_of_brandt_matrix_at_two():
    assert charpoly_factor([[9, 6], [5, 10]]) == [([1, -15], 1), ([1, -4], 1)]
    assert charpoly([]) == [1]


@pytest.mark.parametrize("n,expected", [(40, (40, 1)), (12, (12, 1)), (48, (12, 2)), (204, (204, 1)),
                                        (20, (5, 2)), (5, (5, 1)), (8, (8, 1)), (-3, (-3, 1)), (-4, (-4, 1))])
def test_fundamental_discriminant(n, expected):
    assert fundamental_discriminant(n) == expected


def test_degrees():
    assert degree(2, 1) == 15 and degree(2, 2) == 30
    assert degree(7, 1) == 400 and degree(9, 2) == 7380
    assert level_degree(7, 1) == 343 and level_degree(7, 2) == 343 * 8


# ---------------------------------------------------------------- Saito-Kurokawa

def test_sk_relations():
    assert sk_eigenvalues(-2, 2) == (4, -3)
    assert sk_eigenvalues(-8, 7) == (48, -16)
    assert sk_eigenvalues(26, 9) == (116, 340)
    with pytest.raises(ValueError):
        sk_eigenvalues(1, 2, k=3)


def test_sk_detect_and_perturbation():
    prim = [("2+sqrt2", 2), ("3+sqrt2", 7), ("3-sqrt2", 7), ("3", 9)]
    vals = {}
    for (lab, N), a in zip(prim, (-2, -8, -8, 26)):
        l1, l2 = sk_eigenvalues(a, N)
        vals[f"T1({lab})"], vals[f"T2({lab})"] = (l1, 0), (l2, 0)
    E = Eigensystem(1, None, vals)
    assert sk_detect(E, prim) == [-2, -8, -8, 26]
    bad = dict(vals)
    bad["T2(3)"] = (341, 0)
    assert sk_detect(Eigensystem(1, None, bad), prim) is None
    assert sk_detect(Eigensystem(1, 8, vals), prim) is None


# ---------------------------------------------------------------- local double cosets

def _local_double_coset_sizes(p):
    """Orbit of the flag pair (L0, L1) under the Siegel parahoric of GSp_4(Z_p), modulo p^3.

    Returns (|T1 orbit|, |T2 orbit|); the degree of the level operator is the orbit size.
    """
    m = p ** 3
    Z, E = np.zeros((2, 2), dtype=object), np.eye(2, dtype=object)

    def canon(rows):
        rows = [list(map(int, r)) for r in rows] + [[m * (i == j) for j in range(4)] for i in range(4)]
        return tuple(map(tuple, hnf(rows)))

    def blk(A, B, C, D):
        return np.block([[A, B], [C, D]]).astype(object)

    def inv_t(A):
        det = int(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])
        return np.array([[A[1, 1], -A[1, 0]], [-A[0, 1], A[0, 0]]], dtype=object) * pow(det, -1, m)

    units = [u for u in range(1, m) if u % p]
    gens = []
    for A in [np.array([[1, 1], [0, 1]], dtype=object), np.array([[0, 1], [1, 0]], dtype=object)] + \
             [np.array([[u, 0], [0, 1]], dtype=object) for u in units]:
        gens.append(blk(A, Z, Z, inv_t(A)))
    for S in ([[1, 0], [0, 0]], [[0, 0], [0, 1]], [[0, 1], [1, 0]]):
        S = np.array(S, dtype=object)
        gens += [blk(E, Z, S, E), blk(E, p * S, Z, E)]
    gens += [blk(E, Z, Z, u * E) for u in units]
    J = blk(Z, E, -E, Z)
    for g in gens:
        M = g.dot(J).dot(g.T) % m
        assert ((M - M[0, 2] * J) % m == 0).all()
    out = []
    for t in ([1, 1, p, p], [1, p, p * p, p]):
        L0 = np.diag(t).astype(object)
        L1 = np.diag([1, 1, p, p]).astype(object).dot(L0)
        start = (canon(L0), canon(L1))
        seen, frontier = {start}, [start]
        while frontier:
            nxt = []
            for a, b in frontier:
                for g in gens:
                    c = (canon(np.array(a, dtype=object).dot(g) % m), canon(np.array(b, dtype=object).dot(g) % m))
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        out.append(len(seen))
    return tuple(out)


@pytest.mark.parametrize("p", [2, 3])
def test_level_degrees_against_local_orbits(p):
    assert _local_double_coset_sizes(p) == (level_degree(p, 1), level_degree(p, 2))


# ---------------------------------------------------------------- operators at the level

def _spectrum(A):
    return sorted(charpoly_factor(A))


@pytest.mark.parametrize("label", ["3+sqrt2", "3"])
def test_level_operators(env, label):
    M, Bs, labels, _ = env.level(label)
    P = env.by_label[label]
    N = P.norm_int
    T1 = Bs[labels.index(f"T1({label})")].matrix
    T2 = Bs[labels.index(f"T2({label})")].matrix
    assert (T1.sum(axis=1) == level_degree(N, 1)).all()
    assert not T2.any()
    K1 = brandt_matrix(M, 1, P, env.store, level_mode="parahoric").matrix
    K2 = brandt_matrix(M, 2, P, env.store, level_mode="parahoric").matrix
    assert (K1.sum(axis=1) == level_degree(N, 1)).all()
    assert (K2.sum(axis=1) == level_degree(N, 2)).all()
    assert _spectrum(K1) == _spectrum(T1)
    others = [B.matrix for B in Bs if not B.label.endswith(f"({label})")]
    for A in [K1, K2, T1]:
        for B in others:
            assert np.array_equal(A @ B, B @ A)
    assert np.array_equal(K1 @ K2, K2 @ K1)


def test_module_rejects_bad_levels(env):
    with pytest.raises(ValueError):
        build_module(env.classes, env.by_label["2+sqrt2"])


# ---------------------------------------------------------------- eigensystems

def _swap(E):
    vals = {}
    for k, v in E.values.items():
        k2 = k.replace("3+sqrt2", "#").replace("3-sqrt2", "3+sqrt2").replace("#", "3-sqrt2")
        vals[k2] = v
    return vals


@pytest.mark.parametrize("label", ["1", "3"])
def test_galois_stability(env, label):
    """The levels 1 and (3) are Galois stable, so swapping 3 +- sqrt2 permutes the systems."""
    _, _, _, systems = env.level(label)
    pool = [(E.disc, E.values) for E in systems] + [(E.disc, E.conjugate().values) for E in systems]
    for E in systems:
        if E.kind < 2:
            assert (E.disc, _swap(E)) in pool


@pytest.mark.parametrize("label", ["1", "3+sqrt2", "3"])
def test_eigensystems_exhaust_cusp_space(env, label):
    M, Bs, labels, systems = env.level(label)
    _, Q = eisenstein_and_cusp(M, Bs)
    assert sum(E.dim for E in systems) == M.dim - 1
    for E in systems:
        if E.kind == 1:
            assert E.dim == 2
        if E.kind == 2:
            assert len(E.factor) - 1 == E.dim
    # each rational eigenvalue is a root of the operator's characteristic polynomial
    for E in systems:
        if E.kind == 0:
            for lab, A in zip(labels, Q):
                cp = charpoly(A)
                v = E.values[lab][0]
                assert sum(c * v ** (len(cp) - 1 - k) for k, c in enumerate(cp)) == 0
