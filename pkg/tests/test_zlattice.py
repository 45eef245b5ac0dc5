import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from hsiegel.zlattice import (NotPositiveDefiniteError, det_int, hnf, integer_solve, iter_vectors, lll_gram,
                              mat_mul, short_vectors, transpose, vectors_of_norm)


@st.composite
def gram(draw, max_rank=6):
    """Positive definite integer Gram matrix B B^T with B = I + small noise."""
    n = draw(st.integers(1, max_rank))
    B = [[int(i == j) + draw(st.integers(-1, 1)) for j in range(n)] for i in range(n)]
    assume(det_int(B) != 0)
    return mat_mul(B, transpose(B))


def box_oracle(G, T, exact=True):
    """Brute force over the box |v_i| <= sqrt(T (G^-1)_ii)."""
    V = np.array(list(itertools.product(*[range(-b, b + 1) for b in box_radii(G, T)])), dtype=np.int64)
    q = np.einsum("vi,ij,vj->v", V, np.array(G, dtype=np.int64), V)
    return sorted(V[(q == T) if exact else (q <= T)].tolist())


def box_radii(G, T):
    Gi = sympy.Matrix(G).inv()
    return [math.isqrt(int(T * Gi[i, i])) + 1 for i in range(len(G))]


def box_fits(G, T, limit=1_000_000):
    return math.prod(2 * b + 1 for b in box_radii(G, T)) <= limit


@settings(max_examples=40, deadline=None)
@given(G=gram(), T=st.integers(0, 6))
def test_fincke_pohst_matches_box(G, T):
    assume(box_fits(G, T))
    assert sorted(iter_vectors(G, T, exact=False)) == box_oracle(G, T, exact=False)
    if T:
        assert vectors_of_norm(G, T) == box_oracle(G, T)


@settings(max_examples=40, deadline=None)
@given(G=gram(), T=st.integers(1, 6))
def test_short_vectors_after_lll(G, T):
    assume(box_fits(G, T))
    assert sorted(short_vectors(G, T)) == box_oracle(G, T)


@settings(max_examples=40, deadline=None)
@given(G=gram())
def test_lll_transform(G):
    Gr, U = lll_gram(G)
    assert abs(det_int(U)) == 1
    assert mat_mul(mat_mul(U, G), transpose(U)) == Gr
    # size reduction and the Lovasz condition, from a rational Gram-Schmidt
    n = len(Gr)
    B, mu = [], [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            mu[i][j] = (Fraction(Gr[i][j]) - sum(mu[j][k] * mu[i][k] * B[k] for k in range(j))) / B[j]
        B.append(Fraction(Gr[i][i]) - sum(mu[i][k] ** 2 * B[k] for k in range(i)))
    assert all(abs(mu[i][j]) <= Fraction(1, 2) for i in range(n) for j in range(i))
    assert all(B[i] >= (Fraction(3, 4) - mu[i][i - 1] ** 2) * B[i - 1] for i in range(1, n))


def test_not_positive_definite():
    with pytest.raises(NotPositiveDefiniteError):
        list(iter_vectors([[1, 2], [2, 1]], 3))


def test_rational_gram():
    G = [[Fraction(1, 2), 0], [0, Fraction(1, 2)]]
    assert sorted(iter_vectors(G, 1)) == [[-1, -1], [-1, 1], [1, -1], [1, 1]]


@settings(max_examples=60, deadline=None)
@given(A=st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=5))
def test_hnf_against_sympy(A):
    H, U, r = hnf(A, with_transform=True)
    assert abs(det_int(U)) == 1
    UA = mat_mul(U, A)
    assert UA[:r] == H and all(not any(row) for row in UA[r:])
    assert r == sympy.Matrix(A).rank()
    pivots = [next(c for c, x in enumerate(row) if x) for row in H]
    assert pivots == sorted(set(pivots))
    for i, p in enumerate(pivots):
        assert H[i][p] > 0
        assert all(0 <= H[k][p] < H[i][p] for k in range(i))


@settings(max_examples=60, deadline=None)
@given(A=st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=2, max_size=4),
       x=st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_integer_solve(A, x):
    x = x[:len(A)]
    b = [sum(x[i] * A[i][j] for i in range(len(A))) for j in range(3)]
    x0, K = integer_solve(A, b)
    assert x0 is not None
    assert [sum(x0[i] * A[i][j] for i in range(len(A))) for j in range(3)] == b
    for k in K:
        assert not any(sum(k[i] * A[i][j] for i in range(len(A))) for j in range(3))
    assert len(K) == len(A) - sympy.Matrix(A).rank()


def test_integer_solve_no_solution():
    x0, _ = integer_solve([[2, 0], [0, 2]], [1, 0])
    assert x0 is None
