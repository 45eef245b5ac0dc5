import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hsiegel.exactnum import QuadraticField, primes_up_to_norm
from hsiegel.flags import rmatmul
from hsiegel.quatalg import (QuatAlgebra, RamifiedPrimeError, hamilton_order, local_splitting, ramified_primes,
                             verify_maximal_order)

O = hamilton_order(2)
F = O.F
coord = st.lists(st.integers(-4, 4), min_size=8, max_size=8)


@settings(max_examples=80, deadline=None)
@given(x=coord, y=coord)
def test_norm_multiplicative_and_conjugation(x, y):
    u, v = O.element(x), O.element(y)
    assert (u * v).nr() == u.nr() * v.nr()
    assert (u * v).conj() == v.conj() * u.conj()
    assert u + u.conj() == u.trd() * O.D.one()
    # batched integer tensors agree with the symbolic product
    assert list(O.mul(np.array(x), np.array(y))) == O.coords(u * v)
    a, b = O.nr(np.array(x))
    assert F(int(a), int(b)) == u.nr()


def test_order_is_maximal():
    assert verify_maximal_order(O)
    assert O.discriminant_norm == 1


def test_ramification():
    fin, inf = ramified_primes(O.D)
    assert fin == [] and inf == [0, 1]
    # (-1,-1 / Q(sqrt 5)): Hurwitz order is an order but not maximal
    O5 = hamilton_order(5)
    assert not verify_maximal_order(O5)
    # (-1,-3): 3 is inert and -1 is a square in F_9, so no finite ramification
    assert ramified_primes(QuatAlgebra(F, -1, -3))[0] == []
    # (-1,-7): both primes above 7 have residue field F_7, where -1 is not a square
    fin2, inf2 = ramified_primes(QuatAlgebra(F, -1, -7))
    assert sorted(P.label() for P in fin2) == ["3+sqrt2", "3-sqrt2"] and inf2 == [0, 1]


@pytest.mark.parametrize("label,k", [("2+sqrt2", 1), ("2+sqrt2", 2), ("3+sqrt2", 1), ("3", 1), ("3-sqrt2", 2)])
def test_splitting_is_ring_homomorphism(label, k):
    P = next(P for P in primes_up_to_norm(F, 9) if P.label() == label)
    S = local_splitting(O, P, k)
    R = S.ring
    rng = np.random.default_rng(7)
    X = rng.integers(-6, 7, size=(40, 8))
    Y = rng.integers(-6, 7, size=(40, 8))
    lhs = S(O.mul(X, Y))
    rhs = rmatmul(R, S(X), S(Y))
    assert np.array_equal(lhs, rhs)
    assert np.array_equal(S(X + Y), R.add[S(X), S(Y)])
    one = S(O.one_coords)
    assert one.tolist() == [[R.one, 0], [0, R.one]]
    # surjective: the lifts of matrix units map back
    for a in range(2):
        for b in range(2):
            E = S(S.preimages[a, b])
            assert E[a, b] == R.one and E.sum() == R.one
    # reduced norm goes to the determinant
    for x in X[:10]:
        m = S(x)
        det = R.sub[R.mul[m[0, 0], m[1, 1]], R.mul[m[0, 1], m[1, 0]]]
        a, b = O.nr(x)
        assert det == R.reduce(int(a), int(b))


def test_ramified_prime_rejected():
    D = QuatAlgebra(F, -1, -7)
    fin, _ = ramified_primes(D)
    assert fin
    # a maximal order is not needed to trigger the check
    O3 = hamilton_order(2)
    O3_bad = type(O3).__new__(type(O3))
    O3_bad.__dict__.update(O3.__dict__)
    O3_bad.D = D
    with pytest.raises(RamifiedPrimeError):
        local_splitting(O3_bad, fin[0], 1)
