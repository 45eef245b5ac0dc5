from fractions import Fraction

import numpy as np
import pytest

from hsiegel.exactnum import Ideal
from hsiegel.hermlat import (HermForm, HermitianMatrix, LatticeRep, det_D, equivalence_test, genus_tests,
                             lattice_index, lattice_invariants, mass, mat2, mat2_elements, paper_gamma2,
                             represent_hermitian, right_action_matrix, solve_alpha, theta_coeffs)
from hsiegel.quatalg import hamilton_order
from hsiegel.zlattice import det_int, iter_vectors

O = hamilton_order(2)
F, D = O.F, O.D
I2 = HermitianMatrix.identity(D)
rng = np.random.default_rng(2024)


def random_matrix(scale=2):
    while True:
        g = rng.integers(-scale, scale + 1, size=(2, 2, 8))
        h = I2.transform(mat2_elements(O, g))
        if h.det_D() != 0:
            return g, h


def random_unimodular(steps=4, size=8):
    """Product of elementary matrices [[1, x], [0, 1]] and [[1, 0], [x, 1]], x in O."""
    g = [[D.one(), D(0)], [D(0), D.one()]]
    for k in range(steps):
        c = np.zeros(8, dtype=np.int64)
        c[:size] = rng.integers(-1, 2, size=size)
        x = O.element(c)
        e = [[D.one(), x], [D(0), D.one()]] if k % 2 == 0 else [[D.one(), D(0)], [x, D.one()]]
        g = [[sum((g[i][t] * e[t][j] for t in range(2)), D(0)) for j in range(2)] for i in range(2)]
    return g


def test_det_D():
    assert det_D(I2) == 1
    g2 = paper_gamma2(O)
    assert g2.r.nr() == 3 and det_D(g2) == 1
    assert det_D(g2.scale(F(1, 1))) == F(1, 1) ** 2


def test_index_is_square_ideal():
    """[L# : L] is the square N(det_D)^4 and agrees with the Gram determinant ratio."""
    d0 = abs(det_int(HermForm(O, I2).gram(1)))
    for _ in range(20):
        _, h = random_matrix()
        nu, dual, disc, idx = lattice_invariants(O, LatticeRep(O, h))
        n = h.det_D().norm()
        assert disc == Ideal.principal(h.det_D())
        assert idx == n ** 4
        assert abs(det_int(HermForm(O, h).gram(1))) == d0 * n ** 4


def test_index_determinant_characterisation():
    for _ in range(10):
        g, _ = random_matrix()
        k, _ = random_matrix()
        ge, ke = mat2_elements(O, g), mat2_elements(O, k)
        gk = [[ge[i][0] * ke[0][j] + ge[i][1] * ke[1][j] for j in range(2)] for i in range(2)]
        # multiplicative in chains L > L g > L k g
        assert lattice_index(O, gk) == lattice_index(O, ge) * lattice_index(O, ke)
        # the Z-index of O^2 g in O^2 is N([L : Lg])^2
        R = right_action_matrix(O, g)
        assert abs(det_int(R.tolist())) == lattice_index(O, ge).norm_int ** 2
    u = O.element(rng.integers(-2, 3, size=8))
    assert lattice_index(O, [[u, D(0)], [D(0), u]]) == Ideal.principal(u.nr() ** 2)


def test_discriminant_grows_by_index():
    """d_M = d_L [L : M] for M = L g."""
    for _ in range(10):
        g, h = random_matrix()
        _, _, dM, _ = lattice_invariants(O, LatticeRep(O, h))
        assert dM == Ideal.principal(I2.det_D()) * lattice_index(O, mat2_elements(O, g))


def element_of_norm(c):
    """Some x in O with nr(x) = c, by enumerating Tr nr on the Z-basis of O."""
    U = O.nr_forms[0]
    G = (U + U.T).tolist()
    for v in iter_vectors(G, c.trace()):
        x = O.element(v)
        if x.nr() == c:
            return x
    raise AssertionError(f"{c} is not a norm from O")


@pytest.mark.parametrize("c", [F(1), F(2, 1), F(3, 1), F(4, 2)])
def test_norm_ideal_under_similitude(c):
    """nu(M)^2 = nu(L)^2 [L : M] for M = L beta x, beta unimodular and nr(x) = c.

    The norm ideals are compared through their reduced norms, where the
    identity reads nr nu(M) = nr nu(L) [L : M]; M is modular with d_M = nr nu(M).
    """
    beta = random_unimodular()
    x = element_of_norm(c)
    g = [[beta[i][j] * x for j in range(2)] for i in range(2)]
    h = I2.transform(g)
    assert h == I2.transform(beta).scale(c)
    nuL, *_ = lattice_invariants(O, LatticeRep(O, I2))
    nuM, *_ = lattice_invariants(O, LatticeRep(O, h))
    _, _, dM, _ = lattice_invariants(O, LatticeRep(O, h))
    assert nuL == Ideal.principal(F(1))
    assert nuM == Ideal.principal(c * c) == dM
    assert nuM == nuL * lattice_index(O, g)
    res = genus_tests(O, h)
    assert res["is_modular"] and res["in_principal_genus"]


def test_genus_tests():
    assert genus_tests(O, I2)["in_principal_genus"]
    assert genus_tests(O, paper_gamma2(O))["in_principal_genus"]
    bad = HermitianMatrix(1, D(0), F(1, 1))
    assert not genus_tests(O, bad)["in_principal_genus"]
    # totally positive determinant that is not a square ideal: not modular
    odd = HermitianMatrix(1, D(0), F(2, 1))
    res = genus_tests(O, odd)
    assert not res["is_modular"] and not res["in_principal_genus"]


def _orthonormal_pairs(form):
    """Oracle: rows of value 1 from the trace form, then pairs with H(x, y) = 0."""
    X = np.array([v for v in iter_vectors(form.gram(1), 4) if form.value(np.array(v)) == (1, 0)], dtype=np.int64)
    count = 0
    for x in X:
        H = form.H_rows(X, x)
        count += int((~H.any(axis=1)).sum())
    return len(X), count


def test_represent_identity_against_oracle():
    form = HermForm(O, I2)
    nvec, npairs = _orthonormal_pairs(form)
    assert nvec == 96  # (u, 0), (0, u) with u in the 48 units of O
    sols = represent_hermitian(O, I2, I2)
    assert len(sols) == npairs == 4608
    for g in sols[:200]:
        assert I2.transform(mat2_elements(O, g)) == I2
    assert len({np.asarray(g).tobytes() for g in sols}) == len(sols)


def test_represent_pointwise():
    u = F(2, 1)
    sols = represent_hermitian(O, I2, I2.scale(u))
    assert sols
    for g in sols[:: max(1, len(sols) // 100)]:
        assert I2.transform(mat2_elements(O, g)) == I2.scale(u)
    with pytest.raises(ValueError):
        represent_hermitian(O, I2, HermitianMatrix(1, D(0), F(1, 1)))


def test_classes_and_mass(env):
    cs = env.classes
    assert len(cs) == 2
    assert sorted(cs.stabilizer_orders) == [3840, 4608]
    assert mass(F) == Fraction(11, 23040) == sum(Fraction(1, n) for n in cs.stabilizer_orders)
    assert cs.mass == mass(F)
    for L in cs.classes:
        assert genus_tests(O, L)["in_principal_genus"]
    # stabilizer elements fix the form
    for L in cs.classes:
        for g in L.stabilizer[:: max(1, len(L.stabilizer) // 50)]:
            assert L.gamma.transform(mat2_elements(O, g)) == L.gamma


def test_solve_alpha(env):
    q = env.by_label["2+sqrt2"]
    for gam in [I2, paper_gamma2(O)] + [L.gamma for L in env.classes.classes]:
        num, den = solve_alpha(O, gam, q)
        assert I2.transform(mat2_elements(O, num, den)) == gam
        a = mat2_elements(O, num, den)
        assert a[0][1] == 0  # lower triangular


def test_equivalence(env):
    c1, c2 = env.classes.classes
    assert equivalence_test(O, c1, c1)
    assert not equivalence_test(O, c1, c2)
    g2 = paper_gamma2(O)
    assert equivalence_test(O, g2, c2.gamma) or equivalence_test(O, g2, c1.gamma)
    assert not equivalence_test(O, I2, g2)
    for _ in range(2):
        beta = random_unimodular(2, 4)
        moved = g2.transform(beta)
        ok, w = equivalence_test(O, g2, moved, return_witness=True)
        assert ok
        assert g2.transform(mat2_elements(O, w)) == moved
        assert equivalence_test(O, moved, g2)


def test_theta_prefixes_differ(env):
    c1, c2 = env.classes.classes
    t1 = theta_coeffs(O, c1, 4)
    t2 = theta_coeffs(O, c2, 4)
    assert t1.counts != t2.counts
    # orbit counts never exceed vector counts
    for k in t1.counts:
        assert t1.counts[k] <= t1.raw[k]
    assert t1.raw[(1, "1")] == c1.min_count
