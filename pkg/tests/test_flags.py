import numpy as np
import pytest

from hsiegel.exactnum import QuadraticField, primes_up_to_norm, residue_field
from hsiegel.flags import (BOREL, KLINGEN, SIEGEL, VARIANTS, FlagSpace, act, brute_force_count, flag_count_formula,
                           plucker_raw, rmatmul, standard_J)

F = QuadraticField(2)
PRIMES_27 = primes_up_to_norm(F, 27)
PRIMES_9 = [P for P in PRIMES_27 if P.norm_int <= 9]


def test_formula_values():
    # q = 2: 15 Lagrangian planes, 15 points, 45 Borel flags
    assert [flag_count_formula(2, v) for v in (SIEGEL, KLINGEN, BOREL)] == [15, 15, 45]
    assert [flag_count_formula(7, v) for v in (SIEGEL, KLINGEN, BOREL)] == [400, 400, 3200]


@pytest.mark.parametrize("P", PRIMES_27, ids=lambda P: P.label())
@pytest.mark.parametrize("variant", VARIANTS)
def test_enumeration_matches_formula(P, variant):
    S = FlagSpace(P, variant)
    assert len(S) == flag_count_formula(P.norm_int, variant)
    assert len(np.unique(S.sorted_codes)) == len(S)


@pytest.mark.parametrize("P", PRIMES_9, ids=lambda P: P.label())
@pytest.mark.parametrize("variant", VARIANTS)
def test_brute_force(P, variant):
    R = residue_field(P)
    assert brute_force_count(R, variant) == flag_count_formula(P.norm_int, variant)


@pytest.mark.parametrize("P", PRIMES_9, ids=lambda P: P.label())
def test_siegel_planes_on_lagrangian_quadric(P):
    S = FlagSpace(P, SIEGEL)
    R = S.ring
    p = plucker_raw(R, S.reps)
    quad = R.sub[R.add[R.mul[p[:, 0], p[:, 5]], R.mul[p[:, 2], p[:, 3]]], R.mul[p[:, 1], p[:, 4]]]
    assert (quad == 0).all()
    # isotropy for e1^f1 + e2^f2 is the linear condition p02 + p13 = 0
    assert (R.add[p[:, 1], p[:, 4]] == 0).all()


def _symplectic_gens(R, rng, n=6):
    q = R.size
    one = R.one
    J = standard_J(R)
    gens = [J]
    for _ in range(n):
        s = rng.integers(0, q, size=3)
        g = np.eye(4, dtype=np.int64) * one
        g[0, 2], g[0, 3], g[1, 2], g[1, 3] = s[0], s[1], s[1], s[2]
        gens.append(g)
    lam = int(rng.integers(1, q))
    gens.append(np.diag([one, one, lam, lam]))
    return gens


@pytest.mark.parametrize("P", PRIMES_9, ids=lambda P: P.label())
@pytest.mark.parametrize("variant", VARIANTS)
def test_similitudes_permute_flags(P, variant):
    S = FlagSpace(P, variant)
    rng = np.random.default_rng(P.norm_int)
    for g in _symplectic_gens(S.ring, rng):
        img = S.index(S.act(S.reps, g))
        assert sorted(img.tolist()) == list(range(len(S)))
        assert act(S, g, 0) == img[0]


def test_act_rejects_non_similitude():
    P = PRIMES_9[1]
    S = FlagSpace(P, KLINGEN)
    g = np.eye(4, dtype=np.int64)
    g[0, 1] = 1
    with pytest.raises(ValueError):
        act(S, g, 0)


def test_borel_refines_siegel():
    P = PRIMES_9[0]
    B, S = FlagSpace(P, BOREL), FlagSpace(P, SIEGEL)
    planes = S.index(B.reps)
    assert np.bincount(planes).tolist() == [P.norm_int + 1] * len(S)
