import json

import numpy as np
import pytest

from hsiegel.hecke import degree
from hsiegel.hermlat import HermitianMatrix, hecke_theta_sets, mat2_elements
from hsiegel.neighbors import NeighborData
from hsiegel.tables import PRIMES


@pytest.mark.parametrize("label", PRIMES)
@pytest.mark.parametrize("i", [1, 2])
def test_neighbour_totals_are_degrees(env, label, i):
    P = env.by_label[label]
    for a in range(len(env.classes)):
        nd = env.store.get(a, P, i)
        assert nd.total == degree(P.norm_int, i)
        assert sum(nd.row(len(env.classes))) == nd.total
        # orbit sizes divide the stabilizer order
        for o in nd.orbits:
            assert env.classes.classes[a].stabilizer_order % o.size == 0


@pytest.mark.parametrize("label", ["2+sqrt2", "3+sqrt2"])
def test_isometries_satisfy_defining_equation(env, label):
    P = env.by_label[label]
    O = env.O
    cs = env.classes.classes
    for i in (1, 2):
        u = P.tp_generator() ** i
        for a in range(len(cs)):
            nd = env.store.get(a, P, i)
            assert env.F.from_coords(*nd.u) == u
            for o in nd.orbits:
                lhs = cs[a].gamma.transform(mat2_elements(O, o.delta))
                assert lhs == cs[o.target].gamma.scale(u)


def test_json_round_trip(env):
    P = env.by_label["3+sqrt2"]
    for i in (1, 2):
        nd = env.store.get(0, P, i)
        back = NeighborData.from_json(json.loads(json.dumps(nd.to_json())))
        assert back.to_json() == nd.to_json()
        assert back.row(2) == nd.row(2)
        assert all(np.array_equal(x.delta, y.delta) for x, y in zip(back.orbits, nd.orbits))


def test_level_one_matrices_at_two(env):
    P = env.by_label["2+sqrt2"]
    assert [env.store.get(a, P, 1).row(2) for a in range(2)] == [[9, 6], [5, 10]]
    assert [env.store.get(a, P, 2).row(2) for a in range(2)] == [[12, 18], [15, 15]]


def test_theta_sets_agree_with_neighbours(env):
    """Direct enumeration of S(u; a, b) up to Gamma_a gives the transposed neighbour counts."""
    P = env.by_label["2+sqrt2"]
    cs = env.classes.classes
    for b in range(2):
        reps = hecke_theta_sets(env.O, 1, P, cs[0], cs[b])
        assert len(reps) == env.store.get(b, P, 1).row(2)[0]
        u = P.tp_generator()
        for g in reps:
            assert cs[b].gamma.transform(mat2_elements(env.O, g)) == cs[0].gamma.scale(u)
