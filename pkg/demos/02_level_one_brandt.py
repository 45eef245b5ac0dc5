"""Brandt matrices of level 1 at the four smallest primes, and the Saito-Kurokawa lift.

Run from the repository root:  python3 demos/02_level_one_brandt.py
"""
# %%
import numpy as np

from hsiegel.exactnum import primes_up_to_norm
from hsiegel.hecke import NeighborStore, brandt_matrix, build_module, eigensystems, eisenstein_and_cusp, sk_detect
from hsiegel.hermlat import enumerate_classes
from hsiegel.quatalg import hamilton_order
from hsiegel.tables import PRIMES

O = hamilton_order(2)
cs = enumerate_classes(O)
store = NeighborStore(cs)   # neighbour orbits, shared by every level
M = build_module(cs, None)

# %%
primes = {P.label(): P for P in primes_up_to_norm(O.F, 9)}
Bs = [brandt_matrix(M, i, primes[lab], store) for lab in PRIMES for i in (1, 2)]
for B in Bs:
    print(B.label, B.matrix.tolist(), "row sums", B.matrix.sum(axis=1).tolist())

# %%
# The operators commute.  The constant function is the Eisenstein vector, and
# its complement is the one-dimensional cusp space.
for A in Bs:
    for B in Bs:
        assert np.array_equal(A.matrix @ B.matrix, B.matrix @ A.matrix)
_, Q = eisenstein_and_cusp(M, Bs)
(E,) = eigensystems(Q, [B.label for B in Bs])
print({k: v[0] for k, v in E.values.items()})

# %%
# The eigenvalues are those of a lift from the weight 4 Hilbert newform of level 1.
a = sk_detect(E, [(primes[lab].label(), primes[lab].norm_int) for lab in PRIMES])
print("Hilbert eigenvalues a(p):", a)
