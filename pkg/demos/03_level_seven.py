"""Level (3 + sqrt 2): dimensions, eigensystems and the table of reference values.

This reuses the level 1 neighbour data, so it costs roughly a minute.
Run from the repository root:  python3 demos/03_level_seven.py
"""
# %%
from hsiegel.exactnum import primes_up_to_norm
from hsiegel.hecke import NeighborStore, brandt_matrix, build_module, eigensystems, eisenstein_and_cusp
from hsiegel.hermlat import enumerate_classes
from hsiegel.quatalg import hamilton_order
from hsiegel.tables import PRIMES, reference_systems

O = hamilton_order(2)
primes = {P.label(): P for P in primes_up_to_norm(O.F, 9)}
cs = enumerate_classes(O)
store = NeighborStore(cs)

M = build_module(cs, primes["3+sqrt2"])
print("dim M =", M.dim, "  dim S =", M.dim - 1)

# %%
# At the level, T1 is the transported operator of degree N^3 and T2 vanishes.
Bs = [brandt_matrix(M, i, primes[lab], store) for lab in PRIMES for i in (1, 2)]
labels = [B.label for B in Bs]
_, Q = eisenstein_and_cusp(M, Bs)
systems = eigensystems(Q, labels)
for E in systems:
    field = "Q" if E.disc is None else f"Q(sqrt {E.disc})"
    print(f"dim {E.dim}  {field}:", {k: v for k, v in E.values.items()})

# %%
# Every reference row appears, possibly as its Galois conjugate.
for D, vals in reference_systems("3+sqrt2"):
    hit = any(E.disc == D and vals in (E.values, E.conjugate().values) for E in systems)
    print("found" if hit else "MISSING", D, vals)
