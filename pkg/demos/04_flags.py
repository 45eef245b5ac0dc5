"""Isotropic flags in (O_F / p)^4 for the three parahoric types.

Run from the repository root:  python3 demos/04_flags.py
"""
# %%
from hsiegel.exactnum import primes_up_to_norm, residue_field
from hsiegel.flags import VARIANTS, FlagSpace, brute_force_count, flag_count_formula
from hsiegel.quatalg import hamilton_order

F = hamilton_order(2).F
for P in primes_up_to_norm(F, 27):
    q = P.norm_int
    counts = {v: len(FlagSpace(P, v)) for v in VARIANTS}
    assert all(counts[v] == flag_count_formula(q, v) for v in VARIANTS)
    print(f"{P.label():>12}  q = {q:2d}  ", counts)

# %%
# For small residue fields the counts are checked against a search over all subspaces.
for P in primes_up_to_norm(F, 9):
    R = residue_field(P)
    print(P.label(), {v: brute_force_count(R, v) for v in VARIANTS})
