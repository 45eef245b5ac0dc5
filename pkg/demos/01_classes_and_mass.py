"""Hermitian lattices of rank 2 over the Hamilton order in (-1, -1 / Q(sqrt 2)).

Run from the repository root:  python3 demos/01_classes_and_mass.py
"""
# %%
from fractions import Fraction

from hsiegel.hermlat import enumerate_classes, genus_tests, mass
from hsiegel.quatalg import hamilton_order

O = hamilton_order(2)
F = O.F
print("field:", F, "  algebra:", O.D)

# %%
# Neighbouring from the identity form at the auxiliary prime above 2 finds every
# class in the principal genus.  Each class is stored as a Gram matrix gamma.
cs = enumerate_classes(O)
for k, L in enumerate(cs.classes):
    print(f"class {k}: gamma = {L.gamma}   |Gamma| = {L.stabilizer_order}")

# %%
# The mass formula gives the sum of 1/|Gamma| in closed form; the two must agree.
total = sum(Fraction(1, n) for n in cs.stabilizer_orders)
print("sum 1/|Gamma| =", total, "  mass formula =", mass(F))
assert total == mass(F)

# %%
for L in cs.classes:
    print(genus_tests(O, L))
