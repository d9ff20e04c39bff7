"""
Membership in the Ulrich semigroup
==================================

First Chern classes of Ulrich bundles add under direct sum, so they form a
semigroup.  On the cubic surface it is generated by the 72 twisted-cubic
classes, on P^2 (degree 9, embedded by cubics) by 2H and 3H.
"""
from ulrich_lab.lattice import DelPezzo, semigroup_generators, semigroup_member

X3 = DelPezzo(3)
print("cubic surface generators:", len(semigroup_generators(X3)))
for coeffs in [(3, 0, 0, 0, 0, 0, 0), (6, -2, -2, -2, -2, -2, -2), (5, -4, -1, -1, 0, 0, 0)]:
    D = X3.cls(*coeffs)
    dec = semigroup_member(X3, D)
    if dec is None:
        print(f"  {D}: not a sum of generators")
    else:
        parts = " + ".join(str(Q) for Q, _ in dec.parts)
        print(f"  {D} = {parts}  (rank {dec.rank})")

X9 = DelPezzo(9)
print("\nP^2 embedded by cubics, classes aH:")
for a in range(1, 13):
    dec = semigroup_member(X9, X9.cls(a))
    print(f"  a={a:2d}:", "-" if dec is None else f"rank {dec.rank}")
