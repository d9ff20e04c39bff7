"""
The Picard lattice of a del Pezzo surface
=========================================

A del Pezzo surface of degree d is P^2 blown up in k = 9 - d general
points.  Its Picard lattice has basis l, e_1, ..., e_k with form
diag(1, -1, ..., -1), and the hyperplane class is H = 3l - sum e_i.
"""
from ulrich_lab.lattice import (DelPezzo, arith_genus, degree, enumerate_classes,
                                intersect, is_nef, ulrich_numeric_check)

X = DelPezzo(3)
H = X.H
print("cubic surface: d =", X.d, " H =", H, " H^2 =", intersect(H, H))

# lines are the classes of degree 1 and self-intersection -1
lines = enumerate_classes(X, 1, -1)
print("number of lines:", len(lines))

# twisted cubics: degree 3, self-intersection 1
cubics = enumerate_classes(X, 3, 1)
print("twisted-cubic classes:", len(cubics), " example:", cubics[0])

# rational normal curves of degree d on each surface
print("\nrational normal curve classes by degree:")
for d in range(3, 10):
    Y = DelPezzo(d)
    print(f"  d={d}: {len(enumerate_classes(Y, d, d - 2))}")

# Ulrich numerics for a few candidate first Chern classes
print("\nUlrich numeric checks on the cubic surface:")
for coeffs, r in [((2, -1, -1, -1, 0, 0, 0), 1),
                  ((3, -1, -1, -1, -1, -1, -1), 1),
                  ((6, -2, -2, -2, -2, -2, -2), 2),
                  ((5, -4, -1, -1, 0, 0, 0), 3)]:
    D = X.cls(*coeffs)
    v = ulrich_numeric_check(X, D, r)
    print(f"  {D} rank {r}: deg {degree(D)}, genus {arith_genus(D)}, "
          f"nef {is_nef(X, D)}, c2 {v.c2}, passes {v.overall}")
