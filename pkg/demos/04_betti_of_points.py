"""
Betti diagrams of finite point sets
===================================

Graded Betti numbers of S/I for a set of points are read off from the
Koszul complex of the truncated ideal.  Points on a rational normal curve
give a clean example; the minimal resolution conjecture (MRC) predicts that
for many general points on a curve, only the expected entries survive.
"""
from ulrich_lab.cacm import (betti_diagram, hilbert_function, ideal_truncation_of_points,
                             mrc_check, regularity)
from ulrich_lab.geom import rational_normal_curve_points

n = 3
for gamma in (4, 6, 9):
    G = rational_normal_curve_points(n, gamma, seed=1)
    h = [hilbert_function(G, t) for t in range(6)]
    top = next(t for t, v in enumerate(h) if v == gamma) + 1
    I = ideal_truncation_of_points(G, top + 1)
    Dg = betti_diagram(I, top)
    print(f"{gamma} points on the twisted cubic, Hilbert function {h}")
    print(Dg.format())
    print("regularity of the ideal:", regularity(Dg))
    print("MRC (curve regularity 2):", mrc_check(Dg, 2).holds, "\n")
