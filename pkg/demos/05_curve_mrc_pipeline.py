"""
Curves on a cubic surface and the MRC
=====================================

The full pipeline: realize a class on a random model of the cubic surface,
sample points of its image curve in P^3, compute the curve's Betti diagram,
then the diagram of gamma general points on it, and test the MRC.

The class (5; -4, -1, -1, 0, 0, 0) has degree 9 and genus 0 but is not the
first Chern class of an Ulrich bundle; its general points fail the MRC.
The class 2l - e1 - e2 - e3 is a twisted cubic, where the MRC holds.
"""
import time

from ulrich_lab.lattice import DelPezzo
from ulrich_lab.pipeline import RunConfig, format_report, mrc_pipeline

X = DelPezzo(3)
for coeffs in [(2, -1, -1, -1, 0, 0, 0), (5, -4, -1, -1, 0, 0, 0)]:
    t0 = time.perf_counter()
    rep = mrc_pipeline(3, X.cls(*coeffs), RunConfig(seed=0))
    print(format_report(rep))
    print(f"[{time.perf_counter() - t0:.1f}s]\n")
