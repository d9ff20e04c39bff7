"""
Exact linear algebra over F_p
=============================

Every rank, kernel and echelon form in the package is computed exactly in
the prime field F_p (default p = 32003).  This script walks through the
basic operations on small and medium matrices.
"""
import time

import numpy as np

from ulrich_lab.exactlin import DEFAULT_PRIME, inv, kernel_basis, matmul, rank, rref

p = DEFAULT_PRIME
print("working prime:", p)

# inverses in the field
print("1/2 mod p =", inv(2), " check:", 2 * inv(2) % p)

# a 3 x 4 matrix whose third row is the sum of the first two
M = np.array([[1, 2, 3, 4],
              [0, 1, 5, 7],
              [1, 3, 8, 11]])
R, pivots = rref(M)
print("\nrref:\n", R, "\npivot columns:", pivots)
print("rank:", rank(M))

# kernel vectors are annihilated exactly
K = kernel_basis(M)
print("kernel basis rows:", K.shape[0])
print("M @ K.T mod p is zero:", not matmul(M, K.T).any())

# a medium random matrix of prescribed rank
rng = np.random.default_rng(0)
A = matmul(rng.integers(0, p, (600, 250)), rng.integers(0, p, (250, 700)))
t0 = time.perf_counter()
r = rank(A)
print(f"\n600 x 700 product of rank-250 factors: rank {r} in {time.perf_counter() - t0:.2f}s")
