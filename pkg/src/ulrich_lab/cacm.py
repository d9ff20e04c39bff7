"""Graded pieces of vanishing ideals and their Betti numbers.

Everything is computed degree by degree with dense linear algebra over F_p:

* ``I_t`` is the kernel of evaluating degree-t monomials at points;
* ``(S/I)_t`` is spanned by the standard monomials, i.e. the monomials that
  are not leading columns of the reduced basis of ``I_t``;
* ``beta_{i,j}(S/I)`` is the homology of the degree-j strand of the Koszul
  complex ``K(x_0, ..., x_n) (x) S/I``.

Betti diagrams use the Macaulay layout: column ``i``, row ``q`` holds
``beta_{i, i+q}(S/I)``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .exactlin import DEFAULT_PRIME, kernel_basis, matmul, rank, rref


class TruncationRangeError(ValueError):
    """A requested degree lies beyond the truncation of the ideal."""


class DiagramNotStabilized(ValueError):
    """The last computed row of a Betti diagram is still nonzero."""


class SaturationError(RuntimeError):
    """Sampled points did not certify the truncated curve ideal."""


# -- monomials ---------------------------------------------------------------

@lru_cache(maxsize=None)
def monomials(n: int, t: int) -> np.ndarray:
    """Exponent vectors of degree-t monomials in ``x_0..x_n``, grevlex-descending."""
    if t < 0:
        return np.zeros((0, n + 1), dtype=np.int64)
    exps = []
    for combo in itertools.combinations_with_replacement(range(n + 1), t):
        e = [0] * (n + 1)
        for v in combo:
            e[v] += 1
        exps.append(tuple(e))
    # grevlex: a > b iff the last nonzero entry of a - b is negative
    exps.sort(key=lambda e: e[::-1])
    out = np.array(exps, dtype=np.int64).reshape(-1, n + 1)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=None)
def _monomial_index(n: int, t: int) -> dict:
    return {tuple(e): i for i, e in enumerate(monomials(n, t).tolist())}


@lru_cache(maxsize=None)
def _mult_table(n: int, t: int) -> np.ndarray:
    """``table[v, i]`` = index in degree t+1 of ``x_v`` times monomial ``i`` of degree t."""
    idx = _monomial_index(n, t + 1)
    exps = monomials(n, t)
    table = np.empty((n + 1, len(exps)), dtype=np.int64)
    for i, e in enumerate(exps.tolist()):
        for v in range(n + 1):
            e[v] += 1
            table[v, i] = idx[tuple(e)]
            e[v] -= 1
    table.flags.writeable = False
    return table


def dim_S(n: int, t: int) -> int:
    return comb(t + n, n) if t >= 0 else 0


# -- point sets --------------------------------------------------------------

def normalize_points(coords, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Scale each row so its first nonzero entry is 1, then drop duplicates.

    Order of first appearance is kept.
    """
    A = np.array(coords, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("points must form a 2-d array")
    A %= p
    if A.shape[0] == 0:
        return A
    nonzero = A != 0
    if not nonzero.any(axis=1).all():
        raise ValueError("the zero vector is not a projective point")
    lead = A[np.arange(len(A)), nonzero.argmax(axis=1)]
    inverses = np.array([pow(int(x), -1, p) for x in lead], dtype=np.int64)
    A = (A * inverses[:, None]) % p
    _, first = np.unique(A, axis=0, return_index=True)
    return A[np.sort(first)]


@dataclass(frozen=True)
class ProjPointSet:
    """Distinct points of P^n over F_p, each with first nonzero coordinate 1."""

    n: int
    points: np.ndarray
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64).reshape(-1, self.n + 1)
        pts = normalize_points(pts, self.p)
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return (isinstance(other, ProjPointSet) and self.n == other.n and self.p == other.p
                and np.array_equal(self.points, other.points))

    def to_text(self) -> str:
        return "".join(" ".join(str(int(x)) for x in row) + "\n" for row in self.points)

    @classmethod
    def from_text(cls, text: str, p: int = DEFAULT_PRIME) -> "ProjPointSet":
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append([int(x) for x in line.split()])
        if not rows:
            raise ValueError("no points in input")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("points have differing numbers of coordinates")
        return cls(width - 1, np.array(rows, dtype=np.int64), p)


def evaluation_matrix(P: ProjPointSet, t: int) -> np.ndarray:
    """Rows are points, columns are degree-t monomials (grevlex order)."""
    if t < 0:
        raise ValueError("degree must be non-negative")
    return _evaluate(P.points, P.n, t, P.p)


def _evaluate(pts: np.ndarray, n: int, t: int, p: int) -> np.ndarray:
    exps = monomials(n, t)
    N = len(pts)
    out = np.ones((N, len(exps)), dtype=np.int64)
    for v in range(n + 1):
        powers = np.ones((N, t + 1), dtype=np.int64)
        for e in range(1, t + 1):
            powers[:, e] = powers[:, e - 1] * pts[:, v] % p
        out = out * powers[:, exps[:, v]] % p
    return out


def hilbert_function(P: ProjPointSet, t: int) -> int:
    if len(P) == 0:
        return 0
    return rank(evaluation_matrix(P, t), P.p)


# -- truncated ideals --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GradedIdealTruncation:
    """A homogeneous ideal known in every degree ``t <= T``.

    ``pieces[t]`` is a basis of ``I_t`` (rows, in the monomial basis of
    ``S_t``) that is the identity on the columns ``leading[t]``; the
    remaining columns ``standard[t]`` are a basis of ``(S/I)_t``.
    """

    n: int
    T: int
    p: int
    pieces: tuple
    leading: tuple
    standard: tuple
    hilb: tuple
    _cache: dict = field(default_factory=dict, repr=False)

    def dim_I(self, t: int) -> int:
        return len(self.leading[t]) if 0 <= t <= self.T else None

    def normal_form(self, t: int) -> np.ndarray:
        """Matrix sending monomial ``i`` of degree t to its coordinates in ``(S/I)_t``."""
        key = ("nf", t)
        if key not in self._cache:
            M = dim_S(self.n, t)
            std = self.standard[t]
            nf = np.zeros((M, len(std)), dtype=np.int64)
            nf[std, np.arange(len(std))] = 1
            if len(self.leading[t]):
                nf[self.leading[t]] = (-self.pieces[t][:, std]) % self.p
            self._cache[key] = nf
        return self._cache[key]

    def multiplication(self, t: int, v: int) -> np.ndarray:
        """``x_v : (S/I)_t -> (S/I)_{t+1}`` as a (h_{t+1} x h_t) matrix."""
        key = ("mul", t, v)
        if key not in self._cache:
            if t + 1 > self.T:
                raise TruncationRangeError(f"degree {t + 1} exceeds truncation T={self.T}")
            rows = _mult_table(self.n, t)[v, self.standard[t]]
            self._cache[key] = np.ascontiguousarray(self.normal_form(t + 1)[rows].T)
        return self._cache[key]


def _piece_from_reduced(basis: np.ndarray, lead: Sequence[int], M: int):
    lead = np.asarray(lead, dtype=np.int64)
    mask = np.ones(M, dtype=bool)
    mask[lead] = False
    std = np.flatnonzero(mask)
    return basis, lead, std


def _assemble(n: int, T: int, p: int, parts) -> GradedIdealTruncation:
    pieces, leading, standard, hilb = [], [], [], []
    for basis, lead, std in parts:
        basis = np.asarray(basis, dtype=np.int64)
        basis.flags.writeable = False
        pieces.append(basis)
        leading.append(lead)
        standard.append(std)
        hilb.append(len(std))
    return GradedIdealTruncation(n, T, p, tuple(pieces), tuple(leading),
                                 tuple(standard), tuple(hilb))


def truncation_from_bases(n: int, bases: Sequence, p: int = DEFAULT_PRIME
                          ) -> GradedIdealTruncation:
    """Truncation from arbitrary spanning sets of ``I_0, ..., I_T``."""
    parts = []
    for t, B in enumerate(bases):
        M = dim_S(n, t)
        B = np.asarray(B, dtype=np.int64).reshape(-1, M)
        R, piv = rref(B, p) if len(B) else (np.zeros((0, M), dtype=np.int64), [])
        parts.append(_piece_from_reduced(R, piv, M))
    return _assemble(n, len(bases) - 1, p, parts)


def truncation_from_generators(n: int, gens: Iterable[dict], T: int,
                               p: int = DEFAULT_PRIME) -> GradedIdealTruncation:
    """Truncation of the ideal generated by forms given as ``{exponent: coeff}``."""
    gens = [{tuple(e): c for e, c in g.items()} for g in gens]
    bases = []
    for t in range(T + 1):
        idx = _monomial_index(n, t)
        rows = []
        for g in gens:
            dg = sum(next(iter(g)))
            if dg > t:
                continue
            for shift in monomials(n, t - dg).tolist():
                row = np.zeros(len(idx), dtype=np.int64)
                for e, c in g.items():
                    row[idx[tuple(a + b for a, b in zip(e, shift))]] += c
                rows.append(row % p)
        bases.append(np.array(rows, dtype=np.int64).reshape(-1, len(idx)))
    return truncation_from_bases(n, bases, p)


def _kernel_piece(E: np.ndarray, M: int, p: int):
    if len(E) == 0:
        return np.eye(M, dtype=np.int64), np.arange(M), np.zeros(0, dtype=np.int64)
    K = kernel_basis(E, p)
    # kernel_basis rows are the identity on the free columns of E, and each
    # row's free column is its last nonzero entry (pivots come before it).
    if len(K) == 0:
        return _piece_from_reduced(K, np.zeros(0, dtype=np.int64), M)
    lead = (K.shape[1] - 1 - np.argmax(K[:, ::-1] != 0, axis=1)).astype(np.int64)
    return _piece_from_reduced(K, lead, M)


def ideal_truncation_of_points(P: ProjPointSet, T: int) -> GradedIdealTruncation:
    """Vanishing ideal of a point set in degrees ``0..T``."""
    if T < 1:
        raise ValueError("truncation degree must be at least 1")
    parts = []
    for t in range(T + 1):
        M = dim_S(P.n, t)
        E = evaluation_matrix(P, t) if len(P) else np.zeros((0, M), dtype=np.int64)
        parts.append(_kernel_piece(E, M, P.p))
    return _assemble(P.n, T, P.p, parts)


Sampler = Callable[[int, np.random.Generator], np.ndarray]


def ideal_truncation_of_curve(sampler: Sampler, n: int, T: int, seed: int = 0,
                              p: int = DEFAULT_PRIME, attempts: int = 3
                              ) -> GradedIdealTruncation:
    """Truncated ideal of a curve from ``3 * dim S_T`` sampled points.

    ``sampler(count, rng)`` returns at least ``count`` points of the curve as
    rows.  Another ``dim S_T`` points certify the result: every kernel vector
    must vanish on them too.  A failed certificate triggers a fresh sample
    with a new seed; after ``attempts`` failures a ``SaturationError`` is
    raised.
    """
    if T < 1:
        raise ValueError("truncation degree must be at least 1")
    M_T = dim_S(n, T)
    N, extra = 3 * M_T, M_T
    for attempt in range(attempts):
        rng = np.random.default_rng([seed, attempt])
        pts = normalize_points(sampler(N + extra, rng), p)
        if len(pts) < N + extra:
            raise SaturationError(
                f"sampler returned {len(pts)} distinct points, need {N + extra}")
        main, check = pts[:N], pts[N:N + extra]
        parts = []
        ok = True
        for t in range(T + 1):
            M = dim_S(n, t)
            piece = _kernel_piece(_evaluate(main, n, t, p), M, p)
            K = piece[0]
            if len(K) and matmul(_evaluate(check, n, t, p), K.T, p).any():
                ok = False
                break
            parts.append(piece)
        if ok:
            return _assemble(n, T, p, parts)
    raise SaturationError(f"kernel dimensions unstable after {attempts} samples (T={T})")


# -- Koszul homology ---------------------------------------------------------

@lru_cache(maxsize=None)
def _wedge_basis(n: int, i: int) -> tuple:
    if i < 0 or i > n + 1:
        return ()
    return tuple(itertools.combinations(range(n + 1), i))


def koszul_matrix(I: GradedIdealTruncation, i: int, q: int) -> np.ndarray:
    """Koszul differential ``wedge^i V (x) (S/I)_q -> wedge^{i-1} V (x) (S/I)_{q+1}``.

    Acts on column vectors; ``e_s1 ^ ... ^ e_si (x) f`` maps to
    ``sum_k (-1)^k e_(s without s_k) (x) x_{s_k} f``.
    """
    n, p = I.n, I.p
    src = _wedge_basis(n, i)
    tgt = _wedge_basis(n, i - 1)
    h_src = I.hilb[q] if 0 <= q <= I.T else 0
    if q + 1 > I.T and h_src:
        raise TruncationRangeError(f"degree {q + 1} exceeds truncation T={I.T}")
    h_tgt = I.hilb[q + 1] if 0 <= q + 1 <= I.T else 0
    D = np.zeros((len(tgt) * h_tgt, len(src) * h_src), dtype=np.int64)
    if not (len(src) and len(tgt) and h_src and h_tgt):
        return D
    tindex = {s: k for k, s in enumerate(tgt)}
    for col, sigma in enumerate(src):
        for k, v in enumerate(sigma):
            row = tindex[sigma[:k] + sigma[k + 1:]]
            block = I.multiplication(q, v)
            if k % 2:
                block = (-block) % p
            D[row * h_tgt:(row + 1) * h_tgt, col * h_src:(col + 1) * h_src] = block
    return D


def _differential_rank(I: GradedIdealTruncation, i: int, q: int) -> int:
    if i <= 0 or i > I.n + 1 or q < 0:
        return 0
    key = ("rank", i, q)
    if key not in I._cache:
        I._cache[key] = rank(koszul_matrix(I, i, q), I.p)
    return I._cache[key]


def koszul_betti(I: GradedIdealTruncation, i: int, j: int) -> int:
    """``beta_{i,j}(S/I)`` from the Koszul strand in internal degree ``j``.

    Needs ``(S/I)`` in degrees ``j-i-1 .. j-i+1``, so ``j - i + 1 <= T``.
    """
    n = I.n
    if not 0 <= i <= n + 1:
        raise ValueError(f"column {i} outside 0..{n + 1}")
    q = j - i
    if q < 0:
        return 0
    if q + 1 > I.T:
        raise TruncationRangeError(
            f"beta_{{{i},{j}}} needs degree {q + 1} but the ideal is truncated at {I.T}")
    middle = comb(n + 1, i) * I.hilb[q]
    return middle - _differential_rank(I, i, q) - _differential_rank(I, i + 1, q - 1)


# -- Betti diagrams ----------------------------------------------------------

@dataclass(frozen=True)
class BettiDiagram:
    """Macaulay-layout table: ``rows[q][i] = beta_{i, i+q}(S/I)``."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if not rows or len({len(r) for r in rows}) != 1:
            raise ValueError("diagram rows must be non-empty and of equal length")
        if any(x < 0 for r in rows for x in r):
            raise ValueError("Betti numbers are non-negative")
        object.__setattr__(self, "rows", rows)

    @property
    def max_row(self) -> int:
        return len(self.rows) - 1

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    def entry(self, i: int, q: int) -> int:
        if 0 <= q <= self.max_row and 0 <= i < self.ncols:
            return self.rows[q][i]
        return 0

    def trimmed_columns(self) -> int:
        """Number of columns up to the last one with a nonzero entry."""
        last = 0
        for r in self.rows:
            for i, x in enumerate(r):
                if x:
                    last = max(last, i)
        return last + 1

    def last_nonzero_row(self) -> int:
        for q in range(self.max_row, -1, -1):
            if any(self.rows[q]):
                return q
        return -1

    def to_json(self) -> dict:
        return {"max_row": self.max_row, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data) -> "BettiDiagram":
        if isinstance(data, str):
            data = json.loads(data)
        rows = data["rows"]
        if len(rows) != data["max_row"] + 1:
            raise ValueError("max_row does not match the number of rows")
        return cls(tuple(tuple(r) for r in rows))

    def format(self, ncols: Optional[int] = None, nrows: Optional[int] = None) -> str:
        """Plain-text array with ``-`` for zero entries."""
        ncols = ncols or self.trimmed_columns()
        nrows = self.max_row + 1 if nrows is None else nrows
        cells = [["-" if self.entry(i, q) == 0 else str(self.entry(i, q))
                  for i in range(ncols)] for q in range(nrows)]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)

    def __str__(self):
        return self.format()


def betti_diagram(I: GradedIdealTruncation, max_row: int) -> BettiDiagram:
    """All ``beta_{i,i+q}`` for columns ``0..n+1`` and rows ``0..max_row``."""
    if max_row < 0:
        raise ValueError("max_row must be non-negative")
    if max_row + 1 > I.T:
        raise TruncationRangeError(
            f"rows up to {max_row} need the ideal through degree {max_row + 1}, "
            f"truncated at {I.T}")
    return BettiDiagram(tuple(
        tuple(koszul_betti(I, i, i + q) for i in range(I.n + 2))
        for q in range(max_row + 1)))


def regularity(Dg: BettiDiagram) -> int:
    """``reg(I)``: one more than the last nonzero row of the ``S/I`` diagram."""
    last = Dg.last_nonzero_row()
    if last == Dg.max_row:
        raise DiagramNotStabilized(
            f"row {last} is the last computed row and is nonzero; extend the diagram")
    return last + 1


def betti_hilbert(Dg: BettiDiagram, n: int, s: int) -> int:
    """Hilbert function of ``S/I`` at ``s`` predicted by the Betti numbers."""
    total = 0
    for q in range(Dg.max_row + 1):
        for i in range(Dg.ncols):
            b = Dg.entry(i, q)
            if b:
                total += (-1) ** i * b * dim_S(n, s - i - q)
    return total


@dataclass(frozen=True)
class MrcVerdict:
    holds: bool
    violations: tuple
    reg_used: int

    def to_json(self) -> dict:
        return {"holds": self.holds, "reg_used": self.reg_used,
                "violations": [{"i": i, "q": q, "b_next": a, "b": b}
                               for i, q, a, b in self.violations]}

    @classmethod
    def from_json(cls, data: dict) -> "MrcVerdict":
        return cls(data["holds"], tuple((v["i"], v["q"], v["b_next"], v["b"])
                                        for v in data["violations"]), data["reg_used"])


def mrc_check(Dg: BettiDiagram, reg_C: int) -> MrcVerdict:
    """Minimal Resolution Conjecture test for a point diagram.

    Fails at ``(i, q)`` whenever ``q >= reg_C + 1`` and both
    ``b_{i+1,q-1}`` and ``b_{i,q}`` are nonzero.
    """
    violations = []
    for q in range(reg_C + 1, Dg.max_row + 2):
        for i in range(1, Dg.ncols):
            a, b = Dg.entry(i + 1, q - 1), Dg.entry(i, q)
            if a and b:
                violations.append((i, q, a, b))
    return MrcVerdict(not violations, tuple(violations), reg_C)
