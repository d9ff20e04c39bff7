"""Picard-lattice numerics on del Pezzo surfaces.

A del Pezzo surface of degree ``d`` (3 <= d <= 9) is the blowup of P^2 in
``k = 9 - d`` general points.  Its Picard lattice has basis
``l, e_1, ..., e_k`` with intersection form ``diag(1, -1, ..., -1)``; the
canonical class is ``K = (-3; 1, ..., 1)`` and the anticanonical (hyperplane)
class is ``H = (3; -1, ..., -1)``.

A class ``a*l + b_1 e_1 + ... + b_k e_k`` is stored as ``DivClass(a, (b_1,
..., b_k))``, so the curve class ``5l - 4e_1 - e_2 - e_3`` on the cubic
surface is ``DivClass(5, (-4, -1, -1, 0, 0, 0))``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence


class UnsupportedDefault(ValueError):
    """No built-in generator list for the requested surface."""


@dataclass(frozen=True)
class DelPezzo:
    d: int

    def __post_init__(self):
        if not 3 <= self.d <= 9:
            raise ValueError(f"del Pezzo degree must be in 3..9, got {self.d}")

    @property
    def k(self) -> int:
        return 9 - self.d

    @property
    def H(self) -> "DivClass":
        return DivClass(3, (-1,) * self.k)

    @property
    def K(self) -> "DivClass":
        return DivClass(-3, (1,) * self.k)

    def line(self) -> "DivClass":
        return DivClass(1, (0,) * self.k)

    def exceptional(self, i: int) -> "DivClass":
        b = [0] * self.k
        b[i] = 1
        return DivClass(0, tuple(b))

    def cls(self, a: int, *b: int) -> "DivClass":
        """Class with ``l``-coefficient ``a``; missing ``e_i`` coefficients are 0."""
        if len(b) > self.k:
            raise ValueError(f"degree {self.d} surface has only {self.k} exceptional classes")
        return DivClass(a, tuple(b) + (0,) * (self.k - len(b)))


@dataclass(frozen=True, order=True)
class DivClass:
    a: int
    b: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))

    @property
    def k(self) -> int:
        return len(self.b)

    def _check(self, other: "DivClass"):
        if self.k != other.k:
            raise ValueError(f"classes live on different lattices (k={self.k} vs k={other.k})")

    def __add__(self, other: "DivClass") -> "DivClass":
        self._check(other)
        return DivClass(self.a + other.a, tuple(x + y for x, y in zip(self.b, other.b)))

    def __sub__(self, other: "DivClass") -> "DivClass":
        self._check(other)
        return DivClass(self.a - other.a, tuple(x - y for x, y in zip(self.b, other.b)))

    def __neg__(self) -> "DivClass":
        return DivClass(-self.a, tuple(-x for x in self.b))

    def __mul__(self, n: int) -> "DivClass":
        return DivClass(n * self.a, tuple(n * x for x in self.b))

    __rmul__ = __mul__

    def to_json(self) -> list[int]:
        return [self.a, *self.b]

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "DivClass":
        data = list(data)
        if not data:
            raise ValueError("empty class vector")
        return cls(data[0], tuple(data[1:]))

    @classmethod
    def parse(cls, text: str) -> "DivClass":
        """Parse ``"5,-4,-1,-1,0,0,0"``."""
        return cls.from_json(int(x) for x in text.replace(" ", "").split(",") if x)

    def __str__(self):
        return "(" + str(self.a) + "; " + ", ".join(str(x) for x in self.b) + ")"


def intersect(D1: DivClass, D2: DivClass) -> int:
    D1._check(D2)
    return D1.a * D2.a - sum(x * y for x, y in zip(D1.b, D2.b))


def _surface(D: DivClass) -> DelPezzo:
    return DelPezzo(9 - D.k)


def degree(D: DivClass) -> int:
    return intersect(D, _surface(D).H)


def arith_genus(D: DivClass) -> int:
    X = _surface(D)
    two_g_minus_two = intersect(D, D) + intersect(D, X.K)
    assert two_g_minus_two % 2 == 0, "adjunction parity fails"
    return two_g_minus_two // 2 + 1


def _a_range(d: int, deg: int, selfint: int) -> range:
    # Cauchy-Schwarz on the e-part: (deg - 3a)^2 <= k (a^2 - selfint), i.e.
    # d a^2 - 6 deg a + deg^2 + k selfint <= 0 with d = 9 - k > 0.
    k = 9 - d
    A, B, C = d, -6 * deg, deg * deg + k * selfint
    disc = B * B - 4 * A * C
    if disc < 0:
        return range(0)
    s = math.isqrt(disc)
    lo = math.floor((-B - s - 1) / (2 * A))
    hi = math.ceil((-B + s + 1) / (2 * A))
    return range(lo, hi + 1)


def _e_vectors(k: int, total: int, sq: int):
    """All integer k-vectors with sum ``total`` and sum of squares ``sq``."""
    if k == 0:
        if total == 0 and sq == 0:
            yield ()
        return
    bound = math.isqrt(sq)
    for x in range(-bound, bound + 1):
        rest_sq = sq - x * x
        rest_total = total - x
        # the remaining k-1 entries must satisfy rest_total^2 <= (k-1) rest_sq
        if rest_total * rest_total > (k - 1) * rest_sq:
            continue
        for tail in _e_vectors(k - 1, rest_total, rest_sq):
            yield (x,) + tail


def enumerate_classes(X: DelPezzo, deg: int, selfint: int) -> list[DivClass]:
    """All classes with ``D.H = deg`` and ``D^2 = selfint``, sorted."""
    if deg < 1:
        raise ValueError("deg must be positive")
    return list(_enumerate_cached(X.d, deg, selfint))


@lru_cache(maxsize=None)
def _enumerate_cached(d: int, deg: int, selfint: int) -> tuple[DivClass, ...]:
    k = 9 - d
    out = set()
    for a in _a_range(d, deg, selfint):
        sq = a * a - selfint
        if sq < 0:
            continue
        # D.H = 3a + sum(b)
        for b in _e_vectors(k, deg - 3 * a, sq):
            out.add(DivClass(a, b))
    return tuple(sorted(out))


def minus_one_classes(X: DelPezzo) -> list[DivClass]:
    """The (-1)-classes E (E^2 = -1, E.K = -1): the lines of X."""
    return enumerate_classes(X, 1, -1)


def is_nef(X: DelPezzo, D: DivClass) -> bool:
    """Nefness tested against generators of the effective cone.

    For d <= 7 the cone is spanned by the (-1)-curves; for d = 8 by ``e_1``
    and ``l - e_1``; for d = 9 by ``l``.
    """
    if intersect(D, X.H) < 0:
        return False
    if X.d == 9:
        return D.a >= 0
    tests = list(minus_one_classes(X))
    if X.d == 8:
        tests.append(X.line() - X.exceptional(0))
    return all(intersect(D, E) >= 0 for E in tests)


@dataclass(frozen=True)
class UlrichVerdict:
    degree: int
    c2: Fraction
    deg_ok: bool
    parity_ok: bool
    lower_bound_ok: bool
    upper_bound_ok: bool
    nef_ok: bool
    overall: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "overall", all(
            (self.deg_ok, self.parity_ok, self.lower_bound_ok,
             self.upper_bound_ok, self.nef_ok)))

    def to_json(self) -> dict:
        out = asdict(self)
        c2 = self.c2
        out["c2"] = int(c2) if c2.denominator == 1 else str(c2)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "UlrichVerdict":
        kw = {k: data[k] for k in ("degree", "deg_ok", "parity_ok", "lower_bound_ok",
                                   "upper_bound_ok", "nef_ok")}
        return cls(c2=Fraction(data["c2"]), **kw)


def ulrich_numeric_check(X: DelPezzo, D: DivClass, r: int) -> UlrichVerdict:
    """Necessary numeric conditions for ``D`` to be c_1 of a rank-r Ulrich bundle.

    Degree ``D.H = d r``; integrality of ``c_2 = (D^2 - (d-2) r) / 2``;
    the bounds ``(d-2) r^2 <= D^2 <= d r^2``; nefness of ``D``.
    """
    if r < 1:
        raise ValueError("rank must be positive")
    d = X.d
    sq = intersect(D, D)
    deg = intersect(D, X.H)
    return UlrichVerdict(
        degree=deg,
        c2=Fraction(sq - (d - 2) * r, 2),
        deg_ok=deg == d * r,
        parity_ok=(sq - (d - 2) * r) % 2 == 0,
        lower_bound_ok=(d - 2) * r * r <= sq,
        upper_bound_ok=sq <= d * r * r,
        nef_ok=is_nef(X, D),
    )


# -- arithmetically Gorenstein surfaces (K_X = m H) -------------------------

@dataclass(frozen=True)
class AgParams:
    d: int
    m: int
    h0K: int = 0

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("surface degree must be at least 2")
        if self.m < -2:
            raise ValueError(f"K_X = mH forces m >= -2 on an AG surface, got m={self.m}")
        if self.h0K < 0:
            raise ValueError("h0(K_X) must be non-negative")


def ag_ulrich_conditions(ag: AgParams, r: int, c1H: int, c1sq: int
                         ) -> tuple[Fraction, Fraction, bool]:
    """Expected ``c_1.H`` and ``c_2`` of a rank-r Ulrich bundle on an AG surface.

    Returns ``(expected_c1H, expected_c2, passed)`` where ``passed`` means the
    given degree matches and the predicted ``c_2`` is an integer.
    """
    d, m = ag.d, ag.m
    expected_c1H = Fraction((m + 3) * d * r, 2)
    expected_c2 = (Fraction(c1sq, 2) - Fraction(d * r * (m * m + 3 * m + 4), 4)
                   + r * (1 + ag.h0K))
    passed = expected_c1H == c1H and expected_c2.denominator == 1
    return expected_c1H, expected_c2, passed


def canonical_sections_required(d: int, m: int) -> Fraction:
    """Value of h0(K_X) that makes ``c_2 = g - 1 + r`` on an AG surface."""
    if m < -2:
        raise ValueError("m must be >= -2")
    return Fraction(d * (m + 1) * (m + 2), 2)


def dual_twist_c1(ag: AgParams, r: int, c1H: int, c1sq: int) -> tuple[int, int]:
    """Numerics of ``c_1`` of the dual bundle twisted by ``(m+3)H``."""
    t = ag.m + 3
    return (ag.d * r * t - c1H,
            c1sq - 2 * t * r * c1H + t * t * ag.d * r * r)


# -- Ulrich semigroup --------------------------------------------------------

Generator = tuple[DivClass, int]


def semigroup_generators(X: DelPezzo, gens: Optional[Iterable[Generator]] = None
                         ) -> list[Generator]:
    """Generators (class, rank) of the Ulrich semigroup.

    Built in for the cubic surface (the 72 twisted-cubic classes, rank 1) and
    the Veronese surface (2H of rank 2, 3H of rank 3).  Other degrees need an
    explicit list.
    """
    if gens is not None:
        out = [(D, int(r)) for D, r in gens]
        for D, r in out:
            if D.k != X.k:
                raise ValueError(f"generator {D} does not live on the degree-{X.d} lattice")
        return sorted(out)
    if X.d == 3:
        return [(Q, 1) for Q in enumerate_classes(X, 3, 1)]
    if X.d == 9:
        return [(2 * X.H, 2), (3 * X.H, 3)]
    raise UnsupportedDefault(
        f"no built-in Ulrich semigroup generators for degree {X.d}; pass them explicitly")


@dataclass(frozen=True)
class Decomposition:
    parts: tuple[Generator, ...]

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.parts)

    def total(self) -> DivClass:
        D = self.parts[0][0]
        for Q, _ in self.parts[1:]:
            D = D + Q
        return D

    def to_json(self) -> dict:
        return {"parts": [{"class": Q.to_json(), "rank": r} for Q, r in self.parts],
                "rank": self.rank}


def semigroup_member(X: DelPezzo, D: DivClass, gens: Optional[Sequence[Generator]] = None
                     ) -> Optional[Decomposition]:
    """Write ``D`` as a sum of generators, or return None.

    Depth-first search in lexicographic generator order (generators are
    reused with multiplicity, never revisited in decreasing order).  The
    degree is additive and positive on generators, which bounds the depth.
    Remainders are pruned by necessary conditions that sums of generators
    inherit: nefness when every generator is nef, and, for the built-in
    (genuinely Ulrich) generators, the bounds ``(d-2) r^2 <= D^2 <= d r^2``.
    """
    builtin = gens is None
    gens = semigroup_generators(X, gens)
    if not gens:
        return None
    H = X.H
    gdeg = [intersect(Q, H) for Q, _ in gens]
    if min(gdeg) <= 0:
        raise ValueError("generators must have positive degree")
    if D.k != X.k:
        raise ValueError("class does not live on this lattice")
    lines = minus_one_classes(X) if X.d <= 7 else []
    if not all(is_nef(X, Q) for Q, _ in gens):
        lines = []
    min_deg = min(gdeg)
    failed: set[tuple[DivClass, int]] = set()

    def plausible(R: DivClass) -> bool:
        if any(intersect(R, E) < 0 for E in lines):
            return False
        if builtin:
            deg = intersect(R, H)
            if deg % X.d:
                return False
            r = deg // X.d
            sq = intersect(R, R)
            if not (X.d - 2) * r * r <= sq <= X.d * r * r:
                return False
        return True

    def search(R: DivClass, start: int) -> Optional[list[int]]:
        deg = intersect(R, H)
        if deg == 0:
            return [] if R == DivClass(0, (0,) * X.k) else None
        if deg < min_deg or (R, start) in failed or not plausible(R):
            return None
        for i in range(start, len(gens)):
            if gdeg[i] > deg:
                continue
            rest = search(R - gens[i][0], i)
            if rest is not None:
                return [i] + rest
        failed.add((R, start))
        return None

    idx = search(D, 0)
    if idx is None:
        return None
    return Decomposition(tuple(gens[i] for i in idx))
