"""Explicit plane models of del Pezzo surfaces over F_p.

``X_d`` (3 <= d <= 7) is realized as P^2 blown up in ``9 - d`` certified
general points, mapped to P^d by the cubics through them.  A divisor class
``a l - sum m_i e_i`` becomes a plane curve of degree ``a`` with a point of
multiplicity ``m_i`` at the i-th base point; its image under the cubic map
is the curve on ``X_d``.

Plane forms are coefficient vectors over the degree-a monomials in
``x, y, z`` (grevlex order, see :func:`ulrich_lab.cacm.monomials`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .cacm import ProjPointSet, _evaluate, _mult_table, dim_S, monomials, normalize_points
from .exactlin import DEFAULT_PRIME, kernel_basis, matmul, rank, rref
from .lattice import DelPezzo, DivClass


class DegenerateConfiguration(RuntimeError):
    """Random choices failed their genericity certificates."""


class EmptyLinearSystem(ValueError):
    pass


class InsufficientPoints(RuntimeError):
    """The root scan found too few rational points; try a larger prime."""


# -- general points and the anticanonical map --------------------------------

def _random_points(rng: np.random.Generator, k: int, dim: int, p: int) -> np.ndarray:
    while True:
        pts = rng.integers(0, p, (k, dim + 1))
        if (pts != 0).any(axis=1).all():
            return normalize_points(pts, p)


def _det3(M: np.ndarray, p: int) -> int:
    M = [[int(x) for x in row] for row in M]
    d = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
         - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
         + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
    return d % p


def is_general_position(points: np.ndarray, p: int = DEFAULT_PRIME) -> bool:
    """No three collinear; for six points, not all on one conic."""
    points = np.asarray(points, dtype=np.int64)
    if len(normalize_points(points, p)) != len(points):
        return False
    for tri in itertools.combinations(range(len(points)), 3):
        if _det3(points[list(tri)], p) == 0:
            return False
    if len(points) == 6 and rank(_evaluate(points, 2, 2, p), p) < 6:
        return False
    return True


def general_points_p2(k: int, seed: int = 0, p: int = DEFAULT_PRIME,
                      retries: int = 100) -> np.ndarray:
    """``k <= 6`` random points of P^2 in general position (rows)."""
    if not 0 <= k <= 6:
        raise ValueError("need 0 <= k <= 6 points")
    rng = np.random.default_rng([seed, 0x6E6E])
    for _ in range(retries):
        pts = _random_points(rng, k, 2, p) if k else np.zeros((0, 3), dtype=np.int64)
        if len(pts) == k and is_general_position(pts, p):
            return pts
    raise DegenerateConfiguration(f"no general configuration of {k} points in {retries} tries")


def anticanonical_map(points: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Basis (rows) of the cubics through ``points``: ``10 - len(points)`` of them."""
    points = np.asarray(points, dtype=np.int64).reshape(-1, 3)
    if len(points) == 0:
        return np.eye(10, dtype=np.int64)
    K = kernel_basis(_evaluate(points, 2, 3, p), p)
    if len(K) != 10 - len(points):
        raise DegenerateConfiguration(
            f"cubics through {len(points)} points have dimension {len(K)}")
    return K


@dataclass(frozen=True, eq=False)
class BlowupModel:
    d: int
    base_points: np.ndarray
    cubics: np.ndarray
    p: int = DEFAULT_PRIME
    seed: int = 0

    @property
    def surface(self) -> DelPezzo:
        return DelPezzo(self.d)

    def image(self, plane_points: np.ndarray) -> np.ndarray:
        """Images in P^d of plane points; base points map to the zero vector."""
        E = _evaluate(np.asarray(plane_points, dtype=np.int64).reshape(-1, 3), 2, 3, self.p)
        return (E @ self.cubics.T) % self.p

    def to_json(self) -> dict:
        return {"d": self.d, "p": self.p, "seed": self.seed,
                "base_points": self.base_points.tolist(), "cubics": self.cubics.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "BlowupModel":
        return cls(data["d"], np.array(data["base_points"], dtype=np.int64).reshape(-1, 3),
                   np.array(data["cubics"], dtype=np.int64), data["p"], data["seed"])


def blowup_model(d: int, seed: int = 0, p: int = DEFAULT_PRIME) -> BlowupModel:
    if not 3 <= d <= 7:
        raise ValueError(f"plane blowup models are realized for 3 <= d <= 7, got {d}")
    pts = general_points_p2(9 - d, seed, p)
    return BlowupModel(d, pts, anticanonical_map(pts, p), p, seed)


def veronese_points(N: int, seed: int = 0, p: int = DEFAULT_PRIME) -> ProjPointSet:
    """Random points of the cubic Veronese surface ``X_9`` in P^9."""
    rng = np.random.default_rng([seed, 9])
    pts = _random_points(rng, N, 2, p)
    return ProjPointSet(9, _evaluate(pts, 2, 3, p), p)


# -- plane forms -------------------------------------------------------------

@lru_cache(maxsize=None)
def _expand_table(a: int) -> tuple:
    return tuple(tuple(e) for e in monomials(2, a).tolist())


def substitute(form: np.ndarray, a: int, A: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Coefficients of ``G(X) = F(A X)`` for a degree-a plane form ``F``."""
    A = np.asarray(A, dtype=np.int64) % p
    # powers[r][e] = (row r of A . X)^e as a degree-e coefficient vector
    powers = []
    for r in range(3):
        pw = [np.ones(1, dtype=np.int64)]
        for e in range(1, a + 1):
            prev = pw[-1]
            table = _mult_table(2, e - 1)
            nxt = np.zeros(dim_S(2, e), dtype=np.int64)
            for v in range(3):
                np.add.at(nxt, table[v], prev * A[r, v])
            pw.append(nxt % p)
        powers.append(pw)
    out = np.zeros(dim_S(2, a), dtype=np.int64)
    for c, e in zip(np.asarray(form, dtype=np.int64) % p, _expand_table(a)):
        if c == 0:
            continue
        term = np.ones(1, dtype=np.int64)
        deg = 0
        for r in range(3):
            term = _poly_mul(term, deg, powers[r][e[r]], e[r], p)
            deg += e[r]
        out = (out + c * term) % p
    return out


@lru_cache(maxsize=None)
def _product_index(d1: int, d2: int) -> np.ndarray:
    idx = {tuple(e): i for i, e in enumerate(monomials(2, d1 + d2).tolist())}
    m1, m2 = monomials(2, d1), monomials(2, d2)
    out = np.empty((len(m1), len(m2)), dtype=np.int64)
    for i, e in enumerate(m1.tolist()):
        for j, f in enumerate(m2.tolist()):
            out[i, j] = idx[(e[0] + f[0], e[1] + f[1], e[2] + f[2])]
    return out


def _poly_mul(f: np.ndarray, df: int, g: np.ndarray, dg: int, p: int) -> np.ndarray:
    out = np.zeros(dim_S(2, df + dg), dtype=np.int64)
    np.add.at(out, _product_index(df, dg), np.outer(f, g) % p)
    return out % p


def _frame(q: np.ndarray) -> np.ndarray:
    """Invertible matrix with last column ``q``: sends (0:0:1) to ``q``."""
    q = np.asarray(q, dtype=np.int64)
    lead = int(np.flatnonzero(q)[0])
    others = [v for v in range(3) if v != lead]
    A = np.zeros((3, 3), dtype=np.int64)
    A[others[0], 0] = 1
    A[others[1], 1] = 1
    A[:, 2] = q
    return A


def _local_orders(a: int) -> np.ndarray:
    """Order at (0:0:1) of each degree-a monomial: the x- plus y-exponent."""
    exps = monomials(2, a)
    return exps[:, 0] + exps[:, 1]


def jet_conditions(a: int, q: np.ndarray, m: int, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Linear conditions on degree-a forms for multiplicity ``>= m`` at ``q``.

    One row per monomial ``x^i y^j z^(a-i-j)`` with ``i + j < m`` in the frame
    that puts ``q`` at (0:0:1), i.e. ``C(m+1, 2)`` rows.
    """
    M = dim_S(2, a)
    if m <= 0:
        return np.zeros((0, M), dtype=np.int64)
    A = _frame(q)
    S = np.stack([substitute(np.eye(M, dtype=np.int64)[c], a, A, p) for c in range(M)])
    return S[:, _local_orders(a) < m].T.copy()


@dataclass(frozen=True, eq=False)
class PlaneCurveRealization:
    cls: DivClass
    form: np.ndarray
    multiplicities: tuple

    @property
    def degree(self) -> int:
        return self.cls.a


def linear_system_member(model: BlowupModel, cls: DivClass, seed: int = 0
                         ) -> PlaneCurveRealization:
    """A random member of ``|cls|`` as a plane curve with assigned base multiplicities."""
    p = model.p
    if cls.k != 9 - model.d:
        raise ValueError(f"class {cls} does not live on the degree-{model.d} surface")
    a = cls.a
    mult = tuple(-b for b in cls.b)
    if a < 1 or any(m < 0 for m in mult):
        raise ValueError("need a >= 1 and non-negative multiplicities")
    rows = [jet_conditions(a, q, m, p) for q, m in zip(model.base_points, mult)]
    C = np.vstack(rows) if rows else np.zeros((0, dim_S(2, a)), dtype=np.int64)
    K = kernel_basis(C, p) if len(C) else np.eye(dim_S(2, a), dtype=np.int64)
    if len(K) == 0:
        raise EmptyLinearSystem(f"no plane curve of degree {a} with multiplicities {mult}")
    rng = np.random.default_rng([seed, 0xC0FE])
    while True:
        coeffs = rng.integers(0, p, len(K))
        form = (coeffs @ K) % p
        if form.any():
            break
    return PlaneCurveRealization(cls, form, mult)


# -- rational points ---------------------------------------------------------

@lru_cache(maxsize=None)
def _interp_inverse(a: int, p: int) -> np.ndarray:
    """Inverse Vandermonde at nodes 0..a: values -> coefficients (low to high)."""
    V = np.array([[pow(t, e, p) for e in range(a + 1)] for t in range(a + 1)], dtype=np.int64)
    R, piv = rref(np.hstack([V, np.eye(a + 1, dtype=np.int64)]), p)
    return R[:, a + 1:].copy()


@lru_cache(maxsize=8)
def _power_table(a: int, p: int) -> np.ndarray:
    """``t**e mod p`` for e = 0..a (rows) and every t in F_p (columns)."""
    T = np.ones((a + 1, p), dtype=np.int64)
    ts = np.arange(p, dtype=np.int64)
    for e in range(1, a + 1):
        T[e] = T[e - 1] * ts % p
    return T


def plane_curve_points(form: np.ndarray, a: int, count: int, rng: np.random.Generator,
                       p: int = DEFAULT_PRIME, exclude: Optional[np.ndarray] = None,
                       max_lines: Optional[int] = None, batch: int = 128) -> np.ndarray:
    """Distinct F_p-points of the plane curve ``form = 0``.

    Each random line ``w + t u`` is scanned over every ``t`` in F_p (plus the
    point ``u`` at infinity); the restriction is interpolated from ``a + 1``
    values and evaluated everywhere at once against a table of powers.
    """
    form = np.asarray(form, dtype=np.int64) % p
    if not form.any():
        raise ValueError("the zero form defines no curve")
    max_lines = max_lines or 50 * count + 1000
    Vinv = _interp_inverse(a, p)
    powers = _power_table(a, p)
    nodes = np.arange(a + 1, dtype=np.int64)
    batch = max(1, min(batch, 8_000_000 // p))  # bounds the batch x p scan table
    excluded = set()
    if exclude is not None and len(exclude):
        excluded = {tuple(r) for r in normalize_points(exclude, p).tolist()}
    found: dict = {}
    lines = 0
    while len(found) < count and lines < max_lines:
        U = rng.integers(0, p, (batch, 3))
        W = rng.integers(0, p, (batch, 3))
        lines += batch
        # values on the nodes: points W + t U, t = 0..a
        pts = (W[:, None, :] + nodes[None, :, None] * U[:, None, :]) % p
        vals = (_evaluate(pts.reshape(-1, 3), 2, a, p) @ form % p).reshape(batch, a + 1)
        coeffs = (vals @ Vinv.T) % p
        acc = matmul(coeffs, powers, p)
        cand = []
        li, ti = np.nonzero(acc == 0)
        if len(li):
            cand.append((W[li] + ti[:, None] * U[li]) % p)
        at_inf = (_evaluate(U, 2, a, p) @ form % p) == 0
        if at_inf.any():
            cand.append(U[at_inf])
        for block in cand:
            block = block[(block != 0).any(axis=1)]
            if not len(block):
                continue
            for row in normalize_points(block, p).tolist():
                key = tuple(row)
                if key not in excluded:
                    found.setdefault(key, None)
    if len(found) < count:
        raise InsufficientPoints(
            f"found {len(found)} of {count} points on a degree-{a} curve after {lines} lines")
    return np.array(list(found)[:count], dtype=np.int64).reshape(-1, 3)


def _image_points(model: BlowupModel, curve: PlaneCurveRealization, count: int,
                  rng: np.random.Generator) -> np.ndarray:
    p = model.p
    need = count
    out = np.zeros((0, model.d + 1), dtype=np.int64)
    seen_plane = np.zeros((0, 3), dtype=np.int64)
    for _ in range(5):
        plane = plane_curve_points(curve.form, curve.degree, need, rng, p,
                                   exclude=np.vstack([model.base_points, seen_plane]))
        seen_plane = np.vstack([seen_plane, plane])
        img = model.image(plane)
        img = img[(img != 0).any(axis=1)]
        out = normalize_points(np.vstack([out, img]), p) if len(img) else out
        need = count - len(out)
        if need <= 0:
            return out[:count]
    raise InsufficientPoints(f"only {len(out)} distinct image points, wanted {count}")


def sample_curve_points(model: BlowupModel, curve: PlaneCurveRealization, N: int,
                        seed: int = 0) -> ProjPointSet:
    """``N`` distinct points of the image of ``curve`` in P^d."""
    if N == 0:
        return ProjPointSet(model.d, np.zeros((0, model.d + 1), dtype=np.int64), model.p)
    rng = np.random.default_rng([seed, 0x5A5A])
    return ProjPointSet(model.d, _image_points(model, curve, N, rng), model.p)


def curve_sampler(model: BlowupModel, curve: PlaneCurveRealization):
    """Sampler for :func:`ulrich_lab.cacm.ideal_truncation_of_curve`."""
    def sample(count: int, rng: np.random.Generator) -> np.ndarray:
        return _image_points(model, curve, count, rng)
    return sample


def rational_normal_curve_points(d: int, N: int, seed: int = 0, p: int = DEFAULT_PRIME,
                                 include_infinity: bool = False) -> ProjPointSet:
    """Points ``(1 : t : ... : t^d)`` for ``N`` distinct random ``t``."""
    if N > p:
        raise ValueError(f"only {p} affine points on the curve, asked for {N}")
    rng = np.random.default_rng([seed, d, 0x4E])
    ts = rng.choice(p, size=N, replace=False).astype(np.int64)
    pts = np.ones((N, d + 1), dtype=np.int64)
    for e in range(1, d + 1):
        pts[:, e] = pts[:, e - 1] * ts % p
    if include_infinity:
        pts = np.vstack([pts, np.eye(d + 1, dtype=np.int64)[-1:]])
    return ProjPointSet(d, pts, p)


def rational_normal_curve_sampler(d: int, p: int = DEFAULT_PRIME):
    def sample(count: int, rng: np.random.Generator) -> np.ndarray:
        ts = rng.choice(p, size=count, replace=False).astype(np.int64)
        pts = np.ones((count, d + 1), dtype=np.int64)
        for e in range(1, d + 1):
            pts[:, e] = pts[:, e - 1] * ts % p
        return pts
    return sample


# -- smoothness --------------------------------------------------------------

def _poly_trim(f: list) -> list:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_gcd_degree(f: list, g: list, p: int) -> int:
    f, g = _poly_trim(list(f)), _poly_trim(list(g))
    while g:
        inv_lead = pow(g[-1], -1, p)
        while len(f) >= len(g) and f:
            c = f[-1] * inv_lead % p
            shift = len(f) - len(g)
            for i, x in enumerate(g):
                f[shift + i] = (f[shift + i] - c * x) % p
            _poly_trim(f)
        f, g = g, f
    return len(f) - 1


def binary_form_squarefree(coeffs: Sequence[int], p: int = DEFAULT_PRIME) -> bool:
    """Is ``sum_i coeffs[i] x^i y^(m-i)`` squarefree over the algebraic closure?"""
    c = [int(x) % p for x in coeffs]
    m = len(c) - 1
    if not any(c):
        return False
    if m <= 1:
        return True
    # the factor y appears with multiplicity m - deg f(x) where f(x) = g(x, 1)
    f = _poly_trim(list(c))
    if m - (len(f) - 1) >= 2:
        return False
    df = [(i * f[i]) % p for i in range(1, len(f))]
    if not _poly_trim(list(df)):
        return len(f) <= 1
    return _poly_gcd_degree(f, df, p) == 0


@dataclass(frozen=True)
class SmoothnessReport:
    ok: bool
    singular_points: tuple
    base_point_failures: tuple


def _gradient(form: np.ndarray, a: int, pts: np.ndarray, p: int) -> np.ndarray:
    exps = monomials(2, a)
    idx = {tuple(e): i for i, e in enumerate(monomials(2, a - 1).tolist())}
    grads = []
    for v in range(3):
        d = np.zeros(dim_S(2, a - 1), dtype=np.int64)
        for c, e in zip(form, exps.tolist()):
            if c and e[v]:
                e2 = list(e)
                e2[v] -= 1
                d[idx[tuple(e2)]] = (d[idx[tuple(e2)]] + c * e[v]) % p
        grads.append(_evaluate(pts, 2, a - 1, p) @ d % p)
    return np.stack(grads, axis=1)


def smoothness_spotcheck(curve: PlaneCurveRealization, model: BlowupModel,
                         plane_points: np.ndarray) -> SmoothnessReport:
    """Report-only smoothness evidence for the strict transform of ``curve``.

    Non-base sample points need a nonzero gradient.  At base point ``i`` the
    lowest nonvanishing jet must have order exactly ``m_i`` with a squarefree
    tangent cone (an ordinary ``m_i``-fold point).
    """
    p, a = model.p, curve.degree
    form = np.asarray(curve.form, dtype=np.int64) % p
    pts = normalize_points(np.asarray(plane_points, dtype=np.int64).reshape(-1, 3), p)
    if len(model.base_points):
        base = {tuple(r) for r in model.base_points.tolist()}
        pts = pts[[tuple(r) not in base for r in pts.tolist()]] if len(pts) else pts
    singular = []
    if len(pts):
        g = _gradient(form, a, pts, p)
        singular = [tuple(int(x) for x in pts[i]) for i in np.flatnonzero(~g.any(axis=1))]
    failures = []
    orders = _local_orders(a)
    for i, (q, m) in enumerate(zip(model.base_points, curve.multiplicities)):
        G = substitute(form, a, _frame(q), p)
        nz = np.flatnonzero(G)
        low = int(orders[nz].min()) if len(nz) else None
        if low != m:
            failures.append((i, f"multiplicity {low}, expected {m}"))
            continue
        cone = np.zeros(m + 1, dtype=np.int64)
        for c, e in zip(G, monomials(2, a).tolist()):
            if c and e[0] + e[1] == m:
                cone[e[0]] = c
        if not binary_form_squarefree(cone, p):
            failures.append((i, "tangent cone is not squarefree"))
    return SmoothnessReport(not singular and not failures, tuple(singular), tuple(failures))
