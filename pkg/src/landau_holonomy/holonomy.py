"""Loop geometry and holonomies: signed areas, Abelian phases, Wilson loops.

Conventions, used consistently everywhere:

* parallel transport integrates dU/dt = -A(t) U, so the holonomy is the
  ordered product of exp(-A dl) factors with later segments on the left;
* for a loop confined to the displacement plane the connection blocks are
  scalar and the product collapses to U = exp(i gamma) with
  gamma = integral of (X2 dX1 - X1 dX2) = -2 * (enclosed signed area);
* field loops integrate in ln(B), which removes the 1/(2B) weight of the
  field connection analytically: its degenerate block contributes
  (alpha a - conj(alpha) a^dag)/2 per unit ln(B);
* sigma below is the loop integral of X2 d(lnB).  With signed_area's
  (first-axis, second-axis) = (lnB, X2) orientation convention this equals
  MINUS the signed area of the same loop.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .connections import B_GUARD_MIN, FieldGuardError
from .flux import GaussianFlux, to_displacement
from .fock import FockBasis, OperatorMatrix, OperatorRole, ParameterPoint

PLANES = ("X1X2", "X2lnB")
COPLANAR_TOL = 1e-12


@dataclass(frozen=True)
class ParameterPath:
    """Ordered polygon in (X1, X2, ln B, r, theta) space.

    For closed paths the first vertex is not repeated; closure is implicit.
    Edges are straight lines in the five coordinates above (ln B, not B, is
    the field coordinate).
    """

    points: tuple[ParameterPoint, ...]
    closed: bool = True

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if self.closed and len(pts) < 3:
            raise ValueError(f"closed path needs >= 3 points, got {len(pts)}")
        if not pts:
            raise ValueError("path needs >= 1 point")
        coords = self._coord_array(pts)
        nxt = np.roll(coords, -1, axis=0) if self.closed else coords[1:]
        cur = coords if self.closed else coords[:-1]
        if np.any(np.all(nxt == cur, axis=1)):
            raise ValueError("consecutive path points must differ")

    @staticmethod
    def _coord_array(pts) -> np.ndarray:
        return np.array(
            [(p.X1, p.X2, math.log(p.B), p.r, p.theta) for p in pts], dtype=float
        )

    def coords(self) -> np.ndarray:
        """Vertex coordinates, shape (N, 5): columns X1, X2, lnB, r, theta."""
        return self._coord_array(self.points)

    def segment_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(midpoints, deltas) over all segments, each shape (K, 5)."""
        c = self.coords()
        nxt = np.roll(c, -1, axis=0) if self.closed else c[1:]
        cur = c if self.closed else c[:-1]
        return 0.5 * (cur + nxt), nxt - cur

    def resample(self, k_total: int) -> "ParameterPath":
        """Subdivide edges (linearly in the five coordinates) into ~k_total segments."""
        c = self.coords()
        nxt = np.roll(c, -1, axis=0) if self.closed else c[1:]
        cur = c if self.closed else c[:-1]
        lengths = np.linalg.norm(nxt - cur, axis=1)
        total = lengths.sum()
        counts = np.maximum(1, np.rint(k_total * lengths / total).astype(int))
        verts = []
        for i in range(len(cur)):
            fr = np.arange(counts[i]) / counts[i]
            verts.append(cur[i] + np.outer(fr, nxt[i] - cur[i]))
        coords = np.vstack(verts)
        if not self.closed:
            coords = np.vstack([coords, c[-1]])
        pts = tuple(
            ParameterPoint(X1=row[0], X2=row[1], B=math.exp(row[2]), r=row[3], theta=row[4])
            for row in coords
        )
        return ParameterPath(points=pts, closed=self.closed)

    def coarsened(self) -> "ParameterPath":
        """Every other vertex dropped; used for discretization-error estimates."""
        return ParameterPath(points=self.points[::2], closed=self.closed)


def circle_x1x2(
    radius: float,
    segments: int,
    center: tuple[float, float] = (0.0, 0.0),
    B: float = 1.0,
    ccw: bool = True,
    r: float = 0.0,
    theta: float = 0.0,
) -> ParameterPath:
    """Closed regular polygon inscribed in a circle in the (X1, X2) plane."""
    if segments < 3:
        raise ValueError(f"need >= 3 segments, got {segments}")
    sign = 1.0 if ccw else -1.0
    phi = sign * 2.0 * math.pi * np.arange(segments) / segments
    pts = tuple(
        ParameterPoint(
            X1=center[0] + radius * math.cos(p),
            X2=center[1] + radius * math.sin(p),
            B=B,
            r=r,
            theta=theta,
        )
        for p in phi
    )
    return ParameterPath(points=pts, closed=True)


def rectangle_x2_lnb(
    x2_range: tuple[float, float] = (0.0, 1.0),
    lnb_range: tuple[float, float] = (0.0, 1.0),
    segments_per_side: int = 1,
    X1: float = 0.0,
    r: float = 0.0,
    theta: float = 0.0,
) -> ParameterPath:
    """Closed rectangle in the (X2, lnB) plane at fixed X1.

    Traversal (x2_lo,lnb_lo) -> (x2_hi,lnb_lo) -> (x2_hi,lnb_hi) ->
    (x2_lo,lnb_hi), which makes the X2-d(lnB) loop integral equal
    +(x2_hi - x2_lo)(lnb_hi - lnb_lo).
    """
    x2a, x2b = x2_range
    la, lb = lnb_range
    corners = [(x2a, la), (x2b, la), (x2b, lb), (x2a, lb)]
    pts: list[ParameterPoint] = []
    for i, (u0, v0) in enumerate(corners):
        u1, v1 = corners[(i + 1) % 4]
        for k in range(segments_per_side):
            f = k / segments_per_side
            x2 = u0 + f * (u1 - u0)
            lnb = v0 + f * (v1 - v0)
            pts.append(ParameterPoint(X1=X1, X2=x2, B=math.exp(lnb), r=r, theta=theta))
    return ParameterPath(points=tuple(pts), closed=True)


@dataclass
class HolonomyResult:
    abelian_phase: float | None
    unitary: OperatorMatrix | None
    segments_used: int
    richardson_estimate: float
    eigenphases: np.ndarray | None = None
    sigma: float | None = None


def _require_constant(vals: np.ndarray, name: str) -> None:
    if vals.max() - vals.min() > COPLANAR_TOL:
        raise ValueError(f"path not coplanar: {name} varies by {vals.max() - vals.min():.3e}")


def _plane_uv(path: ParameterPath, plane: str) -> tuple[np.ndarray, np.ndarray]:
    c = path.coords()
    if plane == "X1X2":
        _require_constant(c[:, 2], "lnB")
        _require_constant(c[:, 3], "r")
        _require_constant(c[:, 4], "theta")
        return c[:, 0], c[:, 1]
    if plane == "X2lnB":
        _require_constant(c[:, 0], "X1")
        _require_constant(c[:, 3], "r")
        _require_constant(c[:, 4], "theta")
        return c[:, 2], c[:, 1]
    raise ValueError(f"unknown plane {plane!r}, expected one of {PLANES}")


def signed_area(path: ParameterPath, plane: str) -> float:
    """Shoelace area, counterclockwise positive in (first, second) = (X1, X2)
    or (lnB, X2) axes."""
    if not path.closed:
        raise ValueError("signed area requires a closed path")
    u, v = _plane_uv(path, plane)
    un, vn = np.roll(u, -1), np.roll(v, -1)
    return float(0.5 * np.sum(u * vn - un * v))


def _loop_integral_x1x2(x1: np.ndarray, x2: np.ndarray) -> float:
    """Midpoint-rule loop integral of X2 dX1 - X1 dX2 (exact per straight edge)."""
    dx1 = np.roll(x1, -1) - x1
    dx2 = np.roll(x2, -1) - x2
    m1 = x1 + 0.5 * dx1
    m2 = x2 + 0.5 * dx2
    return float(np.sum(m2 * dx1 - m1 * dx2))


def abelian_phase(path: ParameterPath, n: int = 0) -> HolonomyResult:
    """Geometric phase of level n around a closed displacement-plane loop.

    gamma = loop integral of (X2 dX1 - X1 dX2) = -2 * signed area, reported
    as a signed value without mod-2pi reduction.  The diagonal connection
    entries carry no level dependence, so n does not enter the value; it is
    accepted for interface symmetry with the non-Abelian case.
    """
    if n < 0:
        raise ValueError(f"level n must be >= 0, got {n}")
    if not path.closed:
        raise ValueError("abelian phase requires a closed path")
    c = path.coords()
    _require_constant(c[:, 2], "lnB")
    _require_constant(c[:, 3], "r")
    _require_constant(c[:, 4], "theta")
    gamma = _loop_integral_x1x2(c[:, 0], c[:, 1])
    est = 0.0
    if len(path.points) >= 16:
        cc = path.coarsened().coords()
        est = abs(gamma - _loop_integral_x1x2(cc[:, 0], cc[:, 1])) / 3.0
    return HolonomyResult(
        abelian_phase=gamma,
        unitary=None,
        segments_used=len(path.points),
        richardson_estimate=est,
    )


def degenerate_tridiagonal(m_max: int) -> np.ndarray:
    """Fixed tridiagonal T with T[m, m-1] = T[m-1, m] = sqrt(m)."""
    T = np.zeros((m_max + 1, m_max + 1))
    ms = np.arange(1, m_max + 1)
    T[ms, ms - 1] = np.sqrt(ms)
    T[ms - 1, ms] = np.sqrt(ms)
    return T


def _block_lowering(m_max: int) -> np.ndarray:
    op = np.zeros((m_max + 1, m_max + 1), dtype=complex)
    ms = np.arange(1, m_max + 1)
    op[ms - 1, ms] = np.sqrt(ms)
    return op


def _ordered_product(factors: np.ndarray) -> np.ndarray:
    """Multiply segment factors in path order (later segments on the left)."""
    u = np.eye(factors.shape[1], dtype=complex)
    for k in range(factors.shape[0]):
        u = factors[k] @ u
    return u


def _wilson_loop(basis: FockBasis, path: ParameterPath, k_segments: int) -> np.ndarray:
    mids, deltas = path.resample(k_segments).segment_arrays()
    x1m, x2m = mids[:, 0], mids[:, 1]
    dx1, dx2, dlnb = deltas[:, 0], deltas[:, 1], deltas[:, 2]
    mb = basis.m_max + 1
    a = _block_lowering(basis.m_max)
    alpha = x1m + 1j * x2m

    # generator per segment: scalar (X1, X2) part + ln(B)-weighted field block
    gen = np.zeros((len(mids), mb, mb), dtype=complex)
    scal = -1j * x2m * dx1 + 1j * x1m * dx2
    gen += scal[:, None, None] * np.eye(mb)
    gen += (0.5 * dlnb * alpha)[:, None, None] * a
    gen -= (0.5 * dlnb * np.conj(alpha))[:, None, None] * a.conj().T

    herm = 1j * gen  # anti-Hermitian generators, exponentiate by eigen-decomposition
    lam, vec = np.linalg.eigh(herm)
    factors = np.einsum("kij,kj,klj->kil", vec, np.exp(1j * lam), vec.conj())
    return _ordered_product(factors)


def nonabelian_holonomy(
    basis: FockBasis, path: ParameterPath, n: int, k_segments: int
) -> HolonomyResult:
    """Path-ordered Wilson loop on the degenerate block of level n.

    Supports loops varying X1, X2 and B (r and theta must stay constant).
    Midpoint segment evaluation gives O(1/K^2) discretization error,
    estimated by comparison with the half-resolution product.
    """
    if not path.closed:
        raise ValueError("holonomy requires a closed path")
    if k_segments < 100:
        raise ValueError(f"k_segments must be >= 100, got {k_segments}")
    if not (0 <= n <= basis.n_max - 1):
        raise ValueError(f"level n={n} out of range [0, {basis.n_max - 1}]")
    c = path.coords()
    _require_constant(c[:, 3], "r")
    _require_constant(c[:, 4], "theta")

    u_full = _wilson_loop(basis, path, k_segments)
    u_half = _wilson_loop(basis, path, max(100, k_segments // 2))
    est = float(np.abs(u_full - u_half).max()) / 3.0
    phases = np.sort(np.angle(np.linalg.eigvals(u_full)))
    return HolonomyResult(
        abelian_phase=None,
        unitary=OperatorMatrix(u_full, OperatorRole.GENERIC),
        segments_used=k_segments,
        richardson_estimate=est,
        eigenphases=phases,
    )


def commuting_closed_form(basis: FockBasis, path: ParameterPath, n: int) -> HolonomyResult:
    """Closed-form holonomy for X1 = 0 loops in the (X2, lnB) plane.

    With X1 pinned to zero the X2 block vanishes and the field block is
    (i X2 / 2) T d(lnB) with the fixed tridiagonal T, so all segment
    generators commute and the ordered product collapses to
    U = exp(-(i/2) sigma T), sigma = loop integral of X2 d(lnB).
    Eigenphases are -sigma t/2 for each eigenvalue t of T, returned in
    ascending-t order.
    """
    if not path.closed:
        raise ValueError("holonomy requires a closed path")
    if not (0 <= n <= basis.n_max - 1):
        raise ValueError(f"level n={n} out of range [0, {basis.n_max - 1}]")
    c = path.coords()
    if np.abs(c[:, 0]).max() > COPLANAR_TOL:
        raise ValueError(
            "commuting closed form requires X1 = 0 along the whole path; "
            "use nonabelian_holonomy for X1 != 0 loops"
        )
    _require_constant(c[:, 3], "r")
    _require_constant(c[:, 4], "theta")

    x2, lnb = c[:, 1], c[:, 2]
    dlnb = np.roll(lnb, -1) - lnb
    sigma = float(np.sum((x2 + 0.5 * (np.roll(x2, -1) - x2)) * dlnb))

    T = degenerate_tridiagonal(basis.m_max)
    t, vec = np.linalg.eigh(T)
    u = (vec * np.exp(-0.5j * sigma * t)) @ vec.conj().T
    return HolonomyResult(
        abelian_phase=None,
        unitary=OperatorMatrix(u, OperatorRole.GENERIC),
        segments_used=len(path.points),
        richardson_estimate=0.0,
        eigenphases=-0.5 * sigma * t,
        sigma=sigma,
    )


def flux_loop_phase(flux: GaussianFlux, B: float, R: float, segments: int = 100_000) -> float:
    """Geometric phase from driving the flux tube once CCW around a circle.

    The tube center (x0, y0) traverses the radius-R circle about the origin;
    each position maps through to_displacement to a point of a (reflected,
    hence CW) circle in the (X1, X2) plane, whose loop integral is returned
    as a signed value.  The reflection makes the sign opposite to the
    -2*area rule applied naively to a CCW loop of the same magnitude.
    """
    if R <= 0:
        raise ValueError(f"degenerate radius R={R}")
    if B < B_GUARD_MIN:
        raise FieldGuardError(
            f"B={B:.3e} below guard {B_GUARD_MIN:.0e}: the phase scales as 1/B "
            f"and becomes indefinite"
        )
    if segments < 3:
        raise ValueError(f"need >= 3 segments, got {segments}")
    phi = 2.0 * math.pi * np.arange(segments) / segments
    x1 = np.empty(segments)
    x2 = np.empty(segments)
    for k in range(segments):
        moved = dataclasses.replace(flux, x0=R * math.cos(phi[k]), y0=R * math.sin(phi[k]))
        x1[k], x2[k] = to_displacement(moved, B)
    return _loop_integral_x1x2(x1, x2)
