"""Berry connections of the displaced/squeezed Landau families.

The state family is defined globally in one fixed representation as
|psi(lambda)> = K(B, B0) D(alpha) S(beta) |n, m>, a smooth single-valued
section over parameter space, so central finite differences of the family
need no gauge fixing and provide an independent oracle for the closed-form
connection matrices.

Convention: entry [(n,m), (n',m')] = <n(.),m| d/d lambda |n'(.),m'>, which is
anti-Hermitian for an orthonormal frame.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import (
    FockBasis,
    NumericalGuardError,
    OperatorMatrix,
    OperatorRole,
    ParameterPoint,
    ladder_a,
    ladder_b,
)
from .operators import b_embedding, displacement, squeeze

PARAMETERS = ("X1", "X2", "B", "r", "theta")

#: connections carry 1/(2B) weights; refuse evaluation below this field
B_GUARD_MIN = 1e-6

FD_STEP_MIN = 1e-6
FD_STEP_MAX = 1e-2
FD_STEP_DEFAULT = 1e-4


class FieldGuardError(NumericalGuardError):
    """Magnetic field too small for a well-conditioned connection."""


@dataclass
class ConnectionMatrix:
    parameter: str
    point: ParameterPoint
    full: OperatorMatrix
    basis: FockBasis


def _check_parameter(parameter: str) -> str:
    if parameter not in PARAMETERS:
        raise ValueError(f"unknown parameter {parameter!r}, expected one of {PARAMETERS}")
    return parameter


def _check_field_guard(point: ParameterPoint) -> None:
    if point.B < B_GUARD_MIN:
        raise FieldGuardError(
            f"B={point.B:.3e} below guard {B_GUARD_MIN:.0e}: the 1/(2B) connection "
            f"weights diverge and the loop phase becomes indefinite"
        )


def connection_analytic(
    basis: FockBasis, parameter: str, point: ParameterPoint
) -> ConnectionMatrix:
    """Closed-form connection matrix for one of X1, X2, B, r, theta.

    X1 and X2 couple only neighbouring Landau levels and are scalar (hence
    Abelian) on each degenerate block; their inter-level ladder weights pick
    up cosh r and sinh r factors when the family is squeezed, reducing to the
    bare ladders at r = 0.  B mixes n and m jointly (cosh r and sinh r
    weighted ladder pairs plus the alpha-dependent degenerate-block part); at
    r = 0 it reduces entrywise to the coherent-family form.  r and theta act
    within the b mode only, two levels at a time.
    """
    _check_parameter(parameter)
    _check_field_guard(point)
    b = ladder_b(basis).matrix
    bd = b.conj().T
    eye = np.eye(basis.dim)

    if parameter == "X1":
        up = (math.cosh(point.r) - cmath.exp(1j * point.theta) * math.sinh(point.r)) * bd
        mat = -1j * point.X2 * eye + (up - up.conj().T)
    elif parameter == "X2":
        herm = (math.cosh(point.r) + cmath.exp(1j * point.theta) * math.sinh(point.r)) * bd
        mat = 1j * point.X1 * eye + 1j * (herm + herm.conj().T)
    elif parameter == "B":
        a = ladder_a(basis).matrix
        ab = a @ b
        abd = a @ bd
        up = (
            math.cosh(point.r) * ab
            + math.sinh(point.r) * cmath.exp(1j * point.theta) * abd
            + point.alpha * a
        )
        mat = (up - up.conj().T) / (2.0 * point.B)
    elif parameter == "r":
        up = 0.5 * cmath.exp(1j * point.theta) * (bd @ bd)
        mat = up - up.conj().T
    else:  # theta
        herm = 0.25 * math.sinh(2.0 * point.r) * cmath.exp(1j * point.theta) * (bd @ bd)
        herm = herm + herm.conj().T
        herm = herm + 0.5 * math.sinh(point.r) ** 2 * np.diag(2.0 * basis.n_of() + 1.0)
        mat = 1j * herm

    return ConnectionMatrix(parameter, point, OperatorMatrix(mat, OperatorRole.ANTI_HERMITIAN), basis)


def oracle_comparison_block(
    basis: FockBasis, point: ParameterPoint, tail: float = 1e-18
) -> np.ndarray:
    """Flat indices of the sub-block where finite differences are clean.

    Builds the embedded family once and keeps the levels whose displaced and
    squeezed images leave at most `tail` probability in the five rows below
    the cutoff (amplitude sqrt(tail), which bounds the truncation floor of
    the central differences).  The top m row, the only one the a-ladder
    truncates, is always dropped.
    """
    fam = _family(basis, point, B_ref=point.B)
    n_of = basis.n_of()
    guard = n_of > basis.n_max - 5
    col_tail = np.abs(fam[guard, :]) ** 2
    tails = col_tail.sum(axis=0)
    clean = tails <= tail
    n_cap = -1
    for n in range(basis.n_max + 1):
        if np.all(clean[n_of == n]):
            n_cap = n
        else:
            break
    if n_cap < 0:
        raise ValueError(
            f"basis n_max={basis.n_max} leaves no clean block at |alpha|="
            f"{abs(point.alpha):.3g}, r={point.r:.3g}"
        )
    return basis.block_indices(n_cap, basis.m_max - 1)


# central differences rebuild the same unitaries many times; cache the
# (read-only) matrices keyed by basis and amplitude
@lru_cache(maxsize=32)
def _cached_displacement(basis: FockBasis, alpha: complex) -> np.ndarray:
    return displacement(basis, alpha).matrix


@lru_cache(maxsize=32)
def _cached_squeeze(basis: FockBasis, beta: complex) -> np.ndarray:
    return squeeze(basis, beta).matrix


@lru_cache(maxsize=32)
def _cached_embedding(basis: FockBasis, B: float, B_ref: float) -> np.ndarray:
    return b_embedding(basis, B, B_ref).matrix


def _family(basis: FockBasis, point: ParameterPoint, B_ref: float) -> np.ndarray:
    """Columns are the embedded states K(B, B_ref) D(alpha) S(beta) |n, m>."""
    mat = _cached_displacement(basis, point.alpha)
    if point.r != 0.0:
        mat = mat @ _cached_squeeze(basis, point.beta)
    if point.B != B_ref:
        mat = _cached_embedding(basis, point.B, B_ref) @ mat
    return mat


def _shift(point: ParameterPoint, parameter: str, h: float) -> ParameterPoint:
    kw = {"X1": point.X1, "X2": point.X2, "B": point.B, "r": point.r, "theta": point.theta}
    kw[parameter] += h
    return ParameterPoint(**kw)


def connection_numeric(
    basis: FockBasis,
    parameter: str,
    point: ParameterPoint,
    h: float = FD_STEP_DEFAULT,
) -> ConnectionMatrix:
    """Central-difference oracle: <psi(l)| [psi(l+h) - psi(l-h)] / 2h, O(h^2)."""
    _check_parameter(parameter)
    _check_field_guard(point)
    if not (FD_STEP_MIN <= h <= FD_STEP_MAX):
        raise ValueError(
            f"step h={h:.3e} outside [{FD_STEP_MIN:.0e}, {FD_STEP_MAX:.0e}]: "
            f"too small cancels, too large truncates"
        )
    if parameter == "B" and point.B - h <= 0:
        raise ValueError(f"B - h = {point.B - h:.3e} must stay positive")
    if parameter == "r" and point.r - h < 0:
        raise ValueError(f"r - h = {point.r - h:.3e} must stay non-negative")

    base = _family(basis, point, B_ref=point.B)
    plus = _family(basis, _shift(point, parameter, +h), B_ref=point.B)
    minus = _family(basis, _shift(point, parameter, -h), B_ref=point.B)
    mat = base.conj().T @ (plus - minus) / (2.0 * h)
    return ConnectionMatrix(parameter, point, OperatorMatrix(mat, OperatorRole.GENERIC), basis)


def degenerate_block(conn: ConnectionMatrix, n: int) -> OperatorMatrix:
    """(m_max+1) x (m_max+1) sub-matrix of the connection at fixed level n.

    For X1 and X2 the block is a scalar multiple of the identity (the
    degenerate-space structure is Abelian); for B it is tridiagonal in m.
    """
    basis = conn.basis
    if not (0 <= n <= basis.n_max - 1):
        raise ValueError(f"level n={n} out of range [0, {basis.n_max - 1}]")
    lo = n * (basis.m_max + 1)
    hi = lo + basis.m_max + 1
    return OperatorMatrix(conn.full.matrix[lo:hi, lo:hi], OperatorRole.GENERIC)
