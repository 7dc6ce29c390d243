"""Displacement, squeeze and field-rescaling unitaries, and the Hamiltonian forms.

All unitaries are truncated-matrix exponentials of exactly anti-Hermitian
generators.  They are evaluated through the eigendecomposition of the
Hermitian matrix i*generator, which is as accurate as scaling-and-squaring
Pade (the two agree to ~1e-15, pinned by a regression test) and exactly
unitary on the full truncated space.  Physical accuracy of the states they
produce is controlled separately by cutoff guards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .fock import (
    FockBasis,
    NumericalGuardError,
    OperatorMatrix,
    OperatorRole,
    ParameterPoint,
    StateVector,
    TruncationError,
    ladder_a,
    ladder_b,
)

#: eigenstate construction requires occupied probability above n_max - GUARD_BAND
#: to stay below GUARD_TAIL.
GUARD_BAND = 5
GUARD_TAIL = 1e-10


class GuardBandError(NumericalGuardError):
    """Occupation leaked into the guard band near the cutoff."""


def unitary_exp(generator: np.ndarray) -> np.ndarray:
    """exp(G) for exactly anti-Hermitian G, via eigendecomposition of iG."""
    lam, vec = np.linalg.eigh(1j * generator)
    return (vec * np.exp(-1j * lam)) @ vec.conj().T


class HamiltonianKind(str, Enum):
    H0 = "h0"
    COHERENT_FOCK = "coherent_fock"
    COHERENT_PI = "coherent_pi"
    SQUEEZED_FOCK = "squeezed_fock"
    SQUEEZED_PI = "squeezed_pi"


@dataclass
class HamiltonianForm:
    kind: HamiltonianKind
    point: ParameterPoint
    matrix: OperatorMatrix


def required_n_max(alpha: complex) -> int:
    """Smallest Landau cutoff that keeps a displaced state's tail below ~1e-10."""
    a = abs(alpha)
    return math.ceil(a * a + 6.0 * a + 10.0)


def displacement(basis: FockBasis, alpha: complex) -> OperatorMatrix:
    """D(alpha) = exp(alpha*b^dag - conj(alpha)*b) on the truncated basis."""
    need = required_n_max(alpha)
    if basis.n_max < need:
        raise TruncationError(
            f"displacement |alpha|={abs(alpha):.4g} needs n_max >= {need}, "
            f"basis has n_max={basis.n_max}"
        )
    b = ladder_b(basis).matrix
    gen = alpha * b.conj().T - np.conj(alpha) * b
    return OperatorMatrix(unitary_exp(gen), OperatorRole.UNITARY)


def max_squeeze(basis: FockBasis) -> float:
    """Largest r whose squeezed-vacuum mean occupation ~exp(2r)/2 fits the cutoff."""
    return 0.5 * math.log(2.0 * basis.n_max)


def squeeze(basis: FockBasis, beta: complex) -> OperatorMatrix:
    """S(beta) = exp(beta*b^dag^2/2 - conj(beta)*b^2/2) on the truncated basis."""
    r = abs(beta)
    if r > max_squeeze(basis):
        raise TruncationError(
            f"squeeze r={r:.4g} exceeds max {max_squeeze(basis):.4g} at n_max={basis.n_max}"
        )
    b = ladder_b(basis).matrix
    bd = b.conj().T
    gen = 0.5 * beta * (bd @ bd) - 0.5 * np.conj(beta) * (b @ b)
    return OperatorMatrix(unitary_exp(gen), OperatorRole.UNITARY)


def embedding_generator(basis: FockBasis, B: float) -> np.ndarray:
    """Generator of the field rescaling: G(B) = (ab - a^dag b^dag) / (2B).

    This is the derivative of the fixed-representation embedding below; its
    inter-level matrix elements <n,m|G|n',m'> = sqrt(n'm')/(2B) on the
    (n'-1, m'-1) row calibrate the sign convention.
    """
    if B <= 0:
        raise ValueError(f"B must be > 0, got {B}")
    a = ladder_a(basis).matrix
    b = ladder_b(basis).matrix
    return (a @ b - a.conj().T @ b.conj().T) / (2.0 * B)


def b_embedding(basis: FockBasis, B: float, B_ref: float) -> OperatorMatrix:
    """K(B, B_ref): unitary mapping the B_ref Landau basis to the B one.

    K = exp(ln(B/B_ref)/2 * (ab - a^dag b^dag)); K(B_ref, B_ref) = I and
    dK/dB at B_ref equals embedding_generator(basis, B_ref).
    """
    if B <= 0 or B_ref <= 0:
        raise ValueError(f"fields must be > 0, got B={B}, B_ref={B_ref}")
    a = ladder_a(basis).matrix
    b = ladder_b(basis).matrix
    gen = 0.5 * math.log(B / B_ref) * (a @ b - a.conj().T @ b.conj().T)
    return OperatorMatrix(unitary_exp(gen), OperatorRole.UNITARY)


def _pi_matrices(basis: FockBasis, B: float) -> tuple[np.ndarray, np.ndarray]:
    """Kinetic momenta pi_x = sqrt(B/2)(b^dag + b), pi_y = -i sqrt(B/2)(b^dag - b)."""
    b = ladder_b(basis).matrix
    bd = b.conj().T
    return np.sqrt(B / 2.0) * (bd + b), -1j * np.sqrt(B / 2.0) * (bd - b)


def _hermitize(mat: np.ndarray) -> np.ndarray:
    # fold out roundoff asymmetry from matrix products
    return 0.5 * (mat + mat.conj().T)


def hamiltonian(
    basis: FockBasis, kind: HamiltonianKind | str, point: ParameterPoint
) -> HamiltonianForm:
    """One of the five Hamiltonian forms at the given parameter point.

    h0 is diagonal with entries B(n + 1/2).  The fock forms conjugate h0 by
    the displacement (and squeeze) unitaries; the pi forms are assembled from
    the shifted kinetic momenta pi'_x = pi_x - sqrt(2B) X1,
    pi'_y = pi_y + sqrt(2B) X2.  The squeezed pi form is the anisotropic
    quadratic form with principal axes rotated by -theta/2: the axis
    (cos(theta/2), -sin(theta/2)) carries the factor exp(-2r) and the
    orthogonal one exp(+2r).  The fock and pi forms of each family agree on
    the interior block; they differ only in cutoff rows.
    """
    kind = HamiltonianKind(kind)
    B = point.B
    if kind in (HamiltonianKind.COHERENT_FOCK, HamiltonianKind.COHERENT_PI) and point.r != 0.0:
        raise ValueError(f"{kind.value} requires r = 0, got r={point.r}")

    if kind is HamiltonianKind.H0:
        n_of = basis.n_of().astype(float)
        mat = np.diag(B * (n_of + 0.5)).astype(complex)
        return HamiltonianForm(kind, point, OperatorMatrix(mat, OperatorRole.HERMITIAN))

    if kind is HamiltonianKind.COHERENT_FOCK:
        h0 = hamiltonian(basis, HamiltonianKind.H0, point).matrix.matrix
        d = displacement(basis, point.alpha).matrix
        mat = _hermitize(d @ h0 @ d.conj().T)
        return HamiltonianForm(kind, point, OperatorMatrix(mat, OperatorRole.HERMITIAN))

    if kind is HamiltonianKind.SQUEEZED_FOCK:
        h0 = hamiltonian(basis, HamiltonianKind.H0, point).matrix.matrix
        d = displacement(basis, point.alpha).matrix
        s = squeeze(basis, point.beta).matrix
        u = d @ s
        mat = _hermitize(u @ h0 @ u.conj().T)
        return HamiltonianForm(kind, point, OperatorMatrix(mat, OperatorRole.HERMITIAN))

    pix, piy = _pi_matrices(basis, B)
    eye = np.eye(basis.dim)
    pixp = pix - np.sqrt(2.0 * B) * point.X1 * eye
    piyp = piy + np.sqrt(2.0 * B) * point.X2 * eye

    if kind is HamiltonianKind.COHERENT_PI:
        mat = 0.5 * (pixp @ pixp + piyp @ piyp)
        return HamiltonianForm(kind, point, OperatorMatrix(_hermitize(mat), OperatorRole.HERMITIAN))

    # squeezed pi form
    c, s_ = math.cos(point.theta / 2.0), math.sin(point.theta / 2.0)
    soft = c * pixp - s_ * piyp
    hard = s_ * pixp + c * piyp
    mat = 0.5 * (math.exp(-2.0 * point.r) * (soft @ soft) + math.exp(2.0 * point.r) * (hard @ hard))
    return HamiltonianForm(kind, point, OperatorMatrix(_hermitize(mat), OperatorRole.HERMITIAN))


def eigenstate(basis: FockBasis, point: ParameterPoint, n: int, m: int) -> StateVector:
    """Displaced (and squeezed) Landau state D(alpha) S(beta) |n, m>.

    Requires n at least GUARD_BAND levels below the cutoff and checks after
    construction that the occupied probability above n_max - GUARD_BAND stays
    below GUARD_TAIL.
    """
    if not (0 <= n <= basis.n_max - GUARD_BAND):
        raise GuardBandError(
            f"level n={n} violates guard band: need 0 <= n <= {basis.n_max - GUARD_BAND}"
        )
    if not (0 <= m <= basis.m_max):
        raise ValueError(f"m={m} outside basis (m_max={basis.m_max})")

    vec = basis.basis_vector(n, m)
    if point.r != 0.0:
        vec = squeeze(basis, point.beta).matrix @ vec
    if point.alpha != 0.0:
        vec = displacement(basis, point.alpha).matrix @ vec

    tail = float(np.sum(np.abs(vec[basis.n_of() > basis.n_max - GUARD_BAND]) ** 2))
    if tail > GUARD_TAIL:
        raise GuardBandError(
            f"occupied probability {tail:.3e} above n_max - {GUARD_BAND} exceeds {GUARD_TAIL:.0e}; "
            f"increase n_max"
        )
    return StateVector(vec)
