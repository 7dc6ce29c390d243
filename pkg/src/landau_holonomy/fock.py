"""Truncated two-mode Fock space for Landau levels.

Natural units hbar = e = c = mu = 1 throughout: the cyclotron frequency is
omega = B and the magnetic length is 1/sqrt(B).  The b-mode ladders between
Landau levels (index n), the a-mode ladders within a degenerate level
(index m).  Both are cut off inclusively at n_max, m_max; equality tests
downstream compare interior blocks only, since ladder truncation is exact
except at the cutoff row.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

TOL_UNITARY = 1e-10
TOL_HERMITIAN = 1e-12


class NumericalGuardError(RuntimeError):
    """A numerical validity guard tripped (truncation, field, drift...)."""


class TruncationError(NumericalGuardError):
    """Requested operation does not fit in the truncated basis."""


class OperatorRole(str, Enum):
    LADDER = "ladder"
    UNITARY = "unitary"
    HERMITIAN = "hermitian"
    ANTI_HERMITIAN = "anti_hermitian"
    GENERIC = "generic"


@dataclass(frozen=True)
class FockBasis:
    """Occupation basis |n, m> with 0 <= n <= n_max, 0 <= m <= m_max.

    Flat indexing is row-major in n then m: flat = n * (m_max + 1) + m.
    """

    n_max: int
    m_max: int

    def __post_init__(self) -> None:
        if self.n_max < 1 or self.m_max < 1:
            raise ValueError(
                f"cutoffs must be >= 1, got n_max={self.n_max}, m_max={self.m_max}"
            )

    @property
    def dim(self) -> int:
        return (self.n_max + 1) * (self.m_max + 1)

    def flat(self, n: int, m: int) -> int:
        if not (0 <= n <= self.n_max and 0 <= m <= self.m_max):
            raise IndexError(f"(n={n}, m={m}) outside basis")
        return n * (self.m_max + 1) + m

    def unflat(self, k: int) -> tuple[int, int]:
        if not (0 <= k < self.dim):
            raise IndexError(f"flat index {k} outside basis of dim {self.dim}")
        return divmod(k, self.m_max + 1)

    def n_of(self) -> np.ndarray:
        """Landau index of every flat basis state, shape (dim,)."""
        return np.repeat(np.arange(self.n_max + 1), self.m_max + 1)

    def m_of(self) -> np.ndarray:
        return np.tile(np.arange(self.m_max + 1), self.n_max + 1)

    def block_indices(self, n_keep: int, m_keep: int) -> np.ndarray:
        """Flat indices of all states with n <= n_keep and m <= m_keep."""
        return np.flatnonzero((self.n_of() <= n_keep) & (self.m_of() <= m_keep))

    def interior_indices(self, n_guard: int = 1, m_guard: int = 1) -> np.ndarray:
        return self.block_indices(self.n_max - n_guard, self.m_max - m_guard)

    def basis_vector(self, n: int, m: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.flat(n, m)] = 1.0
        return v


@dataclass
class OperatorMatrix:
    """Dense complex operator on the truncated basis with a role tag."""

    matrix: np.ndarray
    role: OperatorRole = OperatorRole.GENERIC

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"operator must be square, got shape {self.matrix.shape}")
        if self.role is OperatorRole.UNITARY and self.unitarity_defect() > TOL_UNITARY:
            raise ValueError(f"unitary role but defect {self.unitarity_defect():.3e}")
        if self.role is OperatorRole.HERMITIAN and self.hermiticity_defect() > TOL_HERMITIAN:
            raise ValueError(f"hermitian role but defect {self.hermiticity_defect():.3e}")
        if (
            self.role is OperatorRole.ANTI_HERMITIAN
            and self.anti_hermiticity_defect() > TOL_HERMITIAN
        ):
            raise ValueError(
                f"anti-hermitian role but defect {self.anti_hermiticity_defect():.3e}"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def unitarity_defect(self) -> float:
        u = self.matrix
        return float(np.abs(u.conj().T @ u - np.eye(self.dim)).max())

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def anti_hermiticity_defect(self) -> float:
        return float(np.abs(self.matrix + self.matrix.conj().T).max())

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.matrix.conj().T, self.role)


@dataclass
class StateVector:
    """State on the truncated basis; unitaries must preserve the norm to 1e-10."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).ravel()

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def normalized(self) -> "StateVector":
        return StateVector(self.amplitudes / self.norm)


@dataclass(frozen=True)
class ParameterPoint:
    """The five-dimensional parameter (X1, X2, B, r, theta), natural units.

    alpha = X1 + i*X2 is the displacement amplitude, beta = r*exp(i*theta)
    the squeeze amplitude.  B must be strictly positive.
    """

    X1: float = 0.0
    X2: float = 0.0
    B: float = 1.0
    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self) -> None:
        vals = (self.X1, self.X2, self.B, self.r, self.theta)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite parameter in {vals}")
        if self.B <= 0.0:
            raise ValueError(f"B must be > 0, got {self.B}")
        if self.r < 0.0:
            raise ValueError(f"squeeze magnitude r must be >= 0, got {self.r}")

    @property
    def alpha(self) -> complex:
        return complex(self.X1, self.X2)

    @property
    def beta(self) -> complex:
        return self.r * cmath.exp(1j * self.theta)


def build_basis(n_max: int, m_max: int) -> FockBasis:
    """Basis with inclusive cutoffs; dimension (n_max+1)*(m_max+1)."""
    return FockBasis(n_max=n_max, m_max=m_max)


def _lowering(dim: int) -> np.ndarray:
    op = np.zeros((dim, dim), dtype=complex)
    ks = np.arange(1, dim)
    op[ks - 1, ks] = np.sqrt(ks)
    return op


def ladder_b(basis: FockBasis) -> OperatorMatrix:
    """Inter-level lowering operator: b|n,m> = sqrt(n)|n-1,m>."""
    mat = np.kron(_lowering(basis.n_max + 1), np.eye(basis.m_max + 1))
    return OperatorMatrix(mat, OperatorRole.LADDER)


def ladder_a(basis: FockBasis) -> OperatorMatrix:
    """Intra-level (degeneracy) lowering operator: a|n,m> = sqrt(m)|n,m-1>."""
    mat = np.kron(np.eye(basis.n_max + 1), _lowering(basis.m_max + 1))
    return OperatorMatrix(mat, OperatorRole.LADDER)


def commutator_defect(
    P: OperatorMatrix,
    Q: OperatorMatrix,
    basis: FockBasis,
    target: np.ndarray | None = None,
) -> float:
    """Max-norm of ([P, Q] - target) on the interior block.

    The interior block keeps states with n <= n_max-1 and m <= m_max-1,
    where ladder truncation introduces no artifacts.  Default target is
    the identity (canonical commutator); pass zeros for commuting pairs.
    """
    if P.dim != Q.dim:
        raise ValueError(f"dimension mismatch: {P.dim} vs {Q.dim}")
    if target is None:
        target = np.eye(P.dim)
    comm = P.matrix @ Q.matrix - Q.matrix @ P.matrix - target
    keep = basis.interior_indices()
    return float(np.abs(comm[np.ix_(keep, keep)]).max())
