import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from landau_holonomy import (
    OperatorMatrix,
    OperatorRole,
    ParameterPoint,
    StateVector,
    build_basis,
    commutator_defect,
    ladder_a,
    ladder_b,
)


def test_dimension_small():
    assert build_basis(1, 1).dim == 4


def test_dimension_default_scale():
    assert build_basis(40, 8).dim == 369


def test_nonpositive_cutoff_rejected():
    with pytest.raises(ValueError):
        build_basis(0, 5)
    with pytest.raises(ValueError):
        build_basis(5, 0)


@given(st.integers(min_value=1, max_value=9), st.integers(min_value=1, max_value=9))
@settings(max_examples=30, deadline=None)
def test_index_bijection_roundtrip(n_max, m_max):
    basis = build_basis(n_max, m_max)
    for k in range(basis.dim):
        n, m = basis.unflat(k)
        assert basis.flat(n, m) == k
    assert basis.flat(n_max, m_max) == basis.dim - 1


def test_flat_out_of_range():
    basis = build_basis(3, 2)
    with pytest.raises(IndexError):
        basis.flat(4, 0)
    with pytest.raises(IndexError):
        basis.unflat(basis.dim)


def test_ladder_b_action(basis20):
    b = ladder_b(basis20).matrix
    out = b @ basis20.basis_vector(2, 0)
    expected = math.sqrt(2) * basis20.basis_vector(1, 0)
    np.testing.assert_allclose(out, expected, atol=1e-15)


def test_ladder_b_annihilates_vacuum(basis20):
    b = ladder_b(basis20).matrix
    for m in range(basis20.m_max + 1):
        assert np.all(b @ basis20.basis_vector(0, m) == 0)


def test_ladder_b_matrix_element(basis20):
    b = ladder_b(basis20).matrix
    assert b[basis20.flat(1, 1), basis20.flat(2, 1)] == pytest.approx(1.4142135623730951, abs=1e-12)


def test_ladder_a_action(basis20):
    a = ladder_a(basis20).matrix
    out = a @ basis20.basis_vector(0, 3)
    np.testing.assert_allclose(out, math.sqrt(3) * basis20.basis_vector(0, 2), atol=1e-15)
    for n in range(4):
        assert np.all(a @ basis20.basis_vector(n, 0) == 0)


def test_modes_commute_exactly(basis20):
    a = ladder_a(basis20)
    b = ladder_b(basis20)
    zero = np.zeros((basis20.dim, basis20.dim))
    assert commutator_defect(a, b, basis20, target=zero) == 0.0
    assert commutator_defect(a, b.dagger(), basis20, target=zero) == 0.0


def test_canonical_commutators_on_interior(basis20):
    b = ladder_b(basis20)
    a = ladder_a(basis20)
    assert commutator_defect(b, b.dagger(), basis20) <= 1e-13
    assert commutator_defect(a, a.dagger(), basis20) <= 1e-13


def test_commutator_defect_confined_to_boundary(basis20):
    # the full-space defect is order n_max, all of it on the cutoff row
    b = ladder_b(basis20)
    comm = b.matrix @ b.matrix.conj().T - b.matrix.conj().T @ b.matrix - np.eye(basis20.dim)
    n_of = basis20.n_of()
    assert np.abs(comm[n_of < basis20.n_max][:, n_of < basis20.n_max]).max() <= 1e-13
    assert np.abs(comm[n_of == basis20.n_max][:, n_of == basis20.n_max]).max() > 1.0


def test_number_operator_exact_below_cutoff(basis20):
    b = ladder_b(basis20).matrix
    num = b.conj().T @ b
    for n in range(basis20.n_max):
        vec = basis20.basis_vector(n, 1)
        np.testing.assert_allclose(num @ vec, n * vec, atol=1e-13)


def test_commutator_dimension_mismatch(basis20):
    small = build_basis(2, 2)
    with pytest.raises(ValueError):
        commutator_defect(ladder_b(basis20), ladder_b(small), basis20)


def test_operator_role_validation():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(ValueError):
        OperatorMatrix(bad, OperatorRole.HERMITIAN)
    with pytest.raises(ValueError):
        OperatorMatrix(bad, OperatorRole.UNITARY)
    OperatorMatrix(bad, OperatorRole.LADDER)  # no constraint


def test_state_vector_norm_and_overlap():
    v = StateVector(np.array([3.0, 4.0j]))
    assert v.norm == pytest.approx(5.0)
    assert v.normalized().norm == pytest.approx(1.0)
    assert v.overlap(StateVector(np.array([1.0, 0.0]))) == pytest.approx(3.0)


def test_parameter_point_validation():
    with pytest.raises(ValueError):
        ParameterPoint(B=0.0)
    with pytest.raises(ValueError):
        ParameterPoint(B=-1.0)
    with pytest.raises(ValueError):
        ParameterPoint(X1=float("nan"))
    with pytest.raises(ValueError):
        ParameterPoint(r=-0.1)


def test_parameter_point_derived_amplitudes():
    p = ParameterPoint(X1=0.3, X2=-0.4, B=2.0, r=0.5, theta=math.pi / 2)
    assert p.alpha == pytest.approx(0.3 - 0.4j)
    assert p.beta == pytest.approx(0.5j)
