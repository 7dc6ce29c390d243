import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from landau_holonomy import (
    FieldGuardError,
    ParameterPoint,
    build_basis,
    connection_analytic,
    connection_numeric,
    degenerate_block,
)
from landau_holonomy.connections import oracle_comparison_block

POINT = ParameterPoint(X1=0.3, X2=0.7, B=1.7, r=0.4, theta=0.8)


def test_x1_diagonal_entries(basis20):
    conn = connection_analytic(basis20, "X1", ParameterPoint(X1=0.0, X2=0.7, B=1.0))
    np.testing.assert_allclose(np.diag(conn.full.matrix), -0.7j, atol=1e-15)


def test_x2_raising_term_sign(basis20):
    # the inter-level raising weight is +i sqrt(n'+1) on the (n'+1, n') row
    conn = connection_analytic(basis20, "X2", ParameterPoint(X1=0.2, X2=0.0, B=1.0))
    for n in range(3):
        val = conn.full.matrix[basis20.flat(n + 1, 0), basis20.flat(n, 0)]
        assert val == pytest.approx(1j * math.sqrt(n + 1), abs=1e-14)
        val_low = conn.full.matrix[basis20.flat(n, 0), basis20.flat(n + 1, 0)]
        assert val_low == pytest.approx(1j * math.sqrt(n + 1), abs=1e-14)


def test_field_block_entry(basis20):
    conn = connection_analytic(basis20, "B", ParameterPoint(X1=0.0, X2=0.5, B=2.0))
    blk = degenerate_block(conn, 0).matrix
    assert blk[0, 1] == pytest.approx(0.125j, abs=1e-14)


def test_squeeze_rate_entry(basis20):
    conn = connection_analytic(basis20, "r", ParameterPoint(B=1.0, r=0.2, theta=0.0))
    val = conn.full.matrix[basis20.flat(0, 0), basis20.flat(2, 0)]
    assert val == pytest.approx(-0.5 * math.sqrt(2), abs=1e-14)


def test_squeeze_angle_diagonal(basis20):
    conn = connection_analytic(basis20, "theta", ParameterPoint(B=1.0, r=1.0, theta=0.3))
    assert conn.full.matrix[0, 0] == pytest.approx(0.6905489227709077j, abs=1e-12)
    # diagonal grows as (2n'+1)
    assert conn.full.matrix[basis20.flat(2, 0), basis20.flat(2, 0)] == pytest.approx(
        5 * 0.6905489227709077j, abs=1e-11
    )


@given(
    st.floats(-1.2, 1.2),
    st.floats(-1.2, 1.2),
    st.floats(0.5, 4.0),
    st.floats(0.0, 0.8),
    st.floats(-3.0, 3.0),
)
@settings(max_examples=20, deadline=None)
def test_anti_hermiticity(x1, x2, b, r, theta):
    basis = build_basis(10, 2)
    point = ParameterPoint(X1=x1, X2=x2, B=b, r=r, theta=theta)
    for param in ("X1", "X2", "B", "r", "theta"):
        conn = connection_analytic(basis, param, point)
        assert conn.full.anti_hermiticity_defect() <= 1e-12


@pytest.mark.parametrize("param", ["X1", "X2", "B", "r", "theta"])
def test_oracle_equivalence(param):
    basis = build_basis(56, 3)
    keep = oracle_comparison_block(basis, POINT, tail=1e-13)
    ana = connection_analytic(basis, param, POINT).full.matrix
    num = connection_numeric(basis, param, POINT, h=1e-4).full.matrix
    assert np.abs((ana - num)[np.ix_(keep, keep)]).max() <= 1e-6


def test_oracle_second_order_convergence():
    basis = build_basis(56, 3)
    keep = oracle_comparison_block(basis, POINT, tail=1e-13)
    ana = connection_analytic(basis, "X1", POINT).full.matrix
    err = []
    for h in (1e-3, 5e-4):
        num = connection_numeric(basis, "X1", POINT, h=h).full.matrix
        err.append(np.abs((ana - num)[np.ix_(keep, keep)]).max())
    assert err[0] / err[1] == pytest.approx(4.0, abs=0.5)


def test_coherent_connection_at_finite_displacement(basis40):
    # coherent-family X1/X2/B forms at r = 0 against the finite-difference oracle
    point = ParameterPoint(X1=-0.9, X2=0.4, B=0.9)
    keep = oracle_comparison_block(basis40, point, tail=1e-20)
    for param in ("X1", "X2", "B"):
        ana = connection_analytic(basis40, param, point).full.matrix
        num = connection_numeric(basis40, param, point, h=1e-4).full.matrix
        assert np.abs((ana - num)[np.ix_(keep, keep)]).max() <= 1e-6


def test_x1_diagonal_matches_oracle_tightly(basis40):
    point = ParameterPoint(X1=0.0, X2=0.7, B=1.0)
    num = connection_numeric(basis40, "X1", point, h=1e-4).full.matrix
    keep = oracle_comparison_block(basis40, point, tail=1e-20)
    diag = np.diag(num)[keep]
    np.testing.assert_allclose(diag, -0.7j, atol=1e-7)


def test_field_connection_reduces_at_zero_squeeze(basis20):
    squeezed = connection_analytic(
        basis20, "B", ParameterPoint(X1=0.4, X2=-0.3, B=1.3, r=0.0, theta=1.1)
    )
    coherent = connection_analytic(basis20, "B", ParameterPoint(X1=0.4, X2=-0.3, B=1.3))
    assert np.abs(squeezed.full.matrix - coherent.full.matrix).max() == 0.0


def test_fd_step_validation(basis20):
    with pytest.raises(ValueError):
        connection_numeric(basis20, "X1", POINT, h=1e-7)
    with pytest.raises(ValueError):
        connection_numeric(basis20, "X1", POINT, h=0.1)
    with pytest.raises(ValueError):
        connection_numeric(basis20, "B", ParameterPoint(B=1e-3), h=2e-3)
    with pytest.raises(ValueError):
        connection_numeric(basis20, "r", ParameterPoint(B=1.0, r=0.0), h=1e-3)


def test_unknown_parameter(basis20):
    with pytest.raises(ValueError):
        connection_analytic(basis20, "X3", POINT)


def test_field_guard(basis20):
    with pytest.raises(FieldGuardError):
        connection_analytic(basis20, "B", ParameterPoint(B=1e-7))


def test_degenerate_block_x1_scalar(basis20):
    conn = connection_analytic(basis20, "X1", ParameterPoint(X1=0.0, X2=0.7, B=1.0))
    blk = degenerate_block(conn, 2).matrix
    np.testing.assert_allclose(blk, -0.7j * np.eye(basis20.m_max + 1), atol=1e-15)


def test_degenerate_block_field_tridiagonal():
    basis = build_basis(6, 1)
    conn = connection_analytic(basis, "B", ParameterPoint(X1=0.0, X2=1.0, B=1.0))
    blk = degenerate_block(conn, 0).matrix
    np.testing.assert_allclose(blk, 0.5j * np.array([[0, 1], [1, 0]]), atol=1e-14)


def test_degenerate_block_zero_at_origin(basis20):
    conn = connection_analytic(basis20, "B", ParameterPoint(X1=0.0, X2=0.0, B=1.0))
    assert np.abs(degenerate_block(conn, 1).matrix).max() == 0.0


def test_degenerate_block_range(basis20):
    conn = connection_analytic(basis20, "X1", POINT)
    with pytest.raises(ValueError):
        degenerate_block(conn, basis20.n_max)


def test_displacement_blocks_commute_with_anything(basis20, rng):
    # scalar blocks: the degenerate-space structure is Abelian
    mb = basis20.m_max + 1
    other = rng.normal(size=(mb, mb)) + 1j * rng.normal(size=(mb, mb))
    for param in ("X1", "X2"):
        blk = degenerate_block(connection_analytic(basis20, param, POINT), 1).matrix
        assert np.abs(blk @ other - other @ blk).max() <= 1e-14
