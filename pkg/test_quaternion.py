"""
Quaternion algebra test suite: basis table, inverse, conjugate/norm, batched products
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatreg.errors import DomainError
from quatreg.quaternion import (
    ONE,
    STRUCTURE,
    ZERO,
    Quaternion,
    conjugate_and_norm,
    distance,
    inverse,
    inverse_arrays,
    isclose,
    multiply,
    multiply_arrays,
)

coefficient = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
quaternions = st.builds(Quaternion, coefficient, coefficient, coefficient, coefficient)


def e(k: int) -> Quaternion:
    return Quaternion.basis(k)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# ============================================================================
# MULTIPLICATION TABLE
# ============================================================================

class TestMultiplicationTable:
    """Basis products and the structure-constant tensor"""

    def test_imaginary_products(self):
        assert multiply(e(2), e(3)) == e(4)
        assert multiply(e(2), e(4)) == -e(3)
        assert multiply(e(3), e(4)) == e(2)

    @pytest.mark.parametrize("i,j", [(2, 3), (2, 4), (3, 4)])
    def test_anticommutativity_is_exact(self, i, j):
        assert multiply(e(i), e(j)) + multiply(e(j), e(i)) == ZERO

    @pytest.mark.parametrize("i", [2, 3, 4])
    def test_imaginary_squares(self, i):
        assert multiply(e(i), e(i)) == -ONE

    @pytest.mark.parametrize("i,j", [(2, 3), (2, 4), (3, 4)])
    def test_table_rule(self, i, j):
        expected = e(9 - i - j) * float((-1) ** (i + j + 1))
        assert multiply(e(i), e(j)) == expected

    def test_identity_element(self, rng):
        for _ in range(20):
            q = Quaternion.from_array(rng.normal(size=4))
            assert multiply(ONE, q) == q
            assert multiply(q, ONE) == q

    def test_worked_square(self):
        q = Quaternion(1.0, 2.0, 3.0, 4.0)
        assert q * q == Quaternion(-28.0, 4.0, 6.0, 8.0)

    def test_structure_tensor_entries(self):
        assert STRUCTURE.shape == (4, 4, 4)
        assert np.count_nonzero(STRUCTURE) == 16
        assert set(np.unique(STRUCTURE)) == {-1.0, 0.0, 1.0}


# ============================================================================
# INVERSE, CONJUGATE, NORM
# ============================================================================

class TestInverseAndNorm:
    """Inverse, conjugate and norm"""

    def test_inverse_of_basis(self):
        assert inverse(e(1)) == e(1)
        assert inverse(e(2)) == -e(2)

    def test_inverse_of_zero_raises(self):
        with pytest.raises(DomainError):
            inverse(ZERO)
        with pytest.raises(DomainError):
            ZERO.inverse()

    def test_inverse_arrays_rejects_zero_rows(self):
        with pytest.raises(DomainError):
            inverse_arrays(np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]]))

    def test_conjugate_and_norm(self):
        conj, norm = conjugate_and_norm(e(1))
        assert conj == e(1) and norm == 1.0
        conj, norm = conjugate_and_norm(e(2) + e(3))
        assert conj == -e(2) - e(3)
        assert norm == pytest.approx(math.sqrt(2.0))

    @given(quaternions)
    def test_times_conjugate_is_squared_norm(self, q):
        product = q * q.conjugate()
        expected = Quaternion.from_real(q.norm() ** 2)
        assert isclose(product, expected, rel_tol=1e-12, abs_tol=1e-12)

    @given(quaternions)
    def test_inverse_is_two_sided(self, q):
        if q.norm() < 1e-3:
            return
        inv = q.inverse()
        assert isclose(q * inv, ONE, rel_tol=1e-12, abs_tol=1e-12)
        assert isclose(inv * q, ONE, rel_tol=1e-12, abs_tol=1e-12)


# ============================================================================
# ALGEBRA PROPERTIES
# ============================================================================

class TestAlgebraProperties:
    """Associativity and norm multiplicativity over seeded batches"""

    def test_associativity_batch(self, rng):
        a, b, c = (rng.normal(size=(1000, 4)) for _ in range(3))
        lhs = multiply_arrays(multiply_arrays(a, b), c)
        rhs = multiply_arrays(a, multiply_arrays(b, c))
        scale = np.maximum(np.abs(lhs).max(axis=1), 1.0)
        assert np.all(np.abs(lhs - rhs).max(axis=1) <= 1e-12 * scale)

    def test_norm_multiplicativity_batch(self, rng):
        a, b = (rng.normal(size=(1000, 4)) for _ in range(2))
        lhs = np.linalg.norm(multiply_arrays(a, b), axis=1)
        rhs = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12)

    @settings(max_examples=200)
    @given(quaternions, quaternions)
    def test_scalar_and_batched_products_agree(self, p, q):
        batched = multiply_arrays(p.to_array(), q.to_array())
        assert Quaternion.from_array(batched) == multiply(p, q)

    @given(quaternions, quaternions)
    def test_norm_multiplicative(self, p, q):
        assert (p * q).norm() == pytest.approx(p.norm() * q.norm(), rel=1e-12, abs=1e-12)


# ============================================================================
# VALUE TYPE
# ============================================================================

class TestQuaternionValue:
    """Construction, arithmetic and rendering"""

    def test_basis_index_checked(self):
        with pytest.raises(ValueError):
            Quaternion.basis(5)

    def test_real_and_pure_parts(self):
        q = Quaternion(1.0, 2.0, -3.0, 4.0)
        assert q.real == 1.0
        assert q.pure == Quaternion(0.0, 2.0, -3.0, 4.0)

    def test_real_scaling_both_sides(self):
        q = Quaternion(1.0, 2.0, 3.0, 4.0)
        assert 2.0 * q == q * 2.0 == Quaternion(2.0, 4.0, 6.0, 8.0)
        assert q / 2.0 == Quaternion(0.5, 1.0, 1.5, 2.0)

    def test_distance_and_isclose(self):
        a = Quaternion(1.0, 0.0, 0.0, 0.0)
        b = Quaternion(1.0, 0.0, 0.5, 0.0)
        assert distance(a, b) == 0.5
        assert not isclose(a, b)
        assert isclose(a, a + Quaternion(1e-12, 0.0, 0.0, 0.0))

    def test_text_rendering(self):
        assert str(Quaternion(1.0, 2.0, -3.0, 4.0)) == "1 + 2 e2 - 3 e3 + 4 e4"
