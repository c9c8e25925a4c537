import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twospinor.algebra import (
    I2,
    Quaternion,
    is_block_diagonal,
    is_block_off_diagonal,
    is_unitary_spin_matrix,
    mat2,
    mat4,
    max_abs,
    quat_conjugate,
    quat_from_matrix,
    quat_product,
    quat_to_matrix,
)

reals = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
quats = st.builds(Quaternion, reals, reals, reals, reals)


def hamilton(p: Quaternion, q: Quaternion) -> tuple:
    """Textbook Hamilton product, written out independently of the matrix form."""
    a1, b1, c1, d1 = p.as_tuple()
    a2, b2, c2, d2 = q.as_tuple()
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def test_units_square_to_minus_one():
    i, j, k = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)
    for u in (i, j, k):
        assert (u * u).as_tuple() == pytest.approx((-1, 0, 0, 0))
    assert (i * j * k).as_tuple() == pytest.approx((-1, 0, 0, 0))
    assert (i * j).as_tuple() == pytest.approx(k.as_tuple())


def test_matrix_form():
    m = quat_to_matrix(Quaternion(1, 2, 3, 4))
    expected = np.array([[1 + 4j, -3 + 2j], [3 + 2j, 1 - 4j]])
    np.testing.assert_allclose(m, expected)


@given(quats, quats)
@settings(max_examples=200)
def test_product_matches_hamilton(p, q):
    np.testing.assert_allclose(quat_product(p, q).as_tuple(), hamilton(p, q), rtol=1e-12, atol=1e-6)


@given(quats)
def test_round_trip_through_matrix(q):
    back = quat_from_matrix(quat_to_matrix(q))
    np.testing.assert_allclose(back.as_tuple(), q.as_tuple(), atol=1e-12)


@given(quats)
def test_determinant_is_norm(q):
    m = quat_to_matrix(q)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    assert det.real == pytest.approx(q.norm(), rel=1e-12, abs=1e-9)
    np.testing.assert_allclose(m @ m.conj().T, q.norm() * I2, rtol=1e-12, atol=1e-9)


def test_conjugate_is_hermitian_adjoint(rng):
    q = Quaternion(*rng.normal(size=4))
    np.testing.assert_allclose(quat_to_matrix(quat_conjugate(q)), quat_to_matrix(q).conj().T)


def test_unit_quaternion_is_spin_matrix(rng):
    for _ in range(50):
        v = rng.normal(size=4)
        v /= np.linalg.norm(v)
        assert is_unitary_spin_matrix(quat_to_matrix(Quaternion(*v)))


def test_non_unit_is_rejected():
    assert not is_unitary_spin_matrix(quat_to_matrix(Quaternion(2, 0, 0, 0)))
    assert not is_unitary_spin_matrix(np.array([[1, 1], [0, 1]]))


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        is_unitary_spin_matrix(I2, tol=0.0)


@pytest.mark.parametrize("bad", [1j, 1 + 0j, "1", None, True])
def test_complex_components_rejected(bad):
    with pytest.raises(TypeError):
        Quaternion(bad, 0, 0, 0)


def test_integer_components_accepted():
    assert Quaternion(1, 2, 3, 4).norm() == 30


def test_shape_helpers():
    with pytest.raises(ValueError):
        mat2(np.eye(3))
    with pytest.raises(ValueError):
        mat4(np.eye(2))
    assert max_abs([]) == 0.0
    m = np.zeros((4, 4))
    m[0, 3] = 1
    assert is_block_off_diagonal(m) and not is_block_diagonal(m)
