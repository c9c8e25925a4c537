"""Complex 2x2 / 4x4 helpers and the quaternion <-> spin-matrix correspondence.

Scalars are plain Python ``complex`` and matrices are numpy ``complex128``
arrays of fixed shape; nothing here is mutated after construction.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass

import numpy as np

# single algebraic identity vs. a multi-step composed computation
TOL_IDENTITY = 1e-12
TOL_COMPOSED = 1e-10

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)

# quaternion units as 2x2 complex matrices
Q_I = np.array([[0, 1j], [1j, 0]])
Q_J = np.array([[0, -1], [1, 0]], dtype=complex)
Q_K = np.array([[1j, 0], [0, -1j]])


def mat2(entries) -> np.ndarray:
    m = np.array(entries, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    return m


def mat4(entries) -> np.ndarray:
    m = np.array(entries, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    return m


def max_abs(m) -> float:
    """Max-absolute-entry norm, used for every residual in the package."""
    return float(np.max(np.abs(np.asarray(m)))) if np.size(m) else 0.0


def block(ul, ur, ll, lr) -> np.ndarray:
    """Assemble a 4x4 matrix from four 2x2 blocks."""
    return np.block([[ul, ur], [ll, lr]]).astype(complex)


def upper_right(m: np.ndarray) -> np.ndarray:
    return m[:2, 2:]


def lower_left(m: np.ndarray) -> np.ndarray:
    return m[2:, :2]


def is_block_off_diagonal(m: np.ndarray, tol: float = TOL_IDENTITY) -> bool:
    return max_abs(m[:2, :2]) <= tol and max_abs(m[2:, 2:]) <= tol


def is_block_diagonal(m: np.ndarray, tol: float = TOL_IDENTITY) -> bool:
    return max_abs(m[:2, 2:]) <= tol and max_abs(m[2:, :2]) <= tol


@dataclass(frozen=True)
class Quaternion:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            value = getattr(self, name)
            # complex coefficients have no place in the matrix representation
            if isinstance(value, (bool, np.bool_)) or not isinstance(value, numbers.Real):
                raise TypeError(f"quaternion component {name} must be real, got {value!r}")
            object.__setattr__(self, name, float(value))

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return quat_product(self, other)

    def norm(self) -> float:
        """Sum of squares a^2 + b^2 + c^2 + d^2 (no square root)."""
        return self.a**2 + self.b**2 + self.c**2 + self.d**2

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


def quat_to_matrix(q: Quaternion) -> np.ndarray:
    """Return ``I a + i b + j c + k d``, i.e. ``[[a+id, -c+ib], [c+ib, a-id]]``."""
    return q.a * I2 + q.b * Q_I + q.c * Q_J + q.d * Q_K


def quat_from_matrix(m: np.ndarray) -> Quaternion:
    """Invert :func:`quat_to_matrix`. The input must lie in its image."""
    m = mat2(m)
    a = (m[0, 0] + m[1, 1]).real / 2
    d = (m[0, 0] - m[1, 1]).imag / 2
    c = (m[1, 0] - m[0, 1]).real / 2
    b = (m[1, 0] + m[0, 1]).imag / 2
    return Quaternion(a, b, c, d)


def quat_conjugate(q: Quaternion) -> Quaternion:
    return Quaternion(q.a, -q.b, -q.c, -q.d)


def quat_product(p: Quaternion, q: Quaternion) -> Quaternion:
    """Quaternion product, taken as the matrix product of the representations."""
    return quat_from_matrix(quat_to_matrix(p) @ quat_to_matrix(q))


def is_unitary_spin_matrix(m: np.ndarray, tol: float = TOL_IDENTITY) -> bool:
    """True iff ``m`` is unimodular and unitary to within ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = mat2(m)
    unimodular = abs(np.linalg.det(m) - 1) <= tol
    unitary = max_abs(m @ m.conj().T - I2) <= tol
    return bool(unimodular and unitary)
