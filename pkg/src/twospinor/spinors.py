"""Two-spinor index algebra and the vector <-> spinor dictionary.

Conventions (fixed once, asserted by the test-suite):

* ``eps_{01} = eps^{01} = +1`` for both the unprimed and the primed copy.
* raising  ``xi^A = eps^{AB} xi_B``;  lowering ``xi_B = xi^A eps_{AB}``.
  With these, ``lower(raise(xi)) == xi``, see :data:`ROUND_TRIP_SIGN`.
* Minkowski signature ``(+,-,-,-)``; the spin frame is the identity basis,
  so the Infeld-van der Waerden symbols below are plain 2x2 matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .algebra import TOL_COMPOSED, TOL_IDENTITY, I2, max_abs

Variance = Literal["upper", "lower"]

EPS = np.array([[0, 1], [-1, 0]], dtype=complex)
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

# lower(raise(xi)) / xi, identical for every xi under the convention above
ROUND_TRIP_SIGN = +1

_S2 = math.sqrt(2.0)

# g_a^{AB'} for the standard Minkowski tetrad (row A, column B')
IVDW = (
    np.array([[1, 0], [0, 1]], dtype=complex) / _S2,
    np.array([[0, 1], [1, 0]], dtype=complex) / _S2,
    np.array([[0, 1j], [-1j, 0]], dtype=complex) / _S2,
    np.array([[1, 0], [0, -1]], dtype=complex) / _S2,
)
# g^a_{AB'} = IVDW_SIGN[a] * g_a^{AB'}
IVDW_SIGN = (+1, +1, -1, +1)
IVDW_INVERSE = tuple(s * g for s, g in zip(IVDW_SIGN, IVDW))


@dataclass(frozen=True)
class Epsilon:
    """Component matrices of ``eps_{AB}`` and ``eps^{AB}``.

    Both default to ``[[0, 1], [-1, 0]]``. The ``upper`` matrix can be overridden
    only to inject faults into the verification suite.
    """

    lower: np.ndarray = field(default_factory=lambda: EPS.copy())
    upper: np.ndarray = field(default_factory=lambda: EPS.copy())

    def mixed(self) -> np.ndarray:
        """``eps_{AB} eps^{CB}`` as a matrix in (A, C); the identity when consistent."""
        return self.lower @ self.upper.T

    def antisymmetry_residual(self) -> float:
        return max(max_abs(self.lower + self.lower.T), max_abs(self.upper + self.upper.T))

    def identity_residual(self) -> float:
        return max_abs(self.mixed() - I2)


DEFAULT_EPSILON = Epsilon()


@dataclass(frozen=True)
class TwoSpinor:
    c: np.ndarray
    variance: Variance = "upper"
    primed: bool = False

    def __post_init__(self):
        c = np.array(self.c, dtype=complex).reshape(-1)
        if c.shape != (2,):
            raise ValueError(f"a two-spinor has 2 components, got {c.shape}")
        if self.variance not in ("upper", "lower"):
            raise ValueError(f"unknown variance {self.variance!r}")
        c.flags.writeable = False
        object.__setattr__(self, "c", c)

    def conj(self) -> "TwoSpinor":
        """Complex conjugate; conjugation swaps primed and unprimed."""
        return TwoSpinor(self.c.conj(), self.variance, not self.primed)

    def __add__(self, other: "TwoSpinor") -> "TwoSpinor":
        _check_same_kind(self, other)
        return TwoSpinor(self.c + other.c, self.variance, self.primed)

    def __mul__(self, scalar) -> "TwoSpinor":
        return TwoSpinor(self.c * scalar, self.variance, self.primed)

    __rmul__ = __mul__


def _check_same_kind(x: TwoSpinor, y: TwoSpinor) -> None:
    if x.variance != y.variance or x.primed != y.primed:
        raise ValueError("two-spinors of different index type cannot be combined")


def raise_index(xi: TwoSpinor, eps: Epsilon = DEFAULT_EPSILON) -> TwoSpinor:
    """``xi^A = eps^{AB} xi_B``."""
    if xi.variance != "lower":
        raise ValueError("raise_index expects a lower-index spinor")
    return TwoSpinor(eps.upper @ xi.c, "upper", xi.primed)


def lower_index(xi: TwoSpinor, eps: Epsilon = DEFAULT_EPSILON) -> TwoSpinor:
    """``xi_B = xi^A eps_{AB}``."""
    if xi.variance != "upper":
        raise ValueError("lower_index expects an upper-index spinor")
    return TwoSpinor(xi.c @ eps.lower, "lower", xi.primed)


def contract(x: TwoSpinor, y: TwoSpinor) -> complex:
    """Full contraction of one upper and one lower index of the same type."""
    if x.primed != y.primed:
        raise ValueError("cannot contract a primed index with an unprimed one")
    if {x.variance, y.variance} != {"upper", "lower"}:
        raise ValueError("contraction needs one upper and one lower index")
    return complex(x.c @ y.c)


@dataclass(frozen=True)
class FourVector:
    t: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("t", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def from_array(cls, v) -> "FourVector":
        v = np.asarray(v, dtype=float).reshape(4)
        return cls(*v)

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y, self.z])

    def lowered(self) -> np.ndarray:
        return METRIC @ self.as_array()


def minkowski_dot(u, v) -> float:
    u = u.as_array() if isinstance(u, FourVector) else np.asarray(u)
    v = v.as_array() if isinstance(v, FourVector) else np.asarray(v)
    return u @ METRIC @ v


def minkowski_norm(v: FourVector) -> float:
    """``t^2 - x^2 - y^2 - z^2``."""
    return float(minkowski_dot(v, v))


def vector_to_spinor(v: FourVector) -> np.ndarray:
    """``v^{AA'} = v^a g_a^{AA'}``; Hermitian for real ``v``."""
    comps = v.as_array() if isinstance(v, FourVector) else np.asarray(v, dtype=complex)
    return sum(comps[a] * IVDW[a] for a in range(4))


def spinor_components_to_vector(m: np.ndarray) -> np.ndarray:
    """``v^a = g^a_{AA'} v^{AA'}`` with no reality check; complex result."""
    m = np.asarray(m, dtype=complex)
    return np.array([np.sum(IVDW_INVERSE[a] * m) for a in range(4)])


def spinor_to_vector(m: np.ndarray, tol: float = TOL_COMPOSED) -> FourVector:
    """Inverse of :func:`vector_to_spinor` for Hermitian input.

    Raises ``ValueError`` when ``m`` is not Hermitian, since only Hermitian
    matrices encode real vectors.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if max_abs(m - m.conj().T) > tol:
        raise ValueError("matrix is not Hermitian, so it does not encode a real four-vector")
    return FourVector.from_array(spinor_components_to_vector(m).real)


def ivdw_completeness() -> np.ndarray:
    """``sum_{AB'} g^a_{AB'} g_b^{AB'}`` as a 4x4 matrix; the identity."""
    return np.array([[np.sum(IVDW_INVERSE[a] * IVDW[b]) for b in range(4)] for a in range(4)])


def null_vector_from_spinor(kappa: TwoSpinor) -> FourVector:
    """Real null vector encoded by the rank-1 Hermitian matrix ``kappa kappa-bar``."""
    return spinor_to_vector(np.outer(kappa.c, kappa.c.conj()))


def spinor_space_dimension(n: int) -> int:
    """Dimension of the spinor space for an ``n``-dimensional vector space."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError("dimension must be a positive integer")
    return 2 ** (n // 2)


def epsilon_round_trip_residual(rng: np.random.Generator, samples: int = 100,
                                eps: Epsilon = DEFAULT_EPSILON) -> float:
    worst = 0.0
    for _ in range(samples):
        xi = TwoSpinor(rng.normal(size=2) + 1j * rng.normal(size=2), "lower")
        back = lower_index(raise_index(xi, eps), eps)
        worst = max(worst, max_abs(back.c - ROUND_TRIP_SIGN * xi.c))
    return worst


__all__ = [
    "EPS", "METRIC", "ROUND_TRIP_SIGN", "IVDW", "IVDW_SIGN", "IVDW_INVERSE",
    "Epsilon", "DEFAULT_EPSILON", "TwoSpinor", "FourVector",
    "raise_index", "lower_index", "contract", "minkowski_dot", "minkowski_norm",
    "vector_to_spinor", "spinor_to_vector", "spinor_components_to_vector",
    "ivdw_completeness", "null_vector_from_spinor", "spinor_space_dimension",
    "epsilon_round_trip_residual", "TOL_IDENTITY",
]
