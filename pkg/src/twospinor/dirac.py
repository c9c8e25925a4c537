"""Four-spinors assembled from two-spinor pairs, chiral gamma matrices, bilinears.

A four-spinor is stored as the chiral pair ``(phi^A, pi^{A'})`` and laid out as
the column ``(phi^0, phi^1, pi^0', pi^1')``. Every 4x4 matrix ``M`` acts as
``M[upper, lower]``, i.e. ``(M psi)^s = M[s, r] psi^r``.

The gamma matrices are built from the epsilon form

    gamma_a = sqrt(2) [[0, eps_{A'R'} eps_A^S], [eps_{AR} eps_{A'}^{S'}, 0]]

with the tensor index converted by the Infeld-van der Waerden symbols. The
resulting set satisfies ``{gamma_a, gamma_b} = -2 g_ab`` in signature
``(+,-,-,-)``; that sign is measured in :func:`build_gamma_set`, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import I2, I4, TOL_COMPOSED, TOL_IDENTITY, block, lower_left, max_abs, upper_right
from .spinors import (
    DEFAULT_EPSILON,
    IVDW,
    IVDW_INVERSE,
    METRIC,
    Epsilon,
    FourVector,
    TwoSpinor,
    lower_index,
)

_S2 = math.sqrt(2.0)

COVARIANTS = ("s", "p", "j", "jt", "a")


@dataclass(frozen=True)
class FourSpinor:
    phi: TwoSpinor
    pi: TwoSpinor

    def __post_init__(self):
        if self.phi.variance != "upper" or self.phi.primed:
            raise ValueError("phi must be an upper unprimed two-spinor")
        if self.pi.variance != "upper" or not self.pi.primed:
            raise ValueError("pi must be an upper primed two-spinor")

    @classmethod
    def from_components(cls, phi, pi) -> "FourSpinor":
        return cls(TwoSpinor(phi, "upper", False), TwoSpinor(pi, "upper", True))

    @classmethod
    def from_column(cls, col) -> "FourSpinor":
        col = np.asarray(col, dtype=complex).reshape(4)
        return cls.from_components(col[:2], col[2:])

    @property
    def column(self) -> np.ndarray:
        return np.concatenate([self.phi.c, self.pi.c])

    @property
    def plus(self) -> np.ndarray:
        """Half selected by ``(1 + gamma5)/2``."""
        return self.phi.c

    @property
    def minus(self) -> np.ndarray:
        return self.pi.c


@dataclass(frozen=True)
class AdjointFourSpinor:
    """The row ``(pibar_A, phibar_{A'})``."""

    row: np.ndarray

    @property
    def plus(self) -> np.ndarray:
        """Part built from the conjugated ``+`` half; it pairs with the ``-`` half."""
        return self.row[2:]

    @property
    def minus(self) -> np.ndarray:
        return self.row[:2]

    def __matmul__(self, other):
        if isinstance(other, FourSpinor):
            return complex(self.row @ other.column)
        return self.row @ other


def adjoint(psi: FourSpinor, eps: Epsilon = DEFAULT_EPSILON) -> AdjointFourSpinor:
    """Conjugate each half, exchange halves and lower the index with epsilon."""
    pibar = lower_index(psi.pi.conj(), eps)      # pibar_A
    phibar = lower_index(psi.phi.conj(), eps)    # phibar_{A'}
    return AdjointFourSpinor(np.concatenate([pibar.c, phibar.c]))


def _adjoint_matrix(eps: Epsilon = DEFAULT_EPSILON) -> np.ndarray:
    # adjoint is conjugate-linear: row(psi) = conj(psi) @ B, rows of B from a real basis
    return np.array([adjoint(FourSpinor.from_column(e), eps).row for e in np.eye(4)])


ADJOINT_MATRIX = _adjoint_matrix()


def parity(psi: FourSpinor) -> FourSpinor:
    """Swap the two halves at the component level: ``(phi, pi) -> (pi, phi)``."""
    return FourSpinor.from_components(psi.pi.c, psi.phi.c)


def _gamma_blocks(a: int, eps: Epsilon) -> tuple[np.ndarray, np.ndarray]:
    g = IVDW[a]
    mixed = eps.mixed()  # eps_A^S, indexed [A, S]
    # upper-right block [S, R']: sqrt2 g_a^{AA'} eps_{A'R'} eps_A^S
    ur = _S2 * np.einsum("ax,xr,as->sr", g, eps.lower, mixed)
    # lower-left block [S', R]: sqrt2 g_a^{AA'} eps_{AR} eps_{A'}^{S'}
    ll = _S2 * np.einsum("ax,ar,xs->sr", g, eps.lower, mixed)
    return ur, ll


def _gamma_ab_from_epsilons(a: int, b: int, eps: Epsilon) -> np.ndarray:
    """Block-diagonal generator ``gamma_{ab}`` from its epsilon form (symmetrised with 1/2)."""
    ga, gb = IVDW[a], IVDW[b]
    mixed = eps.mixed()
    e = eps.lower
    # upper block [S, R]: eps_{A'B'} eps_{R(A} eps_{B)}^S
    t = np.einsum("AX,BY,XY,RA,BS->SR", ga, gb, e, e, mixed)
    up = 0.5 * (t + np.einsum("AX,BY,XY,RB,AS->SR", ga, gb, e, e, mixed))
    # lower block [S', R']: eps_{AB} eps_{R'(A'} eps_{B')}^{S'}
    t = np.einsum("AX,BY,AB,RX,YS->SR", ga, gb, e, e, mixed)
    lo = 0.5 * (t + np.einsum("AX,BY,AB,RY,XS->SR", ga, gb, e, e, mixed))
    z = np.zeros((2, 2))
    return block(up, z, z, lo)


def _pattern_opposite() -> np.ndarray:
    d = np.eye(2)
    # T[i, j, k, l] = delta_il delta_kj
    return np.einsum("il,kj->ijkl", d, d)


def _pattern_same() -> np.ndarray:
    d = np.eye(2)
    # T[i, j, k, l] = delta_ij delta_kl - delta_il delta_kj
    return np.einsum("ij,kl->ijkl", d, d) - np.einsum("il,kj->ijkl", d, d)


PATTERN_OPPOSITE = _pattern_opposite()
PATTERN_SAME = _pattern_same()


def _fit_coefficient(tensor: np.ndarray, pattern: np.ndarray) -> tuple[float, float]:
    """Least-squares scalar ``c`` with ``tensor ~ c * pattern``; returns (c, residual)."""
    c = np.vdot(pattern, tensor) / np.vdot(pattern, pattern)
    return c, max_abs(tensor - c * pattern)


@dataclass(frozen=True)
class GammaSet:
    gamma: tuple[np.ndarray, ...]
    eta: np.ndarray
    gamma5: np.ndarray
    clifford_sign: int
    gamma_ab: np.ndarray = field(repr=False)   # [a, b] -> 4x4, lower tensor indices
    sigma_k: complex = field(default=0.0)      # gamma_ab = sigma_k [gamma_a, gamma_b]
    opposite_coeff: float = field(default=0.0)
    same_coeff: float = field(default=0.0)

    def upper(self, a: int) -> np.ndarray:
        """``gamma^a = g^{ab} gamma_b``."""
        return METRIC[a, a] * self.gamma[a]

    def plus(self, a: int, raised: bool = False) -> np.ndarray:
        """``gamma_{a+}``: the upper-right block (acts on the ``-`` half)."""
        return upper_right(self.upper(a) if raised else self.gamma[a])

    def minus(self, a: int, raised: bool = False) -> np.ndarray:
        """``gamma_{a-}``: the lower-left block (acts on the ``+`` half)."""
        return lower_left(self.upper(a) if raised else self.gamma[a])

    def slash(self, p) -> np.ndarray:
        """``p-hat = p^a gamma_a`` for a contravariant vector ``p``."""
        comps = p.as_array() if isinstance(p, FourVector) else np.asarray(p)
        return sum(comps[a] * self.gamma[a] for a in range(4))

    def sigma(self, a: int, b: int) -> np.ndarray:
        """``sigma^{ab}``: ``gamma_{ab}`` with both tensor indices raised."""
        return METRIC[a, a] * METRIC[b, b] * self.gamma_ab[a, b]

    def projector(self, sign: str) -> np.ndarray:
        s = {"+": 1, "-": -1}[sign]
        return 0.5 * (I4 + s * self.gamma5)


def build_gamma_set(eps: Epsilon = DEFAULT_EPSILON) -> GammaSet:
    """Construct gamma_a, eta, gamma5 and gamma_ab in the chiral representation.

    Measured constants stored on the result:

    * ``clifford_sign`` -- from ``{gamma_0, gamma_0} = clifford_sign * 2 g_00 I``;
    * ``sigma_k`` -- ``gamma_ab = sigma_k (gamma_a gamma_b - gamma_b gamma_a)``;
    * ``opposite_coeff`` / ``same_coeff`` -- coefficients of the contracted
      block identities, see :func:`pair_identity_tensor`.
    """
    z = np.zeros((2, 2))
    gammas = []
    for a in range(4):
        ur, ll = _gamma_blocks(a, eps)
        gammas.append(block(z, ur, ll, z))
    mixed = eps.mixed()
    eta = block(-1j * mixed.T, z, z, 1j * mixed.T)
    gamma5 = 1j * eta

    anti = gammas[0] @ gammas[0] + gammas[0] @ gammas[0]
    ratio = (anti[0, 0] / (2 * METRIC[0, 0])).real
    clifford_sign = int(round(ratio))
    if clifford_sign not in (-1, 1) or abs(ratio - clifford_sign) > TOL_IDENTITY:
        raise ArithmeticError(f"gamma_0 does not square to a multiple of the identity ({ratio})")

    gamma_ab = np.zeros((4, 4, 4, 4), dtype=complex)
    ks = []
    for a in range(4):
        for b in range(4):
            gamma_ab[a, b] = _gamma_ab_from_epsilons(a, b, eps)
            if a != b:
                comm = gammas[a] @ gammas[b] - gammas[b] @ gammas[a]
                ks.append(np.vdot(comm, gamma_ab[a, b]) / np.vdot(comm, comm))
    sigma_k = complex(np.mean(ks))

    partial = GammaSet(tuple(gammas), eta, gamma5, clifford_sign, gamma_ab, sigma_k)
    opp, _ = _fit_coefficient(pair_identity_tensor(partial, "+", "-"), PATTERN_OPPOSITE)
    same, _ = _fit_coefficient(pair_identity_tensor(partial, "+", "+"), PATTERN_SAME)
    return GammaSet(tuple(gammas), eta, gamma5, clifford_sign, gamma_ab, sigma_k,
                    float(opp.real), float(same.real))


@lru_cache(maxsize=1)
def default_gamma_set() -> GammaSet:
    return build_gamma_set()


def pair_identity_tensor(g: GammaSet, first: str, second: str) -> np.ndarray:
    """``T[i,j,k,l] = sum_a X_a[i,j] Y^a[k,l]`` for blocks X (sign ``first``) and Y."""
    pick = {"+": g.plus, "-": g.minus}
    return sum(np.einsum("ij,kl->ijkl", pick[first](a), pick[second](a, raised=True))
               for a in range(4))


def clifford_residual(g: GammaSet) -> float:
    """Max over (a, b) of ``|gamma_a gamma_b + gamma_b gamma_a - s 2 g_ab I|``."""
    worst = 0.0
    for a in range(4):
        for b in range(4):
            anti = g.gamma[a] @ g.gamma[b] + g.gamma[b] @ g.gamma[a]
            worst = max(worst, max_abs(anti - g.clifford_sign * 2 * METRIC[a, b] * I4))
    return worst


def gamma5_residual(g: GammaSet) -> float:
    """Worst of ``gamma5^2 - I`` and the anticommutators with each ``gamma_a``."""
    worst = max_abs(g.gamma5 @ g.gamma5 - I4)
    for a in range(4):
        worst = max(worst, max_abs(g.gamma5 @ g.gamma[a] + g.gamma[a] @ g.gamma5))
    return worst


def gamma_ab_residual(g: GammaSet) -> float:
    """How far ``gamma_ab`` is from ``sigma_k [gamma_a, gamma_b]``."""
    worst = 0.0
    for a in range(4):
        for b in range(4):
            comm = g.gamma[a] @ g.gamma[b] - g.gamma[b] @ g.gamma[a]
            worst = max(worst, max_abs(g.gamma_ab[a, b] - g.sigma_k * comm))
    return worst


# --- bilinear covariants -----------------------------------------------------

@dataclass(frozen=True)
class BilinearSet:
    s: complex
    p: complex
    j: np.ndarray
    jt: np.ndarray
    a: np.ndarray

    def as_dict(self) -> dict[str, np.ndarray]:
        return {"s": np.asarray(self.s), "p": np.asarray(self.p), "j": self.j,
                "jt": self.jt, "a": self.a}


# Literal coefficients of the two terms of each covariant, before calibration:
#   s  = c0 pibar_A phi^A            + c1 phibar_{A'} pi^{A'}
#   p  = c0 pibar_A phi^A            + c1 phibar_{A'} pi^{A'}
#   j  = c0 pibar^A pi^{A'}          + c1 phi^A phibar^{A'}
#   jt = c0 pibar^A pi^{A'}          + c1 phi^A phibar^{A'}
#   a  = c0 phi^(A pibar^B) e^{A'B'} + c1 phibar^(A' pi^B') e^{AB}
LITERAL_PREFACTORS = {
    "s": (1, 1),
    "p": (1j, -1j),
    "j": (_S2, _S2),
    "jt": (_S2, -_S2),
    "a": (1j, -1j),
}
# After calibration against the explicit-matrix path (see calibrate_bilinears):
# j flips sign as a whole; the tensor needs (1, 1) -- the literal i(X - Y)
# is i psibar sigma^{ab} gamma5 psi, the dual of psibar sigma^{ab} psi.
CALIBRATED_PREFACTORS = {
    "s": (1, 1),
    "p": (1j, -1j),
    "j": (-_S2, -_S2),
    "jt": (_S2, -_S2),
    "a": (1, 1),
}


def _sym(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return 0.5 * (np.outer(x, y) + np.outer(y, x))


def bilinear_terms(psi1: FourSpinor, psi2: FourSpinor, eps: Epsilon = DEFAULT_EPSILON) -> dict:
    """The two raw two-spinor terms of every covariant, before prefactors.

    ``psi1`` is the barred spinor. Nothing here touches a 4x4 matrix.
    """
    pibar_up = psi1.pi.conj()      # pibar^A
    phibar_up = psi1.phi.conj()    # phibar^{A'}
    pibar_lo = lower_index(pibar_up, eps)
    phibar_lo = lower_index(phibar_up, eps)
    phi2, pi2 = psi2.phi.c, psi2.pi.c

    scal = (complex(pibar_lo.c @ phi2), complex(phibar_lo.c @ pi2))
    vec = (_to_vector(np.outer(pibar_up.c, pi2)), _to_vector(np.outer(phi2, phibar_up.c)))
    x = np.einsum("AB,CD->ACBD", _sym(phi2, pibar_up.c), eps.upper)
    y = np.einsum("CD,AB->ACBD", _sym(phibar_up.c, pi2), eps.upper)
    ten = (_to_tensor(x), _to_tensor(y))
    return {"s": scal, "p": scal, "j": vec, "jt": vec, "a": ten}


def _to_vector(m: np.ndarray) -> np.ndarray:
    return np.array([np.sum(IVDW_INVERSE[a] * m) for a in range(4)])


_GINV = np.array(IVDW_INVERSE)


def _to_tensor(t: np.ndarray) -> np.ndarray:
    # t[A, A', B, B'] -> t^{ab} = g^a_{AA'} g^b_{BB'} t^{AA'BB'}
    return np.einsum("aAX,bBY,AXBY->ab", _GINV, _GINV, t)


def bilinears(psi1: FourSpinor, psi2: FourSpinor, prefactors: dict | None = None,
              eps: Epsilon = DEFAULT_EPSILON) -> BilinearSet:
    """Scalar, pseudoscalar, vector, axial vector and tensor from two-spinors only."""
    pre = CALIBRATED_PREFACTORS if prefactors is None else prefactors
    terms = bilinear_terms(psi1, psi2, eps)
    out = {k: pre[k][0] * terms[k][0] + pre[k][1] * terms[k][1] for k in COVARIANTS}
    return BilinearSet(complex(out["s"]), complex(out["p"]), out["j"], out["jt"], out["a"])


def bilinears_reference(psi1: FourSpinor, psi2: FourSpinor, g: GammaSet | None = None,
                        eps: Epsilon = DEFAULT_EPSILON) -> BilinearSet:
    """The same covariants as ``psibar {1, i gamma5, gamma^a, gamma^a gamma5, sigma^ab} psi``."""
    g = default_gamma_set() if g is None else g
    row = adjoint(psi1, eps).row
    col = psi2.column
    s = row @ col
    p = 1j * row @ g.gamma5 @ col
    j = np.array([row @ g.upper(a) @ col for a in range(4)])
    jt = np.array([row @ g.upper(a) @ g.gamma5 @ col for a in range(4)])
    ten = np.array([[row @ g.sigma(a, b) @ col for b in range(4)] for a in range(4)])
    return BilinearSet(complex(s), complex(p), j, jt, ten)


def covariant_errors(x: BilinearSet, y: BilinearSet) -> dict[str, float]:
    """Relative max-abs difference per covariant (absolute when the reference is ~0)."""
    out = {}
    xd, yd = x.as_dict(), y.as_dict()
    for k in COVARIANTS:
        scale = max(max_abs(yd[k]), 1.0e-300)
        diff = max_abs(xd[k] - yd[k])
        out[k] = diff / scale if scale > 1e-12 else diff
    return out


# probe sectors: which halves of (psi1, psi2) are nonzero
_PROBE_SECTORS = {
    "pibar_phi": ("pi", "phi"),
    "phibar_pi": ("phi", "pi"),
    "pibar_pi": ("pi", "pi"),
    "phibar_phi": ("phi", "phi"),
}
# covariant -> sector isolating (term0, term1)
_TERM_SECTORS = {
    "s": ("pibar_phi", "phibar_pi"),
    "p": ("pibar_phi", "phibar_pi"),
    "j": ("pibar_pi", "phibar_phi"),
    "jt": ("pibar_pi", "phibar_phi"),
    "a": ("pibar_phi", "phibar_pi"),
}


def _probe(rng: np.random.Generator, half: str) -> FourSpinor:
    c = rng.normal(size=2) + 1j * rng.normal(size=2)
    z = np.zeros(2)
    return FourSpinor.from_components(c, z) if half == "phi" else FourSpinor.from_components(z, c)


def calibrate_bilinears(g: GammaSet | None = None, prefactors: dict | None = None,
                        rng: np.random.Generator | None = None, samples: int = 20) -> dict:
    """Ratio (explicit-matrix path)/(two-spinor path) for each term of each covariant.

    Each term is isolated by probe spinors that populate only the halves it
    reads. Returns ``{covariant: ((ratio0, spread0), (ratio1, spread1))}``
    where ``spread`` is the largest deviation of the ratio across samples;
    a usable calibration has every spread below ``TOL_COMPOSED``.
    """
    g = default_gamma_set() if g is None else g
    rng = np.random.default_rng(0) if rng is None else rng
    out = {}
    for cov in COVARIANTS:
        pair = []
        for sector in _TERM_SECTORS[cov]:
            h1, h2 = _PROBE_SECTORS[sector]
            ratios = []
            for _ in range(samples):
                psi1, psi2 = _probe(rng, h1), _probe(rng, h2)
                two = np.asarray(bilinears(psi1, psi2, prefactors).as_dict()[cov])
                four = np.asarray(bilinears_reference(psi1, psi2, g).as_dict()[cov])
                mask = np.abs(two) > 1e-8 * max_abs(two)
                ratios.append(np.ravel(four[mask] / two[mask]))
            ratios = np.concatenate(ratios)
            ref = ratios[0]
            pair.append((complex(ref), float(np.max(np.abs(ratios - ref)))))
        out[cov] = tuple(pair)
    return out


def random_four_spinor(rng: np.random.Generator, scale: float = 1.0) -> FourSpinor:
    c = rng.normal(size=4) + 1j * rng.normal(size=4)
    return FourSpinor.from_column(scale * c)


__all__ = [
    "FourSpinor", "AdjointFourSpinor", "adjoint", "ADJOINT_MATRIX", "parity",
    "GammaSet", "build_gamma_set", "default_gamma_set", "pair_identity_tensor",
    "PATTERN_OPPOSITE", "PATTERN_SAME", "clifford_residual", "gamma5_residual",
    "gamma_ab_residual", "BilinearSet", "LITERAL_PREFACTORS", "CALIBRATED_PREFACTORS",
    "bilinear_terms", "bilinears", "bilinears_reference", "covariant_errors",
    "calibrate_bilinears", "random_four_spinor", "I2", "TOL_COMPOSED",
]
