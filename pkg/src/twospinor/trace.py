"""Spin-summed squared amplitudes by traces and by brute-force enumeration.

Nothing here reuses the chirality split or the pair identities of the direct
engine. The spin sums are built numerically as ``sum_s psi_s psibar_s`` from
the same plane-wave constructors, and the traces are plain 4x4 products.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import I4
from .amplitude import (
    LEGS,
    Couplings,
    ParticleState,
    TermCounter,
    four_spinor_from_state,
    va_amplitude_reference,
)
from .dirac import ADJOINT_MATRIX, GammaSet, adjoint, default_gamma_set
from .spinors import FourVector, minkowski_dot

METHODS = ("enumeration", "trace")


@dataclass(frozen=True)
class SpinSumResult:
    value: float
    method: str
    term_count: int

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.value < 0:
            raise ValueError(f"a sum of squared moduli cannot be negative, got {self.value}")


def gamma_trace(product) -> complex:
    """Trace of an ordered product of 4x4 matrices; the empty product is ``I``."""
    m = I4
    for factor in product:
        m = m @ factor
    return complex(np.trace(m))


def pfaffian(a: np.ndarray) -> float:
    """Pfaffian of a real antisymmetric matrix by pivoted Gaussian elimination."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("pfaffian needs a square matrix")
    if n % 2:
        return 0.0
    result = 1.0
    for k in range(0, n - 1, 2):
        piv = k + 1 + int(np.argmax(np.abs(a[k, k + 1:])))
        if piv != k + 1:
            a[[k + 1, piv]] = a[[piv, k + 1]]
            a[:, [k + 1, piv]] = a[:, [piv, k + 1]]
            result = -result
        if a[k, k + 1] == 0.0:
            return 0.0
        result *= a[k, k + 1]
        if k + 2 < n:
            # Schur complement of the leading 2x2 block
            c0, c1 = a[k, k + 2:], a[k + 1, k + 2:]
            a[k + 2:, k + 2:] += (np.outer(c1, c0) - np.outer(c0, c1)) / a[k, k + 1]
    return float(result)


def slashed_trace(vectors, g: GammaSet | None = None,
                  counter: TermCounter | None = None) -> float:
    """``Tr(a1-hat ... aN-hat)`` from the Gram matrix of the vectors.

    ``Tr = 4 Pf(A)`` with ``A_ij = clifford_sign (a_i . a_j)`` for ``i < j``.
    Each Gram entry that is computed counts as one contraction.
    """
    g = default_gamma_set() if g is None else g
    n = len(vectors)
    if n % 2:
        return 0.0
    a = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            a[i, j] = g.clifford_sign * minkowski_dot(vectors[i], vectors[j])
            a[j, i] = -a[i, j]
            if counter is not None:
                counter.add()
    return 4.0 * pfaffian(a) if n else 4.0


def chain_trace_count(vectors, rng: np.random.Generator) -> int:
    """Contractions the trace technique spends on one spin-summed chain.

    Squaring ``psibar_f p1-hat ... pn-hat psi_i`` and summing over spins of
    massless states gives ``Tr(kf-hat p1-hat ... pn-hat ki-hat pn-hat ... p1-hat)``,
    a trace of ``2n + 2`` slashed vectors.
    """
    k_f = FourVector.from_array(rng.normal(size=4))
    k_i = FourVector.from_array(rng.normal(size=4))
    seq = [k_f, *vectors, k_i, *reversed(vectors)]
    counter = TermCounter(chain_length=len(vectors))
    slashed_trace(seq, counter=counter)
    return counter.contractions


def bar_matrix(m: np.ndarray) -> np.ndarray:
    """``Gamma-bar`` with ``(psibar_1 Gamma psi_2)^* = psibar_2 Gamma-bar psi_1``."""
    b = ADJOINT_MATRIX
    return np.linalg.solve(b, m.conj().T @ b.conj().T)


def spin_density(state: ParticleState) -> np.ndarray:
    """``sum_s psi_s psibar_s`` over both helicities of the plane-wave state."""
    rho = np.zeros((4, 4), dtype=complex)
    for s in (1, -1):
        psi = four_spinor_from_state(state.with_helicity(s))
        rho += np.outer(psi.column, adjoint(psi).row)
    return rho


def _enumerate(states, c: Couplings, g: GammaSet) -> SpinSumResult:
    total = 0.0
    count = 0
    for hs in itertools.product((1, -1), repeat=4):
        legs = [st.with_helicity(h) for st, h in zip(states, hs)]
        total += abs(va_amplitude_reference(*legs, c, g)) ** 2
        count += 1
    return SpinSumResult(float(total), "enumeration", count)


def _trace(states, c: Couplings, g: GammaSet) -> SpinSumResult:
    rho = dict(zip(LEGS, (spin_density(s) for s in states)))
    lep = [g.gamma[a] @ (I4 + g.gamma5) for a in range(4)]
    had = [g.upper(a) @ (c.g_V * I4 + c.g_A * g.gamma5) for a in range(4)]
    lep_bar = [bar_matrix(m) for m in lep]
    had_bar = [bar_matrix(m) for m in had]
    count = 0
    total = 0j
    for a in range(4):
        for b in range(4):
            lt = gamma_trace([rho["e"], lep[a], rho["nu"], lep_bar[b]])
            ht = gamma_trace([rho["p"], had[a], rho["n"], had_bar[b]])
            total += lt * ht
            count += 2
    value = (c.G_F ** 2 / 2.0) * total
    if abs(value.imag) > 1e-8 * max(abs(value.real), 1e-300):
        raise ArithmeticError(f"spin-summed trace is not real: {value}")
    return SpinSumResult(max(float(value.real), 0.0), "trace", count)


def spin_summed_squared(nu: ParticleState, n: ParticleState, p: ParticleState,
                        e: ParticleState, c: Couplings, method: str = "trace",
                        g: GammaSet | None = None) -> SpinSumResult:
    """``sum over helicities of |M|^2``; the helicities of the inputs are ignored."""
    g = default_gamma_set() if g is None else g
    states = (nu, n, p, e)
    if method == "enumeration":
        return _enumerate(states, c, g)
    if method == "trace":
        return _trace(states, c, g)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def spin_summed_direct(nu, n, p, e, c: Couplings, g: GammaSet | None = None) -> float:
    """The same spin sum using the direct two-spinor engine for every amplitude."""
    from .amplitude import va_amplitude

    total = 0.0
    for hs in itertools.product((1, -1), repeat=4):
        legs = [st.with_helicity(h) for st, h in zip((nu, n, p, e), hs)]
        total += abs(va_amplitude(*legs, c, g)) ** 2
    return total


def relative_difference(x: float, y: float) -> float:
    scale = max(abs(x), abs(y))
    return abs(x - y) / scale if scale > 0 else 0.0


__all__ = [
    "METHODS", "SpinSumResult", "gamma_trace", "pfaffian", "slashed_trace",
    "chain_trace_count", "bar_matrix", "spin_density", "spin_summed_squared",
    "spin_summed_direct", "relative_difference",
]
