"""The invariant suite behind ``twospinor verify``.

Every check reports a max residual and the tolerance it is held to. An
:class:`Epsilon` with a corrupted ``upper`` matrix can be passed in to confirm
that the suite notices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import TOL_COMPOSED, TOL_IDENTITY, I4, max_abs
from .amplitude import Couplings, ParticleState, va_amplitude, va_amplitude_reference
from .dirac import (
    CALIBRATED_PREFACTORS,
    PATTERN_OPPOSITE,
    PATTERN_SAME,
    GammaSet,
    bilinears,
    bilinears_reference,
    build_gamma_set,
    clifford_residual,
    covariant_errors,
    gamma5_residual,
    gamma_ab_residual,
    pair_identity_tensor,
    random_four_spinor,
)
from .spinors import DEFAULT_EPSILON, Epsilon, epsilon_round_trip_residual, ivdw_completeness
from .trace import METHODS, relative_difference, spin_summed_direct, spin_summed_squared

DEFAULT_SEED = 20240229


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tol)


def epsilon_form_residual(eps: Epsilon, clifford_sign: int) -> float:
    """Contracted epsilon product against ``clifford_sign * 2 eps eps``, all 16 tuples.

    ``2 eps_{C'A'} eps_C^B eps^C_G eps^{C'D'}`` (the factor 2 is the square of
    the sqrt(2) in front of each gamma block) must equal
    ``clifford_sign * 2 eps_{A'}^{D'} eps_G^B``.
    """
    lo, up = eps.lower, eps.upper
    mixed_lo_up = lo @ up.T      # eps_C^B as [C, B]
    mixed_up_lo = up @ lo        # eps^C_G as [C, G]
    lhs = 2 * np.einsum("ca,CB,CG,cd->aBGd", lo, mixed_lo_up, mixed_up_lo, up)
    rhs = clifford_sign * 2 * np.einsum("ad,GB->aBGd", mixed_lo_up, mixed_lo_up)
    return max_abs(lhs - rhs)


def pair_identity_residuals(g: GammaSet) -> dict[str, float]:
    """Brute force over all 16 index tuples for every block-sign combination."""
    opp = 2 * g.clifford_sign
    same = -2 * g.clifford_sign
    out = {}
    for s1, s2, coeff, pattern in (("+", "-", opp, PATTERN_OPPOSITE), ("-", "+", opp, PATTERN_OPPOSITE),
                                   ("+", "+", same, PATTERN_SAME), ("-", "-", same, PATTERN_SAME)):
        out[s1 + s2] = max_abs(pair_identity_tensor(g, s1, s2) - coeff * pattern)
    return out


def bilinear_residual(g: GammaSet, rng: np.random.Generator, samples: int,
                      eps: Epsilon = DEFAULT_EPSILON) -> float:
    worst = 0.0
    for _ in range(samples):
        psi1, psi2 = random_four_spinor(rng), random_four_spinor(rng)
        two = bilinears(psi1, psi2, CALIBRATED_PREFACTORS, eps)
        four = bilinears_reference(psi1, psi2, g, eps)
        worst = max(worst, *covariant_errors(two, four).values())
    return worst


def run_verification(seed: int = DEFAULT_SEED, eps: Epsilon = DEFAULT_EPSILON,
                     samples: int = 200) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = [
        CheckResult("epsilon_antisymmetry", eps.antisymmetry_residual(), TOL_IDENTITY),
        CheckResult("epsilon_identity", eps.identity_residual(), TOL_IDENTITY),
        CheckResult("epsilon_round_trip", epsilon_round_trip_residual(rng, samples, eps), TOL_IDENTITY),
        CheckResult("ivdw_completeness", max_abs(ivdw_completeness() - np.eye(4)), TOL_IDENTITY),
    ]
    try:
        g = build_gamma_set(eps)
    except ArithmeticError:
        results.append(CheckResult("gamma_construction", float("inf"), TOL_IDENTITY))
        return results
    results += [
        CheckResult("clifford", clifford_residual(g), TOL_IDENTITY),
        CheckResult("gamma5", gamma5_residual(g), TOL_IDENTITY),
        CheckResult("gamma_ab_commutator", gamma_ab_residual(g), TOL_IDENTITY),
        CheckResult("gamma_ab_normalisation", abs(g.sigma_k + 0.25), TOL_IDENTITY),
        CheckResult("epsilon_form_identity", epsilon_form_residual(eps, g.clifford_sign), TOL_IDENTITY),
    ]
    for signs, res in pair_identity_residuals(g).items():
        results.append(CheckResult(f"pair_identity_{signs}", res, TOL_IDENTITY))
    square = max_abs(g.gamma[0] @ g.gamma[0] - g.clifford_sign * I4)
    results.append(CheckResult("gamma0_square", square, TOL_IDENTITY))
    results.append(CheckResult("bilinear_equivalence", bilinear_residual(g, rng, samples, eps), TOL_COMPOSED))
    engine, closure = amplitude_residuals(g, rng, samples=20)
    results.append(CheckResult("va_engine_vs_reference", engine, TOL_COMPOSED))
    results.append(CheckResult("spin_sum_closure", closure, TOL_COMPOSED))
    return results


def random_kinematics(rng: np.random.Generator):
    """Random (nu, n, p, e) states with physical-ish masses and random helicities."""
    def state(m: float) -> ParticleState:
        return ParticleState(m + rng.exponential(2.0), m, int(rng.choice((-1, 1))), 1,
                             rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))

    return state(0.0), state(0.9396), state(0.9383), state(0.000511)


def random_couplings(rng: np.random.Generator) -> Couplings:
    return Couplings(rng.uniform(0.5, 2.0), rng.uniform(-2, 2), rng.uniform(-2, 2))


def amplitude_residuals(g: GammaSet, rng: np.random.Generator, samples: int) -> tuple[float, float]:
    """Worst relative engine/reference gap and worst spin-sum disagreement."""
    engine = closure = 0.0
    for _ in range(samples):
        legs, c = random_kinematics(rng), random_couplings(rng)
        direct, ref = va_amplitude(*legs, c, g), va_amplitude_reference(*legs, c, g)
        scale = max(abs(ref), abs(direct))
        engine = max(engine, abs(direct - ref) / scale if scale > 0 else 0.0)
        values = [spin_summed_direct(*legs, c, g)]
        values += [spin_summed_squared(*legs, c, m, g).value for m in METHODS]
        closure = max(closure, max(relative_difference(x, values[0]) for x in values))
    return engine, closure


__all__ = ["DEFAULT_SEED", "CheckResult", "epsilon_form_residual", "pair_identity_residuals",
           "bilinear_residual", "run_verification", "random_kinematics", "random_couplings",
           "amplitude_residuals"]
