import itertools

import numpy as np
import pytest

from twospinor.amplitude import Couplings, ParticleState, va_amplitude_reference
from twospinor.checks import random_couplings, random_kinematics
from twospinor.spinors import FourVector
from twospinor.trace import (
    SpinSumResult,
    bar_matrix,
    chain_trace_count,
    gamma_trace,
    pfaffian,
    relative_difference,
    slashed_trace,
    spin_density,
    spin_summed_direct,
    spin_summed_squared,
)


def pfaffian_by_expansion(a):
    """Recursive expansion along the first row; exponential but exact for small n."""
    n = a.shape[0]
    if n == 0:
        return 1.0
    total = 0.0
    for j in range(1, n):
        rest = [k for k in range(1, n) if k != j]
        total += (-1) ** (j + 1) * a[0, j] * pfaffian_by_expansion(a[np.ix_(rest, rest)])
    return total


def test_trace_of_single_gamma_vanishes(g):
    for a in range(4):
        assert gamma_trace([g.gamma[a]]) == 0


def test_empty_trace():
    assert gamma_trace([]) == 4


def test_trace_of_gamma0_squared(g):
    assert gamma_trace([g.gamma[0], g.gamma[0]]) == pytest.approx(4 * g.clifford_sign)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_pfaffian_against_expansion(n, rng):
    m = rng.normal(size=(n, n))
    a = m - m.T
    assert pfaffian(a) == pytest.approx(pfaffian_by_expansion(a), rel=1e-10)
    assert pfaffian(a) ** 2 == pytest.approx(np.linalg.det(a), rel=1e-8)


def test_pfaffian_odd_and_degenerate():
    assert pfaffian(np.zeros((3, 3))) == 0.0
    assert pfaffian(np.zeros((4, 4))) == 0.0


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4, 6, 8, 10])
def test_slashed_trace_matches_matrices(g, rng, n):
    vs = [FourVector.from_array(rng.normal(size=4)) for _ in range(n)]
    direct = gamma_trace([g.slash(v) for v in vs])
    assert slashed_trace(vs, g) == pytest.approx(direct.real, rel=1e-10, abs=1e-10)
    assert abs(direct.imag) < 1e-10


def test_chain_trace_count_is_quadratic(rng):
    for n in (1, 2, 5):
        vs = [FourVector.from_array(rng.normal(size=4)) for _ in range(n)]
        size = 2 * n + 2
        assert chain_trace_count(vs, rng) == size * (size - 1) // 2


def test_bar_matrix_conjugates_bilinear(g, rng):
    from twospinor.dirac import adjoint, random_four_spinor

    m = g.gamma[1] @ (np.eye(4) + g.gamma5)
    psi1, psi2 = random_four_spinor(rng), random_four_spinor(rng)
    lhs = np.conj(adjoint(psi1).row @ m @ psi2.column)
    rhs = adjoint(psi2).row @ bar_matrix(m) @ psi1.column
    assert lhs == pytest.approx(rhs)


def test_spin_density_is_helicity_sum():
    state = ParticleState(2.0, 1.0, 1, 1, 0.3, 0.2)
    assert np.allclose(spin_density(state), spin_density(state.with_helicity(-1)))


def test_methods_agree(rng):
    for _ in range(20):
        legs, c = random_kinematics(rng), random_couplings(rng)
        enum = spin_summed_squared(*legs, c, "enumeration")
        trace = spin_summed_squared(*legs, c, "trace")
        assert relative_difference(enum.value, trace.value) < 1e-10
        assert relative_difference(enum.value, spin_summed_direct(*legs, c)) < 1e-10
        assert enum.value >= 0 and trace.value >= 0
        assert enum.term_count == 16 and trace.term_count == 32


def test_enumeration_is_brute_force(rng):
    legs, c = random_kinematics(rng), random_couplings(rng)
    total = 0.0
    for hs in itertools.product((1, -1), repeat=4):
        total += abs(va_amplitude_reference(*(s.with_helicity(h) for s, h in zip(legs, hs)), c)) ** 2
    assert spin_summed_squared(*legs, c, "enumeration").value == pytest.approx(total)


def test_zero_fermi_constant(rng):
    legs = random_kinematics(rng)
    for method in ("enumeration", "trace"):
        assert spin_summed_squared(*legs, Couplings(0.0, 1.0, 1.27), method).value == 0.0


def test_azimuthal_invariance(rng):
    for _ in range(5):
        legs, c = random_kinematics(rng), random_couplings(rng)
        shift = rng.uniform(0, 2 * np.pi)
        rotated = [ParticleState(s.E, s.m, s.s, s.eps, s.theta, s.phi + shift) for s in legs]
        for method in ("enumeration", "trace"):
            a = spin_summed_squared(*legs, c, method).value
            b = spin_summed_squared(*rotated, c, method).value
            assert relative_difference(a, b) < 1e-10


def test_unknown_method(rng):
    with pytest.raises(ValueError):
        spin_summed_squared(*random_kinematics(rng), Couplings(), "magic")


def test_result_validation():
    with pytest.raises(ValueError):
        SpinSumResult(-1.0, "trace", 1)
    with pytest.raises(ValueError):
        SpinSumResult(1.0, "guess", 1)
