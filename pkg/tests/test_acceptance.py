"""The eight acceptance criteria, each at its stated tolerance.

Every test reports a single ``criterion N: PASS|FAIL`` line (also repeated in
the pytest terminal summary) before asserting.
"""

import itertools
import math
import time

import numpy as np

from twospinor.algebra import Quaternion, is_unitary_spin_matrix, max_abs, quat_to_matrix
from twospinor.amplitude import (
    Couplings,
    ParticleState,
    example_angle_states,
    growth_exponent,
    term_count_scan,
    va_amplitude,
    va_amplitude_from_spinors,
    va_amplitude_reference,
    worked_example_blocks,
    worked_example_braket,
    worked_example_closed_form,
)
from twospinor.checks import epsilon_form_residual, random_couplings, random_kinematics
from twospinor.dirac import (
    CALIBRATED_PREFACTORS,
    bilinears,
    bilinears_reference,
    calibrate_bilinears,
    clifford_residual,
    covariant_errors,
    random_four_spinor,
)
from twospinor.spinors import (
    DEFAULT_EPSILON,
    FourVector,
    METRIC,
    minkowski_norm,
    spinor_to_vector,
    vector_to_spinor,
)
from twospinor.trace import relative_difference, spin_summed_direct, spin_summed_squared

SEED = 2024


def _line(n, ok, text):
    return f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}"


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def test_criterion_1_clifford(g, report):
    res = clifford_residual(g)
    ok = res < 1e-12
    report(_line(1, ok, f"Clifford relation, clifford_sign={g.clifford_sign}, max residual {res:.2e} (< 1e-12)"))
    assert ok


def test_criterion_2_quaternions(report):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    worst_det = worst_prod = 0.0
    unit_ok = True
    for row in rng.normal(size=(10_000, 4)):
        q = Quaternion(*row)
        m = quat_to_matrix(q)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        worst_det = max(worst_det, abs(det - q.norm()))
        worst_prod = max(worst_prod, max_abs(m @ m.conj().T - q.norm() * np.eye(2)))
        unit = Quaternion(*(row / math.sqrt(q.norm())))
        unit_ok &= is_unitary_spin_matrix(quat_to_matrix(unit))
    elapsed = time.perf_counter() - t0
    ok = worst_det < 1e-12 and worst_prod < 1e-12 and unit_ok
    report(_line(2, ok, f"quaternion correspondence on 1e4 samples: det {worst_det:.2e}, "
                        f"A A* {worst_prod:.2e}, units unitary={unit_ok} ({elapsed:.2f}s)"))
    assert ok


def test_criterion_3_ivdw(report):
    rng = np.random.default_rng(SEED)
    worst_trip = worst_norm = 0.0
    for row in rng.normal(size=(10_000, 4)):
        v = FourVector.from_array(row)
        m = vector_to_spinor(v)
        worst_trip = max(worst_trip, max_abs(spinor_to_vector(m).as_array() - row))
        worst_norm = max(worst_norm, abs(minkowski_norm(v) - 2 * np.linalg.det(m).real))
    ok = worst_trip < 1e-12 and worst_norm < 1e-12
    report(_line(3, ok, f"vector/spinor round trip {worst_trip:.2e}, norm = 2 det {worst_norm:.2e} on 1e4 vectors"))
    assert ok


def test_criterion_4_bilinears(g, report):
    rng = np.random.default_rng(SEED)
    cal = calibrate_bilinears(g, CALIBRATED_PREFACTORS, rng)
    cal_ok = all(abs(r - 1) < 1e-10 and s < 1e-10 for terms in cal.values() for r, s in terms)
    t0 = time.perf_counter()
    worst = dict.fromkeys(("s", "p", "j", "jt", "a"), 0.0)
    for _ in range(1000):
        psi1, psi2 = random_four_spinor(rng), random_four_spinor(rng)
        errs = covariant_errors(bilinears(psi1, psi2), bilinears_reference(psi1, psi2, g))
        worst = {k: max(worst[k], errs[k]) for k in worst}
    elapsed = time.perf_counter() - t0
    ok = cal_ok and max(worst.values()) < 1e-10
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    report(_line(4, ok, f"bilinear covariants on 1e3 pairs after calibration: {detail} ({elapsed:.2f}s)"))
    assert ok


def test_criterion_5_contraction_identities(g, report):
    worst_opp = worst_same = 0.0
    for i, j, k, l in itertools.product(range(2), repeat=4):
        for s1, s2 in (("+", "-"), ("-", "+")):
            x = g.plus if s1 == "+" else g.minus
            y = g.plus if s2 == "+" else g.minus
            lhs = sum(x(a)[i, j] * y(a, raised=True)[k, l] for a in range(4))
            rhs = g.clifford_sign * 2 * (i == l) * (k == j)
            worst_opp = max(worst_opp, abs(lhs - rhs))
        for s in ("+", "-"):
            x = g.plus if s == "+" else g.minus
            lhs = sum(x(a)[i, j] * x(a, raised=True)[k, l] for a in range(4))
            rhs = 2 * ((i == j) * (k == l) - (i == l) * (k == j))
            worst_same = max(worst_same, abs(lhs - rhs))
    worst_eps = epsilon_form_residual(DEFAULT_EPSILON, g.clifford_sign)
    ok = max(worst_opp, worst_same, worst_eps) < 1e-12
    report(_line(5, ok, f"pair identities over 16 tuples: opposite {worst_opp:.1e} "
                        f"(coefficient {2 * g.clifford_sign}), same {worst_same:.1e}, epsilon form {worst_eps:.1e}"))
    assert ok


def test_criterion_6_engine_vs_oracles(g, report):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    worst_amp = 0.0
    for _ in range(1000):
        legs, c = random_kinematics(rng), random_couplings(rng)
        worst_amp = max(worst_amp, _rel(va_amplitude(*legs, c, g), va_amplitude_reference(*legs, c, g)))
    worst_sum = 0.0
    for _ in range(100):
        legs, c = random_kinematics(rng), random_couplings(rng)
        direct = spin_summed_direct(*legs, c, g)
        for method in ("enumeration", "trace"):
            value = spin_summed_squared(*legs, c, method, g).value
            worst_sum = max(worst_sum, relative_difference(direct, value))
    elapsed = time.perf_counter() - t0
    ok = worst_amp < 1e-10 and worst_sum < 1e-10
    report(_line(6, ok, f"engine vs 4x4 reference on 1e3 kinematics {worst_amp:.1e}; "
                        f"spin sums vs both oracle methods on 1e2 kinematics {worst_sum:.1e} ({elapsed:.1f}s)"))
    assert ok


def _example_configurations(rng, count):
    for _ in range(count):
        def st(m, s):
            return ParticleState(m + rng.exponential(2.0), m, s)

        nu, n = st(0.0, 1), st(0.9396, int(rng.choice((-1, 1))))
        p, e = st(0.9383, int(rng.choice((-1, 1)))), st(0.000511, int(rng.choice((-1, 1))))
        p = ParticleState(p.E, p.m, p.s, 1, rng.uniform(0.1, 3.0), 0.0)
        e = ParticleState(e.E, e.m, e.s, 1, rng.uniform(0.1, 3.0), 0.0)
        yield example_angle_states(nu, n, p, e), random_couplings(rng)


def test_criterion_7_worked_example(g, report):
    rng = np.random.default_rng(SEED)
    worst = worst_spinor_path = worst_sine = 0.0
    for legs, c in _example_configurations(rng, 50):
        engine = va_amplitude(*legs, c, g)
        closed = worked_example_closed_form(*legs, c)
        worst = max(worst, _rel(engine, closed))
        # diagnostics: where the mismatch comes from
        braket = worked_example_braket(*legs, c)
        worst_spinor_path = max(worst_spinor_path,
                                _rel(va_amplitude_from_spinors(worked_example_blocks(*legs), c, g), braket))
        worst_sine = max(worst_sine, _rel(braket, worked_example_closed_form(*legs, c, sine_fix=True)))
    ok = worst < 1e-10
    report(_line(7, ok, f"engine at the example angles vs closed form with the documented correction: "
                        f"rel {worst:.2e}. [engine on the example kets vs bra-ket form {worst_spinor_path:.1e}; "
                        f"bra-ket vs closed form with the sine term also corrected {worst_sine:.1e}]"))
    assert ok


def test_criterion_8_term_counts(report):
    t0 = time.perf_counter()
    rows = term_count_scan(range(2, 17, 2), seed=SEED)
    ns = [r[0] for r in rows]
    direct = growth_exponent(ns, [r[1] for r in rows])
    trace = growth_exponent(ns, [r[2] for r in rows])
    elapsed = time.perf_counter() - t0
    ok = direct <= 1.3 and trace >= 1.7 and elapsed < 10
    report(_line(8, ok, f"growth exponents over n=2..16: direct {direct:.3f} (<= 1.3), "
                        f"trace {trace:.3f} (>= 1.7) ({elapsed:.2f}s)"))
    assert ok


def test_metric_is_mostly_minus():
    # the criteria above assume signature (+,-,-,-)
    assert list(np.diag(METRIC)) == [1, -1, -1, -1]
