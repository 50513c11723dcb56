"""Acceptance criteria 1-9, each at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL`` line (visible in ``pytest -v``
output) before asserting.
"""

import math
import time
import warnings

import numpy as np
import pytest

from kerr_forge.fock import (FockVector, KerrParams, apply_kerr_phase, coherent_state,
                             fidelity_paper, significant_range, truncated_kerr_state)
from kerr_forge.metrology import WeakForceSetup, epsilon_min, p_plus_approx, protocol_exact
from kerr_forge.one_pulse import (OnePulseConfig, evolve_rwa, expansion_coeffs, motional_part,
                                  prepare, pulse_duration)
from kerr_forge.pulses import (CARRIER, RED, IonState, PulseSpec, TrapConfig, apply_pulse,
                               simulate_schedule, synthesize)
from kerr_forge.tables import (AGREEMENT_REF, AVG_ERR_REF, ISOLINE_REF, M_RANGE, MAX_ERR_REF,
                               table_rows)
from kerr_forge.wigner import LEVELS, PRECISIONS, Region, _wigner_values, coherent_grid, wigner_grid


@pytest.fixture
def verdict(capsys):
    def report(n, checks):
        ok = all(c[1] for c in checks)
        failed = [c[0] for c in checks if not c[1]]
        detail = "" if ok else "  failed: " + "; ".join(failed)
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}{detail}")
        assert ok, detail
    return report


@pytest.fixture(scope="module")
def tables():
    t0 = time.perf_counter()
    iso, agree, err = table_rows()
    return iso, agree, err, time.perf_counter() - t0


def test_criterion_1_fidelity(verdict):
    t0 = time.perf_counter()
    vals = {m: fidelity_paper(2, m) for m in (9, 10, 14)}
    elapsed = time.perf_counter() - t0
    ref = {9: 0.9838, 10: 0.9943, 14: 0.9999}
    checks = [(f"M={m}: {vals[m]:.5f} vs {ref[m]}", abs(vals[m] - ref[m]) <= 5e-4) for m in ref]
    checks.append((f"runtime {elapsed * 1e3:.3f} ms", elapsed < 1e-3))
    verdict(1, checks)


def test_criterion_2_isolines(verdict, tables):
    iso, _, _, elapsed = tables
    checks = []
    for row in iso:
        for lv in LEVELS:
            got, want = row[f"ratio_{lv}"], ISOLINE_REF[lv][row["M"] - M_RANGE[0]]
            checks.append((f"M={row['M']} level {lv}: {got:.3f} vs {want}", abs(got - want) <= 0.02))
    checks.append((f"runtime {elapsed:.1f} s", elapsed < 30))
    verdict(2, checks)


def test_criterion_3_agreement(verdict, tables):
    _, agree, _, _ = tables
    checks = []
    for row in agree:
        for p in PRECISIONS:
            got, want = row[f"agree_{p:g}_pct"], AGREEMENT_REF[p][row["M"] - M_RANGE[0]]
            checks.append((f"M={row['M']} @{p:g}: {got:.2f}% vs {want}%", abs(got - want) <= 3))
    verdict(3, checks)


def test_criterion_4_errors(verdict, tables):
    _, _, err, _ = tables
    checks = []
    for row in err:
        k = row["M"] - M_RANGE[0]
        checks.append((f"M={row['M']} avg {row['avg_pct']:.3f}% vs {AVG_ERR_REF[k]}%",
                       abs(row["avg_pct"] - AVG_ERR_REF[k]) <= 0.5))
        checks.append((f"M={row['M']} max {row['max_pct']:.3f}% vs {MAX_ERR_REF[k]}%",
                       abs(row["max_pct"] - MAX_ERR_REF[k]) <= 1.5))
    verdict(4, checks)


def test_criterion_5_durations(verdict):
    cases = [(0.1, 0.04, 0.16e-3), (0.3, 0.04, 1.98e-6), (0.02, 0.04, 0.1),
             (0.3, math.pi / 3, 51.71e-6), (0.3, math.pi / 2, 77.57e-6)]
    checks = []
    for eta, tau, want in cases:
        got = pulse_duration(OnePulseConfig(1e7, eta), tau, warn=False)
        checks.append((f"eta={eta} tau={tau:.4g}: {got:.5g} s vs {want:g} s",
                       abs(got - want) <= 0.01 * want))
    verdict(5, checks)


def test_criterion_6_expansion(verdict):
    cases = [(0.1, (0.5, 0.0417, 0.0014)), (0.09, (0.405, 0.027, 0.0007))]
    checks = []
    for eta, refs in cases:
        c = expansion_coeffs(OnePulseConfig(1e7, eta, 5.0), 6)
        for k, want in zip((2, 4, 6), refs):
            checks.append((f"eta={eta} k={k}: {c[k]:.5g} vs {want}", abs(c[k] - want) <= 0.02 * want))
    verdict(6, checks)


def test_criterion_7_synthesis(verdict):
    cfg = TrapConfig(omega_c=1e6, omega_r=1e5, eta=0.02)
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    worst = 1.0
    for _ in range(100):
        m = int(rng.integers(1, 17))
        target = FockVector(rng.normal(size=m + 1) + 1j * rng.normal(size=m + 1)).normalize()
        out = simulate_schedule(synthesize(target, cfg), cfg)
        worst = min(worst, out.fidelity(IonState.from_motion(target)))
    compass = truncated_kerr_state(KerrParams(2, math.pi / 2, 10))
    sched = synthesize(compass, cfg)
    f_compass = simulate_schedule(sched, cfg).fidelity(IonState.from_motion(compass))
    elapsed = time.perf_counter() - t0
    total = sched.total_duration
    verdict(7, [
        (f"random worst fidelity 1-{1 - worst:.2e}", worst >= 1 - 1e-9),
        (f"compass fidelity 1-{1 - f_compass:.2e}", f_compass >= 1 - 1e-9),
        (f"compass pulses {len(sched)}", len(sched) == 20),
        (f"compass total {total * 1e3:.2f} ms", 3e-3 <= total <= 14e-3),
        (f"runtime {elapsed:.2f} s", elapsed < 5),
    ])


def test_criterion_8_weak_force(verdict):
    p_exact = protocol_exact(WeakForceSetup(2.0, 0.01))
    p_ref = 0.5 * (1 - math.sin(2 * 2.0 * 0.01))
    p0_exact = protocol_exact(WeakForceSetup(2.0, 0.0))
    verdict(8, [
        (f"protocol_exact(2, 0.01) = {p_exact:.6f} vs {p_ref:.6f}", abs(p_exact - p_ref) <= 5e-4),
        ("epsilon_min(2) = (0.25, pi/8)", epsilon_min(2.0) == (0.25, math.pi / 8)),
        ("closed form P+(eps=0) = 0.5", p_plus_approx(2.0, 0.0) == 0.5),
        (f"protocol_exact(2, 0) = {p0_exact!r}", p0_exact == 0.5),
    ])


def _pulse_unitarity_defect(rng, n_pulses=200, dim=10):
    worst = 0.0
    for _ in range(n_pulses):
        kind = CARRIER if rng.random() < 0.5 else RED
        cfg = TrapConfig(eta=float(rng.uniform(0.01, 0.5)))
        rabi = cfg.omega_c if kind == CARRIER else cfg.omega_r
        pulse = PulseSpec(kind, float(rng.uniform(-10, 10)), float(rng.uniform(0, 5e-3)), rabi, 1)
        cols = []
        for k in range(2 * dim):
            v = np.zeros(2 * dim, dtype=complex)
            v[k] = 1
            out = apply_pulse(IonState(v[:dim], v[dim:]), pulse, cfg)
            cols.append(np.concatenate([out.g, out.e]))
        u = np.array(cols).T
        worst = max(worst, np.max(np.abs(u.conj().T @ u - np.eye(2 * dim))))
    return worst


def _evolution_unitarity_defect(rng, n=50, dim=16):
    worst = 0.0
    for _ in range(n):
        cfg = OnePulseConfig(1e7, float(rng.uniform(0.01, 0.4)))
        t = float(rng.uniform(0, 1e-2))
        for branch in (1, -1):
            cols = [motional_part(evolve_rwa(prepare(FockVector.basis(k, dim), branch), cfg, t)).amps
                    for k in range(dim)]
            u = np.array(cols).T
            worst = max(worst, np.max(np.abs(u.conj().T @ u - np.eye(dim))))
    return worst


def test_criterion_9_properties(verdict):
    rng = np.random.default_rng(9)

    bound = 0.0
    for _ in range(100):
        dim = int(rng.integers(1, 25))
        s = FockVector(rng.normal(size=dim) + 1j * rng.normal(size=dim)).normalize()
        g = rng.uniform(-5, 5, 10_000) + 1j * rng.uniform(-5, 5, 10_000)
        bound = max(bound, float(np.max(np.abs(_wigner_values(s.amps, g)))))

    alpha = 1.3 - 0.7j
    region = Region.square(alpha, 2.5)
    gauss_err = float(np.max(np.abs(wigner_grid(coherent_state(alpha, 60), region, 0.04).values
                                    - coherent_grid(alpha, region, 0.04).values)))

    periodic = 0.0
    for _ in range(200):
        s = coherent_state(complex(*rng.uniform(-3, 3, 2)))
        tau = float(rng.uniform(-20, 20))
        periodic = max(periodic, float(np.max(np.abs(apply_kerr_phase(s, tau).amps
                                                     - apply_kerr_phase(s, tau + 2 * np.pi).amps))))

    pulse_u = _pulse_unitarity_defect(rng)
    evol_u = _evolution_unitarity_defect(rng)
    ranges = (significant_range(2, 1e-3), significant_range(5, 1e-3))

    verdict(9, [
        (f"Wigner bound on 1e6 samples: max |W| = {bound:.6f}", bound <= 2 / np.pi + 1e-12),
        (f"coherent vs Gaussian: {gauss_err:.2e}", gauss_err < 1e-9),
        (f"Kerr 2pi periodicity: {periodic:.2e}", periodic <= 1e-12),
        (f"pulse unitarity: {pulse_u:.2e}", pulse_u <= 1e-12),
        (f"evolution unitarity: {evol_u:.2e}", evol_u <= 1e-12),
        (f"significant ranges {ranges}", ranges == ((0, 16), (5, 51))),
    ])
