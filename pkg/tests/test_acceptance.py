"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from twoparticle import hbt, hom, sampling
from twoparticle.duality import duality_sweep
from twoparticle.internal import equal_overlap_basis, pair_with_overlap
from twoparticle.propagate import centered_grid, fresnel_propagate, gaussian_packet

pytestmark = pytest.mark.acceptance

FAR = hbt.WavepacketConfig.far_field()
SEED = 12345


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail
    return emit


def test_criterion_1_hom_dip_law(report):
    t0 = time.perf_counter()
    worst = 0.0
    for s in np.linspace(0, 1, 101):
        a, b = pair_with_overlap(float(s))
        p = hom.coincidence_probability(a, b)
        worst = max(worst, abs(p - hom.brute_force_coincidence(a, b)), abs(p - (1 - s * s) / 2))
    dt = time.perf_counter() - t0
    report(1, worst <= 1e-12 and dt < 1.0, f"max |P_C - oracle| = {worst:.3g} (tol 1e-12), {dt:.3f} s (< 1 s)")


def test_criterion_2_duality_identity(report):
    t0 = time.perf_counter()
    worst = {e: max(r.residual for r in duality_sweep(101, e)) for e in ("hom", "hbt-analytic")}
    dt = time.perf_counter() - t0
    ok = max(worst.values()) <= 1e-12 and dt < 1.0
    report(2, ok, f"max residual HOM {worst['hom']:.3g}, HBT-analytic {worst['hbt-analytic']:.3g} "
                  f"(tol 1e-12), {dt:.3f} s (< 1 s)")


def test_criterion_3_oracle_equivalence(report):
    t0 = time.perf_counter()
    worst = 0.0
    for s, eta in [(0.0, 1), (0.6, 1), (1.0, 1), (0.6, -1)]:
        a, b = pair_with_overlap(s)
        grid = hbt.propagate_numeric(FAR, eta, a, b, hbt.GridSpec(n=2048))
        mid = np.abs(grid.x) <= np.abs(grid.x).max() / 2
        x1, x2 = np.meshgrid(grid.x[mid], grid.x[mid], indexing="ij")
        ana = hbt.joint_density_analytic(x1, x2, FAR, eta, s)
        worst = max(worst, float(np.max(np.abs(grid.density[np.ix_(mid, mid)] - ana) / ana)))
    dt = time.perf_counter() - t0
    report(3, worst <= 1e-6 and dt < 10.0, f"relative L-inf error {worst:.3g} (tol 1e-6), {dt:.2f} s (< 10 s)")


def test_criterion_4_visibility_law(report):
    t0 = time.perf_counter()
    worst = 0.0
    for s in (0.0, 0.3, 0.6, 0.8, 1.0):
        for eta in (1, -1):
            v = hbt.extract_visibility(hbt.analytic_pattern(FAR, eta, s))
            worst = max(worst, abs(v - s * s))
    dt = time.perf_counter() - t0
    report(4, worst <= 1e-3 and dt < 5.0, f"max |V - s^2| = {worst:.3g} (tol 1e-3), {dt:.3f} s (< 5 s)")


def test_criterion_5_fermion_antibunching(report):
    a, b = pair_with_overlap(1.0)
    x = np.linspace(-600, 600, 4001)
    diag = hbt.joint_density_analytic(x, x, FAR, -1, 1.0)
    grid = hbt.propagate_numeric(FAR, -1, a, b)
    peak_a = hbt.joint_density_analytic(*np.meshgrid(grid.x, grid.x, indexing="ij"), FAR, -1, 1.0).max()
    ratio = max(diag.max() / peak_a, float(np.abs(np.diag(grid.density)).max() / grid.density.max()))
    batch = sampling.sample_hbt(FAR, -1, 1.0, 10**6, SEED)
    w = FAR.fringe_period / 50
    central = int(np.sum(np.abs(batch.events[:, 0] - batch.events[:, 1]) < w / 2))
    ok = ratio <= 1e-12 and central == 0
    report(5, ok, f"diagonal/peak = {ratio:.3g} (tol 1e-12); central bin (width P/50) holds {central} "
                  f"of 10^6 events at seed {SEED} (required 0)")


def test_criterion_6_monte_carlo_consistency(report):
    t0 = time.perf_counter()
    parts, ok = [], True
    for s2 in (0.0, 0.36, 1.0):
        s = math.sqrt(s2)
        batch = sampling.sample_hbt(FAR, 1, s, 10**6, SEED)
        est = sampling.estimate_visibility(batch, FAR)
        again = sampling.sample_hbt(FAR, 1, s, 10**6, SEED, workers=4)
        same = batch.events.tobytes() == again.events.tobytes() and \
            sampling.estimate_visibility(again, FAR).visibility == est.visibility
        good = abs(est.visibility - s2) <= 3 * est.std_error
        ok &= good and same
        parts.append(f"s^2={s2}: V={est.visibility:.5f}+-{est.std_error:.2g}{'' if same else ' (not reproducible)'}")
    dt = time.perf_counter() - t0
    report(6, ok and dt < 60.0, "; ".join(parts) + f"; {dt:.1f} s (< 60 s)")


def test_criterion_7_quantum_eraser(report):
    a, b = pair_with_overlap(0.0)
    e, e_perp = equal_overlap_basis(a, b)
    raw = hbt.extract_visibility(hbt.analytic_pattern(FAR, 1, 0.0))
    same = hbt.eraser_pattern(FAR, 1, a, b, e, e)
    flip = hbt.eraser_pattern(FAR, 1, a, b, e, e_perp)
    v_same = hbt.extract_visibility(same)
    sign_err = float(np.max(np.abs((same.corrected - 1.0) + (flip.corrected - 1.0))))
    p_same = hom.eraser_joint_probability(a, b, e, e)
    p_flip = hom.eraser_joint_probability(a, b, e, e_perp)
    ok = (raw <= 1e-12 and abs(v_same - 1) <= 1e-9 and sign_err <= 1e-12
          and abs(p_same) <= 1e-12 and abs(p_flip - 0.25) <= 1e-12)
    report(7, ok, f"raw V {raw:.3g}; erased V {v_same:.12f}; cos-term sign flip max error {sign_err:.3g}; "
                  f"HOM joint (e,e) {p_same:.3g}, (e,e_perp) {p_flip:.15g}")


def test_criterion_8_normalization(report):
    a, b = pair_with_overlap(0.6)
    cfg0 = hbt.WavepacketConfig(x0=10, epsilon=1)
    x = np.linspace(-20, 20, 1601)
    x1, x2 = np.meshgrid(x, x, indexing="ij")
    init = np.sum(np.abs(hbt.initial_wavefunction(x1, x2, cfg0, 1, a, b)) ** 2, axis=-1)
    n_init = float(np.trapezoid(np.trapezoid(init, x, axis=1), x))
    u = np.linspace(-1200, 1200, 1601)
    y1, y2 = np.meshgrid(u, u, indexing="ij")
    dens = hbt.joint_density_analytic(y1, y2, FAR, 1, 0.6)
    n_prop = float(np.trapezoid(np.trapezoid(dens, u, axis=1), u))
    grid = hbt.propagate_numeric(FAR, 1, a, b)
    xg = centered_grid(2048, 0.25)
    drift = 0.0
    for c in (-FAR.x0, FAR.x0):
        y, psi = fresnel_propagate(gaussian_packet(xg, c, 1.0), 0.25, FAR.delta)
        drift = max(drift, abs(np.sum(np.abs(psi) ** 2) * (y[1] - y[0]) - 1.0))
    drift = max(drift, abs(grid.norm - 1.0))
    ok = abs(n_init - 1) <= 1e-6 and abs(n_prop - 1) <= 1e-6 and drift <= 1e-8
    report(8, ok, f"initial {n_init:.12f}, propagated {n_prop:.12f} (tol 1e-6); "
                  f"spectral norm drift {drift:.3g} (tol 1e-8)")
