"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the collected lines are
repeated in the terminal summary. Monte Carlo runs use base seed 0 throughout.
"""

import time

import numpy as np
import pytest

from ucmvdr.array_model import SourceSpec, UlaGeometry, UlaScenario, ensemble_covariance, generate_snapshots
from ucmvdr.arraypoly import beampattern, find_zeros, sort_zeros, synthesize_from_zeros, weights_to_polynomial
from ucmvdr.beamformers import DISTORTIONLESS_TOL, WeightVector, cbf_weights, mvdr_weights
from ucmvdr.covariance import diagonal_load, sample_covariance
from ucmvdr.experiments import ExperimentConfig, ecdf, run_experiment
from ucmvdr.metrics import output_powers, to_db, white_noise_gain
from ucmvdr.rectify import project_zeros, uc_mvdr_weights

from conftest import one_interferer, random_distortionless

pytestmark = pytest.mark.slow

TRIALS = 3000
SEED = 0
_cache = {}


def monte_carlo(n, snapshots, beamformers=("SMI", "UC", "DL-matched"), inr_db=40.0):
    key = (n, snapshots, tuple(beamformers), inr_db)
    if key not in _cache:
        cfg = ExperimentConfig(one_interferer(n, inr_db=inr_db), snapshots, TRIALS, beamformers, SEED)
        start = time.perf_counter()
        result = run_experiment(cfg)
        _cache[key] = (result, time.perf_counter() - start)
    return _cache[key]


def random_scenario(r, n):
    """1-3 distinct interferers at least 2/N from broadside, INR in [0, 40] dB."""
    count = int(r.integers(1, 4))
    dirs = []
    while len(dirs) < count:
        u = float(r.uniform(-1, 1))
        if abs(u) >= 2 / n and all(abs(u - d) > 1e-3 for d in dirs):
            dirs.append(u)
    return UlaScenario(UlaGeometry(n), 0.0, tuple(SourceSpec.from_db(u, float(r.uniform(0, 40))) for u in dirs))


def test_criterion_1_ensemble_zeros_on_unit_circle(acceptance):
    r = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        sc = random_scenario(r, int(r.choice([5, 11, 21, 51])))
        w = mvdr_weights(ensemble_covariance(sc), sc.geometry, 0.0)
        worst = max(worst, np.abs(np.abs(find_zeros(weights_to_polynomial(w)).zeros) - 1).max())
    elapsed = time.perf_counter() - start
    acceptance(1, worst < 1e-6 and elapsed < 10,
               f"max ||zeta|-1| = {worst:.2e} (< 1e-6) over 50 scenarios in {elapsed:.2f} s (< 10 s)")


def test_criterion_2_cbf_zeros(acceptance):
    errs = {}
    for n in (4, 11, 51):
        zs = find_zeros(weights_to_polynomial(cbf_weights(UlaGeometry(n), 0.0))).zeros
        ref = sort_zeros(np.exp(2j * np.pi * np.arange(1, n) / n))
        errs[n] = np.abs(zs - ref).max()
    acceptance(2, max(errs.values()) < 1e-10,
               "max |zero - root of unity| " + ", ".join(f"N={n}: {e:.1e}" for n, e in errs.items()) + " (< 1e-10)")


def test_criterion_3_ensemble_wng(acceptance):
    sc = one_interferer(11)
    wng = white_noise_gain(mvdr_weights(ensemble_covariance(sc), sc.geometry, 0.0))
    acceptance(3, abs(wng - 10.473) <= 5e-3, f"ensemble WNG = {wng:.5f} (10.473 +- 5e-3)")


def test_criterion_4_mean_wng(acceptance):
    result, elapsed = monte_carlo(11, 12)
    uc = result.values("UC", "wng").mean()
    smi = result.values("SMI", "wng").mean()
    ok = abs(uc - 5.672) <= 0.4 and abs(smi - 2.629) <= 0.3 and elapsed < 60
    acceptance(4, ok, f"mean WNG UC = {uc:.3f} (5.672 +- 0.4), SMI = {smi:.3f} (2.629 +- 0.3), "
                      f"{TRIALS} trials in {elapsed:.1f} s (< 60 s)")


def test_criterion_5_median_suppression(acceptance):
    result, _ = monte_carlo(11, 12)
    med = {bf: to_db(ecdf(result.values(bf, "interferer_power")).median()) for bf in ("SMI", "UC", "DL-matched")}
    d_smi = med["UC"] - med["SMI"]
    d_dl = med["UC"] - med["DL-matched"]
    ok = abs(d_smi + 14) <= 3 and abs(d_dl + 10) <= 3
    acceptance(5, ok, f"median P_I UC-SMI = {d_smi:.2f} dB (-14 +- 3), UC-DL = {d_dl:.2f} dB (-10 +- 3), "
                      f"DL loading {result.loading['DL-matched']:.3g}")


def test_criterion_6_stochastic_ordering(acceptance):
    failures = []
    for n, snapshots in ((11, 12), (11, 22), (51, 52), (51, 102)):
        result, _ = monte_carlo(n, snapshots)
        curves = {bf: ecdf(result.values(bf, "interferer_power")) for bf in ("SMI", "UC", "DL-matched")}
        for p in (0.25, 0.5, 0.75):
            uc = curves["UC"].quantile(p)
            for other in ("SMI", "DL-matched"):
                if uc > curves[other].quantile(p):
                    failures.append(f"N={n} L={snapshots} q{p} vs {other}")
    acceptance(6, not failures,
               "UC quantiles of P_I at or below SMI and DL at q = 0.25/0.5/0.75 for 4 (N, L) pairs"
               + (f"; violations: {failures}" if failures else ""))


def test_criterion_7_mean_variance_trend(acceptance):
    failures = []
    for snapshots in (12, 22):
        for inr in (0.0, 10.0, 20.0, 30.0, 40.0):
            result, _ = monte_carlo(11, snapshots, ("SMI", "UC"), inr)
            s = result.summary()
            if not (s["UC"]["interferer_power_mean"] < s["SMI"]["interferer_power_mean"]
                    and s["UC"]["interferer_power_var"] < s["SMI"]["interferer_power_var"]):
                failures.append(f"L={snapshots} INR={inr:g}")
    acceptance(7, not failures, "UC mean and variance of P_I below SMI at INR 0..40 dB, L = 12 and 22"
               + (f"; violations: {failures}" if failures else ""))


def test_criterion_8_uc_beats_oracle_loading(acceptance):
    margins = []
    for snapshots in range(12, 23):
        result, _ = monte_carlo(11, snapshots, ("UC", "DL-oracle"))
        s = result.summary()
        margins.append(to_db(s["UC"]["interferer_power_mean"]) - to_db(s["DL-oracle"]["interferer_power_mean"]))
    acceptance(8, max(margins) < 0, f"mean P_I UC - DL-oracle in [{min(margins):.2f}, {max(margins):.2f}] dB "
                                     "over L = 12..22 (< 0)")


def test_criterion_9_property_suite(acceptance):
    r = np.random.default_rng(SEED)
    checks = {}

    worst = 0.0
    for _ in range(200):
        n = int(r.integers(2, 52))
        w = WeightVector(random_distortionless(r, n))
        back = synthesize_from_zeros(find_zeros(weights_to_polynomial(w)), 0.0)
        worst = max(worst, np.abs(back.weights - w.weights).max())
    checks["round trip"] = (worst < 1e-8, f"{worst:.1e}")

    worst_idem = worst_null = worst_gain = 0.0
    sc = one_interferer(11)
    for t in range(200):
        scm = sample_covariance(generate_snapshots(sc, 12, (SEED, t)))
        smi = mvdr_weights(scm, sc.geometry, 0.0)
        uc, rep = uc_mvdr_weights(smi)
        again = project_zeros(rep.projected_zeros, 0.0, 11).projected_zeros.zeros
        worst_idem = max(worst_idem, np.abs(again - rep.projected_zeros.zeros).max())
        nulls = np.abs(beampattern(uc, np.angle(rep.projected_zeros.zeros) / np.pi)) ** 2
        worst_null = max(worst_null, nulls.max())
        dl = mvdr_weights(diagonal_load(scm, 1.0), sc.geometry, 0.0)
        for w in (smi, uc, dl):
            worst_gain = max(worst_gain, abs(w.response() - 1))
    checks["idempotence"] = (worst_idem < 1e-12, f"{worst_idem:.1e}")
    checks["null depth"] = (worst_null < 1e-20, f"{worst_null:.1e}")
    checks["distortionless"] = (worst_gain < DISTORTIONLESS_TOL, f"{worst_gain:.1e}")

    cfg = ExperimentConfig(sc, 12, 60, ("SMI", "UC", "DL-matched"), SEED)
    a, b = run_experiment(cfg, workers=1), run_experiment(cfg, workers=3)
    same = a.loading == b.loading and all(x.metrics == y.metrics for x, y in zip(a.trials, b.trials))
    checks["1 vs 3 workers"] = (same, "identical" if same else "differ")

    acceptance(9, all(ok for ok, _ in checks.values()),
               "; ".join(f"{name} {detail}" for name, (_, detail) in checks.items()))


def test_criterion_10_quadratic_form(acceptance):
    r = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        n = int(r.integers(2, 52))
        sc = random_scenario(r, n) if n > 2 else UlaScenario(UlaGeometry(2), 0.0, (SourceSpec(0.9, 3.0),))
        w = random_distortionless(r, n)
        rec = output_powers(w, sc)
        quad = np.vdot(w, ensemble_covariance(sc).entries @ w).real
        worst = max(worst, abs(rec.interferer_power + rec.noise_power - quad) / quad)
    acceptance(10, worst < 1e-10, f"max relative |P_I + P_N - w^H Sigma w| = {worst:.1e} (< 1e-10)")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v"]))
