"""Monte Carlo comparison of CBF, SMI, UC MVDR and diagonally loaded MVDR.

Every trial draws its own signal-free snapshots from a PCG64 substream keyed
by ``(base_seed, trial_index)``, so results do not depend on how trials are
split across workers.

Diagonal loading levels are chosen in two ways:

* ``DL-matched``: bisection on ``log10(delta)`` until the trial-averaged WNG of
  DL MVDR equals the trial-averaged WNG of UC MVDR.
* ``DL-oracle``: the grid point maximizing trial-averaged output SINR,
  scored against the true interference-plus-noise covariance.

Both searches re-use one eigendecomposition ``S = U diag(lam) U^H`` per trial:
the loaded solution is ``U (lam + delta)^{-1} U^H v0``, so scanning ``delta``
costs O(N) per trial instead of a fresh factorization.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .array_model import UlaScenario, generate_snapshots, steering_matrix, steering_vector, ensemble_covariance
from .arraypoly import DegenerateLeadingCoefficient, ZeroAtLookDirection, ZeroSet, find_zeros, weights_to_polynomial
from .beamformers import DistortionlessViolation, cbf_weights, mvdr_weights
from .covariance import IllConditionedError, diagonal_load, sample_covariance
from .metrics import MetricsRecord, output_powers
from .rectify import uc_mvdr_weights

BEAMFORMERS = ("CBF", "MVDR", "SMI", "UC", "DL-matched", "DL-fixed", "DL-oracle")
LOADED = ("DL-matched", "DL-fixed", "DL-oracle")
NEEDS_SMI = ("SMI", "UC")

TRIAL_ERRORS = (IllConditionedError, DegenerateLeadingCoefficient, ZeroAtLookDirection, DistortionlessViolation)

#: fraction of failed trials above which a run is aborted
MAX_FAILED_FRACTION = 0.01


class ExperimentAborted(RuntimeError):
    """Too many trials failed to produce weights."""


class UnreachableTarget(ValueError):
    """Requested average WNG lies outside what loading can reach."""


def db_grid(start_db: float = -60.0, stop_db: float = 60.0, num: int = 121) -> np.ndarray:
    """Loading levels evenly spaced in dB, returned in linear units."""
    return 10.0 ** (np.linspace(start_db, stop_db, num) / 10.0)


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: UlaScenario
    num_snapshots: int
    num_trials: int = 3000
    beamformers: tuple[str, ...] = ("SMI", "UC", "DL-matched")
    base_seed: int = 0
    fixed_loading: Optional[float] = None
    dl_grid_db: tuple[float, float, int] = (-60.0, 60.0, 121)
    capture_zeros: bool = False

    def __post_init__(self):
        object.__setattr__(self, "beamformers", tuple(self.beamformers))
        if self.num_trials < 1:
            raise ValueError("num_trials must be >= 1")
        if self.num_snapshots < 1:
            raise ValueError("num_snapshots must be >= 1")
        unknown = [b for b in self.beamformers if b not in BEAMFORMERS]
        if unknown:
            raise ValueError(f"unknown beamformer(s) {unknown}; choose from {BEAMFORMERS}")
        if not self.beamformers:
            raise ValueError("at least one beamformer is required")
        if "DL-fixed" in self.beamformers and (self.fixed_loading is None or self.fixed_loading < 0):
            raise ValueError("DL-fixed needs a non-negative fixed_loading")
        n = self.scenario.num_sensors
        if self.num_snapshots < n and set(self.beamformers) & set(NEEDS_SMI + ("DL-matched",)):
            raise ValueError(f"SMI-based beamformers need num_snapshots >= N ({n}), got {self.num_snapshots}")

    @property
    def num_sensors(self) -> int:
        return self.scenario.num_sensors

    @property
    def dl_grid(self) -> np.ndarray:
        start, stop, num = self.dl_grid_db
        return db_grid(start, stop, int(num))

    def trial_seed(self, trial: int) -> tuple[int, int]:
        return (int(self.base_seed), int(trial))


@dataclass
class TrialRecord:
    trial_index: int
    metrics: dict[str, MetricsRecord] = field(default_factory=dict)
    zeros: dict[str, ZeroSet] = field(default_factory=dict)
    failed: bool = False
    error: str = ""


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    trials: list[TrialRecord]
    loading: dict[str, float] = field(default_factory=dict)

    @property
    def failed_trials(self) -> list[int]:
        return [r.trial_index for r in self.trials if r.failed]

    def values(self, beamformer: str, metric: str) -> np.ndarray:
        """Per-trial metric over successful trials.

        ``metric`` is a :class:`MetricsRecord` attribute name, e.g.
        ``"interferer_power"``, ``"wng"`` or ``"notch_depth"``.
        """
        return np.array([getattr(r.metrics[beamformer], metric) for r in self.trials if not r.failed])

    def summary(self) -> dict[str, dict[str, float]]:
        out = {}
        for bf in self.config.beamformers:
            row = {}
            for metric in ("interferer_power", "noise_power", "wng", "notch_depth"):
                x = self.values(bf, metric)
                m, v = mean_variance(x)
                row[f"{metric}_mean"] = m
                row[f"{metric}_var"] = v
                row[f"{metric}_median"] = ecdf(x).median() if x.size else float("nan")
            out[bf] = row
        return out


# --------------------------------------------------------------------------
# statistics


@dataclass(frozen=True, eq=False)
class EcdfCurve:
    """Step function ``F(values[k]) = probabilities[k]`` over distinct sorted values."""

    values: np.ndarray
    probabilities: np.ndarray
    num_samples: int

    def quantile(self, p: float) -> float:
        """Smallest sample value ``x`` with ``F(x) >= p``."""
        if not 0 < p <= 1:
            raise ValueError("quantile level must lie in (0, 1]")
        k = np.searchsorted(self.probabilities, p - 1e-12, side="left")
        return float(self.values[min(k, self.values.size - 1)])

    def median(self) -> float:
        """Lower of the two central order statistics when the count is even."""
        return self.quantile(0.5)

    def __call__(self, x):
        k = np.searchsorted(self.values, x, side="right")
        probs = np.concatenate(([0.0], self.probabilities))
        return probs[k]


def ecdf(samples) -> EcdfCurve:
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("ecdf of an empty sample")
    vals, counts = np.unique(x, return_counts=True)
    return EcdfCurve(vals, np.cumsum(counts) / x.size, x.size)


def mean_variance(x) -> tuple[float, float]:
    """Two-pass mean and unbiased variance (variance 0 for a single sample)."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return float("nan"), float("nan")
    m = x.mean()
    if x.size == 1:
        return float(m), 0.0
    d = x - m
    # compensated two-pass formula
    return float(m), float((np.dot(d, d) - d.sum() ** 2 / x.size) / (x.size - 1))


# --------------------------------------------------------------------------
# loading searches


@dataclass(frozen=True, eq=False)
class LoadingPath:
    """Per-trial spectral data for scanning the loading level of DL MVDR.

    ``eigvals`` (T x N) are SCM eigenvalues, ``look`` (T x N) is ``U^H v0`` and
    ``interf`` (T x D x N) holds ``U^H v_i`` for each interferer.
    """

    eigvals: np.ndarray
    look: np.ndarray
    interf: np.ndarray
    powers: np.ndarray
    noise_power: float

    @classmethod
    def from_spectra(cls, spectra: Sequence, scenario: UlaScenario) -> "LoadingPath":
        t, n, d = len(spectra), scenario.num_sensors, len(scenario.interferers)
        return cls(
            np.array([s[0] for s in spectra]).reshape(t, n),
            np.array([s[1] for s in spectra]).reshape(t, n),
            np.array([s[2] for s in spectra]).reshape(t, d, n),
            np.array([s.power for s in scenario.interferers], dtype=float),
            scenario.noise_power,
        )

    @classmethod
    def from_covariances(cls, covs: Sequence, scenario: UlaScenario) -> "LoadingPath":
        return cls.from_spectra([_spectrum(c, scenario) for c in covs], scenario)

    def _coords(self, delta):
        return self.look / (self.eigvals + delta)

    def wng(self, delta: float) -> np.ndarray:
        y = self._coords(delta)
        gain = np.abs(np.sum(self.look.conj() * y, axis=1)) ** 2
        return gain / np.sum(np.abs(y) ** 2, axis=1)

    def sinr(self, delta: float) -> np.ndarray:
        y = self._coords(delta)
        gain = np.abs(np.sum(self.look.conj() * y, axis=1)) ** 2
        leak = np.abs(np.einsum("tdn,tn->td", self.interf.conj(), y)) ** 2 @ self.powers
        return gain / (leak + self.noise_power * np.sum(np.abs(y) ** 2, axis=1))

    def mean_wng(self, delta: float) -> float:
        return float(self.wng(delta).mean())

    def mean_sinr(self, delta: float) -> float:
        return float(self.sinr(delta).mean())


def _spectrum(cov, scenario: UlaScenario):
    """Eigenvalues of ``cov`` plus look and interferer steering vectors in its eigenbasis."""
    v0 = steering_vector(scenario.geometry, scenario.look_direction)
    dirs = [s.direction_cosine for s in scenario.interferers]
    vi = steering_matrix(scenario.geometry, dirs) if dirs else np.zeros((scenario.num_sensors, 0))
    lam, u = np.linalg.eigh(np.asarray(cov))
    uh = u.conj().T
    return lam, uh @ v0, (uh @ vi).T


def _loading_path(config: ExperimentConfig, trials=None) -> LoadingPath:
    trials = range(config.num_trials) if trials is None else trials
    covs = (
        sample_covariance(generate_snapshots(config.scenario, config.num_snapshots, config.trial_seed(t))).entries
        for t in trials
    )
    return LoadingPath.from_covariances(list(covs), config.scenario)


def match_dl_to_wng(target_wng: float, config: ExperimentConfig, path: Optional[LoadingPath] = None,
                    rel_tol: float = 0.01) -> float:
    """Loading level whose trial-averaged DL MVDR WNG matches ``target_wng``.

    Scans the configured dB grid (121 points over +-60 dB by default); if the
    average WNG is nondecreasing on it, bisects on ``log10(delta)`` inside the
    bracketing cell, otherwise returns the closest grid point. Targets within
    ``rel_tol`` of an end of the reachable range map to that end.
    """
    n = config.num_sensors
    if not 0 < target_wng <= n:
        raise UnreachableTarget(f"target WNG {target_wng} outside (0, {n}]")
    path = _loading_path(config) if path is None else path
    grid = np.log10(config.dl_grid)
    vals = np.array([path.mean_wng(10.0 ** g) for g in grid])

    close = np.abs(vals - target_wng) <= rel_tol * target_wng
    if target_wng <= vals[0] or target_wng >= vals[-1]:
        end = 0 if target_wng <= vals[0] else -1
        if close[end]:
            return float(10.0 ** grid[end])
        raise UnreachableTarget(
            f"target WNG {target_wng:.4g} outside achievable range [{vals[0]:.4g}, {vals[-1]:.4g}]"
        )

    monotone = np.all(np.diff(vals) >= -1e-9 * np.abs(vals[1:]))
    if not monotone:
        k = int(np.argmin(np.abs(vals - target_wng)))
        if not close[k]:
            raise UnreachableTarget(f"no grid loading within {rel_tol:.0%} of target WNG {target_wng:.4g}")
        return float(10.0 ** grid[k])

    k = int(np.searchsorted(vals, target_wng)) - 1
    lo, hi = grid[k], grid[k + 1]
    mid = lo
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        val = path.mean_wng(10.0 ** mid)
        if abs(val - target_wng) <= 1e-6 * target_wng or hi - lo < 1e-12:
            break
        if val < target_wng:
            lo = mid
        else:
            hi = mid
    return float(10.0 ** mid)


def oracle_optimal_dl(scenario: UlaScenario, num_snapshots: int, dl_grid, num_trials: int = 3000,
                      base_seed: int = 0, path: Optional[LoadingPath] = None) -> float:
    """Grid loading maximizing trial-averaged SINR, scored with the true covariance.

    Ties go to the first (smallest) maximizing grid point.
    """
    grid = np.asarray(dl_grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0):
        raise ValueError("dl_grid must be nonempty and positive")
    if path is None:
        cfg = ExperimentConfig(scenario, num_snapshots, num_trials, ("DL-oracle",), base_seed)
        path = _loading_path(cfg)
    scores = np.array([path.mean_sinr(d) for d in grid])
    return float(grid[int(np.argmax(scores))])


# --------------------------------------------------------------------------
# trial evaluation


def _zeros_of(w):
    return find_zeros(weights_to_polynomial(w))


def _evaluate_trial(config: ExperimentConfig, t: int, names, loading: dict, fixed: dict):
    scenario = config.scenario
    geom = scenario.geometry
    u0 = scenario.look_direction
    rec = TrialRecord(t)
    for name, w in fixed.items():
        if name in names:
            rec.metrics[name] = output_powers(w, scenario)
    batch = generate_snapshots(scenario, config.num_snapshots, config.trial_seed(t))
    scm = sample_covariance(batch)
    path_data = None
    try:
        if set(names) & set(NEEDS_SMI):
            smi = mvdr_weights(scm, geom, u0)
            if "SMI" in names:
                rec.metrics["SMI"] = output_powers(smi, scenario)
                if config.capture_zeros:
                    rec.zeros["SMI"] = _zeros_of(smi)
            if "UC" in names:
                uc, report = uc_mvdr_weights(smi, geom)
                rec.metrics["UC"] = output_powers(uc, scenario)
                if config.capture_zeros:
                    rec.zeros["UC"] = report.projected_zeros
        for name in LOADED:
            if name in names and name in loading:
                w = mvdr_weights(diagonal_load(scm, loading[name]), geom, u0)
                rec.metrics[name] = output_powers(w, scenario)
                if config.capture_zeros:
                    rec.zeros[name] = _zeros_of(w)
        if "path" in names:
            path_data = _spectrum(scm.entries, scenario)
    except TRIAL_ERRORS as exc:
        rec.failed = True
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec, path_data


def _run_chunk(args):
    config, trials, names, loading, fixed = args
    return [_evaluate_trial(config, t, names, loading, fixed) for t in trials]


def _map_trials(config, names, loading, fixed, workers):
    trials = list(range(config.num_trials))
    if workers <= 1:
        out = _run_chunk((config, trials, names, loading, fixed))
    else:
        chunks = np.array_split(trials, workers * 4)
        jobs = [(config, [int(t) for t in c], names, loading, fixed) for c in chunks if len(c)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = [item for part in pool.map(_run_chunk, jobs) for item in part]
    out.sort(key=lambda item: item[0].trial_index)
    return out


def fixed_weights(config: ExperimentConfig) -> dict:
    """Trial-independent weights (CBF and ensemble MVDR)."""
    geom = config.scenario.geometry
    u0 = config.scenario.look_direction
    return {
        "CBF": cbf_weights(geom, u0),
        "MVDR": mvdr_weights(ensemble_covariance(config.scenario), geom, u0),
    }


def _check_failures(records, config: ExperimentConfig):
    n_failed = sum(r.failed for r in records)
    if n_failed > MAX_FAILED_FRACTION * config.num_trials:
        raise ExperimentAborted(
            f"{n_failed} of {config.num_trials} trials failed (limit {MAX_FAILED_FRACTION:.0%}); "
            f"first error: {next(r.error for r in records if r.failed)}"
        )


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Run every configured beamformer over ``config.num_trials`` independent trials.

    Trials whose covariance cannot be inverted are marked failed and left out
    of the statistics; more than 1% failures raises :class:`ExperimentAborted`.
    """
    names = set(config.beamformers)
    wanted_loading = names & set(LOADED)
    first = set(names) - set(LOADED)
    if "DL-matched" in names:
        first.add("UC")
    if wanted_loading - {"DL-fixed"}:
        first.add("path")
    fixed = fixed_weights(config)

    results = _map_trials(config, tuple(sorted(first)), {}, fixed, workers)
    records = [r for r, _ in results]
    _check_failures(records, config)

    loading = {}
    if "DL-fixed" in names:
        loading["DL-fixed"] = float(config.fixed_loading)
    if wanted_loading - {"DL-fixed"}:
        path = LoadingPath.from_spectra([s for r, s in results if not r.failed], config.scenario)
        if "DL-matched" in names:
            target = float(np.mean([r.metrics["UC"].wng for r in records if not r.failed]))
            loading["DL-matched"] = match_dl_to_wng(target, config, path)
        if "DL-oracle" in names:
            loading["DL-oracle"] = oracle_optimal_dl(config.scenario, config.num_snapshots, config.dl_grid, path=path)

    if loading:
        second = _map_trials(config, tuple(sorted(wanted_loading)), loading, {}, workers)
        for rec, (extra, _) in zip(records, second):
            rec.metrics.update(extra.metrics)
            rec.zeros.update(extra.zeros)
            if extra.failed and not rec.failed:
                rec.failed, rec.error = True, extra.error
        _check_failures(records, config)

    keep = names
    for rec in records:
        rec.metrics = {k: v for k, v in rec.metrics.items() if k in keep}
        rec.zeros = {k: v for k, v in rec.zeros.items() if k in keep}
    return ExperimentResult(config, records, loading)


def ensemble_reference(scenario: UlaScenario) -> MetricsRecord:
    """Metrics of the ensemble MVDR beamformer (the dashed reference lines)."""
    w = mvdr_weights(ensemble_covariance(scenario), scenario.geometry, scenario.look_direction)
    return output_powers(w, scenario)


def sample_zero_spread(scenario: UlaScenario, num_snapshots: int, num_trials: int, base_seed: int = 0) -> float:
    """Mean distance from each ensemble zero to the nearest SMI sample zero, over trials."""
    geom = scenario.geometry
    u0 = scenario.look_direction
    ens = _zeros_of(mvdr_weights(ensemble_covariance(scenario), geom, u0)).zeros
    dists = []
    for t in range(num_trials):
        scm = sample_covariance(generate_snapshots(scenario, num_snapshots, (base_seed, t)))
        sample = _zeros_of(mvdr_weights(scm, geom, u0)).zeros
        dists.append(np.abs(ens[:, None] - sample[None, :]).min(axis=1).mean())
    return float(np.mean(dists))


def loading_sweep_zeros(smi_cov, geometry, u0: float, loading_db) -> list:
    """DL MVDR zero sets along a sweep of loading levels in dB (zero trajectories)."""
    out = []
    for level in loading_db:
        w = mvdr_weights(diagonal_load(smi_cov, 10.0 ** (level / 10.0)), geometry, u0)
        out.append(_zeros_of(w))
    return out


__all__ = [
    "BEAMFORMERS",
    "EcdfCurve",
    "ExperimentAborted",
    "ExperimentConfig",
    "ExperimentResult",
    "LoadingPath",
    "TrialRecord",
    "UnreachableTarget",
    "db_grid",
    "ecdf",
    "ensemble_reference",
    "fixed_weights",
    "loading_sweep_zeros",
    "match_dl_to_wng",
    "mean_variance",
    "oracle_optimal_dl",
    "run_experiment",
    "sample_zero_spread",
]
