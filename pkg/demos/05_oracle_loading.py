"""
UC MVDR against the best possible fixed loading
===============================================

Give diagonal loading every advantage: for each snapshot count pick the
grid loading that maximizes the trial-averaged SINR, scored with the true
covariance. UC MVDR needs no such knowledge.

Run with ``python demos/05_oracle_loading.py [outdir] [trials]`` (default 1000).
"""

import sys
from pathlib import Path

import numpy as np

from ucmvdr import ExperimentConfig, UlaGeometry, UlaScenario, SourceSpec, run_experiment
from ucmvdr.experiments import ensemble_reference
from ucmvdr.metrics import to_db
from ucmvdr import plots

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)
trials = int(sys.argv[2]) if len(sys.argv) > 2 else 1000

scene = UlaScenario(UlaGeometry(11), 0.0, (SourceSpec.from_db(3 / 11, 40.0),))
snapshots = list(range(12, 23, 2))
series = {"UC": [], "DL-oracle": []}

# %%
# Sweep the snapshot count
# ------------------------
for L in snapshots:
    res = run_experiment(ExperimentConfig(scene, L, trials, ("UC", "DL-oracle"), base_seed=0))
    s = res.summary()
    for bf in series:
        series[bf].append(s[bf]["interferer_power_mean"])
    print(f"L={L}: oracle loading {10 * np.log10(res.loading['DL-oracle']):+.0f} dB, "
          f"mean P_I UC {to_db(series['UC'][-1]):.2f} dB vs oracle DL {to_db(series['DL-oracle'][-1]):.2f} dB")

ref = ensemble_reference(scene).interferer_power
plots.sweep_plot(out / "05_oracle_sweep.svg", snapshots, series, "snapshots L",
                 reference=[ref] * len(snapshots), title="mean interferer power")
print("figure written to", out)
