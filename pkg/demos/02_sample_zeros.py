"""
Sample zeros wander off the unit circle
=======================================

With a sample covariance the SMI polynomial zeros scatter around the
ensemble ones, both radially and in angle. More snapshots tighten the
cloud; diagonal loading drags the zeros toward the CBF pattern instead.

Run with ``python demos/02_sample_zeros.py [outdir]``.
"""

import sys
from pathlib import Path

import numpy as np

from ucmvdr import UlaGeometry, UlaScenario, SourceSpec, ensemble_covariance, mvdr_weights
from ucmvdr.arraypoly import find_zeros, weights_to_polynomial
from ucmvdr.array_model import generate_snapshots
from ucmvdr.covariance import sample_covariance
from ucmvdr.experiments import loading_sweep_zeros, sample_zero_spread
from ucmvdr import plots

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

scene = UlaScenario(UlaGeometry(11), 0.0, (SourceSpec.from_db(3 / 11, 40.0),))
ens = find_zeros(weights_to_polynomial(mvdr_weights(ensemble_covariance(scene), scene.geometry, 0.0))).zeros

# %%
# Zero clouds for L = 12 and L = 110
# ----------------------------------
clouds = {}
for L in (12, 110):
    pts = []
    for t in range(200):
        S = sample_covariance(generate_snapshots(scene, L, (0, t)))
        pts.append(find_zeros(weights_to_polynomial(mvdr_weights(S, scene.geometry, 0.0))).zeros)
    pts = np.concatenate(pts)
    clouds[f"L={L}"] = pts
    print(f"L={L:4d}: radius spread (std) {np.std(np.abs(pts)):.3f}, "
          f"mean distance to nearest ensemble zero {sample_zero_spread(scene, L, 50):.3f}")
clouds["MVDR"] = ens
plots.zero_plot(out / "02_sample_zeros.svg", clouds, reference_angles=[np.pi * 3 / 11],
                title="SMI zeros over 200 trials")

# %%
# Diagonal loading trajectories
# -----------------------------
# Loading a single SCM from -20 dB to +40 dB moves each zero along a path
# that ends near a CBF null. None of the paths is radial, which is why
# loading and unit circle rectification behave differently.
S = sample_covariance(generate_snapshots(scene, 12, (0, 0)))
levels = np.linspace(-20, 40, 61)
paths = loading_sweep_zeros(S, scene.geometry, 0.0, levels)
traj = np.array([z.zeros for z in paths])
print("radius range at -20 dB:", np.ptp(np.abs(traj[0])).round(3), " at +40 dB:", np.ptp(np.abs(traj[-1])).round(3))
plots.zero_plot(out / "02_loading_paths.svg", {"DL-fixed": traj.ravel(), "MVDR": ens},
                title="DL MVDR zeros, loading -20..40 dB")
print("figures written to", out)
