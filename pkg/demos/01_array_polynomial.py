"""
Array polynomials and where their zeros sit
===========================================

A half-wavelength ULA beamformer is a polynomial in ``z = exp(j pi u)``.
This script builds the conventional and ensemble MVDR beamformers for an
11-element array with one interferer and looks at their zeros.

Run with ``python demos/01_array_polynomial.py [outdir]``.
"""

import sys
from pathlib import Path

import numpy as np

from ucmvdr import UlaGeometry, UlaScenario, SourceSpec, ensemble_covariance, mvdr_weights
from ucmvdr.arraypoly import beampattern, cbf_zeros, find_zeros, weights_to_polynomial
from ucmvdr.beamformers import cbf_weights
from ucmvdr.metrics import white_noise_gain
from ucmvdr import plots

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

# %%
# Conventional beamformer
# -----------------------
# Uniform weights v(0)/N give a polynomial whose zeros are the N-th roots
# of unity with the one at z = 1 removed. That missing zero is the main lobe.
geom = UlaGeometry(11)
cbf = cbf_weights(geom, 0.0)
zs = find_zeros(weights_to_polynomial(cbf))
print("CBF zero angles / (2 pi / N):", np.round(zs.angles / (2 * np.pi / 11), 6))
print("largest deviation from cbf_zeros():", np.abs(zs.zeros - cbf_zeros(11)).max())

# %%
# Ensemble MVDR with a 10 dB interferer at u = 3/N
# ------------------------------------------------
# With the true covariance every MVDR zero still lies on the unit circle.
# One of them moves onto the interferer direction and places a null there.
scene = UlaScenario(geom, 0.0, (SourceSpec.from_db(3 / 11, 10.0),))
w = mvdr_weights(ensemble_covariance(scene), geom, 0.0)
ens = find_zeros(weights_to_polynomial(w))
print("max ||zeta| - 1| =", np.abs(ens.radii - 1).max())
print("zero nearest the interferer at u =", ens.angles[np.argmin(np.abs(ens.angles - np.pi * 3 / 11))] / np.pi)
print("WNG: CBF", white_noise_gain(cbf), " ensemble MVDR", round(white_noise_gain(w), 4))

# %%
# Pictures
# --------
grid = np.linspace(-1, 1, 2001)
plots.zero_plot(out / "01_zeros.svg", {"CBF": zs.zeros, "MVDR": ens.zeros},
                reference_angles=[np.pi * 3 / 11], title="CBF and ensemble MVDR zeros")
plots.beampattern_plot(out / "01_beampattern.svg", grid,
                       {"CBF": beampattern(cbf, grid), "MVDR": beampattern(w, grid)}, markers=[3 / 11])
print("figures written to", out)
