"""
How the central features scale with the couplings
=================================================

The valley of N = 4 and the window of N = 2 both widen with the
atom-phonon coupling.  The valley also narrows as the atom-waveguide
coupling grows: its half-depth width stays close to ``2 (sqrt(g^4 + lam^2) - g^2)``
rather than staying fixed.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from giantatom import SystemParams
from giantatom.experiments import width_scan

base = SystemParams(lam=0.2, g=0.5, N=4)
lams = np.linspace(0.05, 0.45, 9)
gs = np.linspace(0.2, 0.9, 8)

valley_lam = width_scan(base, "lambda", lams)
window_lam = width_scan(base.replace(N=2), "lambda", lams)
valley_g = width_scan(base, "g", gs)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
ax1.plot(lams, valley_lam.fwhm, "o-", label="N = 4 valley fwhm")
ax1.plot(lams, window_lam.window, "s-", label="N = 2 window width")
ax1.set_xlabel("lambda / xi")
ax1.set_ylabel("width / xi")
ax1.legend()

###############################################################################
# Against g, compared with a flat-band estimate of the half-depth width

ax2.plot(gs, valley_g.fwhm, "o", label="measured")
ax2.plot(gs, 2 * (np.sqrt(gs**4 + base.lam**2) - gs**2), "-", label="flat-band estimate")
ax2.set_xlabel("g / xi")
ax2.legend()
fig.tight_layout()
fig.savefig("width_scans.png", dpi=120)
print("relative variation over g:", valley_g.fwhm_relative_variation)
