"""
Far-detuned phonon: exact versus effective model
================================================

With the phonon two hoppings below the atom, the Rabi doublet merges into
one line.  The second-order effective model replaces the atom-phonon
exchange by dispersive shifts and a weak phonon leg, and tracks the exact
spectrum to about the square of ``lam / (omega_0 - Omega)``.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from giantatom import SystemParams
from giantatom.experiments import analyze, sweep

resonant = SystemParams(lam=0.2, g=0.5, N=4)
detuned = resonant.replace(omega_0=18.0)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
for p, label in ((resonant, "omega_0 = omega_c"), (detuned, "omega_0 = 0.9 omega_c")):
    s = sweep(p, delta_min=-1.5, delta_max=1.5)
    ax1.plot(s.deltas, s.values, label=label)
    print(label, "peaks:", analyze(s).n_peaks)
ax1.set_xlabel("detuning / xi")
ax1.set_ylabel("R")
ax1.legend()

###############################################################################
# Residual between the two models, and its shrinking with lambda

for lam in (0.2, 0.1):
    p = detuned.replace(lam=lam)
    exact = sweep(p, "exact", -1.5, 1.5)
    eff = sweep(p, "sw", -1.5, 1.5)
    gap = np.abs(exact.values - eff.values)
    ax2.plot(exact.deltas, gap, label=f"lambda = {lam}")
    print(f"lambda={lam}: sup |R - R'| = {np.nanmax(gap):.5f}")
ax2.set_xlabel("detuning / xi")
ax2.set_ylabel("|R - R'|")
ax2.legend()
fig.tight_layout()
fig.savefig("dispersive_regime.png", dpi=120)
