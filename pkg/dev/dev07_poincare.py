import time

import numpy as np

from beltramilab.presets import resonant_coil
from beltramilab.periodic import PeriodicFunction
from beltramilab.fieldseries import (FieldConfiguration, GammaSet, MelnikovDatum,
                                     OrderFlags, TruncatedFieldX)
from beltramilab.flow import poincare_map
from beltramilab.analytic import poincare_polar, poincare_action_angle

h11, g = resonant_coil(1, 1, grid_size=1024)

r0 = np.linspace(0.35, 0.85, 9)
th0 = np.linspace(0.0, 2 * np.pi, 9, endpoint=False)
R0, TH0 = [a.ravel() for a in np.meshgrid(r0, th0)]
pts = np.column_stack([R0, TH0])

datum = MelnikovDatum(b=PeriodicFunction(np.cos(g.T_samples), g.ell), n_b=1, mu=2.5)

for mu_on in [False, True]:
    print("=== mu", mu_on)
    for eps in [0.08, 0.04, 0.02, 0.01]:
        cfg = FieldConfiguration(geom=g, eps=eps, gammas=GammaSet([]),
                                 datum=datum if mu_on else None,
                                 orders=OrderFlags(True, True, mu_on))
        X = TruncatedFieldX(cfg)
        t0 = time.time()
        out, _ = poincare_map(X, pts, 1)
        dt = time.time() - t0
        row = [f"eps={eps} ({dt:.1f}s)"]
        for variant in ["derived", "statement"]:
            rn, tn = poincare_polar(g, eps, R0, TH0, datum if mu_on else None,
                                    variant=variant)
            res = max(np.abs(rn - out[:, 0]).max(),
                      np.abs(((tn - out[:, 1] + np.pi) % (2 * np.pi)) - np.pi).max())
            row.append(f"{variant}: {res:.3e}")
        print("  ".join(row))
