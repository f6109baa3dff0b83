import numpy as np
from beltramilab.curves import build_geometry, tune_total_torsion
from beltramilab.fieldseries import (FieldConfiguration, GammaSet, GammaEntry,
                                     MelnikovDatum, OrderFlags, TruncatedFieldX,
                                     eval_X_composed, cartesian_field_check)
from beltramilab.curves import smooth_bump
from beltramilab.presets import resonant_coil

h11, g = resonant_coil(1, 1, grid_size=512)

rng = np.random.default_rng(7)

# gamma profiles: arbitrary smooth test functions (no SCond needed here)
bump = smooth_bump(0.1 * g.ell, 0.45 * g.ell, flat=0.4)
gam2 = lambda s: bump(s) * np.sin(2 * np.pi * s / g.ell)
gam3 = lambda s: bump(s) * np.cos(4 * np.pi * s / g.ell)
gammas = GammaSet.from_samples([(2, gam2(g.grid)), (3, gam3(g.grid))], g.ell)
from beltramilab.periodic import PeriodicFunction
datum = MelnikovDatum(b=PeriodicFunction(np.cos(g.T_samples), g.ell), n_b=1, mu=2.5)

cfg = FieldConfiguration(geom=g, eps=0.05, gammas=gammas, datum=datum,
                         orders=OrderFlags(first=True, second=True, mu=True))
X = TruncatedFieldX(cfg)

alpha = rng.uniform(0, g.ell, 6)
r = rng.uniform(0.2, 0.9, 6)
th = rng.uniform(0, 2 * np.pi, 6)

Xr, Xt = X.components(alpha, r, th)
Xr2, Xt2 = eval_X_composed(cfg, alpha, r, th, H2=None)
print("composed vs direct:", np.abs(Xr - Xr2).max(), np.abs(Xt - Xt2).max())
H2 = lambda a, rr: 0.37 * np.cos(a) * rr ** 2 + 0.11
Xr3, Xt3 = eval_X_composed(cfg, alpha, r, th, H2=H2)
print("H2 invariance:", np.abs(Xr - Xr3).max(), np.abs(Xt - Xt3).max())

# jacobian vs FD
J = X.jacobian(alpha, r, th)
h = 1e-6
Jfd = np.empty_like(J)
Xrp, Xtp = X.components(alpha, r + h, th)
Xrm, Xtm = X.components(alpha, r - h, th)
Jfd[0, 0], Jfd[1, 0] = (Xrp - Xrm) / (2 * h), (Xtp - Xtm) / (2 * h)
Xrp, Xtp = X.components(alpha, r, th + h)
Xrm, Xtm = X.components(alpha, r, th - h)
Jfd[0, 1], Jfd[1, 1] = (Xrp - Xrm) / (2 * h), (Xtp - Xtm) / (2 * h)
print("jacobian vs FD:", np.abs(J - Jfd).max())

# cartesian residual slopes, harmonic-only field (no gammas, no mu)
cfg0 = FieldConfiguration(geom=g, eps=0.05, gammas=GammaSet([]), datum=None,
                          orders=OrderFlags(first=True, second=True, mu=False))
for eps in [0.08, 0.04, 0.02, 0.01]:
    c = FieldConfiguration(geom=g, eps=eps, gammas=GammaSet([]), datum=None,
                           orders=OrderFlags(first=True, second=True, mu=False))
    dv, cu = cartesian_field_check(c, float(alpha[0]), float(r[0]), float(th[0]))
    print(f"eps={eps}: |div|={dv:.3e} |curl|={cu:.3e}")
