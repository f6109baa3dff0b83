import numpy as np

from beltramilab.presets import coil_spec
from beltramilab.curves import build_geometry
from beltramilab.periodic import PeriodicFunction
from beltramilab.fieldseries import (FieldConfiguration, GammaSet, MelnikovDatum,
                                     OrderFlags, TruncatedFieldX)
from beltramilab.flow import poincare_map
from beltramilab.analytic import (poincare_polar, poincare_action_angle,
                                  lindstedt_angle, poincare_normal_form,
                                  first_integral, field_derivative_of_integral)

# generic (non-resonant) geometry
g = build_geometry(coil_spec(2, 2.0, 1.0, 2.3), grid_size=1024)
print("T0/2pi =", g.T0 / (2 * np.pi))

r0 = np.linspace(0.35, 0.85, 7)
th0 = np.linspace(0.0, 2 * np.pi, 8, endpoint=False)
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
        out, _ = poincare_map(X, pts, 1)
        row = [f"eps={eps}"]
        for variant in ["derived", "statement"]:
            rn, tn = poincare_polar(g, eps, R0, TH0, datum if mu_on else None,
                                    variant=variant)
            res = max(np.abs(rn - out[:, 0]).max(), np.abs(tn - out[:, 1]).max())
            row.append(f"{variant}: {res:.3e}")
        # action-angle map residual
        I0 = first_integral(g, eps, 0.0, R0, TH0)
        In_, tn2 = poincare_action_angle(g, eps, I0, TH0, datum if mu_on else None)
        In_num = first_integral(g, eps, 0.0, out[:, 0], out[:, 1])
        res_aa = max(np.abs(In_ - In_num).max(), np.abs(tn2 - out[:, 1]).max())
        row.append(f"aa: {res_aa:.3e}")
        # normal form: phi = lindstedt(I, theta)
        phi0 = lindstedt_angle(g, eps, I0, TH0)
        Inf, phif = poincare_normal_form(g, eps, I0, phi0, datum if mu_on else None)
        phi_num = lindstedt_angle(g, eps, In_num, out[:, 1])
        res_nf = max(np.abs(Inf - In_num).max(), np.abs(phif - phi_num).max())
        row.append(f"nf: {res_nf:.3e}")
        # first integral residual |X(I)|
        xi = np.abs(field_derivative_of_integral(X, R0 * 0 + 1.7, R0, TH0)).max()
        row.append(f"XI: {xi:.3e}")
        print("  ".join(row))
