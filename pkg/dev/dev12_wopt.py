"""Minimize the cos-T Melnikov amplitude W over Fourier curve shapes.

W = |l + int exp(2iT) ds| / 2 is the amplitude of M(phi) for the boundary
datum b = cos T on a (p, q) = (1, 1) resonant curve.  Small W is what makes
the Melnikov fixed points land close to the designed circles (the I-shift
is sqrt(eps) W / (sqrt(2I) A)), so we shape the curve to shrink W while
keeping the curvature floor and the total torsion 2*pi.

Optimization variables: Fourier coefficients of (x, y, z) up to mode K,
seeded from the tuned (1, 1) coil.  Closure is automatic.  Residual vector:
  [ (l + Re V)/2, Im V / 2,  wT (T0 - 2pi),  hinge(kappa),  reg (x - x0) ]
"""
import numpy as np
from scipy.optimize import least_squares

from beltramilab.curves import CurveSpec, build_geometry
from beltramilab.presets import resonant_coil

K = 10          # Fourier modes per coordinate
GRID = 512      # geometry grid during optimization
WT = 30.0       # total-torsion penalty weight
WREG = 0.02     # regularization toward the seed
KFLOOR, KCAP = 0.25, 5.0


def seed_vector():
    _, g = resonant_coil(1, 1, grid_size=1024)
    x0 = []
    for c in ("x", "y", "z"):
        arr = np.zeros((K + 1, 2))
        a = g.spec.coeffs[c]
        arr[:min(K + 1, a.shape[0])] = a[:K + 1]
        x0.append(arr.ravel())
    return np.concatenate(x0)


def vec_to_spec(x):
    n = (K + 1) * 2
    return CurveSpec(coeffs={
        "x": x[0:n].reshape(K + 1, 2),
        "y": x[n:2*n].reshape(K + 1, 2),
        "z": x[2*n:3*n].reshape(K + 1, 2),
    })


def residual(x, x0, grid=GRID):
    try:
        g = build_geometry(vec_to_spec(x), grid_size=grid)
    except Exception:
        return np.full(7 + x.size, 1e3)
    w = g.ell / g.grid_size
    V = np.exp(2j * g.T_samples).sum() * w
    r = [0.5 * (g.ell + V.real), 0.5 * V.imag,
         WT * (g.T0 - 2 * np.pi),
         5.0 * max(0.0, KFLOOR - g.kappa.min()),
         1.0 * max(0.0, g.kappa.max() - KCAP),
         # keep some torsion sign structure: reward both signs present
         2.0 * max(0.0, 0.5 - g.tau.max()),
         2.0 * max(0.0, 0.5 + g.tau.min())]
    return np.concatenate([r, WREG * (x - x0)])


if __name__ == "__main__":
    import time
    t0 = time.time()
    x0 = seed_vector()
    r0 = residual(x0, x0)
    print("seed: W=%.3f T0 pen=%.2e" % (np.hypot(r0[0], r0[1]), r0[2]), flush=True)
    res = least_squares(residual, x0, args=(x0,), method="lm", max_nfev=40000,
                        xtol=1e-14, ftol=1e-14, gtol=1e-14)
    x = res.x
    print("time:", time.time() - t0, flush=True)
    g = build_geometry(vec_to_spec(x), grid_size=2048)
    w = g.ell / g.grid_size
    V = np.exp(2j * g.T_samples).sum() * w
    W = 0.5 * abs(g.ell + V)
    print(f"final: W={W:.4f} ell={g.ell:.3f} T0-2pi={g.T0-2*np.pi:.2e} "
          f"kappa [{g.kappa.min():.3f},{g.kappa.max():.3f}] "
          f"tau [{g.tau.min():.2f},{g.tau.max():.2f}]")
    with open("/root/pkg/dev/dev12_wopt_x.txt", "w") as f:
        f.write(repr(x.tolist()))
