import numpy as np
from beltramilab.curves import CurveSpec, build_geometry

# (1,n) coil: x=(R + a cos nt)cos t, y=(R + a cos nt)sin t, z=h sin nt
# a cos nt cos t = a(cos(n+1)t + cos(n-1)t)/2 ; a cos nt sin t = a(sin(n+1)t - sin(n-1)t)/2
def coil(n, R, a, h):
    K = n + 1
    x = [[0.0, 0.0] for _ in range(K + 1)]
    y = [[0.0, 0.0] for _ in range(K + 1)]
    z = [[0.0, 0.0] for _ in range(K + 1)]
    x[1][0] += R
    y[1][1] += R
    x[n + 1][0] += a / 2
    x[n - 1][0] += a / 2
    y[n + 1][1] += a / 2
    y[n - 1][1] -= a / 2
    z[n][1] = h
    return CurveSpec(coeffs={"x": x, "y": y, "z": z})

for n in [2, 3]:
    for a, h in [(0.3, 0.3), (0.3, 0.6), (0.5, 0.5), (0.5, 1.0), (0.8, 0.8), (0.8, 1.5)]:
        for R in [2.0, 3.0]:
            try:
                g = build_geometry(coil(n, R, a, h), grid_size=512)
                print(f"n={n} R={R} a={a} h={h}: T0/2pi={g.T0/2/np.pi:+.4f} "
                      f"kmin={g.kappa.min():.4f} "
                      f"sgn={int(np.count_nonzero(np.sign(g.tau[1:]) != np.sign(g.tau[:-1])))}")
            except Exception as e:
                print(f"n={n} R={R} a={a} h={h}: {type(e).__name__} {e}")
