import numpy as np
from beltramilab.curves import CurveSpec, build_geometry

# x = R cos2t + (cos5t + cos t)/2, y = R sin2t + (sin5t - sin t)/2, z = h sin3t
def spec(R, h):
    return CurveSpec(coeffs={
        "x": [[0, 0], [0.5, 0], [R, 0], [0, 0], [0, 0], [0.5, 0]],
        "y": [[0, 0], [0, -0.5], [0, R], [0, 0], [0, 0], [0, 0.5]],
        "z": [[0, 0], [0, 0], [0, 0], [0, h]],
    })

for R in [1.5, 2.0, 3.0, 4.0, 6.0]:
    for h in [0.3, 0.5, 1.0, 2.0, 4.0]:
        try:
            g = build_geometry(spec(R, h), grid_size=512)
            print(f"R={R} h={h}: T0/2pi={g.T0/2/np.pi:+.4f} kmin={g.kappa.min():.3f} "
                  f"tau sgn chg={int(np.count_nonzero(np.sign(g.tau[1:]) != np.sign(g.tau[:-1])))}")
        except Exception as e:
            print(f"R={R} h={h}: {type(e).__name__} {e}")
