import numpy as np
from beltramilab.curves import CurveSpec, build_geometry

def spec(R, h):
    return CurveSpec(coeffs={
        "x": [[0, 0], [0.5, 0], [R, 0], [0, 0], [0, 0], [0.5, 0]],
        "y": [[0, 0], [0, -0.5], [0, R], [0, 0], [0, 0], [0, 0.5]],
        "z": [[0, 0], [0, 0], [0, 0], [0, h]],
    })

for R, h in [(1.5, 6.0), (1.5, 8.0), (1.2, 4.0), (1.2, 6.0),
             (3.2, 1.0), (3.4, 1.0), (3.6, 1.0), (3.8, 1.0),
             (3.5, 2.0), (3.5, 3.0), (3.5, 4.0),
             (4.0, 6.0), (4.0, 8.0), (4.5, 8.0), (5.0, 8.0)]:
    try:
        g = build_geometry(spec(R, h), grid_size=512)
        print(f"R={R} h={h}: T0/2pi={g.T0/2/np.pi:+.4f} kmin={g.kappa.min():.4f} "
              f"sgn={int(np.count_nonzero(np.sign(g.tau[1:]) != np.sign(g.tau[:-1])))}")
    except Exception as e:
        print(f"R={R} h={h}: {type(e).__name__} {e}")
