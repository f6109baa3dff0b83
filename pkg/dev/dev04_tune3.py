import numpy as np
from beltramilab.curves import CurveSpec, build_geometry

# (3,2) parametrization: x=(R+cos2t)cos3t = R cos3t + (cos5t+cost)/2
# y = R sin3t + (sin5t+? ) cos2t sin3t = (sin5t + sin t)/2
def spec32(R, h):
    return CurveSpec(coeffs={
        "x": [[0, 0], [0.5, 0], [0, 0], [R, 0], [0, 0], [0.5, 0]],
        "y": [[0, 0], [0, 0.5], [0, 0], [0, R], [0, 0], [0, 0.5]],
        "z": [[0, 0], [0, 0], [0, h]],
    })

for R in [1.5, 2.0, 3.0]:
    for h in [0.3, 0.5, 1.0, 2.0, 4.0]:
        try:
            g = build_geometry(spec32(R, h), grid_size=512)
            print(f"(3,2) R={R} h={h}: T0/2pi={g.T0/2/np.pi:+.4f} kmin={g.kappa.min():.4f} "
                  f"sgn={int(np.count_nonzero(np.sign(g.tau[1:]) != np.sign(g.tau[:-1])))}")
        except Exception as e:
            print(f"(3,2) R={R} h={h}: {type(e).__name__} {e}")
