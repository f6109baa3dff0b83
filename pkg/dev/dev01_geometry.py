import numpy as np
import sympy as sp

from beltramilab.curves import CurveSpec, build_geometry, rationalize_torsion

# (2,3) torus knot: x=(2+cos3t)cos2t, y=(2+cos3t)sin2t, z=sin3t
# cos3t cos2t = (cos5t+cost)/2 ; cos3t sin2t = (sin5t - sin(-t)?) check:
# cos A sin B = (sin(A+B) - sin(A-B))/2 = (sin5t - sin t)/2
trefoil = CurveSpec(coeffs={
    "x": [[0, 0], [0.5, 0], [2.0, 0], [0, 0], [0, 0], [0.5, 0]],
    "y": [[0, 0], [0, -0.5], [0, 2.0], [0, 0], [0, 0], [0, 0.5]],
    "z": [[0, 0], [0, 0], [0, 0], [0, 1.0]],
})

g = build_geometry(trefoil, grid_size=1024)
print("ell =", g.ell, " T0 =", g.T0, " kappa range", g.kappa.min(), g.kappa.max())
print("tau range", g.tau.min(), g.tau.max())

# sympy oracle
t = sp.symbols("t")
gx = (2 + sp.cos(3 * t)) * sp.cos(2 * t)
gy = (2 + sp.cos(3 * t)) * sp.sin(2 * t)
gz = sp.sin(3 * t)
G = sp.Matrix([gx, gy, gz])
d1, d2, d3 = G.diff(t), G.diff(t, 2), G.diff(t, 3)
v = sp.sqrt(d1.dot(d1))
cr = d1.cross(d2)
crn = sp.sqrt(cr.dot(cr))
kap = crn / v**3
tau = cr.dot(d3) / cr.dot(cr)
kap_s = kap.diff(t) / v
tau_s = tau.diff(t) / v
f = sp.lambdify(t, [kap, tau, kap_s, tau_s], "numpy")
kk, tt, kks, tts = f(g.t_of_alpha)
for name, num, ora in [("kappa", g.kappa, kk), ("tau", g.tau, tt),
                       ("kappa_s", g.kappa_s, kks), ("tau_s", g.tau_s, tts)]:
    rel = np.abs(num - ora) / np.abs(ora).max()
    print(name, "max rel err", rel.max())

print(rationalize_torsion(g.T0))

# stretch family in z: T0 range
for c in [0.2, 0.5, 1.0, 1.5, 2.0, 3.0]:
    gg = build_geometry(trefoil.scaled("z", c), grid_size=512)
    print(f"c={c}: T0={gg.T0:.6f}  T0/2pi={gg.T0/2/np.pi:.6f} tau sign changes:",
          int(np.count_nonzero(np.sign(gg.tau[1:]) != np.sign(gg.tau[:-1]))),
          "kappa min", gg.kappa.min())
