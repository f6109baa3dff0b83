"""Assemble the Melnikov-orbit fixture from the window coil.

Steps:
  1. Load closure params (from dev12), build CurveSpec via FFT of the
     integrated curve, verify geometry (T0, flats, W, kappa floor).
  2. Solve the 6x6 design (values + slopes of omega-hat at three actions),
     pick mode-support assignment by moment sign; construct profiles.
  3. Analytic feasibility: roots of P(I) = -+ sqrt(eps) |W| / (q sqrt(2I)).
"""
import sys
import numpy as np

from beltramilab.curves import CurveSpec, build_geometry

sys.path.insert(0, "/root/pkg/dev")
from dev12_window_coil import integrate_frame, profiles, ELL


def curve_spec_from_params(params, K=80, nstep=32768):
    sg, hist = integrate_frame(params, 1.0, nstep)
    gam = hist[:-1, 3, :]            # positions on uniform s grid
    coeffs = {}
    for i, name in enumerate(("x", "y", "z")):
        c = np.fft.rfft(gam[:, i]) / nstep
        rows = [[c[0].real, 0.0]]
        for k in range(1, K + 1):
            rows.append([2 * c[k].real, -2 * c[k].imag])
        coeffs[name] = rows
        tail = max(abs(c[K].real), abs(c[K].imag))
        print(f"  {name}: |c_K| tail = {tail:.2e}")
    return CurveSpec(coeffs=coeffs)


def diagnostics(g):
    w = g.ell / g.grid_size
    V = np.exp(2j * g.T_samples).sum() * w
    W = 0.5 * abs(g.ell + V)
    C0 = float((g.tau * g.kappa**2).sum() * w)
    return W, C0


if __name__ == "__main__":
    params = np.array(eval(open("/root/pkg/dev/dev12_params.txt").read()))
    spec = curve_spec_from_params(params)
    g = build_geometry(spec, grid_size=2048)
    W, C0 = diagnostics(g)
    print(f"ell={g.ell:.6f} T0={g.T0!r} (target {2*np.pi!r})")
    print(f"|W|={W:.4f} C0={C0:.3f} kappa in [{g.kappa.min():.3f},{g.kappa.max():.3f}] "
          f"tau in [{g.tau.min():.3f},{g.tau.max():.3f}]")
    # compare kappa/tau against prescription
    kap_p, tau_p = profiles(params, g.grid)
    print("kappa fidelity:", np.abs(g.kappa - kap_p).max(),
          " tau fidelity:", np.abs(g.tau - tau_p).max())
