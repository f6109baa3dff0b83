import numpy as np

from beltramilab.presets import resonant_coil
from beltramilab.gammadesign import (GammaPlan, construct_gammas,
                                     verify_admissibility, design_resonant_tori,
                                     choose_melnikov_b)
from beltramilab.analytic import omega_hat, omega_hat_prime

h, g = resonant_coil(1, 1, grid_size=1024)
L = g.ell
print("tau sign changes at:", end=" ")
sgn = np.sign(g.tau)
idx = np.nonzero(sgn[1:] != sgn[:-1])[0]
print(g.grid[idx])

I_pts = np.array([0.18, 0.28, 0.38])
design = design_resonant_tori(g, I_pts, 1, 1)
print("design moments:", design.moments)

plans = [GammaPlan(n=3, support=(2.0, 13.9), moment=design.moments[3]),
         GammaPlan(n=4, support=(14.0, 22.4), moment=design.moments[4]),
         GammaPlan(n=5, support=(22.5, 34.5), moment=design.moments[5])]
gammas = construct_gammas(g, plans, 1, 1, seed=0)
for e in gammas.entries:
    print(f"  n={e.n}: max |Gamma| = {np.abs(e.gamma.samples).max():.3f}")

rep2 = verify_admissibility(g, gammas, 1, 1)
print("verify max residual:", rep2.max_residual)
print("achieved moments:", rep2.moments)
om = omega_hat(g, 1.0, I_pts, 1, 1, design.moments)
print("omega_hat(I_k) - 2 pi p:", om - 2 * np.pi)
print("omega_hat_prime:", omega_hat_prime(g, 1.0, I_pts, 1, 1, design.moments))

datum = choose_melnikov_b(g, 1, 1)
print("datum:", datum.n_b, datum.mu)
