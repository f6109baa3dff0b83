"""Dev utility: feasible moment/mass ratio on the self-resonance variety."""
import numpy as np
import scipy.linalg
from scipy.optimize import minimize

from beltramilab.gammadesign import span_functions, _constraint_null_space, _phase
from beltramilab.curves import smooth_bump_pair


def build_basis(g, support, n, p, q, modes=12, flat=0.5):
    a, b = support
    bf, bfp = smooth_bump_pair(a, b, flat)
    bump, dbump = bf(g.grid), bfp(g.grid)
    m_arg = 2 * np.pi * (g.grid - a) / (b - a)
    dm = 2 * np.pi / (b - a)
    basis, dbasis = [bump], [dbump]
    for j in range(1, modes + 1):
        cj, sj = np.cos(j * m_arg), np.sin(j * m_arg)
        basis += [bump * cj, bump * sj]
        dbasis += [dbump * cj - bump * j * dm * sj, dbump * sj + bump * j * dm * cj]
    basis, dbasis = np.array(basis), np.array(dbasis)
    weight = g.ell / g.grid_size
    null = _constraint_null_space(basis, span_functions(g, n, p, q), weight)
    basis, dbasis = null @ basis, null @ dbasis
    norms = np.sqrt((basis ** 2 * weight).sum(axis=1))
    keep = norms > 1e-8 * norms.max()
    return basis[keep], dbasis[keep]


def best_ratio(g, support, n, sgn, p=1, q=1, tries=10, modes=12, seed=1):
    basis, _ = build_basis(g, support, n, p, q, modes)
    weight = g.ell / g.grid_size
    tau = g.tau
    Q_m = (basis * (tau * weight)) @ basis.T
    N = (basis * weight) @ basis.T
    f_active = (2 * n * p) % q == 0
    if f_active:
        R2 = _phase(g, 2 * n)
        Q_re = (basis * (tau * R2.real * weight)) @ basis.T
        Q_im = (basis * (tau * R2.imag * weight)) @ basis.T
    evals, evecs = scipy.linalg.eigh(Q_m, N)
    order = np.argsort(-sgn * evals)
    if not f_active:
        r = evals[order[0]]
        return r if np.sign(r) == sgn else None
    rng = np.random.default_rng(seed)
    best = None
    for attempt in range(tries):
        c0 = evecs[:, order[attempt]] if attempt < 4 else rng.standard_normal(basis.shape[0])
        c0 = c0 / np.sqrt(c0 @ N @ c0)
        cons = [dict(type="eq", fun=lambda x: x @ Q_re @ x, jac=lambda x: 2 * (Q_re @ x)),
                dict(type="eq", fun=lambda x: x @ Q_im @ x, jac=lambda x: 2 * (Q_im @ x)),
                dict(type="eq", fun=lambda x: x @ N @ x - 1.0, jac=lambda x: 2 * (N @ x))]
        res = minimize(lambda x: -sgn * (x @ Q_m @ x), c0, jac=lambda x: -sgn * 2.0 * (Q_m @ x),
                       method="SLSQP", constraints=cons, options=dict(maxiter=800, ftol=1e-16))
        c = res.x
        ok = True
        for _ in range(80):
            F = np.array([c @ Q_re @ c, c @ Q_im @ c])
            if np.abs(F).max() < 1e-15 * (c @ N @ c):
                break
            J = 2.0 * np.vstack([Q_re @ c, Q_im @ c])
            try:
                c = c - J.T @ np.linalg.solve(J @ J.T, F)
            except np.linalg.LinAlgError:
                ok = False
                break
        else:
            ok = False
        if not ok:
            continue
        r = (c @ Q_m @ c) / (c @ N @ c)
        if np.sign(r) != sgn:
            continue
        if best is None or abs(r) > abs(best):
            best = r
    return best
