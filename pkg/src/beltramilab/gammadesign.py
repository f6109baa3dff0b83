"""Design of the profile functions Gamma_n and the fractional-order datum.

The q-fold iterate of the section map collapses to a pure twist (through
second order) when the profiles satisfy a family of integral orthogonality
conditions against the phases R_m(s) = exp(i m T(s)) over [0, q ell], plus a
quadratic self-resonance condition int tau Gamma_n^2 R_2n = 0.  Profiles with
pairwise disjoint supports satisfy the cross conditions automatically, the
linear conditions are enforced by L2 projection, and the self-resonance pair
is solved by a two-parameter root find.  A final scaling pins the moments
m_n = int tau Gamma_n^2 to prescribed values, which places the zeros of the
frequency function (the resonant circles) at prescribed actions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import minimize

from .curves import require_torsion_sign_change, smooth_bump_pair
from .errors import ConfigError, DesignFailure, OverlappingSupports
from .fieldseries import GammaEntry, GammaSet, MelnikovDatum
from .periodic import PeriodicFunction


def _fold_factor(m, p, q):
    """sum_j exp(2 pi i p m j / q): q if q divides p*m, else 0."""
    return q if (p * m) % q == 0 else 0


def _phase(geom, m):
    """R_m(s) = exp(i m T(s)) sampled on the geometry grid."""
    return np.exp(1j * m * geom.T_samples)


def span_functions(geom, n, p, q):
    """Real span of the active linear conditions for Gamma_n, on the grid.

    Conditions: int_0^{q ell} (kappa tau | kappa') Gamma_n R_{n+k} = 0, k = +-1.
    Folded to [0, ell]: only phases with q | p(n+k) are active.
    """
    rows = []
    for m in (n - 1, n + 1):
        if _fold_factor(m, p, q) == 0:
            continue
        R = _phase(geom, m)
        for wgt in (geom.kappa * geom.tau, geom.kappa_s):
            rows.append((wgt * R).real)
            rows.append((wgt * R).imag)
    return np.array(rows) if rows else np.empty((0, geom.grid_size))


def _constraint_null_space(basis, span, weight):
    """Coefficient directions of `basis` orthogonal to the rows of `span`.

    The constraints are imposed on the coefficient vector (null space of the
    constraint matrix), never by subtracting span components from the basis
    functions themselves -- that would destroy their compact support, which
    the cross conditions between different profiles rely on.
    """
    if span.shape[0] == 0:
        return np.eye(basis.shape[0])
    A = (span * weight) @ basis.T
    _, sv, Vt = np.linalg.svd(A)
    rank = int(np.sum(sv > 1e-12 * max(sv[0], 1e-30)))
    return Vt[rank:]


@dataclass
class GammaPlan:
    n: int
    support: tuple
    moment: float  # target m_n = int tau Gamma_n^2 (signed)
    fourier_modes: int = 12
    bump_flat: float = 0.5


@dataclass
class SCondReport:
    linear: dict
    cross: dict
    self_resonance: dict
    lemma: dict
    moments: dict
    max_residual: float

    def ok(self, tol=1e-9):
        return self.max_residual < tol


def construct_gammas(geom, plans, p, q, seed=0):
    """Build profiles satisfying the admissibility conditions with set moments.

    plans : list[GammaPlan] with pairwise disjoint supports; torsion must
    change sign inside each support.  Returns a GammaSet.
    """
    ivals = sorted((pl.support, pl.n) for pl in plans)
    for (s1, _), (s2, _) in zip(ivals, ivals[1:]):
        if s1[1] > s2[0]:
            raise OverlappingSupports(f"supports {s1} and {s2} overlap")
    rng = np.random.default_rng(seed)
    weight = geom.ell / geom.grid_size
    entries = []
    for pl in plans:
        if abs(pl.moment) <= 0:
            raise ConfigError("target moment must be nonzero")
        require_torsion_sign_change(geom, pl.support)
        a, b = pl.support
        bump_f, bump_fp = smooth_bump_pair(a, b, flat=pl.bump_flat)
        bump = bump_f(geom.grid)
        dbump = bump_fp(geom.grid)
        width = b - a
        mask_arg = 2.0 * np.pi * (geom.grid - a) / width
        dmask = 2.0 * np.pi / width
        basis = [bump]
        dbasis = [dbump]
        for j in range(1, pl.fourier_modes + 1):
            cj, sj = np.cos(j * mask_arg), np.sin(j * mask_arg)
            basis.append(bump * cj)
            basis.append(bump * sj)
            # exact derivatives (spectral differentiation of the compactly
            # supported samples would leak outside the support)
            dbasis.append(dbump * cj - bump * j * dmask * sj)
            dbasis.append(dbump * sj + bump * j * dmask * cj)
        basis = np.array(basis)
        dbasis = np.array(dbasis)
        span = span_functions(geom, pl.n, p, q)
        null = _constraint_null_space(basis, span, weight)
        basis = null @ basis
        dbasis = null @ dbasis
        # drop basis rows that died under projection
        norms = np.sqrt((basis ** 2 * weight).sum(axis=1))
        keep = norms > 1e-8 * norms.max()
        basis, dbasis = basis[keep], dbasis[keep]
        if basis.shape[0] < 3:
            raise DesignFailure(f"not enough basis functions survive projection (n={pl.n})")

        # quadratic forms: s(c) = int tau Gamma^2, z(c) = int tau Gamma^2 R_2n (folded)
        tau = geom.tau
        Q_m = (basis * (tau * weight)) @ basis.T
        f2n = _fold_factor(2 * pl.n, p, q)
        if f2n != 0:
            R2 = _phase(geom, 2 * pl.n)
            Q_re = (basis * (tau * R2.real * weight)) @ basis.T
            Q_im = (basis * (tau * R2.imag * weight)) @ basis.T
        else:
            Q_re = Q_im = None

        N = (basis * weight) @ basis.T
        sgn = np.sign(pl.moment)
        # maximize the signed moment on the self-resonance variety (so the
        # final scaling to the target moment keeps the amplitude small), then
        # Newton-polish the two quadratic constraints to round-off
        best = None
        # seed from the extremal directions of the (Q_m, N) pencil -- those
        # give the largest achievable |moment| per unit L2 mass -- then fall
        # back to random starts
        evals, evecs = scipy.linalg.eigh(Q_m, N)
        order = np.argsort(-sgn * evals)
        seeds = [evecs[:, j] for j in order[:6]]
        for attempt in range(30):
            if attempt < len(seeds):
                c0 = seeds[attempt]
            elif attempt < 3 * len(seeds):
                j = attempt % len(seeds)
                c0 = seeds[j] + 0.3 * rng.standard_normal(basis.shape[0])
            else:
                c0 = rng.standard_normal(basis.shape[0])
            c0 = c0 / np.sqrt(c0 @ N @ c0)
            if Q_re is None:
                c = c0
            else:
                cons = [dict(type="eq", fun=lambda x: x @ Q_re @ x,
                             jac=lambda x: 2.0 * (Q_re @ x)),
                        dict(type="eq", fun=lambda x: x @ Q_im @ x,
                             jac=lambda x: 2.0 * (Q_im @ x)),
                        dict(type="eq", fun=lambda x: x @ N @ x - 1.0,
                             jac=lambda x: 2.0 * (N @ x))]
                res = minimize(lambda x: -sgn * (x @ Q_m @ x), c0,
                               jac=lambda x: -sgn * 2.0 * (Q_m @ x),
                               method="SLSQP", constraints=cons,
                               options=dict(maxiter=400, ftol=1e-14))
                c = res.x
                for _ in range(60):
                    F = np.array([c @ Q_re @ c, c @ Q_im @ c])
                    if np.abs(F).max() < 1e-15 * (c @ N @ c):
                        break
                    J = 2.0 * np.vstack([Q_re @ c, Q_im @ c])
                    c = c - J.T @ np.linalg.solve(J @ J.T, F)
                else:
                    continue
            s = c @ Q_m @ c
            ratio = abs(s) / ((c @ N @ c) * np.abs(tau).max())
            if ratio < 1e-6 or np.sign(s) != sgn:
                continue
            if best is None or ratio > best[1]:
                best = (c * np.sqrt(pl.moment / s), ratio)
            if ratio > 0.05:
                break
        if best is None:
            raise DesignFailure(f"self-resonance/moment targeting failed for n={pl.n}")
        gamma = best[0] @ basis
        dgamma = best[0] @ dbasis
        entries.append(GammaEntry(pl.n, PeriodicFunction(
            gamma, geom.ell, derivative_samples=dgamma)))
    return GammaSet(entries)


def verify_admissibility(geom, gammas, p, q):
    """Evaluate all admissibility integrals; residuals are relative to the
    integrand's L1 mass (or to the profile scale when the integrand vanishes)."""
    weight = geom.ell / geom.grid_size
    tau, kappa, kappa_s = geom.tau, geom.kappa, geom.kappa_s

    samples = {e.n: e.gamma.samples for e in gammas.entries}
    derivs = {e.n: e.gamma.derivative().samples for e in gammas.entries}
    scale = max((np.abs(s).max() for s in samples.values()), default=1.0)

    def rel(integrand):
        val = (integrand * weight).sum()
        mass = (np.abs(integrand) * weight).sum()
        return abs(val) / (mass + 1e-30 + 1e-9 * scale)

    linear, cross, selfres, lemma, moments = {}, {}, {}, {}, {}
    for n, g in samples.items():
        for k in (-1, 1):
            f = _fold_factor(n + k, p, q)
            if f == 0:
                linear[(n, k, "kt")] = 0.0
                linear[(n, k, "kp")] = 0.0
                continue
            R = _phase(geom, n + k)
            linear[(n, k, "kt")] = rel(kappa * tau * g * R)
            linear[(n, k, "kp")] = rel(kappa_s * g * R)
            a_n = derivs[n] - 1j * n * tau * g
            lemma[(n, k, "kappa_a")] = rel(kappa * a_n * R)
    for n, g in samples.items():
        for j, gj in samples.items():
            for k in (-j, j):
                f = _fold_factor(n + k, p, q)
                if f == 0:
                    continue
                R = _phase(geom, n + k)
                cross[(j, n, k)] = rel(gj * derivs[n] * R)
                if j != n:
                    cross[(j, n, k, "tau")] = rel(tau * gj * g * R)
                    a_n = derivs[n] - 1j * n * tau * g
                    lemma[(j, n, k, "gamma_a")] = rel(gj * a_n * R)
        if _fold_factor(2 * n, p, q) != 0:
            R2 = _phase(geom, 2 * n)
            selfres[n] = rel(tau * g ** 2 * R2)
        moments[n] = float((tau * g ** 2 * weight).sum())
    allres = [v for d in (linear, cross, selfres) for v in
              (np.abs(list(d.values())).tolist() if d else [])]
    lemmares = [abs(v) for v in lemma.values()]
    max_residual = max(allres + lemmares) if (allres or lemmares) else 0.0
    return SCondReport(linear=linear, cross=cross, self_resonance=selfres,
                       lemma=lemma, moments=moments, max_residual=float(max_residual))


@dataclass
class ResonantDesign:
    I_points: list
    moments: dict
    C0: float
    p: int
    q: int
    omega_residual: float
    twist_values: list


def design_resonant_tori(geom, I_points, p, q, ns=None):
    """Choose moments m_n so hat-omega(I_k) = 2 pi p at the given actions.

    Solves sum_n 2^n n(n-1) I_k^(n-2) m_n = (6 - I_k) C0 / 16 for k = 1..M.
    Returns a ResonantDesign; twist_values are eps^-2 * hat-omega'(I_k) / (q eps^2)
    normalized, i.e. C0/16 + sum 2^n n(n-1)(n-2) I^(n-3) m_n.
    """
    I_points = sorted(float(I) for I in I_points)
    if not all(0.0 < I < 0.5 for I in I_points):
        raise ConfigError("actions must lie in (0, 1/2)")
    M = len(I_points)
    if ns is None:
        ns = list(range(3, 3 + M))
    if len(ns) != M:
        raise ConfigError("need as many profile indices as actions")
    C0 = float(geom.integrate(geom.tau * geom.kappa ** 2))
    if abs(C0) < 1e-12:
        raise ConfigError("int tau kappa^2 vanishes; the design is degenerate")
    A = np.array([[2.0 ** n * n * (n - 1) * I ** (n - 2) for n in ns]
                  for I in I_points])
    rhs = np.array([(6.0 - I) / 16.0 * C0 for I in I_points])
    m = np.linalg.solve(A, rhs)
    moments = {n: float(mv) for n, mv in zip(ns, m)}
    resid = float(np.abs(A @ m - rhs).max()) * q  # residual of hat-omega(I_k) - 2 pi p
    twists = [C0 / 16.0 + sum(2.0 ** n * n * (n - 1) * (n - 2) * I ** (n - 3) * moments[n]
                              for n in ns) for I in I_points]
    if any(abs(t) < 1e-10 * (abs(C0) / 16.0 + 1e-30) for t in twists):
        raise DesignFailure("vanishing twist at a designed action")
    return ResonantDesign(I_points=I_points, moments=moments, C0=C0, p=p, q=q,
                          omega_residual=resid, twist_values=twists)


def choose_melnikov_b(geom, p, q, mu=2.5):
    """Datum profile giving a nondegenerate two-zero Melnikov function per circle.

    For q = 1 the natural choice b = cos(T(s)) with angular index 1.  For q > 1
    the index-1 datum integrates to zero by root-of-unity cancellation, so the
    angular index is raised to q and b = cos(q T(s)), which is ell-periodic.
    """
    if q == 1:
        b = np.cos(geom.T_samples)
        n_b = 1
    else:
        b = np.cos(q * geom.T_samples)
        n_b = q
    return MelnikovDatum(b=PeriodicFunction(b, geom.ell), n_b=n_b, mu=mu)
