"""Melnikov analysis, periodic-orbit continuation, and invariant-circle scans.

The subharmonic Melnikov function along a resonant circle of action I_k is

    M(phi) = int_0^{q ell} v_r_mu(s, sqrt(2 I_k), phi + T(s)) ds,

a trigonometric polynomial in phi.  Its nondegenerate zeros seed Newton
refinement of fixed points of the numerically iterated section map; the
variational Jacobian at the fixed point classifies each orbit (hyperbolic /
elliptic) and is compared against the predicted eigenvalue law

    1 - Lambda_pm = +-2 eps^(mu/2 + 1) sqrt(A sqrt(2 I_k) M'(phi_i)),

with A = eps^-2 * (d/dI) hat-omega(I_k).

Rotation numbers of section orbits use weighted Birkhoff averages with the
exponential bump weight, whose superpolynomial convergence separates invariant
circles from resonant islands and chaotic layers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .analytic import omega_hat_prime, smooth_integral
from .errors import NumericalError
from .flow import IntegratorConfig, iterate_map, poincare_map


# -- Melnikov -------------------------------------------------------------------


@dataclass
class MelnikovProfile:
    I_k: float
    q: int
    p: int
    cos_coeff: float  # M(phi) = r^(n_b - 1) (C cos(n_b phi) - S sin(n_b phi))
    sin_coeff: float
    n_b: int
    zeros: list
    slopes: list
    amplitude: float

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        n = self.n_b
        return (self.cos_coeff * np.cos(n * phi)
                - self.sin_coeff * np.sin(n * phi))

    def derivative(self, phi):
        phi = np.asarray(phi, dtype=float)
        n = self.n_b
        return n * (-self.cos_coeff * np.sin(n * phi)
                    - self.sin_coeff * np.cos(n * phi))


def melnikov(geom, datum, I_k, p, q, panels=128):
    """Melnikov function along the circle {I = I_k}; returns a MelnikovProfile.

    The datum kernel is b(s) r^(n_b-1) cos(n_b (phi + T(s))), so

        M(phi) = r^(n_b-1) [cos(n_b phi) int b cos(n_b T)
                            - sin(n_b phi) int b sin(n_b T)].
    """
    n = datum.n_b
    r = np.sqrt(2.0 * I_k)
    L = q * geom.ell

    C = float(smooth_integral(lambda s: datum.b(s) * np.cos(n * geom.T_of(s)),
                              0.0, L, panels=panels))
    S = float(smooth_integral(lambda s: datum.b(s) * np.sin(n * geom.T_of(s)),
                              0.0, L, panels=panels))
    rc = r ** (n - 1)
    cc, sc = rc * C, rc * S
    amp = float(np.hypot(cc, sc))
    zeros, slopes = [], []
    if amp > 1e-12:
        # zeros of C cos(n phi) - S sin(n phi): n phi = atan2(C, S) + j pi
        base = np.arctan2(cc, sc)
        for j in range(2 * n):
            phi = (base + j * np.pi) / n
            phi = phi % (2.0 * np.pi)
            zeros.append(phi)
        zeros = sorted(zeros)
        prof = MelnikovProfile(I_k, q, p, cc, sc, n, [], [], amp)
        slopes = [float(prof.derivative(z)) for z in zeros]
    return MelnikovProfile(I_k=I_k, q=q, p=p, cos_coeff=cc, sin_coeff=sc, n_b=n,
                           zeros=list(zeros), slopes=slopes, amplitude=amp)


# -- periodic orbits --------------------------------------------------------------


@dataclass
class OrbitRecord:
    I_k: float
    phi_seed: float
    point: tuple           # fixed point (r, theta) on the section
    residual: float
    eigenvalues: tuple
    kind: str              # "hyperbolic" | "elliptic" | "undecided"
    predicted: complex     # predicted 1 - Lambda magnitude (hyperbolic branch)
    measured: float        # measured |1 - Lambda|
    det: float
    theta_winding: float
    windings: tuple        # (q, p) integer winding numbers


def _wrap_pi(x):
    return (x + np.pi) % (2.0 * np.pi) - np.pi


def find_orbit(field, I_k, phi_seed, p, q, config=None, max_iter=40, tol=1e-11):
    """Newton refinement of a fixed point of Pi^q near (I_k, phi_seed).

    Works in (I, phi) = (r^2/2, theta); the residual is
    ((Pi_I - I)/eps^mu, wrap(Pi_phi - phi - 2 pi p)/eps^2), which keeps the
    Jacobian well-conditioned in the small-twist regime.
    """
    if config is None:
        config = IntegratorConfig()
    eps = field.eps
    mu = field.config.datum.mu if field.config.datum is not None else 2.5
    sI = eps ** mu
    sP = eps ** 2
    x = np.array([I_k, phi_seed])
    hI, hP = 1e-7, 1e-6

    def residual_batch(xs):
        pts = np.column_stack([np.sqrt(2.0 * xs[:, 0]), xs[:, 1]])
        ends, _ = poincare_map(field, pts, n_periods=q, config=config)
        Iend = ends[:, 0] ** 2 / 2.0
        rI = (Iend - xs[:, 0]) / sI
        rP = _wrap_pi(ends[:, 1] - xs[:, 1] - 2.0 * np.pi * p) / sP
        return np.column_stack([rI, rP])

    for _ in range(max_iter):
        stencil = np.array([x,
                            x + [hI, 0], x - [hI, 0],
                            x + [0, hP], x - [0, hP]])
        res = residual_batch(stencil)
        F = res[0]
        J = np.empty((2, 2))
        J[:, 0] = (res[1] - res[2]) / (2 * hI)
        J[:, 1] = (res[3] - res[4]) / (2 * hP)
        step = np.linalg.solve(J, F)
        x = x - step
        if np.max(np.abs(step)) < 1e-13:
            break
    pt = np.array([np.sqrt(2.0 * x[0]), x[1]])
    end, _ = poincare_map(field, pt[None, :], n_periods=q, config=config)
    resid = float(np.hypot(end[0, 0] - pt[0],
                           _wrap_pi(end[0, 1] - pt[1] - 2.0 * np.pi * p)))
    if resid > tol:
        raise NumericalError(f"orbit refinement stalled: |Pi^q(x)-x| = {resid:.3e}")
    return pt, resid


def classify_orbit(field, point, I_k, phi_seed, melnikov_profile, design,
                   p, q, config=None, tol_parabolic=1e-9):
    """Eigenvalues of D Pi^q at a fixed point, with the predicted counterpart."""
    if config is None:
        config = IntegratorConfig()
    end, jac = poincare_map(field, point[None, :], n_periods=q, config=config,
                            variational=True)
    J = jac[0]
    eig = np.linalg.eigvals(J)
    det = float(np.linalg.det(J))
    dev = np.abs(np.abs(1.0 - eig))
    measured = float(dev.max())
    if measured < tol_parabolic:
        kind = "undecided"
    elif np.max(np.abs(eig.imag)) > 0.5 * measured:
        kind = "elliptic"
    else:
        kind = "hyperbolic"

    geom, eps = field.geom, field.eps
    mu = field.config.datum.mu
    A = omega_hat_prime(geom, 1.0, I_k, p, q, design.moments)  # eps factored out
    Mp = float(melnikov_profile.derivative(phi_seed))
    inner = A * np.sqrt(2.0 * I_k) * Mp
    predicted = 2.0 * eps ** (mu / 2.0 + 1.0) * np.sqrt(complex(inner))
    wind = float(end[0, 1] - point[1])
    windings = (q, int(np.round(wind / (2.0 * np.pi))))
    return OrbitRecord(I_k=I_k, phi_seed=phi_seed, point=tuple(point),
                       residual=float(np.hypot(*(end[0] - point
                                                 - [0.0, 2.0 * np.pi * p]))),
                       eigenvalues=tuple(eig), kind=kind, predicted=predicted,
                       measured=measured, det=det, theta_winding=wind,
                       windings=windings)


def find_orbits(field, melnikov_profile, design, config=None):
    """Refine and classify one orbit per Melnikov zero on one resonant circle."""
    p, q, I_k = melnikov_profile.p, melnikov_profile.q, melnikov_profile.I_k
    records = []
    for phi in melnikov_profile.zeros:
        pt, _resid = find_orbit(field, I_k, phi, p, q, config=config)
        records.append(classify_orbit(field, pt, I_k, phi, melnikov_profile,
                                      design, p, q, config=config))
    return records


# -- rotation numbers and invariant-circle scan -----------------------------------


def _birkhoff_weights(N):
    t = (np.arange(N) + 0.5) / N
    return np.exp(-1.0 / (t * (1.0 - t)))


def weighted_birkhoff_rotation(lifts):
    """(rotation estimate, convergence diagnostic) from a lifted angle orbit.

    lifts : (N+1,) lifted angles of successive iterates.  The diagnostic is the
    difference between the estimates over the full and half orbit.
    """
    d = np.diff(lifts)
    N = d.size

    def est(dd):
        w = _birkhoff_weights(dd.size)
        return float((w * dd).sum() / w.sum())

    full = est(d)
    half = est(d[: N // 2])
    return full, abs(full - half)


@dataclass
class ScanPoint:
    I: float
    rotation: float
    diagnostic: float
    kind: str  # "invariant-circle" | "resonant" | "undecided"


@dataclass
class ScanResult:
    eps: float
    points: list
    fraction_invariant: float


def kam_scan(field, I_values, p, q, count=512, theta0=0.0, config=None,
             diag_tol=1e-8, resonance_tol=1e-10, denom_max=50):
    """Classify circle candidates by weighted-Birkhoff rotation convergence.

    For each action I the section orbit of (sqrt(2 I), theta0) under Pi^q is
    iterated `count` times (batched over all actions); the lifted angle yields
    the rotation number and its convergence diagnostic.
    """
    if config is None:
        config = IntegratorConfig()
    I_values = np.asarray(I_values, dtype=float)
    pts = np.column_stack([np.sqrt(2.0 * I_values),
                           np.full(I_values.size, float(theta0))])
    traj = iterate_map(field, pts, count, n_periods=q, config=config)
    points = []
    n_inv = 0
    for i, I in enumerate(I_values):
        rot, diag = weighted_birkhoff_rotation(traj[:, i, 1])
        kind = "undecided"
        if diag < diag_tol:
            # rational lock?
            frac = rot / (2.0 * np.pi)
            best = min((abs(frac - np.round(frac * qq) / qq), qq)
                       for qq in range(1, denom_max + 1))
            if best[0] < resonance_tol:
                kind = "resonant"
            else:
                kind = "invariant-circle"
        if kind == "invariant-circle":
            n_inv += 1
        points.append(ScanPoint(I=float(I), rotation=rot, diagnostic=diag, kind=kind))
    return ScanResult(eps=field.eps, points=points,
                      fraction_invariant=n_inv / max(len(points), 1))
