"""Closed-curve geometry: Fourier curves, arc-length Frenet data, torsion bookkeeping.

A curve is given by truncated Fourier series for (x, y, z).  `build_geometry`
reparametrizes by arc length on a uniform grid and exposes spectrally accurate
curvature, torsion, their arc-length derivatives, and the cumulative torsion
T(s) = -int_0^s tau, split into its linear part T0*s/ell and periodic part g(s).

Resonance utilities (`rationalize_torsion`, `tune_total_torsion`) pin the total
torsion T0 to 2*pi*p/q, and `helicoid_perturb` superposes a small rapidly
rotating normal-plane displacement that makes the torsion oscillate in sign on
prescribed supports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .errors import (BracketFailure, ConfigError, CurvatureSignLoss,
                     DegenerateSpeed, NonPositiveB, NonPositiveCurvature,
                     OverlappingSupports, TorsionSignError)
from .periodic import (PeriodicFunction, PeriodicStack, spectral_derivative,
                       trapezoid_period)


@dataclass
class CurveSpec:
    """Truncated Fourier series for a closed curve in R^3.

    coeffs[c] is an (K+1, 2) array: row k holds (a_k, b_k) for
    a_k cos(k t) + b_k sin(k t), t in [0, 2pi).
    """

    coeffs: dict

    def __post_init__(self):
        clean = {}
        for c in ("x", "y", "z"):
            if c not in self.coeffs:
                raise ConfigError(f"curve spec missing coordinate '{c}'")
            arr = np.atleast_2d(np.asarray(self.coeffs[c], dtype=float))
            if arr.shape[1] != 2:
                raise ConfigError("fourier rows must be [a_k, b_k] pairs")
            clean[c] = arr
        self.coeffs = clean

    @classmethod
    def from_dict(cls, d):
        if "fourier" not in d:
            raise ConfigError("curve spec must contain a 'fourier' block")
        return cls(coeffs=dict(d["fourier"]))

    def to_dict(self):
        return {"fourier": {c: self.coeffs[c].tolist() for c in ("x", "y", "z")}}

    def evaluate(self, t, deriv=0):
        """Evaluate the curve (or an exact t-derivative) at parameter values t."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (3,))
        for i, c in enumerate(("x", "y", "z")):
            arr = self.coeffs[c]
            k = np.arange(arr.shape[0])
            kt = np.multiply.outer(t, k)
            ck, sk = np.cos(kt), np.sin(kt)
            a, b = arr[:, 0], arr[:, 1]
            for _ in range(deriv):
                a, b = k * b, -k * a
            out[..., i] = ck @ a + sk @ b
        return out

    def scaled(self, axis, factor):
        """Return a copy with one coordinate's coefficients scaled."""
        coeffs = {c: self.coeffs[c].copy() for c in ("x", "y", "z")}
        coeffs[axis] = coeffs[axis] * factor
        return CurveSpec(coeffs=coeffs)

    def max_mode(self):
        return max(self.coeffs[c].shape[0] - 1 for c in ("x", "y", "z"))


@dataclass
class ResonanceData:
    p: int
    q: int
    residual: float
    resonant: bool


class ClosedCurveGeometry:
    """Arc-length Frenet data of a closed curve on a uniform grid.

    Attributes
    ----------
    ell : period (total arc length)
    grid : uniform arc-length grid (size G, alpha in [0, ell))
    gamma, tangent, e1, e2 : (G, 3) frame samples
    kappa, tau, kappa_s, tau_s : (G,) samples (arc-length derivatives)
    T0 : total torsion  -int_0^ell tau
    """

    def __init__(self, spec, grid_size=1024, _tol=1e-12):
        self.spec = spec
        G = int(grid_size)
        self.grid_size = G

        # sample fine in t, get arc length s(t) spectrally
        nfine = max(4096, 8 * spec.max_mode(), 4 * G)
        nfine = int(2 ** np.ceil(np.log2(nfine)))
        tf = np.linspace(0.0, 2.0 * np.pi, nfine, endpoint=False)
        d1 = spec.evaluate(tf, deriv=1)
        speed = np.linalg.norm(d1, axis=1)
        if speed.min() < 1e-8 * speed.max():
            raise DegenerateSpeed("curve parametrization speed vanishes")
        sp = PeriodicFunction(speed, 2.0 * np.pi)
        mean_speed, s_osc = sp.antiderivative()
        self.ell = float(mean_speed * 2.0 * np.pi)

        # invert s(t) = mean_speed * t + s_osc(t) on the uniform arc grid
        s_targets = self.ell * np.arange(G) / G
        t = s_targets / mean_speed
        for _ in range(60):
            resid = mean_speed * t + s_osc(t) - s_targets
            t = t - resid / sp(t)
            if np.abs(resid).max() < 1e-14 * self.ell:
                break
        self.t_of_alpha = t
        self.grid = s_targets

        g1 = spec.evaluate(t, deriv=1)
        g2 = spec.evaluate(t, deriv=2)
        g3 = spec.evaluate(t, deriv=3)
        v = np.linalg.norm(g1, axis=1)
        self.gamma = spec.evaluate(t)
        self.tangent = g1 / v[:, None]

        cr = np.cross(g1, g2)
        crn = np.linalg.norm(cr, axis=1)
        kappa = crn / v ** 3
        if kappa.min() <= 1e-10:
            raise NonPositiveCurvature(
                f"min curvature {kappa.min():.3e} is not strictly positive")
        tau = np.einsum("ij,ij->i", cr, g3) / crn ** 2
        self.kappa = kappa
        self.tau = tau

        # e1 = (dT/ds)/kappa with dT/dt = g2/v - g1 (g1.g2)/v^3
        dT_dt = g2 / v[:, None] - g1 * (np.einsum("ij,ij->i", g1, g2) / v ** 3)[:, None]
        self.e1 = dT_dt / (v * kappa)[:, None]
        self.e2 = np.cross(self.tangent, self.e1)

        self.kappa_s = spectral_derivative(kappa, self.ell)
        self.tau_s = spectral_derivative(tau, self.ell)

        tau_fn = PeriodicFunction(tau, self.ell)
        tau_mean, tau_anti = tau_fn.antiderivative()
        self.T0 = float(-tau_mean * self.ell)
        # T(s) = T0 s/ell + g(s), g periodic, g(0)=0
        self.g_samples = -tau_anti.samples
        self.T_samples = self.T0 * self.grid / self.ell + self.g_samples

        self._scalars = PeriodicStack(
            np.vstack([kappa, self.kappa_s, tau, self.tau_s, self.g_samples]),
            self.ell, names=["kappa", "kappa_s", "tau", "tau_s", "g"])
        self._frame = PeriodicStack(
            np.vstack([self.gamma.T, self.tangent.T, self.e1.T, self.e2.T]),
            self.ell)

    # -- pointwise evaluation (trig interpolation) --------------------------

    def scalars(self, alpha):
        """kappa, kappa', tau, tau', T at arbitrary alpha (vectorized)."""
        vals = self._scalars(alpha)
        T = self.T0 * np.asarray(alpha) / self.ell + vals[4]
        return {"kappa": vals[0], "kappa_s": vals[1], "tau": vals[2],
                "tau_s": vals[3], "T": T}

    def frame(self, alpha):
        vals = self._frame(alpha)
        shp = np.shape(alpha)
        return (vals[0:3].reshape((3,) + shp), vals[3:6].reshape((3,) + shp),
                vals[6:9].reshape((3,) + shp), vals[9:12].reshape((3,) + shp))

    def T_of(self, alpha):
        return self.T0 * np.asarray(alpha) / self.ell + self._scalars.eval_single(4, alpha)

    def integrate(self, samples):
        return trapezoid_period(samples, self.ell)


def build_geometry(spec, grid_size=1024):
    return ClosedCurveGeometry(spec, grid_size=grid_size)


# -- tube embedding ----------------------------------------------------------

def metric_AB(geom, eps, alpha, r, theta):
    """Metric factors A = B^2 + (eps tau r)^2 and B = 1 - eps kappa r cos(theta)."""
    sc = geom.scalars(alpha)
    B = 1.0 - eps * sc["kappa"] * r * np.cos(theta)
    if np.any(B <= 0):
        raise NonPositiveB("B = 1 - eps*kappa*r*cos(theta) <= 0: tube too thick")
    A = B ** 2 + (eps * sc["tau"] * r) ** 2
    return A, B


def embed_tube_point(geom, eps, alpha, r, theta):
    """Cartesian position of the tube point (alpha, r, theta)."""
    _, _, e1, e2 = geom.frame(alpha)
    gamma, _, _, _ = geom.frame(alpha)  # gamma returned first
    gamma, tang, e1, e2 = geom.frame(alpha)
    y1 = eps * r * np.cos(theta)
    y2 = eps * r * np.sin(theta)
    return (gamma + y1 * e1 + y2 * e2).T


def tube_coordinates(geom, eps, x, alpha_seed):
    """Invert the tube embedding near alpha_seed (Newton on the section condition)."""
    alpha = float(alpha_seed)
    x = np.asarray(x, dtype=float)
    for _ in range(100):
        gamma, tang, e1, e2 = geom.frame(alpha)
        d = x - gamma.ravel()
        sc = geom.scalars(alpha)
        f = float(d @ tang.ravel())
        # d/dalpha (x-gamma).t = -1 + kappa (x-gamma).e1
        fp = -1.0 + sc["kappa"] * float(d @ e1.ravel())
        step = f / fp
        alpha -= step
        if abs(step) < 1e-14:
            break
    gamma, tang, e1, e2 = geom.frame(alpha)
    d = x - gamma.ravel()
    y1 = float(d @ e1.ravel()) / eps
    y2 = float(d @ e2.ravel()) / eps
    return alpha, np.hypot(y1, y2), np.arctan2(y2, y1)


# -- resonance ---------------------------------------------------------------

def rationalize_torsion(T0, q_max=64, tol=1e-9):
    """Best rational T0 ~ 2*pi*p/q with q <= q_max (continued fractions)."""
    if q_max < 1:
        raise ConfigError("q_max must be >= 1")
    frac = Fraction(T0 / (2.0 * np.pi)).limit_denominator(int(q_max))
    p, q = frac.numerator, frac.denominator
    if q == 0:
        raise ConfigError("degenerate rationalization")
    residual = float(T0 - 2.0 * np.pi * p / q)
    return ResonanceData(p=int(p), q=int(q), residual=residual,
                         resonant=abs(residual) < tol)


def tune_total_torsion(family, p, q, bracket, grid_size=1024, tol=1e-13):
    """Tune a one-parameter curve family so that T0 = 2*pi*p/q exactly.

    family : callable param -> CurveSpec
    bracket : (lo, hi) with a sign change of T0 - 2*pi*p/q
    Returns (param, geometry).
    """
    target = 2.0 * np.pi * p / q

    def h(c):
        return ClosedCurveGeometry(family(c), grid_size=grid_size).T0 - target

    lo, hi = bracket
    hlo, hhi = h(lo), h(hi)
    if hlo * hhi > 0:
        raise BracketFailure(
            f"no sign change of T0 - 2*pi*{p}/{q} on [{lo}, {hi}] "
            f"(values {hlo:.3e}, {hhi:.3e})")
    c = brentq(h, lo, hi, xtol=tol, rtol=8.9e-16)
    geom = ClosedCurveGeometry(family(c), grid_size=grid_size)
    resid = geom.T0 - target
    if abs(resid) > 1e-11:
        raise BracketFailure(f"tuning residual {resid:.3e} too large")
    return c, geom


# -- helicoidal perturbation ---------------------------------------------------

def smooth_bump_pair(a, b, flat=0.5):
    """C-infinity bump supported on (a, b), equal to 1 on the middle `flat`
    part, together with its exact derivative.  Returns (f, fprime)."""
    if not 0.0 < flat < 1.0:
        raise ConfigError("flat fraction must be in (0,1)")
    lo = a + 0.5 * (1.0 - flat) * (b - a)
    hi = b - 0.5 * (1.0 - flat) * (b - a)

    def ramp_pair(u):
        # smooth step: 0 for u<=0, 1 for u>=1, and its derivative in u
        u = np.clip(u, 0.0, 1.0)
        inside = (u > 0) & (u < 1)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            ea = np.where(inside, np.exp(-1.0 / np.maximum(u, 1e-300)), 0.0)
            eb = np.where(inside, np.exp(-1.0 / np.maximum(1.0 - u, 1e-300)), 0.0)
            dea = np.where(inside, ea / np.maximum(u, 1e-300) ** 2, 0.0)
            deb = np.where(inside, -eb / np.maximum(1.0 - u, 1e-300) ** 2, 0.0)
        den = np.where(inside, ea + eb, 1.0)
        val = np.where(u <= 0, 0.0, np.where(u >= 1, 1.0, ea / den))
        der = np.where(inside, (dea * eb - ea * deb) / den ** 2, 0.0)
        return val, der

    da = max(lo - a, 1e-300)
    db = max(b - hi, 1e-300)

    def f(alpha):
        alpha = np.asarray(alpha, dtype=float)
        up, _ = ramp_pair((alpha - a) / da)
        dn, _ = ramp_pair((alpha - hi) / db)
        return np.where((alpha > a) & (alpha < b), up * (1.0 - dn), 0.0)

    def fprime(alpha):
        alpha = np.asarray(alpha, dtype=float)
        up, dup = ramp_pair((alpha - a) / da)
        dn, ddn = ramp_pair((alpha - hi) / db)
        der = (dup / da) * (1.0 - dn) - up * (ddn / db)
        return np.where((alpha > a) & (alpha < b), der, 0.0)

    return f, fprime


def smooth_bump(a, b, flat=0.5):
    """C-infinity bump supported on (a, b), equal to 1 on the middle `flat` part."""
    return smooth_bump_pair(a, b, flat)[0]


@dataclass
class HelicoidBump:
    """One support interval (a, b) in arc length with profile f(alpha)."""
    a: float
    b: float
    profile: object  # callable alpha -> f(alpha), supported in (a, b)


def helicoid_perturb(geom, bumps, eta, nfine=None, grid_size=None):
    """Superpose gamma1 = gamma - eta^3 sum_n f_n (e1 cos(a/eta) + e2 sin(a/eta)).

    Returns (new_spec, new_geometry).  Predicted torsion of the perturbed curve
    is tau + (f_n/kappa) cos(alpha/eta) + O(eta) inside each support.
    Identity when all profiles vanish.
    """
    if grid_size is None:
        grid_size = geom.grid_size
    ivals = sorted((b.a, b.b) for b in bumps)
    for (a1, b1), (a2, b2) in zip(ivals, ivals[1:]):
        if b1 > a2:
            raise OverlappingSupports(f"supports ({a1},{b1}) and ({a2},{b2}) overlap")
    if nfine is None:
        nfine = max(8192, int(2 ** np.ceil(np.log2(40.0 * geom.ell / (2 * np.pi * eta)))))
    alpha = geom.ell * np.arange(nfine) / nfine
    total = np.zeros(nfine)
    for b in bumps:
        total += b.profile(alpha)
    if not np.any(total):
        return geom.spec, geom
    gamma, tang, e1, e2 = geom.frame(alpha)
    phase = alpha / eta
    disp = (eta ** 3) * total * (e1 * np.cos(phase) + e2 * np.sin(phase))
    pts = gamma + disp  # (3, nfine)
    coeffs = {}
    for i, c in enumerate(("x", "y", "z")):
        co = np.fft.rfft(pts[i]) / nfine
        a_k = 2.0 * co.real
        b_k = -2.0 * co.imag
        a_k[0] *= 0.5
        mag = np.hypot(a_k, b_k)
        kmax = int(np.nonzero(mag > 1e-14 * (mag.max() + 1e-300))[0].max())
        coeffs[c] = np.column_stack([a_k[:kmax + 1], b_k[:kmax + 1]])
    spec1 = CurveSpec(coeffs=coeffs)
    try:
        geom1 = ClosedCurveGeometry(spec1, grid_size=grid_size)
    except NonPositiveCurvature as e:
        raise CurvatureSignLoss(str(e)) from e
    return spec1, geom1


def torsion_sign_changes(geom, interval=None):
    """Number of sign changes of tau on the grid (optionally inside an interval)."""
    tau = geom.tau
    if interval is not None:
        a, b = interval
        mask = (geom.grid >= a) & (geom.grid <= b)
        tau = tau[mask]
    s = np.sign(tau)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def require_torsion_sign_change(geom, interval):
    if torsion_sign_changes(geom, interval) < 1:
        raise TorsionSignError(f"torsion does not change sign on {interval}")


# -- twist integrals -----------------------------------------------------------

def twist_integrals(geom, gamma3_samples=None):
    """C0 = int tau kappa^2 and the twist A = int tau (kappa^2/16 + 48 Gamma3^2)."""
    C0 = float(geom.integrate(geom.tau * geom.kappa ** 2))
    if gamma3_samples is None:
        A = C0 / 16.0
    else:
        A = float(geom.integrate(geom.tau * (geom.kappa ** 2 / 16.0
                                             + 48.0 * np.asarray(gamma3_samples) ** 2)))
    return C0, A
