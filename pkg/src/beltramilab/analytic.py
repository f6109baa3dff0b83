"""Closed-form approximations: first integral, Poincare maps, normal form.

Everything here is an explicit formula in the curve data evaluated at the
section alpha = 0 (plus a handful of quadratures along the unperturbed orbit
for the fractional-order datum terms).  These are the analytic counterparts
to the numerically integrated Poincare maps and serve as cross-validation
targets with O(eps^3) agreement.

Two variants of the second-order polar map are provided: "statement" uses the
coefficients as printed in the source of truth, "derived" uses an independent
re-derivation of two of them (the cos2theta group and the cos theta_0 group);
the numerical slope test discriminates between them.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConfigError


def smooth_integral(f, a, b, panels=64, order=10):
    """Composite Gauss-Legendre quadrature of a smooth vectorized integrand.

    f maps a node array (k,) to values of shape (..., k); the integral is
    taken along the last axis.
    """
    x, w = leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    nodes = (mid[:, None] + half * x[None, :]).ravel()
    vals = np.asarray(f(nodes))
    vals = vals.reshape(vals.shape[:-1] + (panels, order))
    return half * np.sum(vals @ w, axis=-1)


# -- approximate first integral -------------------------------------------------


def first_integral(geom, eps, alpha, r, theta):
    """I = r^2/2 + eps I1 + eps^2 I2 (exact through second order)."""
    sc = geom.scalars(alpha)
    k, k0 = sc["kappa"], geom.kappa[0]
    r = np.asarray(r, dtype=float)
    ct = np.cos(theta)
    c2 = np.cos(2.0 * np.asarray(theta))
    I1 = 3.0 * (r ** 3 - r) / 8.0 * k * ct
    # the theta-independent quartic -9(r^4-1)/128 is forced by the order-2
    # cancellation X(I) = O(eps^3); see test_first_integral_coefficients
    I2 = ((7.0 / 32.0) * r ** 2 * (k ** 2 - k0 ** 2)
          - 9.0 * (r ** 4 - 1.0) / 128.0 * k ** 2
          + 17.0 * (r ** 4 - r ** 2) / 96.0 * k ** 2 * c2)
    return r ** 2 / 2.0 + eps * I1 + eps ** 2 * I2


def first_integral_partials(geom, eps, alpha, r, theta):
    """(dI/dalpha, dI/dr, dI/dtheta) of the truncated first integral."""
    sc = geom.scalars(alpha)
    k, kp, k0 = sc["kappa"], sc["kappa_s"], geom.kappa[0]
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    ct, st = np.cos(theta), np.sin(theta)
    c2, s2 = np.cos(2 * theta), np.sin(2 * theta)
    dA = (eps * 3.0 * (r ** 3 - r) / 8.0 * kp * ct
          + eps ** 2 * ((7.0 / 16.0) * r ** 2 * k * kp
                        - 9.0 * (r ** 4 - 1.0) / 64.0 * k * kp
                        + 17.0 * (r ** 4 - r ** 2) / 48.0 * k * kp * c2))
    dR = (r + eps * 3.0 * (3.0 * r ** 2 - 1.0) / 8.0 * k * ct
          + eps ** 2 * ((7.0 / 16.0) * r * (k ** 2 - k0 ** 2)
                        - 9.0 * (4.0 * r ** 3) / 128.0 * k ** 2
                        + 17.0 * (4.0 * r ** 3 - 2.0 * r) / 96.0 * k ** 2 * c2))
    dT = (-eps * 3.0 * (r ** 3 - r) / 8.0 * k * st
          - eps ** 2 * 17.0 * (r ** 4 - r ** 2) / 48.0 * k ** 2 * s2)
    return dA, dR, dT


def field_derivative_of_integral(field, alpha, r, theta):
    """X(I): the derivative of the first integral along the truncated field."""
    geom, eps = field.geom, field.eps
    dA, dR, dT = first_integral_partials(geom, eps, alpha, r, theta)
    X_r, X_t = field.components(alpha, r, theta)
    return dA + X_r * dR + X_t * dT


def r_from_I(geom, eps, I, theta, alpha=0.0):
    """Invert I(alpha, r, theta) = I for r (Newton, seeded at sqrt(2I))."""
    I = np.asarray(I, dtype=float)
    r = np.sqrt(2.0 * I)
    for _ in range(50):
        f = first_integral(geom, eps, alpha, r, theta) - I
        _, dR, _ = first_integral_partials(geom, eps, alpha, r, theta)
        step = f / dR
        r = r - step
        if np.max(np.abs(step)) < 1e-15:
            break
    return r


# -- datum quadratures ----------------------------------------------------------


def mu_quadratures(geom, datum, r0, theta0, q=1, panels=None):
    """(Pi_r_mu, Pi_theta_mu): datum components integrated along the unperturbed orbit."""
    if datum is None:
        return (np.zeros(np.shape(r0)), np.zeros(np.shape(r0)))
    r0 = np.asarray(r0, dtype=float)
    theta0 = np.asarray(theta0, dtype=float)
    n = datum.n_b
    if panels is None:
        panels = max(64, 2 * q * 32)

    def vr(s):
        b = datum.b(s)
        T = geom.T_of(s)
        th = theta0[..., None] + T
        return b * r0[..., None] ** (n - 1) * np.cos(n * th)

    def vt(s):
        b = datum.b(s)
        T = geom.T_of(s)
        th = theta0[..., None] + T
        return -b * r0[..., None] ** (n - 2) * np.sin(n * th)

    L = q * geom.ell
    Pr = smooth_integral(vr, 0.0, L, panels=panels)
    Pt = smooth_integral(vt, 0.0, L, panels=panels)
    return Pr.reshape(r0.shape), Pt.reshape(r0.shape)


# -- Poincare map of the profile-free field (one period) -------------------------


def poincare_polar(geom, eps, r0, theta0, datum=None, variant="derived"):
    """Analytic one-period Poincare map (r0, theta0) -> (r1, theta1), profile-free field."""
    if variant not in ("derived", "statement"):
        raise ConfigError("variant must be 'derived' or 'statement'")
    r0 = np.asarray(r0, dtype=float)
    theta0 = np.asarray(theta0, dtype=float)
    k0 = geom.kappa[0]
    T0 = geom.T0
    C0 = float(geom.integrate(geom.tau * geom.kappa ** 2))
    th1 = theta0 + T0
    dc = np.cos(th1) - np.cos(theta0)
    ds = np.sin(th1) - np.sin(theta0)

    P_r1 = (3.0 - 3.0 * r0 ** 2) / 8.0 * k0 * dc
    P_t1 = (r0 ** 2 - 3.0) / (8.0 * r0) * k0 * ds

    if variant == "statement":
        c_cos2 = (-55.0 * r0 ** 4 + 46.0 * r0 ** 2 - 27.0) / (768.0 * r0)
        c_cos = (9.0 * r0 - 3.0 * r0 ** 3) / 32.0
    else:
        c_cos2 = (-19.0 * r0 ** 4 + 46.0 * r0 ** 2 - 27.0) / (768.0 * r0)
        c_cos = (9.0 * r0 - 9.0 * r0 ** 3) / 32.0
    P_r2 = (c_cos2 * k0 ** 2 * (np.cos(2 * th1) - np.cos(2 * theta0))
            + c_cos * k0 ** 2 * np.cos(theta0) * dc
            - (3.0 * r0 ** 4 - 12.0 * r0 ** 2 + 9.0) / (64.0 * r0) * k0 ** 2
            * np.sin(theta0) * ds)
    P_t2 = (-(12.0 - 5.0 * r0 ** 2) / 32.0 * C0
            + 3.0 * (r0 ** 4 + 2.0 * r0 ** 2 - 3.0) / (64.0 * r0 ** 2) * k0 ** 2
            * np.cos(theta0) * np.sin(th1)
            - (3.0 - r0 ** 2) ** 2 / (64.0 * r0 ** 2) * k0 ** 2
            * np.sin(theta0) * np.cos(th1)
            + (27.0 - 50.0 * r0 ** 2 + 25.0 * r0 ** 4) / (384.0 * r0 ** 2) * k0 ** 2
            * np.sin(2 * th1)
            + (27.0 + 14.0 * r0 ** 2 - 31.0 * r0 ** 4) / (384.0 * r0 ** 2) * k0 ** 2
            * np.sin(2 * theta0))

    P_rmu, P_tmu = mu_quadratures(geom, datum, r0, theta0, q=1)
    emu = eps ** datum.mu if datum is not None else 0.0
    r1 = r0 + eps * P_r1 + eps ** 2 * P_r2 + emu * P_rmu
    t1 = theta0 + T0 + eps * P_t1 + eps ** 2 * P_t2 + emu * P_tmu
    return r1, t1


def poincare_action_angle(geom, eps, I, theta, datum=None):
    """Analytic one-period map in (I, theta) coordinates, profile-free field."""
    I = np.asarray(I, dtype=float)
    theta = np.asarray(theta, dtype=float)
    k0 = geom.kappa[0]
    T0 = geom.T0
    C0 = float(geom.integrate(geom.tau * geom.kappa ** 2))
    th1 = theta + T0
    P_t1 = (2.0 * I - 3.0) / (8.0 * np.sqrt(2.0 * I)) * k0 * (np.sin(th1) - np.sin(theta))
    P_t2 = (-(6.0 - 5.0 * I) / 16.0 * C0
            + (27.0 - 100.0 * I + 100.0 * I ** 2) / (768.0 * I) * k0 ** 2 * np.sin(2 * th1)
            - (4.0 * I ** 2 - 12.0 * I + 9.0) / (128.0 * I) * k0 ** 2
            * np.sin(theta) * np.cos(th1)
            - (11.0 * I - 8.0) / 96.0 * k0 ** 2 * np.sin(2 * theta))
    r0 = np.sqrt(2.0 * I)
    P_rmu, P_tmu = mu_quadratures(geom, datum, r0, theta, q=1)
    emu = eps ** datum.mu if datum is not None else 0.0
    I1 = I + emu * r0 * P_rmu
    t1 = theta + T0 + eps * P_t1 + eps ** 2 * P_t2 + emu * P_tmu
    return I1, t1


# -- Poincare-Lindstedt normal form ----------------------------------------------


def lindstedt_phi1(I, theta, kappa0):
    return (2.0 * I - 3.0) / (8.0 * np.sqrt(2.0 * I)) * kappa0 * np.sin(theta)


def lindstedt_phi2(I, theta, kappa0):
    return ((27.0 - 100.0 * I + 100.0 * I ** 2) / (768.0 * I)
            * kappa0 ** 2 * np.sin(2.0 * theta))


def lindstedt_theta(geom, eps, I, phi):
    """The averaging change theta(I, phi) = phi + eps phi1 + eps^2 phi2."""
    k0 = geom.kappa[0]
    return (phi + eps * lindstedt_phi1(I, phi, k0)
            + eps ** 2 * lindstedt_phi2(I, phi, k0))


def lindstedt_angle(geom, eps, I, theta):
    """The averaged angle phi(I, theta): inverse of `lindstedt_theta` in phi.

    Computed by Newton iteration; to the order retained this equals
    theta - eps phi1 + eps^2 (phi1 d(phi1)/dtheta - phi2).
    """
    k0 = geom.kappa[0]
    phi = np.asarray(theta, dtype=float).copy()
    for _ in range(50):
        f = lindstedt_theta(geom, eps, I, phi) - theta
        df = (1.0 + eps * (2.0 * I - 3.0) / (8.0 * np.sqrt(2.0 * I)) * k0 * np.cos(phi)
              + eps ** 2 * (27.0 - 100.0 * I + 100.0 * I ** 2) / (384.0 * I)
              * k0 ** 2 * np.cos(2.0 * phi))
        step = f / df
        phi = phi - step
        if np.max(np.abs(step)) < 1e-15:
            break
    return phi


def omega_normal_form(geom, eps, I):
    """omega(I) = T0 - eps^2 (6 - 5I)/16 * int tau kappa^2 (profile-free field)."""
    C0 = float(geom.integrate(geom.tau * geom.kappa ** 2))
    return geom.T0 - eps ** 2 * (6.0 - 5.0 * np.asarray(I)) / 16.0 * C0


def poincare_normal_form(geom, eps, I, phi, datum=None):
    """Normal-form map (I, phi) -> (I + eps^mu F, phi + omega(I) + eps^mu G)."""
    I = np.asarray(I, dtype=float)
    r0 = np.sqrt(2.0 * I)
    P_rmu, P_tmu = mu_quadratures(geom, datum, r0, np.asarray(phi, dtype=float), q=1)
    emu = eps ** datum.mu if datum is not None else 0.0
    return I + emu * r0 * P_rmu, phi + omega_normal_form(geom, eps, I) + emu * P_tmu


# -- resonant iterated map --------------------------------------------------------


def omega_hat(geom, eps, I, p, q, moments):
    """hat-omega(I) = 2 pi p - q eps^2 ((6-I)/16 C0 - sum 2^n n(n-1) I^(n-2) m_n)."""
    C0 = float(geom.integrate(geom.tau * geom.kappa ** 2))
    I = np.asarray(I, dtype=float)
    s = np.zeros_like(I)
    for n, m_n in moments.items():
        s = s + 2.0 ** n * n * (n - 1) * I ** (n - 2) * m_n
    return 2.0 * np.pi * p - q * eps ** 2 * ((6.0 - I) / 16.0 * C0 - s)


def omega_hat_prime(geom, eps, I, p, q, moments):
    C0 = float(geom.integrate(geom.tau * geom.kappa ** 2))
    I = np.asarray(I, dtype=float)
    s = np.zeros_like(I)
    for n, m_n in moments.items():
        s = s + 2.0 ** n * n * (n - 1) * (n - 2) * I ** max(n - 3, 0) * m_n
    return q * eps ** 2 * (C0 / 16.0 + s)


def iterate_resonant(geom, eps, r0, theta0, p, q, moments, datum=None):
    """Analytic q-fold iterate at exact resonance with admissible profiles.

    Pi^q = (r0 + eps^mu Pi_r_mu + O(eps^3),
            theta0 + omega(r0) + eps^mu Pi_t_mu + O(eps^3)),
    omega(r0) = 2 pi p - q eps^2 ((12 - r0^2)/32 C0 - sum 4 n(n-1) r0^(2n-4) m_n).
    """
    r0 = np.asarray(r0, dtype=float)
    C0 = float(geom.integrate(geom.tau * geom.kappa ** 2))
    s = np.zeros_like(r0)
    for n, m_n in moments.items():
        s = s + 4.0 * n * (n - 1) * r0 ** (2 * n - 4) * m_n
    omega = 2.0 * np.pi * p - q * eps ** 2 * ((12.0 - r0 ** 2) / 32.0 * C0 - s)
    P_rmu, P_tmu = mu_quadratures(geom, datum, r0, np.asarray(theta0, dtype=float), q=q)
    emu = eps ** datum.mu if datum is not None else 0.0
    return r0 + emu * P_rmu, theta0 + omega + emu * P_tmu
