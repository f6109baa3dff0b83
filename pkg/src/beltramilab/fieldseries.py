"""Truncated Beltrami field series in tube coordinates (alpha, r, theta).

Components of the rescaled field X (X_alpha = 1) through second order in the
tube thickness eps, plus an optional fractional-order datum term of size
eps^mu, mu in (2, 3).  The harmonic part carries one closed-form second-order
radial correction H1 = -(7/16) r kappa kappa'; the corresponding longitudinal
correction is not needed because it cancels in the rescaled components (this
cancellation is exercised by tests through `eval_X_composed`).

Profile terms: for each harmonic index n >= 2 a profile Gamma_n(alpha) enters
through a_n = Gamma_n' - i n tau Gamma_n.  The datum term for n_b = 1 is
(v_r, v_theta) = (b cos(theta), -b sin(theta)/r); for n_b >= 2 the natural
extension b r^(n_b-1) cos(n_b theta), -b r^(n_b-2) sin(n_b theta) is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import metric_AB, tube_coordinates
from .errors import ConfigError
from .periodic import PeriodicFunction, PeriodicStack


@dataclass
class GammaEntry:
    n: int
    gamma: PeriodicFunction

    def __post_init__(self):
        if self.n < 2:
            raise ConfigError("profile index n must be >= 2")


class GammaSet:
    """Profiles Gamma_n(alpha); evaluates a_n = Gamma_n' - i n tau Gamma_n."""

    def __init__(self, entries):
        self.entries = list(entries)
        ns = [e.n for e in self.entries]
        if len(set(ns)) != len(ns):
            raise ConfigError("duplicate profile indices")
        self.ns = ns
        if self.entries:
            rows = []
            for e in self.entries:
                rows.append(e.gamma.samples)
                rows.append(e.gamma.derivative().samples)
            self._stack = PeriodicStack(np.vstack(rows), self.entries[0].gamma.period)
        else:
            self._stack = None

    def __len__(self):
        return len(self.entries)

    def a_values(self, alpha, tau):
        """[(n, a_n(alpha))] with a_n complex, vectorized over alpha."""
        if not self.entries:
            return []
        vals = self._stack(alpha)
        out = []
        for i, e in enumerate(self.entries):
            g, gp = vals[2 * i], vals[2 * i + 1]
            out.append((e.n, gp - 1j * e.n * tau * g, g))
        return out

    @classmethod
    def from_samples(cls, pairs, period):
        return cls([GammaEntry(n, PeriodicFunction(s, period)) for n, s in pairs])


@dataclass
class MelnikovDatum:
    """Fractional-order datum: profile b(alpha), angular index n_b, exponent mu."""
    b: PeriodicFunction
    n_b: int = 1
    mu: float = 2.5

    def __post_init__(self):
        if not (2.0 < self.mu < 3.0):
            raise ConfigError("mu must lie in (2, 3)")
        if self.n_b < 1:
            raise ConfigError("n_b must be >= 1")

    @property
    def beta(self):
        return min(self.mu - 2.0, 3.0 - self.mu)


@dataclass
class OrderFlags:
    first: bool = True
    second: bool = True
    mu: bool = True


@dataclass
class FieldConfiguration:
    geom: object
    eps: float
    gammas: GammaSet = field(default_factory=lambda: GammaSet([]))
    datum: MelnikovDatum = None
    orders: OrderFlags = field(default_factory=OrderFlags)

    def __post_init__(self):
        if self.eps < 0:
            raise ConfigError("eps must be nonnegative")


def _grad_psi_terms(gammas, alpha, r, theta, kappa, tau):
    """Profile contributions (u_r1, u_th1, u_r2, u_th2) and their (r, theta) partials."""
    z = np.zeros(np.broadcast(r, theta).shape)
    u = dict(r1=z.copy(), t1=z.copy(), r2=z.copy(), t2=z.copy(),
             r1_r=z.copy(), r1_t=z.copy(), t1_r=z.copy(), t1_t=z.copy(),
             r2_r=z.copy(), r2_t=z.copy(), t2_r=z.copy(), t2_t=z.copy())
    for n, a, _g in gammas.a_values(alpha, tau):
        zn = a * np.exp(1j * n * theta)
        wn = a * np.exp(1j * (n - 1) * theta)
        re_z, im_z = zn.real, zn.imag
        re_w, im_w = wn.real, wn.imag
        u["r1"] += 2 * re_z * r ** (n - 1)
        u["r1_r"] += 2 * re_z * (n - 1) * r ** (n - 2)
        u["r1_t"] += -2 * n * im_z * r ** (n - 1)
        u["t1"] += -2 * im_z * r ** (n - 2)
        u["t1_r"] += -2 * im_z * (n - 2) * r ** (n - 3)
        u["t1_t"] += -2 * n * re_z * r ** (n - 2)
        cn = kappa * (n + 1) / (4.0 * n)
        u["r2"] += 2 * re_w * cn * (r ** n - r ** (n - 2))
        u["r2_r"] += 2 * re_w * cn * (n * r ** (n - 1) - (n - 2) * r ** (n - 3))
        u["r2_t"] += -2 * (n - 1) * im_w * cn * (r ** n - r ** (n - 2))
        dn = kappa / (4.0 * n)
        poly = (n - 1) * r ** (n - 1) - (n + 1) * r ** (n - 3)
        poly_r = (n - 1) ** 2 * r ** (n - 2) - (n + 1) * (n - 3) * r ** (n - 4)
        u["t2"] += -2 * im_w * dn * poly
        u["t2_r"] += -2 * im_w * dn * poly_r
        u["t2_t"] += -2 * (n - 1) * re_w * dn * poly
    return u


def _mu_terms(datum, alpha, r, theta):
    """Datum components (v_r, v_theta) and their (r, theta) partials."""
    b = datum.b(alpha)
    n = datum.n_b
    c, s = np.cos(n * theta), np.sin(n * theta)
    v_r = b * r ** (n - 1) * c
    v_t = -b * r ** (n - 2) * s
    return dict(
        r=v_r, t=v_t,
        r_r=b * (n - 1) * r ** (n - 2) * c,
        r_t=-b * n * r ** (n - 1) * s,
        t_r=-b * (n - 2) * r ** (n - 3) * s,
        t_t=-b * n * r ** (n - 2) * c,
    )


class TruncatedFieldX:
    """The rescaled truncated field: X_alpha = 1, X_r and X_theta as series in eps."""

    def __init__(self, config: FieldConfiguration):
        self.config = config
        self.geom = config.geom
        self.eps = float(config.eps)

    # -- component evaluation ------------------------------------------------

    def order_components(self, alpha, r, theta):
        """Pieces (X_r1, X_r2, X_rmu, X_th1, X_th2, X_thmu) before eps-weighting."""
        g = self.geom.scalars(alpha)
        kappa, kps, tau = g["kappa"], g["kappa_s"], g["tau"]
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        ct, st = np.cos(theta), np.sin(theta)
        c2, s2 = np.cos(2 * theta), np.sin(2 * theta)
        S1 = tau * kappa * st + kps * ct
        C1 = -tau * kappa * ct + kps * st
        S2 = tau * kappa ** 2 * s2 + kappa * kps * c2
        C2 = -tau * kappa ** 2 * c2 + kappa * kps * s2

        u = _grad_psi_terms(self.config.gammas, alpha, r, theta, kappa, tau)
        H1 = -(7.0 / 16.0) * r * kappa * kps

        X_r1 = -(3.0 * r ** 2 - 3.0) / 8.0 * S1 + u["r1"]
        X_t1 = (r ** 2 - 3.0) / (8.0 * r) * C1 + u["t1"]
        X_r2 = (-(r ** 3 - r) / 6.0 * S2 + 3.0 * (r ** 3 - r) / 8.0 * kappa * kps
                + H1 - 2.0 * kappa * r * ct * u["r1"] + u["r2"])
        X_t2 = ((7.0 * r ** 2 - 8.0) / 48.0 * C2 - (3.0 - r ** 2) / 8.0 * tau * kappa ** 2
                - 2.0 * kappa * r * ct * u["t1"] + u["t2"])
        if self.config.datum is not None:
            v = _mu_terms(self.config.datum, alpha, r, theta)
            X_rmu, X_tmu = v["r"], v["t"]
        else:
            X_rmu = np.zeros_like(X_r1)
            X_tmu = np.zeros_like(X_t1)
        return dict(tau=tau, r1=X_r1, r2=X_r2, rmu=X_rmu,
                    t1=X_t1, t2=X_t2, tmu=X_tmu)

    def components(self, alpha, r, theta):
        """(X_r, X_theta) with the configured orders switched on."""
        eps = self.eps
        o = self.config.orders
        pieces = self.order_components(alpha, r, theta)
        mu = self.config.datum.mu if self.config.datum is not None else 2.5
        e1 = eps if o.first else 0.0
        e2 = eps ** 2 if o.second else 0.0
        emu = eps ** mu if (o.mu and self.config.datum is not None) else 0.0
        X_r = e1 * pieces["r1"] + e2 * pieces["r2"] + emu * pieces["rmu"]
        X_t = (-pieces["tau"] + e1 * pieces["t1"] + e2 * pieces["t2"]
               + emu * pieces["tmu"])
        return X_r, X_t

    def jacobian(self, alpha, r, theta):
        """Analytic partials d(X_r, X_theta)/d(r, theta)."""
        g = self.geom.scalars(alpha)
        kappa, kps, tau = g["kappa"], g["kappa_s"], g["tau"]
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        ct, st = np.cos(theta), np.sin(theta)
        c2, s2 = np.cos(2 * theta), np.sin(2 * theta)
        S1 = tau * kappa * st + kps * ct
        S1_t = tau * kappa * ct - kps * st
        C1 = -tau * kappa * ct + kps * st
        C1_t = tau * kappa * st + kps * ct
        S2 = tau * kappa ** 2 * s2 + kappa * kps * c2
        S2_t = 2.0 * (tau * kappa ** 2 * c2 - kappa * kps * s2)
        C2 = -tau * kappa ** 2 * c2 + kappa * kps * s2
        C2_t = 2.0 * (tau * kappa ** 2 * s2 + kappa * kps * c2)

        u = _grad_psi_terms(self.config.gammas, alpha, r, theta, kappa, tau)

        r1_r = -(6.0 * r / 8.0) * S1 + u["r1_r"]
        r1_t = -(3.0 * r ** 2 - 3.0) / 8.0 * S1_t + u["r1_t"]
        t1_r = (r ** 2 + 3.0) / (8.0 * r ** 2) * C1 + u["t1_r"]
        t1_t = (r ** 2 - 3.0) / (8.0 * r) * C1_t + u["t1_t"]

        r2_r = (-(3.0 * r ** 2 - 1.0) / 6.0 * S2
                + 3.0 * (3.0 * r ** 2 - 1.0) / 8.0 * kappa * kps
                - (7.0 / 16.0) * kappa * kps
                - 2.0 * kappa * ct * u["r1"] - 2.0 * kappa * r * ct * u["r1_r"]
                + u["r2_r"])
        r2_t = (-(r ** 3 - r) / 6.0 * S2_t
                + 2.0 * kappa * r * st * u["r1"] - 2.0 * kappa * r * ct * u["r1_t"]
                + u["r2_t"])
        t2_r = ((14.0 * r) / 48.0 * C2 + (2.0 * r / 8.0) * tau * kappa ** 2
                - 2.0 * kappa * ct * u["t1"] - 2.0 * kappa * r * ct * u["t1_r"]
                + u["t2_r"])
        t2_t = ((7.0 * r ** 2 - 8.0) / 48.0 * C2_t
                + 2.0 * kappa * r * st * u["t1"] - 2.0 * kappa * r * ct * u["t1_t"]
                + u["t2_t"])

        eps = self.eps
        o = self.config.orders
        e1 = eps if o.first else 0.0
        e2 = eps ** 2 if o.second else 0.0
        J = np.zeros((2, 2) + np.broadcast(r, theta).shape)
        J[0, 0] = e1 * r1_r + e2 * r2_r
        J[0, 1] = e1 * r1_t + e2 * r2_t
        J[1, 0] = e1 * t1_r + e2 * t2_r
        J[1, 1] = e1 * t1_t + e2 * t2_t
        if self.config.datum is not None and o.mu:
            v = _mu_terms(self.config.datum, alpha, r, theta)
            emu = eps ** self.config.datum.mu
            J[0, 0] += emu * v["r_r"]
            J[0, 1] += emu * v["r_t"]
            J[1, 0] += emu * v["t_r"]
            J[1, 1] += emu * v["t_t"]
        return J


# -- harmonic component series (with the H2 hook) ------------------------------


def eval_harmonic(geom, eps, alpha, r, theta, H2=None):
    """Components of the harmonic field through second order.

    H2 is an optional test hook (callable of (alpha, r)) standing in for the
    unknown zero-mean longitudinal second-order correction; it must drop out of
    the rescaled field, see `eval_X_composed`.
    """
    g = geom.scalars(alpha)
    kappa, kps, tau = g["kappa"], g["kappa_s"], g["tau"]
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    ct, st = np.cos(theta), np.sin(theta)
    c2, s2 = np.cos(2 * theta), np.sin(2 * theta)
    H1 = -(7.0 / 16.0) * r * kappa * kps
    H2v = H2(alpha, r) if H2 is not None else np.zeros_like(r * kappa)

    h_a1 = 2.0 * kappa * r * ct
    h_a2 = 3.0 * kappa ** 2 * r ** 2 * ct ** 2 + H2v
    h_r1 = -3.0 * (r ** 2 - 1.0) / 8.0 * (tau * kappa * st + kps * ct)
    h_r2 = (-13.0 * (r ** 3 - r) / 24.0 * (tau * kappa ** 2 * s2 + kappa * kps * c2)
            + H1)
    h_t1 = (-2.0 * tau * kappa * r * ct
            + (r ** 2 - 3.0) / (8.0 * r) * (-tau * kappa * ct + kps * st))
    h_t2 = (-3.0 * tau * kappa ** 2 * r ** 2 * ct ** 2
            + 13.0 * (r ** 2 - 2.0) / 48.0 * (-tau * kappa ** 2 * c2 + kappa * kps * s2)
            - tau * H2v)
    return dict(
        alpha=1.0 + eps * h_a1 + eps ** 2 * h_a2,
        r=eps * h_r1 + eps ** 2 * h_r2,
        theta=-tau + eps * h_t1 + eps ** 2 * h_t2,
        pieces=dict(a1=h_a1, a2=h_a2, r1=h_r1, r2=h_r2, t1=h_t1, t2=h_t2, tau=tau),
    )


def eval_X_composed(config, alpha, r, theta, H2=None):
    """X from the quotient v/v_alpha expanded through second order.

    Built from the harmonic component series (with the H2 hook) plus profile and
    datum terms; must agree with TruncatedFieldX.components for any bounded H2.
    """
    geom, eps = config.geom, config.eps
    h = eval_harmonic(geom, eps, alpha, r, theta, H2=H2)["pieces"]
    g = geom.scalars(alpha)
    kappa, tau = g["kappa"], g["tau"]
    u = _grad_psi_terms(config.gammas, alpha, r, theta, kappa, tau)
    vr1 = h["r1"] + u["r1"]
    vt1 = h["t1"] + u["t1"]
    X_r = (eps * vr1
           + eps ** 2 * (h["r2"] + u["r2"] - vr1 * h["a1"]))
    X_t = (-tau
           + eps * (vt1 + tau * h["a1"])
           + eps ** 2 * (h["t2"] + u["t2"] + tau * h["a2"]
                         - tau * h["a1"] ** 2 - vt1 * h["a1"]))
    if config.datum is not None and config.orders.mu:
        v = _mu_terms(config.datum, alpha, r, theta)
        emu = eps ** config.datum.mu
        X_r = X_r + emu * v["r"]
        X_t = X_t + emu * v["t"]
    return X_r, X_t


# -- ambient reconstruction and residual check ---------------------------------


def field_at_cartesian(config, x, alpha_seed):
    """Ambient Cartesian vector of the truncated field at a Cartesian point."""
    geom, eps = config.geom, config.eps
    alpha, r, theta = tube_coordinates(geom, eps, x, alpha_seed)
    g = geom.scalars(alpha)
    h = eval_harmonic(geom, eps, alpha, r, theta)
    u = _grad_psi_terms(config.gammas, alpha, r, theta, g["kappa"], g["tau"])
    v_a = h["alpha"]
    v_r = h["r"] + eps * u["r1"] + eps ** 2 * u["r2"]
    v_t = h["theta"] + eps * u["t1"] + eps ** 2 * u["t2"]
    if config.datum is not None and config.orders.mu:
        vmu = _mu_terms(config.datum, alpha, r, theta)
        emu = eps ** config.datum.mu
        v_r = v_r + emu * vmu["r"]
        v_t = v_t + emu * vmu["t"]
    gamma, tang, e1, e2 = geom.frame(alpha)
    tang, e1, e2 = tang.ravel(), e1.ravel(), e2.ravel()
    ct, st = np.cos(theta), np.sin(theta)
    B = 1.0 - eps * g["kappa"] * r * ct
    dxa = B * tang + eps * g["tau"] * r * (ct * e2 - st * e1)
    dxr = eps * (ct * e1 + st * e2)
    dxt = eps * r * (-st * e1 + ct * e2)
    return float(v_a) * dxa + float(v_r) * dxr + float(v_t) * dxt


def cartesian_field_check(config, alpha, r, theta, h_fd=1e-5):
    """(|div F|, |curl F|) of the reconstructed ambient field by central differences.

    The eigenvalue of the underlying field is O(eps^3) and is treated as zero,
    so |curl F| doubles as the Beltrami residual at this order.
    """
    geom, eps = config.geom, config.eps
    x0 = np.asarray(_embed(geom, eps, alpha, r, theta), dtype=float)
    grad = np.zeros((3, 3))
    for i in range(3):
        dx = np.zeros(3)
        dx[i] = h_fd
        fp = field_at_cartesian(config, x0 + dx, alpha)
        fm = field_at_cartesian(config, x0 - dx, alpha)
        grad[:, i] = (fp - fm) / (2.0 * h_fd)
    div = grad[0, 0] + grad[1, 1] + grad[2, 2]
    curl = np.array([grad[2, 1] - grad[1, 2],
                     grad[0, 2] - grad[2, 0],
                     grad[1, 0] - grad[0, 1]])
    return abs(div), float(np.linalg.norm(curl))


def _embed(geom, eps, alpha, r, theta):
    gamma, tang, e1, e2 = geom.frame(alpha)
    return (gamma.ravel() + eps * r * np.cos(theta) * e1.ravel()
            + eps * r * np.sin(theta) * e2.ravel())
