"""Curve geometry against symbolic oracles, plus resonance and bump utilities."""

import numpy as np
import pytest
import sympy as sp

from beltramilab import build_geometry, tune_total_torsion, twist_integrals
from beltramilab.curves import (CurveSpec, embed_tube_point, metric_AB,
                                rationalize_torsion, smooth_bump_pair,
                                torsion_sign_changes, tube_coordinates)
from beltramilab.errors import (BracketFailure, ConfigError, DegenerateSpeed,
                                NonPositiveB, NonPositiveCurvature)
from beltramilab.presets import coil_spec, torus_knot_spec


def sympy_frenet_oracle(R=2.0, h=1.0):
    """kappa, tau, kappa', tau' of the (2,3) torus knot as functions of t.

    Arc-length derivatives: d/ds = (1/|gamma'|) d/dt.
    """
    t = sp.symbols("t", real=True)
    gamma = sp.Matrix([(R + sp.cos(3 * t)) * sp.cos(2 * t),
                       (R + sp.cos(3 * t)) * sp.sin(2 * t),
                       h * sp.sin(3 * t)])
    d1 = gamma.diff(t)
    d2 = d1.diff(t)
    d3 = d2.diff(t)
    v = sp.sqrt(d1.dot(d1))
    cr = d1.cross(d2)
    crn2 = cr.dot(cr)
    kappa = sp.sqrt(crn2) / v ** 3
    tau = cr.dot(d3) / crn2
    kappa_s = kappa.diff(t) / v
    tau_s = tau.diff(t) / v
    return [sp.lambdify(t, expr, "numpy") for expr in (kappa, tau, kappa_s, tau_s)]


def test_frenet_against_symbolic_oracle(knot_geom):
    k_f, t_f, ks_f, ts_f = sympy_frenet_oracle()
    tvals = knot_geom.t_of_alpha
    for numeric, oracle in ((knot_geom.kappa, k_f), (knot_geom.tau, t_f),
                            (knot_geom.kappa_s, ks_f), (knot_geom.tau_s, ts_f)):
        exact = oracle(tvals)
        scale = np.abs(exact).max()
        assert np.abs(numeric - exact).max() < 1e-8 * scale


def test_frame_odes(knot_geom):
    """Frenet structure: t' = kappa e1, e1' = -kappa t + tau e2, e2' = -tau e1."""
    from beltramilab.periodic import spectral_derivative
    g = knot_geom

    def d(mat):
        return np.stack([spectral_derivative(mat[:, i], g.ell) for i in range(3)], 1)

    r1 = np.abs(d(g.tangent) - g.kappa[:, None] * g.e1).max()
    r2 = np.abs(d(g.e1) + g.kappa[:, None] * g.tangent
                - g.tau[:, None] * g.e2).max()
    r3 = np.abs(d(g.e2) + g.tau[:, None] * g.e1).max()
    assert max(r1, r2, r3) < 1e-7


def test_frame_orthonormal(knot_geom):
    g = knot_geom
    for a, b in ((g.tangent, g.tangent), (g.e1, g.e1), (g.e2, g.e2)):
        assert np.abs((a * b).sum(axis=1) - 1.0).max() < 1e-12
    for a, b in ((g.tangent, g.e1), (g.tangent, g.e2), (g.e1, g.e2)):
        assert np.abs((a * b).sum(axis=1)).max() < 1e-12


def test_arclength_parametrization(knot_geom):
    """|dgamma/ds| = 1 on the arc-length grid."""
    from beltramilab.periodic import spectral_derivative
    g = knot_geom
    d = np.stack([spectral_derivative(g.gamma[:, i], g.ell) for i in range(3)], 1)
    assert np.abs(np.linalg.norm(d, axis=1) - 1.0).max() < 1e-9


def test_total_torsion_definition(knot_geom):
    g = knot_geom
    assert abs(g.T0 + g.integrate(g.tau)) < 1e-10
    # T(0) = 0 and T(ell) = T0
    assert abs(g.T_of(0.0)) < 1e-12
    assert abs(g.T_of(g.ell) - g.T0) < 1e-10


def test_planar_circle_is_torsion_free():
    circ = CurveSpec(coeffs={"x": [[0, 0], [1.5, 0]],
                             "y": [[0, 0], [0, 1.5]],
                             "z": [[0, 0]]})
    geom = build_geometry(circ, grid_size=256)
    assert np.abs(geom.tau).max() < 1e-10
    assert abs(geom.T0) < 1e-12
    assert np.abs(geom.kappa - 1.0 / 1.5).max() < 1e-10
    assert abs(geom.ell - 2.0 * np.pi * 1.5) < 1e-10


def test_similarity_scaling():
    spec = torus_knot_spec()
    g1 = build_geometry(spec, grid_size=512)
    spec2 = CurveSpec(coeffs={c: spec.coeffs[c] * 2.0 for c in ("x", "y", "z")})
    g2 = build_geometry(spec2, grid_size=512)
    assert abs(g2.ell - 2.0 * g1.ell) < 1e-9
    assert np.abs(g2.kappa - 0.5 * g1.kappa).max() < 1e-9
    assert abs(g2.T0 - g1.T0) < 1e-9  # total torsion is scale invariant


def test_rationalize_torsion():
    rd = rationalize_torsion(2.0 * np.pi * 4.0 / 3.0 + 1e-12, q_max=10)
    assert (rd.p, rd.q) == (4, 3)
    assert rd.resonant
    rd2 = rationalize_torsion(2.0 * np.pi * 0.41421356, q_max=5)
    assert rd2.q <= 5 and not rd2.resonant


def test_tune_total_torsion_exact():
    h, geom = tune_total_torsion(lambda hh: coil_spec(2, 2.0, 1.2, hh), 1, 1,
                                 (3.0, 4.0), grid_size=512)
    assert abs(geom.T0 - 2.0 * np.pi) < 1e-11
    with pytest.raises(BracketFailure):
        tune_total_torsion(lambda hh: coil_spec(2, 2.0, 1.2, hh), 1, 1,
                           (3.9, 4.0), grid_size=256)


def test_smooth_bump_pair_support_and_derivative():
    f, fp = smooth_bump_pair(1.0, 3.0, flat=0.5)
    x = np.linspace(0.0, 4.0, 1601)
    vals = f(x)
    assert np.all(vals[x <= 1.0] == 0.0) and np.all(vals[x >= 3.0] == 0.0)
    assert np.abs(vals[(x > 1.5) & (x < 2.5)] - 1.0).max() < 1e-12
    h = 1e-6
    fd = (f(x + h) - f(x - h)) / (2 * h)
    assert np.abs(fd - fp(x)).max() < 1e-5


def test_degenerate_speed_raises():
    spec = CurveSpec(coeffs={"x": [[0, 0], [1, 0]], "y": [[0, 0]], "z": [[0, 0]]})
    with pytest.raises(DegenerateSpeed):
        build_geometry(spec, grid_size=128)


def test_nonpositive_curvature_raises():
    # a (1,1) coil with a/R large enough to pinch curvature through zero
    with pytest.raises(NonPositiveCurvature):
        build_geometry(coil_spec(4, 1.0, 0.9, 0.01), grid_size=512)


def test_missing_coordinate_raises():
    with pytest.raises(ConfigError):
        CurveSpec(coeffs={"x": [[0, 0]], "y": [[0, 0]]})


def test_tube_coordinates_roundtrip(knot_geom, rng):
    eps = 0.05
    for _ in range(10):
        alpha = float(rng.uniform(0, knot_geom.ell))
        r = float(rng.uniform(0.2, 0.9))
        th = float(rng.uniform(0, 2 * np.pi))
        x = embed_tube_point(knot_geom, eps, alpha, r, th).ravel()
        a2, r2, t2 = tube_coordinates(knot_geom, eps, x, alpha + 0.05)
        assert abs((a2 - alpha + knot_geom.ell / 2) % knot_geom.ell
                   - knot_geom.ell / 2) < 1e-9
        assert abs(r2 - r) < 1e-9
        assert abs((t2 - th + np.pi) % (2 * np.pi) - np.pi) < 1e-9


def test_metric_positivity_guard(knot_geom):
    kmax = knot_geom.kappa.max()
    eps_bad = 1.5 / kmax
    with pytest.raises(NonPositiveB):
        metric_AB(knot_geom, eps_bad, knot_geom.grid[:8], 1.0, 0.0)
    A, B = metric_AB(knot_geom, 0.05, knot_geom.grid[:8], 0.5, 0.3)
    assert np.all(B > 0) and np.all(A > 0)


def test_twist_integrals(knot_geom):
    C0, A = twist_integrals(knot_geom)
    assert abs(C0 - float(knot_geom.integrate(knot_geom.tau * knot_geom.kappa ** 2))) < 1e-14
    assert abs(A - C0 / 16.0) < 1e-14
    g3 = np.ones(knot_geom.grid_size)
    _, A2 = twist_integrals(knot_geom, gamma3_samples=g3)
    extra = float(knot_geom.integrate(knot_geom.tau * 48.0))
    assert abs(A2 - (C0 / 16.0 + extra)) < 1e-10


def test_torsion_sign_changes_counts(knot_geom):
    assert torsion_sign_changes(knot_geom) >= 2
