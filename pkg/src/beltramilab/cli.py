"""Experiment orchestration from declarative JSON configs.

Subcommands map one-to-one onto the lab's pipelines:

    curve     geometry report for a curve fixture
    design    profile construction + admissibility report + resonant design
    poincare  numeric sections vs analytic maps, order-of-accuracy fits
    melnikov  subharmonic Melnikov profiles and their zeros
    orbits    periodic-orbit refinement and eigenvalue classification
    kam       invariant-circle scan fractions
    verify    cross-module invariant battery
    torus3    curl-eigenfield residuals on the 3-torus

Every run is deterministic given the config and seed: outputs are JSON (sorted
keys) and CSV with documented headers, and parallel sweeps reduce in input
order regardless of worker count.  Exit codes: 0 success, 2 bad config,
3 numerical failure, 4 acceptance-grade check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import presets
from .analytic import omega_hat, poincare_polar
from .curves import CurveSpec, build_geometry, twist_integrals
from .dynamics import find_orbits, kam_scan, melnikov
from .errors import BeltramiLabError, ConfigError, NumericalError
from .fieldseries import FieldConfiguration, GammaSet, OrderFlags, TruncatedFieldX
from .flow import IntegratorConfig, measure_check, poincare_map
from .gammadesign import verify_admissibility
from .torus3 import CurlEigenfield

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_ACCEPTANCE = 4


# -- config plumbing ---------------------------------------------------------


def load_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _eps_list(cfg, default=(0.08, 0.04, 0.02, 0.01)):
    eps = cfg.get("eps_list", list(default))
    if (not isinstance(eps, list) or len(eps) == 0
            or any(not isinstance(e, (int, float)) or e <= 0 for e in eps)):
        raise ConfigError("eps_list must be a nonempty list of positive numbers")
    if len(eps) >= 2 and any(b >= a for a, b in zip(eps, eps[1:])):
        raise ConfigError("eps_list must be strictly decreasing")
    return [float(e) for e in eps]


def resolve_geometry(cfg):
    """Geometry from the config's `curve` block (preset or explicit coefficients)."""
    block = cfg.get("curve", {"preset": "standard"})
    if not isinstance(block, dict):
        raise ConfigError("curve block must be an object")
    grid = int(block.get("grid_size", 1024))
    if grid < 64:
        raise ConfigError("grid_size must be >= 64")
    preset = block.get("preset")
    if preset is not None:
        p = int(block.get("p", 1))
        q = int(block.get("q", 1))
        if preset == "standard":
            scale = float(block.get("scale", presets.STANDARD_SCALE))
            _, geom = presets.resonant_coil(p, q, grid_size=grid, scale=scale)
        elif preset == "coil":
            scale = float(block.get("scale", 1.0))
            try:
                _, geom = presets.resonant_coil(p, q, grid_size=grid, scale=scale)
            except KeyError as exc:
                raise ConfigError(f"no tuned coil bracket for (p, q) = ({p}, {q})") from exc
        elif preset == "torus-knot":
            geom = build_geometry(presets.torus_knot_spec(), grid_size=grid)
        elif preset == "orbit":
            geom = build_geometry(presets.orbit_coil_spec(), grid_size=grid)
        else:
            raise ConfigError(f"unknown curve preset {preset!r}")
        return geom, p, q
    if "coeffs" not in block:
        raise ConfigError("curve block needs either `preset` or `coeffs`")
    spec = CurveSpec.from_dict(block["coeffs"])
    return build_geometry(spec, grid_size=grid), int(block.get("p", 1)), int(block.get("q", 1))


def resolve_design(cfg, geom, p, q):
    """(design, gammas, datum) from the config's `design` block or the preset."""
    block = cfg.get("design", {"preset": "standard"})
    if block.get("preset") == "standard":
        scale = float(cfg.get("curve", {}).get("scale", presets.STANDARD_SCALE))
        grid = int(cfg.get("curve", {}).get("grid_size", 1024))
        _geom, design, gammas, datum = presets.standard_design(p, q, grid_size=grid,
                                                               scale=scale)
        return design, gammas, datum
    if block.get("preset") == "orbit":
        grid = int(cfg.get("curve", {}).get("grid_size", 2048))
        _geom, design, gammas, datum = presets.orbit_design(grid_size=grid)
        return design, gammas, datum
    from .gammadesign import (GammaPlan, choose_melnikov_b, construct_gammas,
                              design_resonant_tori)
    try:
        actions = [float(a) for a in block["actions"]]
        modes = [int(n) for n in block["modes"]]
        supports = {int(k): tuple(v) for k, v in block["supports"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"design block needs actions/modes/supports: {exc}") from exc
    design = design_resonant_tori(geom, actions, p, q, ns=modes)
    plans = [GammaPlan(n=n, support=supports[n], moment=design.moments[n])
             for n in modes]
    gammas = construct_gammas(geom, plans, p, q, seed=int(block.get("seed", 0)))
    datum = choose_melnikov_b(geom, p, q, mu=float(cfg.get("mu", 2.5)))
    return design, gammas, datum


def integrator_from(cfg):
    block = cfg.get("integrator", {})
    return IntegratorConfig(
        rtol=float(block.get("rtol", 1e-12)),
        atol=float(block.get("atol", 1e-14)),
        method=str(block.get("method", "DOP853")),
        r_min=float(block.get("r_min", 0.02)),
        r_max=float(block.get("r_max", 0.98)),
    )


def make_field(geom, eps, gammas=None, datum=None, mu_on=True):
    return TruncatedFieldX(FieldConfiguration(
        geom=geom, eps=eps,
        gammas=gammas if gammas is not None else GammaSet([]),
        datum=datum,
        orders=OrderFlags(mu=mu_on)))


# -- output plumbing ---------------------------------------------------------


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def write_json(out_dir, name, payload):
    payload = dict(payload)
    payload["schema_version"] = SCHEMA_VERSION
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return path


def write_csv(out_dir, name, header, rows):
    """CSV with a documented header comment line; floats in repr (round-trip) form."""
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write("# " + ", ".join(header) + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) if isinstance(v, (float, np.floating))
                              else str(v) for v in row) + "\n")
    return path


def fit_slope(eps_values, residuals):
    """Least-squares slope of log(residual) against log(eps)."""
    x = np.log(np.asarray(eps_values, dtype=float))
    y = np.log(np.maximum(np.asarray(residuals, dtype=float), 1e-300))
    return float(np.polyfit(x, y, 1)[0])


def slope_report(name, eps_values, residuals, target, tol):
    if len(eps_values) < 3:
        raise ConfigError("slope fits need at least 3 eps points")
    slope = fit_slope(eps_values, residuals)
    return {
        "name": name,
        "pairs": [[float(e), float(r)] for e, r in zip(eps_values, residuals)],
        "slope": slope,
        "target": float(target),
        "tolerance": float(tol),
        "passed": bool(abs(slope - target) <= tol),
    }


def _pmap(fn, items, threads):
    """Order-preserving parallel map (determinism regardless of worker count)."""
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- subcommands -------------------------------------------------------------


def cmd_curve(cfg, out, threads, seed):
    geom, p, q = resolve_geometry(cfg)
    C0, twist = twist_integrals(geom)
    report = {
        "ell": geom.ell,
        "p": p, "q": q,
        "total_torsion": geom.T0,
        "resonance_defect": float(geom.T0 - 2.0 * np.pi * p / q),
        "kappa_range": [float(geom.kappa.min()), float(geom.kappa.max())],
        "tau_range": [float(geom.tau.min()), float(geom.tau.max())],
        "C0": C0,
        "profile_free_twist": twist,
        "grid_size": geom.grid_size,
    }
    write_json(out, "curve.json", report)
    write_csv(out, "curve_profiles.csv",
              ["s", "kappa", "tau"],
              zip(geom.grid, geom.kappa, geom.tau))
    return EXIT_OK


def cmd_design(cfg, out, threads, seed):
    geom, p, q = resolve_geometry(cfg)
    design, gammas, datum = resolve_design(cfg, geom, p, q)
    report_s = verify_admissibility(geom, gammas, p, q)
    eps_probe = _eps_list(cfg, default=(0.05,))[0]
    omega_res = max(abs(float(omega_hat(geom, eps_probe, I, p, q, design.moments))
                        - 2.0 * np.pi * p) for I in design.I_points)
    payload = {
        "actions": design.I_points,
        "moments": {str(k): v for k, v in design.moments.items()},
        "C0": design.C0,
        "twist_values": design.twist_values,
        "admissibility_max_residual": report_s.max_residual,
        "omega_hat_max_defect": omega_res,
        "moment_residuals": {str(n): abs(report_s.moments[n] - design.moments[n])
                             for n in design.moments},
    }
    write_json(out, "design.json", payload)
    rows = []
    for e in gammas.entries:
        g = e.gamma.samples
        rows.append([e.n, float(np.abs(g).max()), float(report_s.moments[e.n])])
    write_csv(out, "design_profiles.csv", ["n", "max_abs_gamma", "moment"], rows)
    ok = (report_s.max_residual < float(cfg.get("admissibility_tol", 1e-9))
          and omega_res < float(cfg.get("resonance_tol", 1e-12)))
    return EXIT_OK if ok else EXIT_ACCEPTANCE


def cmd_poincare(cfg, out, threads, seed):
    geom, p, q = resolve_geometry(cfg)
    design, gammas, datum = (None, None, None)
    if cfg.get("design") is not None:
        design, gammas, datum = resolve_design(cfg, geom, p, q)
    eps_values = _eps_list(cfg)
    icfg = integrator_from(cfg)
    rng = np.random.default_rng(seed)
    m = int(cfg.get("n_points", 16))
    r0 = rng.uniform(0.3, 0.8, m)
    th0 = rng.uniform(0.0, 2.0 * np.pi, m)
    pts = np.column_stack([r0, th0])

    def residual_at(args):
        eps, mu_on = args
        field = make_field(geom, eps, gammas=gammas,
                           datum=datum if mu_on else None, mu_on=mu_on)
        ends, _ = poincare_map(field, pts, config=icfg)
        ra, ta = poincare_polar(geom, eps, r0, th0,
                                datum=datum if mu_on else None)
        dr = np.abs(ends[:, 0] - ra)
        dt = np.abs(np.angle(np.exp(1j * (ends[:, 1] - ta))))
        return float(max(dr.max(), dt.max()))

    res_off = _pmap(residual_at, [(e, False) for e in eps_values], threads)
    reports = [slope_report("numeric-vs-analytic-mu-off", eps_values, res_off, 3.0, 0.3)]
    if datum is not None:
        res_on = _pmap(residual_at, [(e, True) for e in eps_values], threads)
        reports.append(slope_report("numeric-vs-analytic-mu-on", eps_values,
                                    res_on, 3.0, 0.3))
    write_json(out, "poincare.json", {"slope_reports": reports})
    rows = [[rep["name"], e, r] for rep in reports for e, r in rep["pairs"]]
    write_csv(out, "poincare_residuals.csv", ["report", "eps", "max_residual"], rows)
    return EXIT_OK if all(r["passed"] for r in reports) else EXIT_ACCEPTANCE


def cmd_melnikov(cfg, out, threads, seed):
    geom, p, q = resolve_geometry(cfg)
    design, gammas, datum = resolve_design(cfg, geom, p, q)
    profiles = _pmap(lambda I: melnikov(geom, datum, I, p, q),
                     design.I_points, threads)
    payload = {"profiles": []}
    parity_ok = True
    for prof in profiles:
        pos = sum(1 for sl in prof.slopes if sl > 0)
        neg = sum(1 for sl in prof.slopes if sl < 0)
        parity_ok = parity_ok and (pos == neg)
        payload["profiles"].append({
            "I": prof.I_k, "amplitude": prof.amplitude, "n_b": prof.n_b,
            "zeros": prof.zeros, "slopes": prof.slopes,
            "parity": [pos, neg],
        })
    write_json(out, "melnikov.json", payload)
    rows = [[prof.I_k, z, sl] for prof in profiles
            for z, sl in zip(prof.zeros, prof.slopes)]
    write_csv(out, "melnikov_zeros.csv", ["I", "phi_zero", "M_prime"], rows)
    return EXIT_OK if parity_ok else EXIT_ACCEPTANCE


def cmd_orbits(cfg, out, threads, seed):
    geom, p, q = resolve_geometry(cfg)
    design, gammas, datum = resolve_design(cfg, geom, p, q)
    eps = float(cfg.get("eps", _eps_list(cfg, default=(0.05,))[0]))
    icfg = integrator_from(cfg)
    field = make_field(geom, eps, gammas=gammas, datum=datum)
    profiles = [melnikov(geom, datum, I, p, q) for I in design.I_points]
    batches = _pmap(lambda prof: find_orbits(field, prof, design, config=icfg),
                    profiles, threads)
    records = [rec for batch in batches for rec in batch]
    payload = {"eps": eps, "orbits": []}
    n_h = n_e = 0
    residual_tol = float(cfg.get("orbit_residual_tol", 1e-10))
    ok = True
    for rec in records:
        n_h += rec.kind == "hyperbolic"
        n_e += rec.kind == "elliptic"
        ok = ok and rec.residual < residual_tol
        lam = rec.eigenvalues
        payload["orbits"].append({
            "I": rec.I_k, "phi_seed": rec.phi_seed,
            "point": list(rec.point), "residual": rec.residual,
            "kind": rec.kind,
            "eigenvalues": [[float(l.real), float(l.imag)] for l in lam],
            "det": rec.det,
            "measured_dev": rec.measured,
            "predicted_dev": abs(rec.predicted),
            "theta_winding": rec.theta_winding,
            "windings": list(rec.windings),
        })
    expect = cfg.get("expect_counts")
    if expect is not None:
        ok = ok and n_h == int(expect[0]) and n_e == int(expect[1])
    payload["counts"] = {"hyperbolic": n_h, "elliptic": n_e}
    write_json(out, "orbits.json", payload)
    write_csv(out, "orbits.csv",
              ["I", "kind", "residual", "measured_dev", "predicted_dev"],
              [[o["I"], o["kind"], o["residual"], o["measured_dev"],
                o["predicted_dev"]] for o in payload["orbits"]])
    return EXIT_OK if ok else EXIT_ACCEPTANCE


def cmd_kam(cfg, out, threads, seed):
    geom, p, q = resolve_geometry(cfg)
    design, gammas, datum = resolve_design(cfg, geom, p, q)
    block = cfg.get("kam", {})
    I_values = np.linspace(float(block.get("I_min", 0.1)),
                           float(block.get("I_max", 0.4)),
                           int(block.get("count", 50)))
    count = int(block.get("iterations", 512))
    icfg = integrator_from(cfg)
    eps_values = _eps_list(cfg, default=(0.02, 0.01))

    def scan_at(eps):
        field = make_field(geom, eps, gammas=gammas, datum=None, mu_on=False)
        return kam_scan(field, I_values, p, q, count=count, config=icfg)

    scans = _pmap(scan_at, eps_values, threads)
    payload = {"scans": [{
        "eps": sc.eps,
        "fraction_invariant": sc.fraction_invariant,
        "points": [{"I": pt.I, "rotation": pt.rotation,
                    "diagnostic": pt.diagnostic, "kind": pt.kind}
                   for pt in sc.points],
    } for sc in scans]}
    write_json(out, "kam.json", payload)
    write_csv(out, "kam_scan.csv", ["eps", "I", "rotation", "diagnostic", "kind"],
              [[sc.eps, pt.I, pt.rotation, pt.diagnostic, pt.kind]
               for sc in scans for pt in sc.points])
    need = cfg.get("require_fraction")
    if need is not None and any(sc.fraction_invariant < float(need) for sc in scans):
        return EXIT_ACCEPTANCE
    return EXIT_OK


def cmd_torus3(cfg, out, threads, seed):
    block = cfg.get("torus3", {})
    J_list = [int(j) for j in block.get("J_list", [1, 3, 5])]
    n_grid = int(block.get("n_grid", 32))

    def residuals(J):
        U = CurlEigenfield.standard(J)
        return {
            "J": J,
            "analytic_residual": U.analytic_residual(),
            "fd_residual": U.fd_curl_residual(n_grid=n_grid),
            "divergence": U.divergence_fd(),
        }

    reports = _pmap(residuals, J_list, threads)
    write_json(out, "torus3.json", {"fields": reports})
    write_csv(out, "torus3.csv", ["J", "analytic_residual", "fd_residual", "divergence"],
              [[r["J"], r["analytic_residual"], r["fd_residual"], r["divergence"]]
               for r in reports])
    ok = all(r["analytic_residual"] < 1e-12 and r["fd_residual"] < 1e-8
             for r in reports)
    return EXIT_OK if ok else EXIT_ACCEPTANCE


def cmd_verify(cfg, out, threads, seed):
    """Cross-module invariant battery on the configured fixture."""
    from .fieldseries import eval_X_composed
    geom, p, q = resolve_geometry(cfg)
    has_design = bool(cfg.get("design", {"preset": "standard"}))
    rng = np.random.default_rng(seed)
    checks = []

    def add(name, value, tol):
        checks.append({"name": name, "value": float(value), "tolerance": float(tol),
                       "passed": bool(value < tol)})

    # frame orthonormality and Frenet consistency on the grid
    tang = geom.tangent
    add("frame-unit-tangent", np.abs((tang ** 2).sum(axis=1) - 1.0).max(), 1e-10)
    add("frame-orthogonality",
        max(np.abs((geom.e1 * geom.e2).sum(axis=1)).max(),
            np.abs((tang * geom.e1).sum(axis=1)).max(),
            np.abs((tang * geom.e2).sum(axis=1)).max()), 1e-10)

    # composed-quotient identity with a random bounded longitudinal hook
    gammas, datum, design = None, None, None
    if has_design:
        design, gammas, datum = resolve_design(cfg, geom, p, q)
    eps = float(cfg.get("eps", 0.05))
    field = make_field(geom, eps, gammas=gammas, datum=datum)
    alpha = rng.uniform(0.0, geom.ell, 32)
    r = rng.uniform(0.2, 0.9, 32)
    th = rng.uniform(0.0, 2.0 * np.pi, 32)
    c = rng.standard_normal(3)

    def H2(a, rr):
        return c[0] * np.sin(2.0 * np.pi * a / geom.ell) * (c[1] + c[2] * rr ** 2)

    dev = 0.0
    for a_i, r_i, t_i in zip(alpha, r, th):
        Xr0, Xt0 = field.components(a_i, r_i, t_i)
        Xr1, Xt1 = eval_X_composed(field.config, a_i, r_i, t_i, H2=H2)
        dev = max(dev, abs(float(Xr0 - Xr1)), abs(float(Xt0 - Xt1)))
    add("composed-field-agreement", dev, 1e-12)

    # measure preservation of the harmonic-only section map
    icfg = integrator_from(cfg)
    bare = make_field(geom, 0.05, gammas=None, datum=None, mu_on=False)
    pts = np.column_stack([rng.uniform(0.3, 0.8, 8),
                           rng.uniform(0.0, 2.0 * np.pi, 8)])
    add("measure-preservation",
        np.abs(measure_check(bare, pts, config=icfg)).max(), 1e-6)

    if has_design:
        rep = verify_admissibility(geom, gammas, p, q)
        add("admissibility", rep.max_residual, 1e-9)
        omega_res = max(abs(float(omega_hat(geom, eps, I, p, q, design.moments))
                            - 2.0 * np.pi * p) for I in design.I_points)
        add("resonant-design", omega_res, 1e-12)
        prof = melnikov(geom, datum, design.I_points[0], p, q)
        pos = sum(1 for s in prof.slopes if s > 0)
        neg = sum(1 for s in prof.slopes if s < 0)
        add("melnikov-parity", abs(pos - neg), 0.5)

    # torus-3 algebraic identities
    U = CurlEigenfield.standard(1)
    add("torus3-analytic", U.analytic_residual(), 1e-12)
    add("torus3-divergence", U.divergence_fd(), 1e-8)

    write_json(out, "verify.json", {"checks": checks})
    return EXIT_OK if all(ch["passed"] for ch in checks) else EXIT_ACCEPTANCE


COMMANDS = {
    "curve": cmd_curve,
    "design": cmd_design,
    "poincare": cmd_poincare,
    "melnikov": cmd_melnikov,
    "orbits": cmd_orbits,
    "kam": cmd_kam,
    "verify": cmd_verify,
    "torus3": cmd_torus3,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="beltramilab",
        description="Thin-tube Beltrami field laboratory: experiment runner.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sp = sub.add_parser(name, help=fn.__doc__)
        sp.add_argument("--config", required=True, help="JSON experiment config")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--threads", type=int, default=1,
                        help="worker threads for independent tasks")
        sp.add_argument("--seed", type=int, default=0,
                        help="RNG seed for random-probe checks")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        code = COMMANDS[args.command](cfg, args.out, max(1, args.threads),
                                      args.seed & (2 ** 64 - 1))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BeltramiLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if code == EXIT_ACCEPTANCE:
        print("acceptance-grade check failed; see output artifacts",
              file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
