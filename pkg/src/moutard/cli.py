"""Command-line front end.

Five subcommands over the library:

    eigen      evaluate the closed-form eigenfunction at given points
    verify     run the full verification suite for one generator and lambda
    scatter    sample the eigenfunction on a circle and fit scattering data
    evolve     sample root trajectories of the polynomial flow
    potential  emit the delta potential at one flow time

Conventions: complex values are written ``re+imi`` (e.g. ``1.5-2i``) or
``re,im``; lists are separated by semicolons or whitespace.  Reports are JSON
(default) or CSV, on stdout or ``--out``.  Exit status is 0 on success, 1
when a numerical operation fails (a structured JSON error record goes to
stderr), and 2 for configuration errors.  Output is deterministic:
byte-identical for identical configurations.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import re
import sys
from dataclasses import dataclass, field

from . import cpoly, flow, scattering, transform
from .errors import IoFailure, MoutardError

VERIFY_THRESHOLDS = {
    "identity_residual": 1e-12,
    "moutard_residual": 1e-6,
    "gauge_change": 1e-10,
    "harmonicity": 1e-5,
    "scattering_rel_a": 1e-3,
    "scattering_abs_b": 1e-8,
    "flow_residual": 1e-6,
}

GAUGE_SHIFTS = (1.0, 1e3)


class ConfigError(ValueError):
    """Bad command-line configuration (exit status 2)."""


def parse_complex(text: str) -> complex:
    """``re+imi`` (``1+2i``, ``-3i``, ``2``) or ``re,im`` (``1,2``)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ConfigError("empty complex literal")
    try:
        if "," in s:
            re_s, _, im_s = s.partition(",")
            value = complex(float(re_s or "0"), float(im_s or "0"))
        else:
            value = complex(s.replace("I", "i").replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse complex number from {text!r}") from None
    if not cmath.isfinite(value):
        raise ConfigError(f"complex literal {text!r} is not finite")
    return value


def parse_complex_list(text: str) -> list[complex]:
    """Semicolon- or whitespace-separated complex literals; '' is the empty list."""
    parts = [p for p in re.split(r"[;\s]+", text.strip()) if p]
    return [parse_complex(p) for p in parts]


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: one command plus everything it needs."""

    command: str
    poly: cpoly.ComplexPoly
    lam: complex | None = None
    z_points: tuple[complex, ...] = ()
    t0: float = 0.0
    t1: float = 1.0
    steps: int = 100
    radius: float | None = None
    samples: int = scattering.DEFAULT_SAMPLE_COUNT
    tol: float = 1e-3
    fmt: str = "json"
    out: str | None = None
    flow_sign: int = 1


def _build_poly(ns: argparse.Namespace) -> cpoly.ComplexPoly:
    roots_given = ns.roots is not None
    coeffs_given = getattr(ns, "coeffs", None) is not None
    if roots_given == coeffs_given:
        raise ConfigError("provide exactly one of --roots or --coeffs")
    try:
        if roots_given:
            return cpoly.from_roots(parse_complex_list(ns.roots))
        return cpoly.ComplexPoly.from_coefficients(parse_complex_list(ns.coeffs))
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _config_from(ns: argparse.Namespace) -> RunConfig:
    poly = _build_poly(ns)
    lam = parse_complex(ns.lam) if getattr(ns, "lam", None) is not None else None
    if ns.command in ("eigen", "verify", "scatter"):
        if lam is None or lam == 0:
            raise ConfigError(f"{ns.command} requires a nonzero --lambda")
    z_points = tuple(parse_complex_list(ns.z)) if getattr(ns, "z", None) is not None else ()
    if ns.command == "eigen" and not z_points:
        raise ConfigError("eigen requires at least one point in --z")
    steps = int(getattr(ns, "steps", 100))
    if ns.command == "evolve":
        if not getattr(ns, "t1", 1.0) > getattr(ns, "t0", 0.0):
            raise ConfigError("evolve requires --t0 < --t1")
        if steps < 1:
            raise ConfigError("--steps must be >= 1")
        if poly.degree < 1:
            raise ConfigError("evolve requires a polynomial of degree >= 1")
    samples = int(getattr(ns, "samples", scattering.DEFAULT_SAMPLE_COUNT))
    if getattr(ns, "samples", None) is not None and samples < 8:
        raise ConfigError("--samples must be >= 8")
    radius = getattr(ns, "radius", None)
    if radius is not None and not radius > 0:
        raise ConfigError("--radius must be positive")
    tol = float(getattr(ns, "tol", 1e-3))
    if not tol > 0:
        raise ConfigError("--tol must be positive")
    return RunConfig(
        command=ns.command,
        poly=poly,
        lam=lam,
        z_points=z_points,
        t0=float(getattr(ns, "t0", 0.0)),
        t1=float(getattr(ns, "t1", 1.0)),
        steps=steps,
        radius=radius,
        samples=samples,
        tol=tol,
        fmt=ns.format,
        out=ns.out,
        flow_sign=int(getattr(ns, "flow_sign", 1)),
    )


def _c(z: complex) -> dict[str, float]:
    return {"re": z.real, "im": z.imag}


def _emit_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv_rows(header: list[str], rows: list[list[object]], comments: list[str] = ()) -> str:
    lines = [",".join(header)]
    lines += [",".join(repr(v) if isinstance(v, float) else str(v) for v in row) for row in rows]
    lines += list(comments)
    return "\n".join(lines) + "\n"


def _cmd_eigen(cfg: RunConfig) -> str:
    fp = transform.FaddeevParams(cfg.poly, cfg.lam)
    evaluated = []
    for z in cfg.z_points:
        mu = fp.mu(z)
        evaluated.append((z, mu, cmath.exp(fp.lam * z) * (1.0 + mu)))
    if cfg.fmt == "csv":
        return _csv_rows(
            ["re_z", "im_z", "re_mu", "im_mu", "re_psi", "im_psi"],
            [[z.real, z.imag, mu.real, mu.imag, psi.real, psi.imag] for z, mu, psi in evaluated],
        )
    return _emit_json(
        {
            "lambda": _c(cfg.lam),
            "degree": cfg.poly.degree,
            "points": [{"z": _c(z), "mu": _c(mu), "psi": _c(psi)} for z, mu, psi in evaluated],
        }
    )


def _cmd_scatter(cfg: RunConfig) -> str:
    fp = transform.FaddeevParams(cfg.poly, cfg.lam)
    pairs = scattering.sample_mu(fp, radius=cfg.radius, count=cfg.samples)
    est = scattering.fit_scattering(pairs, cfg.lam)
    n = scattering.count_deltas(est.a, cfg.lam)
    payload = {
        "a": _c(est.a),
        "b": _c(est.b),
        "abs_b": abs(est.b),
        "expected_a": _c(scattering.expected_a(cfg.poly.degree, cfg.lam)),
        "fit_residual": est.fit_residual,
        "radius": est.radius,
        "samples": est.samples,
        "recovered_count": n,
        "degree": cfg.poly.degree,
    }
    if cfg.fmt == "csv":
        return _csv_rows(
            ["re_a", "im_a", "re_b", "im_b", "fit_residual", "radius", "samples", "recovered_count"],
            [[est.a.real, est.a.imag, est.b.real, est.b.imag, est.fit_residual, est.radius, est.samples, n]],
        )
    return _emit_json(payload)


def _cmd_verify(cfg: RunConfig) -> str:
    fp = transform.FaddeevParams(cfg.poly, cfg.lam)
    stencil = transform.VERIFY_STENCIL
    results: dict[str, float] = {}

    results["identity_residual"] = transform.verify_eigenfunction_identity(fp)

    omega = cfg.poly.evaluate
    lam = fp.lam
    phi = lambda w: 1j * cmath.exp(lam * w)
    theta = fp.psi
    points = transform.residual_sample_points(fp.roots, lam)
    worst_res = worst_gauge = worst_harm = 0.0
    for z in points:
        scale = math.exp((lam * z).real)
        r1, r2 = transform.moutard_residual(omega, phi, theta, z, stencil)
        worst_res = max(worst_res, abs(r1) / scale, abs(r2) / scale)
        for c in GAUGE_SHIFTS:
            shifted = transform.gauge_shift(theta, c, omega)
            s1, s2 = transform.moutard_residual(omega, phi, shifted, z, stencil)
            worst_gauge = max(worst_gauge, abs(s1 - r1) / scale, abs(s2 - r2) / scale)
        worst_harm = max(worst_harm, transform.harmonicity_check(fp, z, stencil))
    results["moutard_residual"] = worst_res
    results["gauge_change"] = worst_gauge
    results["harmonicity"] = worst_harm

    pairs = scattering.sample_mu(fp, radius=cfg.radius, count=cfg.samples)
    est = scattering.fit_scattering(pairs, lam)
    expected = scattering.expected_a(cfg.poly.degree, lam)
    rel_a = abs(est.a - expected) / abs(expected) if expected != 0 else abs(est.a)
    results["scattering_rel_a"] = rel_a
    results["scattering_abs_b"] = abs(est.b)

    results["flow_residual"] = flow.verify_flow(cfg.poly, 0.3, 1e-4, cfg.flow_sign)

    checks = {name: results[name] < bound for name, bound in VERIFY_THRESHOLDS.items()}
    recovered = scattering.count_deltas(est.a, lam)
    checks["count_recovered"] = recovered == cfg.poly.degree

    payload = {
        "lambda": _c(lam),
        "degree": cfg.poly.degree,
        "roots": [_c(r) for r in fp.roots],
        "sample_points": len(points),
        "results": results,
        "scattering": {
            "a": _c(est.a),
            "expected_a": _c(expected),
            "b": _c(est.b),
            "fit_residual": est.fit_residual,
            "radius": est.radius,
            "samples": est.samples,
            "recovered_count": recovered,
        },
        "thresholds": dict(VERIFY_THRESHOLDS),
        "checks": checks,
        "all_passed": all(checks.values()),
    }
    if cfg.fmt == "csv":
        rows = [
            [name, results[name], VERIFY_THRESHOLDS[name], checks[name]]
            for name in sorted(VERIFY_THRESHOLDS)
        ]
        rows.append(["count_recovered", float(recovered), float(cfg.poly.degree), checks["count_recovered"]])
        return _csv_rows(["check", "value", "threshold", "passed"], rows)
    return _emit_json(payload)


def export_trajectory(rt: flow.RootTrajectory, fmt: str) -> str:
    """Serialize a trajectory: CSV with #event comment lines, or JSON."""
    if not rt.times:
        raise ValueError("cannot export an empty trajectory")
    if fmt == "csv":
        header = ["t"]
        for i in range(len(rt.paths)):
            header += [f"re_root_{i + 1}", f"im_root_{i + 1}"]
        rows = []
        for k, t in enumerate(rt.times):
            row: list[object] = [t]
            for path in rt.paths:
                row += [path[k].real, path[k].imag]
            rows.append(row)
        comments = [
            "#event t_approx={!r} roots={} min_separation={!r}".format(
                ev.t_approx, ";".join(str(i) for i in ev.roots_involved), ev.min_separation
            )
            for ev in rt.events
        ]
        return _csv_rows(header, rows, comments)
    return _emit_json(
        {
            "times": list(rt.times),
            "paths": [[_c(z) for z in path] for path in rt.paths],
            "events": [
                {
                    "t_approx": ev.t_approx,
                    "roots_involved": list(ev.roots_involved),
                    "min_separation": ev.min_separation,
                }
                for ev in rt.events
            ],
        }
    )


def _cmd_evolve(cfg: RunConfig) -> str:
    rt = flow.trajectory(cfg.poly, cfg.t0, cfg.t1, cfg.steps, cfg.tol, cfg.flow_sign)
    return export_trajectory(rt, cfg.fmt)


def _cmd_potential(cfg: RunConfig) -> str:
    pot = flow.potential_at(cfg.poly, cfg.t0, cfg.flow_sign)
    if cfg.fmt == "csv":
        return _csv_rows(
            ["re_center", "im_center", "weight"],
            [[c.real, c.imag, pot.weight] for c in pot.centers],
        )
    return _emit_json(
        {"t": cfg.t0, "weight": pot.weight, "centers": [_c(c) for c in pot.centers]}
    )


_COMMANDS = {
    "eigen": _cmd_eigen,
    "verify": _cmd_verify,
    "scatter": _cmd_scatter,
    "evolve": _cmd_evolve,
    "potential": _cmd_potential,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moutard",
        description="Delta potentials, eigenfunctions, scattering data, and root "
        "dynamics from polynomial Moutard transforms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--roots", help="semicolon-separated roots of the generator, e.g. '1+2i;-1;0.5,0.5'")
        p.add_argument("--coeffs", help="semicolon-separated coefficients, constant term first")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write the report to this path instead of stdout")

    p_eigen = sub.add_parser("eigen", help="evaluate the eigenfunction")
    common(p_eigen)
    p_eigen.add_argument("--lambda", dest="lam", required=True, help="spectral parameter (nonzero)")
    p_eigen.add_argument("--z", required=True, help="evaluation points")

    p_verify = sub.add_parser("verify", help="run the full verification suite")
    common(p_verify)
    p_verify.add_argument("--lambda", dest="lam", required=True)
    p_verify.add_argument("--radius", type=float, help="scattering circle radius")
    p_verify.add_argument("--samples", type=int, default=scattering.DEFAULT_SAMPLE_COUNT)
    p_verify.add_argument("--flow-sign", dest="flow_sign", type=int, choices=(1, -1), default=1)

    p_scatter = sub.add_parser("scatter", help="fit scattering data on a circle")
    common(p_scatter)
    p_scatter.add_argument("--lambda", dest="lam", required=True)
    p_scatter.add_argument("--radius", type=float)
    p_scatter.add_argument("--samples", type=int, default=scattering.DEFAULT_SAMPLE_COUNT)

    p_evolve = sub.add_parser("evolve", help="sample root trajectories of the flow")
    common(p_evolve)
    p_evolve.add_argument("--t0", type=float, required=True)
    p_evolve.add_argument("--t1", type=float, required=True)
    p_evolve.add_argument("--steps", type=int, required=True)
    p_evolve.add_argument("--tol", type=float, default=1e-3, help="collision tolerance")
    p_evolve.add_argument("--flow-sign", dest="flow_sign", type=int, choices=(1, -1), default=1)

    p_pot = sub.add_parser("potential", help="delta potential at one flow time")
    common(p_pot)
    p_pot.add_argument("--t0", type=float, default=0.0, help="flow time (default 0)")
    p_pot.add_argument("--flow-sign", dest="flow_sign", type=int, choices=(1, -1), default=1)

    return parser


def run(cfg: RunConfig) -> str:
    """Dispatch a validated configuration; returns the report text."""
    return _COMMANDS[cfg.command](cfg)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        cfg = _config_from(ns)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        report = run(cfg)
        if cfg.out is not None:
            try:
                with open(cfg.out, "w", encoding="utf-8") as fh:
                    fh.write(report)
            except OSError as e:
                raise IoFailure(f"cannot write report to {cfg.out!r}: {e}", path=cfg.out) from e
        else:
            sys.stdout.write(report)
    except MoutardError as e:
        sys.stderr.write(_emit_json({"error": e.record()}))
        return 1
    except (OverflowError, ZeroDivisionError) as e:
        record = {"type": type(e).__name__, "message": str(e), "details": {}}
        sys.stderr.write(_emit_json({"error": record}))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
