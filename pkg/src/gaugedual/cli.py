"""Command-line front end: experiment orchestration and artifact persistence.

Subcommands: resolve (one inclusion solve), sweep (lambda grid), psi-curve
(monotone-quotient envelope), homotopy (lambda-interpolation deviation), and
verify (the built-in certification battery).  Options may come from a YAML
config file (--config) with individual flags taking precedence.

Exit codes are distinct so CI can discriminate: 0 all verdicts pass, 1 a
verdict failed, 2 configuration error, 3 solver failure.  Artifacts carry no
timestamps and serialize numbers at full round-trip precision, so a fixed
seed yields byte-identical files.
"""

from __future__ import annotations

import functools
import json
import math
from pathlib import Path

import click
import numpy as np
import yaml

from .analysis import (
    ProbeReport,
    alber_report,
    boundedness_probe,
    continuity_probe,
    duality_axiom_report,
    estimate_psi,
    homotopy_check,
    round_trip_report,
)
from .gauges import from_label as gauge_from_label
from .operators import from_label as operator_from_label
from .operators import evaluate, identity_operator, make_linear_psd
from .operators import quartic_operator, softplus_operator
from .resolvent import (
    SolverError,
    SolveStatus,
    euclidean_oracle,
    solve_inclusion,
    surjectivity_solve,
)
from .spaces import (
    PNormSpace,
    dual_norm,
    gauge_duality,
    inverse_gauge_duality,
    pnorm,
)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _fmt(value: float) -> str:
    return f"{float(value):.17g}"


def _parse_space(value) -> PNormSpace:
    if isinstance(value, PNormSpace):
        return value
    if isinstance(value, (list, tuple)) and len(value) == 2:
        n, p = value
    else:
        parts = str(value).split(",")
        if len(parts) != 2:
            raise ValueError(f"space must be given as 'n,p', got {value!r}")
        n, p = parts
    return PNormSpace(int(n), float(p))


def _parse_vector(value) -> np.ndarray:
    if isinstance(value, (list, tuple)):
        return np.asarray(value, dtype=float)
    text = str(value).strip()
    if "," not in text and Path(text).exists():
        return np.atleast_1d(np.loadtxt(text, delimiter=",")).ravel()
    try:
        return np.asarray([float(tok) for tok in text.split(",") if tok.strip()],
                          dtype=float)
    except ValueError:
        raise ValueError(
            f"cannot parse vector {value!r}: expected comma-separated floats "
            f"or an existing file path") from None


def _parse_triplet(value, kind: str):
    parts = str(value).split(":")
    if len(parts) != 3:
        raise ValueError(f"{kind} must be given as 'start:stop:count', got {value!r}")
    a, b, k = float(parts[0]), float(parts[1]), int(parts[2])
    if k < 1:
        raise ValueError(f"{kind} count must be positive, got {k}")
    return a, b, k


def _parse_lambda_range(value) -> np.ndarray:
    a, b, k = _parse_triplet(value, "lambda-range")
    if not (0.0 < a <= b):
        raise ValueError(f"lambda-range must satisfy 0 < start <= stop, got {value!r}")
    return np.geomspace(a, b, k)


def _parse_r_grid(value) -> np.ndarray:
    a, b, k = _parse_triplet(value, "r-grid")
    if not (0.0 < a < b):
        raise ValueError(f"r-grid must satisfy 0 < start < stop, got {value!r}")
    return np.linspace(a, b, k)


def _load_config(path) -> dict:
    if path is None:
        return {}
    raw = yaml.safe_load(Path(path).read_text())
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ValueError(f"config file {path} must hold a mapping")
    return {str(k).replace("-", "_"): v for k, v in raw.items()}


def _merged(config_path, **flags) -> dict:
    merged = _load_config(config_path)
    for key, value in flags.items():
        if value is not None:
            merged[key] = value
    return merged


def _need(cfg: dict, key: str):
    if key not in cfg or cfg[key] is None:
        raise ValueError(f"missing required setting '{key.replace('_', '-')}'")
    return cfg[key]


def _write_text(out, text: str) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            _fmt(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _guarded(fn):
    """Map failures onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            code = fn(*args, **kwargs)
        except (ValueError, OSError, yaml.YAMLError) as exc:
            click.echo(f"config error: {exc}", err=True)
            raise SystemExit(EXIT_CONFIG)
        except SolverError as exc:
            click.echo(f"solver failure: {exc}", err=True)
            raise SystemExit(EXIT_SOLVER)
        raise SystemExit(code)

    return wrapper


@click.group()
def main():
    """Duality mappings, generalized resolvents, and certification probes."""


_common = [
    click.option("--config", "config_path", type=click.Path(exists=True),
                 default=None, help="YAML config; flags override its keys."),
    click.option("--space", default=None, help="Space as 'n,p'."),
    click.option("--gauge", default=None, help="Gauge label (power:A, log1p, expm1)."),
    click.option("--out", default=None, help="Artifact path (stdout when omitted)."),
    click.option("--format", "fmt", default=None,
                 type=click.Choice(["csv", "json"])),
]


def _with(options):
    def deco(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn
    return deco


@main.command()
@_with(_common)
@click.option("--operator", "operator_label", default=None)
@click.option("--lambda", "lam", default=None, help="Regularization parameter.")
@click.option("--x", "x_text", default=None, help="Point: inline floats or file.")
@click.option("--tol", default=None)
@click.option("--max-iter", "max_iter", default=None)
@click.option("--seed", default=None)
@_guarded
def resolve(config_path, space, gauge, out, fmt, operator_label, lam, x_text,
            tol, max_iter, seed):
    """Solve the inclusion once and emit the solve record as JSON."""
    cfg = _merged(config_path, space=space, gauge=gauge, operator=operator_label,
                  lam=lam, x=x_text, tol=tol, max_iter=max_iter, out=out,
                  fmt=fmt, seed=seed)
    if cfg.get("fmt", "json") != "json":
        raise ValueError("resolve emits a JSON record; use --format json")
    sp = _parse_space(_need(cfg, "space"))
    g = gauge_from_label(str(_need(cfg, "gauge")))
    A = operator_from_label(str(_need(cfg, "operator")), sp.dim)
    x = _parse_vector(_need(cfg, "x"))
    sol = solve_inclusion(sp, g, A, float(cfg.get("lam", cfg.get("lambda", 1.0))),
                          x, tol=float(cfg.get("tol", 1e-8)),
                          max_iter=int(cfg.get("max_iter", 100_000)))
    record = {
        "x_lambda": [float(v) for v in sol.x_lambda],
        "a_lambda": [float(v) for v in sol.a_lambda],
        "residual": float(sol.residual),
        "iterations": int(sol.iterations),
        "status": sol.status.value,
    }
    _write_text(cfg.get("out"), _json_text(record))
    click.echo(f"resolve: status={sol.status.value} residual={sol.residual:.3e} "
               f"iterations={sol.iterations}", err=True)
    return EXIT_OK if sol.status is SolveStatus.CONVERGED else EXIT_SOLVER


@main.command()
@_with(_common)
@click.option("--operator", "operator_label", default=None)
@click.option("--lambda-range", "lambda_range", default=None,
              help="Log-spaced grid 'start:stop:count'.")
@click.option("--x", "x_text", default=None)
@click.option("--tol", default=None)
@click.option("--seed", default=None)
@_guarded
def sweep(config_path, space, gauge, out, fmt, operator_label, lambda_range,
          x_text, tol, seed):
    """Re-solve across a lambda grid; one CSV row per lambda, failures in-row."""
    cfg = _merged(config_path, space=space, gauge=gauge, operator=operator_label,
                  lambda_range=lambda_range, x=x_text, tol=tol, out=out,
                  fmt=fmt, seed=seed)
    sp = _parse_space(_need(cfg, "space"))
    g = gauge_from_label(str(_need(cfg, "gauge")))
    A = operator_from_label(str(_need(cfg, "operator")), sp.dim)
    x = _parse_vector(_need(cfg, "x"))
    lams = _parse_lambda_range(_need(cfg, "lambda_range"))
    solver_tol = float(cfg.get("tol", 1e-8))
    rows = []
    failures = 0
    for lam in lams:
        sol = solve_inclusion(sp, g, A, float(lam), x, tol=solver_tol)
        failures += sol.status is not SolveStatus.CONVERGED
        rows.append((float(lam), dual_norm(sp, sol.a_lambda),
                     pnorm(sp, sol.x_lambda - x), float(sol.residual),
                     sol.iterations, sol.status.value))
    header = ("lambda", "a_lambda_norm", "resolvent_shift", "residual",
              "iterations", "status")
    if cfg.get("fmt", "csv") == "json":
        _write_text(cfg.get("out"), _json_text(
            [dict(zip(header, row)) for row in rows]))
    else:
        _write_text(cfg.get("out"), _csv_text(header, rows))
    click.echo(f"sweep: {len(rows)} lambdas, {failures} failures", err=True)
    return EXIT_OK if failures == 0 else EXIT_SOLVER


@main.command("psi-curve")
@_with(_common)
@click.option("--x0", "x0_text", default=None, help="Center point.")
@click.option("--radius", "-R", "radius", default=None, help="Outer radius R.")
@click.option("--r-grid", "r_grid", default=None, help="Shell grid 'min:max:count'.")
@click.option("--samples", default=None)
@click.option("--seed", default=None)
@_guarded
def psi_curve(config_path, space, gauge, out, fmt, x0_text, radius, r_grid,
              samples, seed):
    """Estimate the quotient lower envelope; verdict: positive, nondecreasing."""
    cfg = _merged(config_path, space=space, gauge=gauge, x0=x0_text,
                  radius=radius, r_grid=r_grid, samples=samples, seed=seed,
                  out=out, fmt=fmt)
    sp = _parse_space(_need(cfg, "space"))
    g = gauge_from_label(str(_need(cfg, "gauge")))
    x0 = _parse_vector(_need(cfg, "x0"))
    grid = _parse_r_grid(_need(cfg, "r_grid"))
    curve = estimate_psi(sp, g, x0, float(_need(cfg, "radius")), grid,
                         samples=int(cfg.get("samples", 10_000)),
                         seed=int(cfg.get("seed", 0)))
    positive = bool(np.all(curve.psi_hat > 0.0))
    nondecreasing = bool(np.all(np.diff(curve.psi_hat) >= 0.0))
    verdict = positive and nondecreasing
    if cfg.get("fmt", "csv") == "json":
        _write_text(cfg.get("out"), _json_text({
            "r_grid": [float(v) for v in curve.r_grid],
            "psi_hat": [float(v) for v in curve.psi_hat],
            "sample_count": curve.sample_count,
            "seed": curve.seed,
            "positive": positive,
            "nondecreasing": nondecreasing,
        }))
    else:
        _write_text(cfg.get("out"), _csv_text(
            ("r", "psi_hat", "shell_count"),
            [(float(r), float(v), int(c)) for r, v, c in
             zip(curve.r_grid, curve.psi_hat, curve.shell_counts)]))
    click.echo(f"psi-curve: positive={positive} nondecreasing={nondecreasing} "
               f"samples={curve.sample_count}", err=True)
    return EXIT_OK if verdict else EXIT_VERDICT


@main.command()
@_with(_common)
@click.option("--operator", "operator_label", default=None)
@click.option("--lambda1", "lam1", default=None)
@click.option("--lambda2", "lam2", default=None)
@click.option("--t0", default=None)
@click.option("--steps", default=None, help="Length of the default t-sequence.")
@click.option("--t-sequence", "t_sequence", default=None,
              help="Explicit comma-separated t values (overrides --steps).")
@click.option("--x", "x_text", default=None)
@click.option("--tol", default=None)
@_guarded
def homotopy(config_path, space, gauge, out, fmt, operator_label, lam1, lam2,
             t0, steps, t_sequence, x_text, tol):
    """Deviation of the regularized value along a lambda-interpolation in t."""
    cfg = _merged(config_path, space=space, gauge=gauge,
                  operator=operator_label, lam1=lam1, lam2=lam2, t0=t0,
                  steps=steps, t_sequence=t_sequence, x=x_text, tol=tol,
                  out=out, fmt=fmt)
    sp = _parse_space(_need(cfg, "space"))
    g = gauge_from_label(str(_need(cfg, "gauge")))
    A = operator_from_label(str(_need(cfg, "operator")), sp.dim)
    x0 = _parse_vector(_need(cfg, "x"))
    t0_val = float(_need(cfg, "t0"))
    if cfg.get("t_sequence") is not None:
        ts = [float(v) for v in
              np.atleast_1d(_parse_vector(cfg["t_sequence"]))]
    else:
        n_steps = int(cfg.get("steps", 20))
        ts = [t0_val + (1.0 - t0_val) / (n + 1) for n in range(1, n_steps + 1)]
    report = homotopy_check(sp, g, A, float(_need(cfg, "lam1")),
                            float(_need(cfg, "lam2")), ts, t0_val, x0,
                            tol=float(cfg.get("tol", 1e-5)))
    devs = [float(v) for v in report.detail["deviations"]]
    if cfg.get("fmt", "csv") == "json":
        _write_text(cfg.get("out"), _json_text({
            "t": [float(v) for v in ts[:len(devs)]],
            "deviation": devs,
            "tolerance": report.tolerance,
            "verdict": report.verdict,
        }))
    else:
        _write_text(cfg.get("out"), _csv_text(
            ("t", "deviation"), list(zip(map(float, ts), devs))))
    click.echo(f"homotopy: verdict={report.verdict} worst={report.worst:.3e}",
               err=True)
    return EXIT_OK if report.verdict else EXIT_VERDICT


def _resolvent_battery(seed: int) -> ProbeReport:
    """Residual and splitting-identity margins on a small mixed fixture grid."""
    observations = []
    rng = np.random.Generator(np.random.PCG64(seed))
    for glabel in ("power:2", "log1p"):
        g = gauge_from_label(glabel)
        for p in (1.5, 3.0):
            sp = PNormSpace(3, p)
            x = rng.uniform(-2.0, 2.0, sp.dim)
            for A in (quartic_operator(), softplus_operator()):
                for lam in (0.5, 2.0):
                    sol = solve_inclusion(sp, g, A, lam, x)
                    tag = f"{glabel} p={p:g} {A.label} lam={lam:g}"
                    fresh = dual_norm(sp, gauge_duality(sp, g, sol.x_lambda - x)
                                      + lam * evaluate(A, sol.x_lambda))
                    observations.append(
                        (f"residual {tag}", fresh / (1e-8 * sol.scale)))
                    gap = pnorm(sp, x - sol.x_lambda - inverse_gauge_duality(
                        sp, g, lam * sol.a_lambda))
                    observations.append(
                        (f"splitting {tag}", gap / (1e-7 * (1 + pnorm(sp, x)))))
    return ProbeReport.build(
        "resolvent-contracts", {"seed": seed}, observations, 1.0)


def _oracle_battery(seed: int, instances: int = 20) -> ProbeReport:
    rng = np.random.Generator(np.random.PCG64(seed))
    sp_gauge = gauge_from_label("power:1")
    observations = []
    for k in range(instances):
        n = int(rng.integers(2, 7))
        B = rng.normal(size=(n, n))
        M = B.T @ B / n
        lam = float(np.exp(rng.uniform(math.log(0.1), math.log(10.0))))
        x = rng.uniform(-3.0, 3.0, n)
        sp = PNormSpace(n, 2.0)
        A = make_linear_psd(M)
        sol = solve_inclusion(sp, sp_gauge, A.without_closed_form(), lam, x,
                              tol=1e-10)
        ora = euclidean_oracle(M, lam, x)
        dev = max(float(np.linalg.norm(sol.x_lambda - ora.x_lambda)),
                  float(np.linalg.norm(sol.a_lambda - ora.a_lambda)))
        observations.append((f"instance {k} n={n} lam={lam:.3g}", dev / 1e-7))
    return ProbeReport.build(
        "oracle-equivalence", {"seed": seed, "instances": instances},
        observations, 1.0)


def _psi_battery(seed: int, samples: int) -> ProbeReport:
    sp = PNormSpace(3, 3.0)
    g = gauge_from_label("log1p")
    grid = np.linspace(0.1, 2.0, 16)
    curve = estimate_psi(sp, g, np.zeros(3), 2.0, grid, samples=samples,
                         seed=seed)
    phi = np.log1p(grid)
    observations = [
        ("positivity", 0.0 if np.all(curve.psi_hat > 0.0) else 2.0),
        ("monotone", 0.0 if np.all(np.diff(curve.psi_hat) >= 0.0) else 2.0),
        ("center-zero agreement",
         float(np.max(np.abs(curve.psi_hat - phi) / (5e-3 * (1.0 + phi))))),
    ]
    return ProbeReport.build(
        "psi-envelope", {"seed": seed, "samples": samples}, observations, 1.0)


def _boundedness_battery(seed: int):
    sp = PNormSpace(3, 2.0)
    g = gauge_from_label("power:1")
    rho, lam1, lam2 = 2.0, 0.5, 5.0
    k_hat, stability = boundedness_probe(sp, g, identity_operator(), rho,
                                         lam1, lam2, grid_size=24, seed=seed)
    analytic = ProbeReport.build(
        "boundedness-analytic", {"rho": rho, "lam1": lam1},
        [("K vs rho/(1+lam1)", abs(k_hat - rho / (1.0 + lam1)))], 1e-6)
    return stability, analytic


def _surjectivity_battery(seed: int, count: int = 10) -> ProbeReport:
    sp = PNormSpace(3, 3.0)
    g = gauge_from_label("power:2")
    A = softplus_operator()
    lam = 1.0
    rng = np.random.Generator(np.random.PCG64(seed))
    observations = []
    for k in range(count):
        y0 = rng.uniform(-2.0, 2.0, sp.dim)
        xa = surjectivity_solve(sp, g, A, lam, y0, tol=1e-10)
        resid = dual_norm(sp, lam * gauge_duality(sp, g, xa)
                          + evaluate(A, xa) - y0)
        observations.append(
            (f"residual y{k}", resid / (1e-8 * (1.0 + dual_norm(sp, y0)))))
        xb = surjectivity_solve(sp, g, A, lam, y0, tol=1e-10,
                                initial=3.0 * np.ones(sp.dim))
        observations.append((f"uniqueness y{k}", pnorm(sp, xa - xb) / 1e-6))
    return ProbeReport.build(
        "surjectivity", {"seed": seed, "count": count, "lam": lam},
        observations, 1.0)


def _verify_reports(seed: int, samples: int):
    reports = [
        duality_axiom_report(samples=samples, seed=seed),
        alber_report(pairs_per_config=max(200, samples), seed=seed + 1),
        round_trip_report(samples=samples, seed=seed + 2),
        _resolvent_battery(seed + 3),
        _oracle_battery(seed + 4),
        _psi_battery(seed + 5, samples=max(2000, 5 * samples)),
    ]
    stability, analytic = _boundedness_battery(seed + 6)
    reports += [stability, analytic]
    sp = PNormSpace(3, 3.0)
    reports.append(continuity_probe(
        sp, gauge_from_label("expm1"), softplus_operator(), 1.0,
        np.array([0.5, -0.25, 0.75]), 12, np.array([1.0, 1.0, -1.0]),
        tol=1e-3))
    ts = [0.5 + 1.0 / (n + 3) for n in range(1, 9)]
    reports.append(homotopy_check(
        sp, gauge_from_label("log1p"), quartic_operator(), 1.0, 1.0001, ts,
        0.5, np.array([1.0, -0.5, 0.25]), tol=1e-5))
    reports.append(_surjectivity_battery(seed + 7))
    return reports


@main.command()
@click.option("--seed", default=0, show_default=True)
@click.option("--samples", default=400, show_default=True,
              help="Base sample count for the randomized batteries.")
@click.option("--out", default=".", show_default=True,
              help="Directory for verdicts.json and observations.csv.")
@_guarded
def verify(seed, samples, out):
    """Run the certification battery; exit 0 only when every verdict passes."""
    seed, samples = int(seed), int(samples)
    if samples < 10:
        raise ValueError("samples must be at least 10")
    reports = _verify_reports(seed, samples)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    verdicts = {
        "seed": seed,
        "samples": samples,
        "all_pass": all(r.verdict for r in reports),
        "batteries": {
            r.label: {"verdict": r.verdict, "worst": r.worst,
                      "tolerance": r.tolerance}
            for r in reports
        },
    }
    (out_dir / "verdicts.json").write_text(_json_text(verdicts))
    rows = [(r.label, tag, float(dev), float(r.tolerance))
            for r in reports for tag, dev in r.observations]
    (out_dir / "observations.csv").write_text(_csv_text(
        ("battery", "observation", "deviation", "tolerance"), rows))
    for r in reports:
        click.echo(f"{'PASS' if r.verdict else 'FAIL'} {r.label} "
                   f"(worst deviation {r.worst:.3e} vs {r.tolerance:g})")
    passed = sum(r.verdict for r in reports)
    click.echo(f"verify: {passed}/{len(reports)} batteries passed")
    return EXIT_OK if verdicts["all_pass"] else EXIT_VERDICT


if __name__ == "__main__":
    main()
