"""Command-line front end: locate / stability / integrate / sweep.

Output contracts: CSV uses RFC-4180-style quoting, LF line endings, and fixed
17-significant-digit float formatting so identical runs are byte-identical;
JSON is one top-level object per run with lower_snake_case keys.  Exit codes:
0 success, 2 no equilibrium, 64 usage error, 1 runtime/integration failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .errors import ConvergenceError, NoGrowthError, SingularityError
from .model import Params, grad_omega, hessian_omega
from .equilibria import existence_report, triangular_points
from .stability import (
    char_coeffs,
    char_coeffs_from_hessian,
    classify,
    sign_change_count,
    solve_characteristic,
)
from .dynamics import (
    IntegratorConfig,
    equilibrium_state,
    growth_rate,
    integrate,
    jacobi_constant,
    unstable_direction,
    unstable_seed,
)

EX_OK = 0
EX_RUNTIME = 1
EX_NO_EQUILIBRIUM = 2
EX_USAGE = 64

_GRID_FLAGS = ("--grid-mu", "--grid-k", "--grid-a1")

TRAJECTORY_COLUMNS = ["t", "x", "y", "z", "vx", "vy", "vz", "jacobi"]
SWEEP_COLUMNS = [
    "mu", "k", "a1", "exists", "x", "z", "p", "q", "r",
    "max_real_part", "classification",
]


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    """Fixed CSV field formatting: 17 significant digits, lowercase booleans."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_csv(stream, header, rows) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_text(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    _write_csv(buf, list(report.keys()), [list(report.values())])
    return buf.getvalue()


def _fail_usage(message: str) -> int:
    print(f"robe3bp: error: {message}", file=sys.stderr)
    return EX_USAGE


def _fail_runtime(message: str) -> int:
    print(f"robe3bp: error: {message}", file=sys.stderr)
    return EX_RUNTIME


# ---------------------------------------------------------------------------
# argument handling

def _build_parser() -> _Parser:
    parser = _Parser(prog="robe3bp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--mu", type=float, default=None, help="mass ratio in (0, 1)")
        p.add_argument("--k", type=float, default=None, help="buoyancy parameter")
        p.add_argument("--a1", type=float, default=None, help="oblateness coefficient (default 0)")
        p.add_argument("--tol", type=float, default=None, help="tolerance (classification / integration)")
        p.add_argument("--output", default=None, help="output file path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None, help="report format (default json)")
        p.add_argument("--config", default=None, help="key=value config file; flags win on conflict")
        p.add_argument("--svg-region", default=None, help="write an existence-region SVG scatter to this path")

    p_locate = sub.add_parser("locate", help="triangular points and existence region")
    common(p_locate)

    p_stab = sub.add_parser("stability", help="characteristic coefficients, roots and verdict")
    common(p_stab)

    p_int = sub.add_parser("integrate", help="nonlinear trajectory from the triangular point")
    common(p_int)
    p_int.add_argument("--from-equilibrium", action="store_true", default=None,
                       help="start at the triangular point (+z branch)")
    p_int.add_argument("--offset", type=float, default=None,
                       help="displacement along the unstable eigendirection")
    p_int.add_argument("--t-end", type=float, default=None, help="integration span (default 60)")

    p_sweep = sub.add_parser("sweep", help="stability map over a parameter grid")
    common(p_sweep)
    p_sweep.add_argument("--grid-mu", default=None, help="MIN:MAX:N")
    p_sweep.add_argument("--grid-k", default=None, help="MIN:MAX:N")
    p_sweep.add_argument("--grid-a1", default=None, help="MIN:MAX:N (default: single --a1 cell)")

    return parser


def _join_grid_values(argv: list[str]) -> list[str]:
    """Merge '--grid-k -0.3:-0.001:10' into '--grid-k=-0.3:...' so argparse
    does not mistake the negative lower bound for an option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _GRID_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and ":" in argv[i + 1]:
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


_CONFIG_PARSERS = {
    "mu": float, "k": float, "a1": float, "tol": float,
    "t_end": float, "offset": float,
    "output": str, "format": str, "svg_region": str,
    "grid_mu": str, "grid_k": str, "grid_a1": str,
    "from_equilibrium": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


def _apply_config(ns: argparse.Namespace) -> str | None:
    """Fill unset options from the config file; explicit flags win."""
    if not ns.config:
        return None
    try:
        with open(ns.config) as fh:
            lines = fh.readlines()
    except OSError as exc:
        return f"cannot read config file: {exc}"
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            return f"{ns.config}:{lineno}: expected key=value, got {line!r}"
        key, value = (part.strip() for part in line.split("=", 1))
        dest = key.replace("-", "_")
        if dest not in _CONFIG_PARSERS:
            return f"{ns.config}:{lineno}: unknown key {key!r}"
        if not hasattr(ns, dest):
            continue  # key applies to another command
        if getattr(ns, dest) is None:
            try:
                setattr(ns, dest, _CONFIG_PARSERS[dest](value))
            except ValueError:
                return f"{ns.config}:{lineno}: bad value for {key}: {value!r}"
    return None


def _parse_grid(spec: str, name: str) -> list[float]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"{name} must look like MIN:MAX:N, got {spec!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError(f"{name}: count must be >= 1, got {count}")
    if hi < lo:
        raise ValueError(f"{name}: range must be ordered (MIN <= MAX), got {spec!r}")
    if count == 1:
        return [lo]
    return list(np.linspace(lo, hi, count))


def _params_from(ns: argparse.Namespace) -> Params | str:
    if ns.mu is None or ns.k is None:
        return "both --mu and --k are required"
    try:
        return Params(mu=ns.mu, k=ns.k, a1_oblate=ns.a1 if ns.a1 is not None else 0.0)
    except ValueError as exc:
        return str(exc)


# ---------------------------------------------------------------------------
# reports

def _locate_report(params: Params) -> dict:
    rep = existence_report(params)
    pts = triangular_points(params)
    out = {
        "command": "locate",
        "mu": params.mu,
        "k": params.k,
        "a1": params.a1_oblate,
        "n_sq": params.n_sq,
        "k_negative": rep.k_negative,
        "region_ok": rep.region_ok,
        "radicand_ok": rep.radicand_ok,
        "verdict": rep.verdict,
        "exists": pts.exists,
        "a1_aux": pts.a1_aux,
        "b1_aux": pts.b1_aux,
        "x": pts.x_eq,
        "z_plus": pts.z_plus,
        "z_minus": pts.z_minus,
        "grad_residual_plus": None,
        "grad_residual_minus": None,
    }
    if pts.exists:
        for key, branch in (("grad_residual_plus", +1), ("grad_residual_minus", -1)):
            out[key] = float(np.max(np.abs(grad_omega(pts.point(branch), params))))
    return out


def _stability_report(params: Params, tol: float) -> dict:
    pts = triangular_points(params)
    closed = char_coeffs(params)
    hess = hessian_omega(pts.point(+1), params)
    oracle = char_coeffs_from_hessian(hess, params.n_sq)
    rel_diff = max(
        abs(c - o) / max(abs(c), abs(o), 1e-300)
        for c, o in zip(closed, oracle)
    )
    roots = solve_characteristic(closed)
    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]
    changes = sign_change_count(closed)
    verdict = classify(roots, tol=tol, sign_changes=changes)
    out = {
        "command": "stability",
        "mu": params.mu,
        "k": params.k,
        "a1": params.a1_oblate,
        "n_sq": params.n_sq,
        "p": closed.p,
        "q": closed.q,
        "r": closed.r,
        "p_hessian": oracle.p,
        "q_hessian": oracle.q,
        "r_hessian": oracle.r,
        "coeff_rel_diff": rel_diff,
    }
    for i, root in enumerate(roots, 1):
        out[f"root{i}_re"] = float(root.real)
        out[f"root{i}_im"] = float(root.imag)
    out["sign_changes"] = changes
    out["max_real_part"] = verdict.max_real_part
    out["positive_real_root_count"] = verdict.positive_real_root_count
    out["classification"] = verdict.classification.value
    return out


def _sweep_rows(grid_mu, grid_k, grid_a1, tol: float):
    rows = []
    for mu in grid_mu:
        for k in grid_k:
            for a1 in grid_a1:
                params = Params(mu=mu, k=k, a1_oblate=a1)
                pts = triangular_points(params)
                if not pts.exists:
                    rows.append([mu, k, a1, False] + [None] * 6 + [""])
                    continue
                coeffs = char_coeffs(params)
                verdict = classify(solve_characteristic(coeffs), tol=tol)
                rows.append([
                    mu, k, a1, True, pts.x_eq, pts.z_plus,
                    coeffs.p, coeffs.q, coeffs.r,
                    verdict.max_real_part, verdict.classification.value,
                ])
    return rows


# ---------------------------------------------------------------------------
# existence-region SVG

def _region_svg(cells: list[tuple[float, float, bool]]) -> str:
    """Standalone SVG scatter of (mu, 2k/n^2) cells over the existence region.

    The admissible region is bounded by the lines 2k/n^2 = 0 (k = 0), mu = 1,
    and 2k/n^2 + mu = 0.
    """
    width, height, margin = 480, 360, 40
    ys = [y for _, y, _ in cells] + [0.0, -1.0]
    y_min = min(ys) - 0.05
    y_max = max(0.05, max(ys) + 0.05)
    x_min, x_max = -0.05, 1.1

    def sx(x):
        return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        # boundary lines: k = 0, mu = 1, 2k/n^2 + mu = 0
        f'<line x1="{sx(0):.1f}" y1="{sy(0):.1f}" x2="{sx(1):.1f}" y2="{sy(0):.1f}" '
        'stroke="#555" stroke-width="1"/>',
        f'<line x1="{sx(1):.1f}" y1="{sy(0):.1f}" x2="{sx(1):.1f}" y2="{sy(-1):.1f}" '
        'stroke="#555" stroke-width="1"/>',
        f'<line x1="{sx(0):.1f}" y1="{sy(0):.1f}" x2="{sx(1):.1f}" y2="{sy(-1):.1f}" '
        'stroke="#555" stroke-width="1"/>',
        f'<text x="{sx(0.45):.1f}" y="{sy(0) - 6:.1f}" font-size="11" fill="#555">k = 0</text>',
        f'<text x="{sx(1) + 4:.1f}" y="{sy(-0.5):.1f}" font-size="11" fill="#555">mu = 1</text>',
        f'<text x="{sx(0.25):.1f}" y="{sy(-0.45):.1f}" font-size="11" fill="#555">'
        "2k/n^2 + mu = 0</text>",
    ]
    for mu, y, exists in cells:
        color = "#2a7d4f" if exists else "#c0392b"
        parts.append(
            f'<circle cx="{sx(mu):.1f}" cy="{sy(y):.1f}" r="3" fill="{color}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _write_svg(path: str, cells) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(_region_svg(cells))


# ---------------------------------------------------------------------------
# commands

def _cmd_locate(ns: argparse.Namespace) -> int:
    params = _params_from(ns)
    if isinstance(params, str):
        return _fail_usage(params)
    report = _locate_report(params)
    _emit(_report_text(report, ns.format or "json"), ns.output)
    if ns.svg_region:
        _write_svg(ns.svg_region,
                   [(params.mu, 2 * params.k / params.n_sq, report["exists"])])
    return EX_OK if report["exists"] else EX_NO_EQUILIBRIUM


def _cmd_stability(ns: argparse.Namespace) -> int:
    params = _params_from(ns)
    if isinstance(params, str):
        return _fail_usage(params)
    if ns.tol is not None and ns.tol <= 0.0:
        return _fail_usage(f"tolerance must be positive, got {ns.tol}")
    if not triangular_points(params).exists:
        print("robe3bp: no triangular equilibrium for these parameters", file=sys.stderr)
        return EX_NO_EQUILIBRIUM
    report = _stability_report(params, tol=ns.tol if ns.tol is not None else 1e-9)
    _emit(_report_text(report, ns.format or "json"), ns.output)
    if ns.svg_region:
        _write_svg(ns.svg_region, [(params.mu, 2 * params.k / params.n_sq, True)])
    return EX_OK


def _cmd_integrate(ns: argparse.Namespace) -> int:
    params = _params_from(ns)
    if isinstance(params, str):
        return _fail_usage(params)
    if not ns.from_equilibrium:
        return _fail_usage("integrate requires --from-equilibrium")
    t_end = ns.t_end if ns.t_end is not None else 60.0
    tol = ns.tol if ns.tol is not None else 1e-12
    try:
        cfg = IntegratorConfig(rel_tol=tol, abs_tol=tol, t_end=t_end)
    except ValueError as exc:
        return _fail_usage(str(exc))
    if not triangular_points(params).exists:
        print("robe3bp: no triangular equilibrium for these parameters", file=sys.stderr)
        return EX_NO_EQUILIBRIUM
    if ns.offset is not None and ns.offset <= 0.0:
        return _fail_usage(f"offset must be positive, got {ns.offset}")

    try:
        if ns.offset is None:
            state0 = equilibrium_state(params)
            linear_rate = None
        else:
            state0 = unstable_seed(params, ns.offset)
            linear_rate = unstable_direction(params)[0]
        traj = integrate(state0, params, cfg)
    except (ConvergenceError, SingularityError) as exc:
        return _fail_runtime(str(exc))

    out_path = ns.output or "trajectory.csv"
    with open(out_path, "w", newline="") as fh:
        _write_csv(
            fh,
            TRAJECTORY_COLUMNS,
            ([t, *state, c] for t, state, c in zip(traj.times, traj.states, traj.jacobi)),
        )

    summary = {
        "command": "integrate",
        "mu": params.mu,
        "k": params.k,
        "a1": params.a1_oblate,
        "t_end": t_end,
        "offset": ns.offset,
        "rows": len(traj),
        "steps": traj.steps,
        "rejections": traj.rejections,
        "status": traj.status,
        "jacobi_initial": float(traj.jacobi[0]),
        "jacobi_drift": float(np.max(np.abs(traj.jacobi - traj.jacobi[0]))),
        "linear_rate": linear_rate,
        "growth_rate": None,
        "trajectory_file": out_path,
    }
    if ns.offset is not None:
        try:
            summary["growth_rate"] = growth_rate(traj, equilibrium_state(params).pos)
        except NoGrowthError as exc:
            summary["growth_fit_error"] = str(exc)
    print(json.dumps(summary, indent=2))
    if ns.svg_region:
        _write_svg(ns.svg_region, [(params.mu, 2 * params.k / params.n_sq, True)])
    return EX_OK


def _cmd_sweep(ns: argparse.Namespace) -> int:
    if ns.grid_mu is None or ns.grid_k is None:
        return _fail_usage("sweep requires --grid-mu and --grid-k")
    if ns.tol is not None and ns.tol <= 0.0:
        return _fail_usage(f"tolerance must be positive, got {ns.tol}")
    try:
        grid_mu = _parse_grid(ns.grid_mu, "--grid-mu")
        grid_k = _parse_grid(ns.grid_k, "--grid-k")
        if ns.grid_a1 is not None:
            grid_a1 = _parse_grid(ns.grid_a1, "--grid-a1")
        else:
            grid_a1 = [ns.a1 if ns.a1 is not None else 0.0]
        for mu in (grid_mu[0], grid_mu[-1]):
            if not 0.0 < mu < 1.0:
                raise ValueError(f"--grid-mu values must lie in (0, 1), got {mu}")
        for a1 in (grid_a1[0], grid_a1[-1]):
            if a1 < 0.0:
                raise ValueError(f"--grid-a1 values must be >= 0, got {a1}")
    except ValueError as exc:
        return _fail_usage(str(exc))

    rows = _sweep_rows(grid_mu, grid_k, grid_a1, tol=ns.tol if ns.tol is not None else 1e-9)
    if (ns.format or "csv") == "json":
        payload = {
            "command": "sweep",
            "rows": [dict(zip(SWEEP_COLUMNS, row)) for row in rows],
        }
        _emit(json.dumps(payload, indent=2) + "\n", ns.output)
    else:
        buf = io.StringIO()
        _write_csv(buf, SWEEP_COLUMNS, rows)
        _emit(buf.getvalue(), ns.output)
    if ns.svg_region:
        cells = []
        for row in rows:
            mu, k, a1, exists = row[0], row[1], row[2], row[3]
            n_sq = 1.0 + 1.5 * a1
            cells.append((mu, 2 * k / n_sq, bool(exists)))
        _write_svg(ns.svg_region, cells)
    return EX_OK


_COMMANDS = {
    "locate": _cmd_locate,
    "stability": _cmd_stability,
    "integrate": _cmd_integrate,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        ns = parser.parse_args(_join_grid_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    config_error = _apply_config(ns)
    if config_error is not None:
        return _fail_usage(config_error)
    try:
        return _COMMANDS[ns.command](ns)
    except (ConvergenceError, SingularityError) as exc:
        return _fail_runtime(str(exc))
    except ValueError as exc:
        return _fail_usage(str(exc))
    except OSError as exc:
        return _fail_runtime(f"i/o failure: {exc}")


if __name__ == "__main__":
    sys.exit(main())
