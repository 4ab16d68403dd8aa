"""Command-line surface: JSON descriptors in, CSV or JSON out, optional figures.

Exit codes: 0 on success, 1 for validation problems (bad descriptors, bad
flags, missing files), 2 for numeric-contract violations (failed acceptance
criteria, transport breakdown). Outputs embed the tool version, a hash of the
effective configuration, the seed, and the tolerance, so identical invocations
are byte-identical.

Indices on this surface are 1-based; the library underneath is 0-based.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys

import numpy as np

from . import __version__, descriptors, franson, phases, qubitlab, structure, transport, verify
from .errors import (
    AntipodalEndpoints,
    MixedPhaseError,
    NoConvergence,
    ValidationError,
    ZeroOverlapStep,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2

TWO_PI = 2.0 * math.pi


def _sig(value) -> str:
    """12 significant digits; NaN prints as nan."""
    x = float(value)
    if math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def _config_hash(config: dict) -> str:
    payload = json.dumps(config, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:12]


def _meta(config: dict, seed: int, tol: float) -> dict:
    return {
        "version": __version__,
        "config_hash": _config_hash(config),
        "seed": seed,
        "tol": tol,
    }


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out: str | None) -> None:
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", out)


def _csv_text(header: str, rows, meta: dict) -> str:
    lines = [f"# {key}={meta[key]}" for key in sorted(meta)]
    lines.append(header)
    lines.extend(rows)
    return "\n".join(lines) + "\n"


def _parse_indices(raw: str | None, dim: int) -> tuple[int, ...]:
    if raw is None:
        raise ValidationError("--indices is required for this kind")
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ValidationError("--indices: empty list")
    out = []
    for part in parts:
        try:
            value = int(part)
        except ValueError:
            raise ValidationError(f"--indices: {part!r} is not an integer") from None
        if not (1 <= value <= dim):
            raise ValidationError(f"--indices: {value} outside 1..{dim}")
        out.append(value - 1)
    return tuple(out)


def _require_format(args, allowed: tuple[str, ...]) -> str:
    if args.format is None:
        return allowed[0]
    if args.format not in allowed:
        raise ValidationError(
            f"--format {args.format} not supported here; choose from {', '.join(allowed)}"
        )
    return args.format


def _transported(args, basis) -> transport.UnitaryPath:
    segments = descriptors.parse_path(descriptors.load_json(args.path), default_steps=args.steps)
    return transport.parallelize(transport.evolve(segments), basis)


def _cmd_phase(args) -> int:
    spec = descriptors.parse_state(descriptors.load_json(args.state))
    pt = _transported(args, spec.basis)
    u = pt.final_parallel
    if args.kind == "diag":
        result = phases.gamma_diag(spec.density(), u, tol=args.tol,
                                   allow_degenerate=args.allow_degenerate)
    elif args.kind == "offdiag":
        result = phases.gamma_offdiag(spec.density(), spec.complement(), u, tol=args.tol,
                                      allow_degenerate=args.allow_degenerate)
    elif args.kind == "cycle":
        members = spec.family().select(_parse_indices(args.indices, spec.dim))
        result = phases.gamma_l(members, u, tol=args.tol)
    else:
        result = phases.gamma_pure(_parse_indices(args.indices, spec.dim), u,
                                   spec.basis, tol=args.tol)

    config = {
        "command": "phase", "kind": args.kind, "state": args.state, "path": args.path,
        "indices": args.indices, "allow_degenerate": args.allow_degenerate,
        "tol": args.tol, "steps": args.steps, "seed": args.seed,
    }
    payload = result.to_json_dict()
    payload["meta"].update(_meta(config, args.seed, args.tol))
    payload["meta"]["kind"] = args.kind
    payload["meta"]["steps"] = args.steps
    payload["meta"]["pt_residual"] = pt.pt_residual

    fmt = _require_format(args, ("json", "csv"))
    if fmt == "json":
        _emit_json(payload, args.out)
    else:
        angle = result.phase_angle if result.defined else float("nan")
        row = ",".join([
            _sig(result.trace_value.real), _sig(result.trace_value.imag),
            _sig(result.magnitude), str(result.defined).lower(), _sig(angle),
        ])
        _emit(_csv_text("trace_re,trace_im,magnitude,defined,phase_angle",
                        [row], payload["meta"]), args.out)
    return EXIT_OK


def _cmd_decompose(args) -> int:
    spec = descriptors.parse_state(descriptors.load_json(args.state))
    pt = _transported(args, spec.basis)
    report = structure.decompose(pt.final_parallel, spec.basis, tol=args.tol)

    config = {
        "command": "decompose", "state": args.state, "path": args.path,
        "indices": args.indices, "tol": args.tol, "steps": args.steps, "seed": args.seed,
    }
    payload = {
        "is_permuting": report.is_permuting,
        "m": report.m,
        "cycle_labels": [k + 1 for k in report.cycle_labels],
        "diag_labels": [k + 1 for k in report.diag_labels],
        "u_p": None,
        "u_d": None,
        "off_block_residual": report.off_block_residual,
        "meta": _meta(config, args.seed, args.tol),
    }
    payload["meta"]["pt_residual"] = pt.pt_residual
    if report.is_permuting:
        payload["u_p"] = [[[z.real, z.imag] for z in row] for row in report.u_p]
        payload["u_d"] = [[z.real, z.imag] for z in report.u_d_entries]
        if args.indices is not None:
            family = spec.family()
            indices = _parse_indices(args.indices, spec.dim)
            p_val = structure.p_term(report, family, indices)
            d_val = structure.d_term(report, family, indices)
            payload["p_term"] = [p_val.real, p_val.imag]
            payload["d_term"] = [d_val.real, d_val.imag]

    _require_format(args, ("json",))
    _emit_json(payload, args.out)
    return EXIT_OK


def _cmd_scan_nodal(args) -> int:
    if not (0.0 <= args.fb_max < 1.0):
        raise ValidationError(f"--fb-max must lie in [0, 1), got {args.fb_max}")
    if args.fb_points < 2 or args.omega_points < 2:
        raise ValidationError("need at least 2 points per grid axis")
    fb_grid = np.linspace(0.0, args.fb_max, args.fb_points)
    omega_grid = np.linspace(-TWO_PI, TWO_PI, args.omega_points + 1)[1:]
    rows = qubitlab.scan_nodal_surface(fb_grid, omega_grid)

    config = {
        "command": "scan-nodal", "fb_points": args.fb_points, "fb_max": args.fb_max,
        "omega_points": args.omega_points, "tol": args.tol, "seed": args.seed,
    }
    meta = _meta(config, args.seed, args.tol)
    fmt = _require_format(args, ("csv", "json"))
    if fmt == "csv":
        body = [f"{_sig(r.fb)},{_sig(r.omega)},{_sig(r.eta2)},{r.status}" for r in rows]
        _emit(_csv_text("fb,omega,eta2,status", body, meta), args.out)
    else:
        _emit_json({
            "meta": meta,
            "rows": [
                {"fb": r.fb, "omega": r.omega,
                 "eta2": None if math.isnan(r.eta2) else r.eta2, "status": r.status}
                for r in rows
            ],
        }, args.out)
    if args.plot:
        from . import plots

        plots.render_nodal_scan(rows, args.plot)
    return EXIT_OK


def _parse_r_list(raw: str) -> list[float]:
    values = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            values.append(float(part))
        except ValueError:
            raise ValidationError(f"--r: {part!r} is not a number") from None
    if not values:
        raise ValidationError("--r: empty list")
    for v in values:
        if not (0.0 <= v <= 1.0):
            raise ValidationError(f"--r: {v} outside [0, 1]")
    return values


def _cmd_franson_sweep(args) -> int:
    if args.beta_points < 2 or args.chi_points < 2:
        raise ValidationError("need at least 2 points per grid axis")
    r_values = _parse_r_list(args.r)
    betas = np.linspace(0.0, math.pi, args.beta_points)
    chis = np.linspace(0.0, TWO_PI, args.chi_points)
    rows = [
        (r, float(beta), float(chi), franson.coincidence_intensity(r, float(beta), float(chi)))
        for r in r_values for beta in betas for chi in chis
    ]

    config = {
        "command": "franson-sweep", "r": args.r, "beta_points": args.beta_points,
        "chi_points": args.chi_points, "tol": args.tol, "seed": args.seed,
    }
    meta = _meta(config, args.seed, args.tol)
    fmt = _require_format(args, ("csv", "json"))
    if fmt == "csv":
        body = [",".join(_sig(x) for x in row) for row in rows]
        _emit(_csv_text("r,beta,chi,intensity", body, meta), args.out)
    else:
        _emit_json({
            "meta": meta,
            "rows": [{"r": a, "beta": b, "chi": c, "intensity": i} for a, b, c, i in rows],
        }, args.out)
    if args.plot:
        from . import plots

        plots.render_sweep(rows, args.plot)
    return EXIT_OK


def _cmd_franson_fit(args) -> int:
    if args.shots is not None and args.shots < 1:
        raise ValidationError(f"--shots must be a positive count, got {args.shots}")
    rng = np.random.default_rng(args.seed) if args.shots is not None else None
    scan = franson.simulate_fringe(args.r, args.beta, n_chi=args.chi_points,
                                   shots=args.shots, rng=rng)
    predicted = franson.predicted_trace(args.r, args.beta, tol=args.tol)

    config = {
        "command": "franson-fit", "r": args.r, "beta": args.beta,
        "chi_points": args.chi_points, "shots": args.shots,
        "tol": args.tol, "seed": args.seed,
    }
    payload = {
        "r": args.r,
        "beta": args.beta,
        "shift": scan.shift,
        "visibility": scan.visibility,
        "offset": scan.offset,
        "residual_rms": scan.residual_rms,
        "predicted_trace": predicted.trace_value.real,
        "predicted_shift": predicted.phase_angle,
        "predicted_defined": predicted.defined,
        "meta": _meta(config, args.seed, args.tol),
    }
    _require_format(args, ("json",))
    _emit_json(payload, args.out)
    if args.plot:
        from . import plots

        plots.render_fringe(scan, args.plot)
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = verify.run(only=args.only, seed=args.seed)
    if not results:
        raise ValidationError(f"--only {args.only!r} matched no criteria")
    for res in results:
        print(res.line())
    config = {"command": "verify", "only": args.only, "seed": args.seed, "tol": args.tol}
    if args.out or args.format == "json":
        payload = {
            "all_passed": verify.all_passed(results),
            "criteria": [
                {"id": r.ident, "slug": r.slug, "passed": r.passed,
                 "detail": r.detail, "metrics": r.metrics}
                for r in results
            ],
            "meta": _meta(config, args.seed, args.tol),
        }
        _emit_json(payload, args.out)
    return EXIT_OK if verify.all_passed(results) else EXIT_NUMERIC


def _add_common(parser: argparse.ArgumentParser, seed_default: int = 0) -> None:
    parser.add_argument("--tol", type=float, default=phases.VISIBILITY_FLOOR,
                        help="visibility floor / residual target")
    parser.add_argument("--steps", type=int, default=transport.DEFAULT_STEPS,
                        help="integration steps per path segment")
    parser.add_argument("--seed", type=int, default=seed_default, help="RNG seed")
    parser.add_argument("--out", help="write output to this file instead of stdout")
    parser.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default depends on subcommand)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixedphase",
        description="Geometric phases of mixed states: compute, decompose, scan, simulate, verify.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_phase = sub.add_parser("phase", help="phase of a transported state from JSON descriptors")
    p_phase.add_argument("--state", required=True, help="state descriptor JSON file")
    p_phase.add_argument("--path", required=True, help="path descriptor JSON file")
    p_phase.add_argument("--kind", required=True, choices=("diag", "offdiag", "cycle", "pure"))
    p_phase.add_argument("--indices", help="1-based member or ray indices, e.g. 1,3,2")
    p_phase.add_argument("--allow-degenerate", action="store_true",
                         help="permit degenerate spectra (flagged in output)")
    _add_common(p_phase)
    p_phase.set_defaults(func=_cmd_phase)

    p_dec = sub.add_parser("decompose", help="cycle/diagonal split of the transported operator")
    p_dec.add_argument("--state", required=True)
    p_dec.add_argument("--path", required=True)
    p_dec.add_argument("--indices", help="optionally also report cycle and fixed-ray terms")
    _add_common(p_dec)
    p_dec.set_defaults(func=_cmd_decompose)

    p_scan = sub.add_parser("scan", help="parameter-grid scans")
    scan_sub = p_scan.add_subparsers(dest="scan_kind", required=True)
    p_nodal = scan_sub.add_parser("nodal", help="nodal surface of the two-cycle trace")
    p_nodal.add_argument("--fb-points", type=int, default=50)
    p_nodal.add_argument("--fb-max", type=float, default=0.98)
    p_nodal.add_argument("--omega-points", type=int, default=50)
    p_nodal.add_argument("--plot", help="also render a figure to this file")
    _add_common(p_nodal)
    p_nodal.set_defaults(func=_cmd_scan_nodal)

    p_franson = sub.add_parser("franson", help="two-photon coincidence simulation")
    franson_sub = p_franson.add_subparsers(dest="franson_kind", required=True)
    p_sweep = franson_sub.add_parser("sweep", help="raw intensity over (r, beta, chi)")
    p_sweep.add_argument("--r", default="0.6", help="comma-separated purity values in [0, 1]")
    p_sweep.add_argument("--beta-points", type=int, default=21)
    p_sweep.add_argument("--chi-points", type=int, default=32)
    p_sweep.add_argument("--plot")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=_cmd_franson_sweep)
    p_fit = franson_sub.add_parser("fit", help="fringe scan and cosine fit at one (r, beta)")
    p_fit.add_argument("--r", type=float, required=True)
    p_fit.add_argument("--beta", type=float, required=True)
    p_fit.add_argument("--chi-points", type=int, default=32)
    p_fit.add_argument("--shots", type=int, default=None,
                       help="mean pair count per bin; enables Poisson noise")
    p_fit.add_argument("--plot")
    _add_common(p_fit)
    p_fit.set_defaults(func=_cmd_franson_fit)

    p_verify = sub.add_parser("verify", help="run the acceptance criteria")
    p_verify.add_argument("--only", help="substring filter on criterion id or slug")
    _add_common(p_verify, seed_default=verify.DEFAULT_SEED)
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NoConvergence, ZeroOverlapStep, AntipodalEndpoints) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (MixedPhaseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
