"""Command-line front end.

Subcommands: ``state``, ``ppt``, ``ccnr``, ``certify``, ``sweep``. Complex
numbers are written ``re,im`` on the command line and ``[re, im]`` in JSON.
Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from boundent.errors import BoundEntError, NegativeRadicand, NoConvergence, NoStabilization
from boundent.linalg import hermitian_eig
from boundent.ppt import (
    PPT_TOL,
    criterion_report,
    partial_transpose,
    spectrum_report,
)
from boundent.range_criterion import certify
from boundent.states import DIMS, FamilyParams, check_density, family_state

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


class InputError(Exception):
    pass


# -- encoding -----------------------------------------------------------------


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(pair) -> complex:
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
        raise InputError(f"complex entries must be [re, im] number pairs, got {pair!r}")
    return complex(pair[0], pair[1])


def encode_params(params: FamilyParams) -> dict:
    return {
        "a": encode_complex(params.a),
        "b": encode_complex(params.b),
        "c": encode_complex(params.c),
        "d": encode_complex(params.d),
        "eps": params.eps,
    }


def decode_params(obj: dict) -> FamilyParams:
    try:
        return FamilyParams(*(decode_complex(obj[k]) for k in "abcd"), obj["eps"])
    except KeyError as exc:
        raise InputError(f"params missing field {exc}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None


def state_to_json(rho, params: FamilyParams | None = None) -> dict:
    rho = np.asarray(rho, dtype=complex)
    out = {
        "dims": list(DIMS),
        "matrix": [[encode_complex(z) for z in row] for row in rho],
    }
    if params is not None:
        out["params"] = encode_params(params)
    return out


def state_from_json(obj: dict) -> tuple[np.ndarray, FamilyParams | None]:
    """Parse a state file, applying the Hermitian/trace/PSD checks."""
    if list(obj.get("dims", [])) != list(DIMS):
        raise InputError(f"dims must be {list(DIMS)}, got {obj.get('dims')!r}")
    rows = obj.get("matrix")
    if not isinstance(rows, list) or len(rows) != 16 or any(
        not isinstance(r, list) or len(r) != 16 for r in rows
    ):
        raise InputError("matrix must be a 16x16 array of [re, im] pairs")
    rho = np.array([[decode_complex(z) for z in row] for row in rows], dtype=complex)
    try:
        check_density(rho)
    except ValueError as exc:
        raise InputError(f"invalid density matrix: {exc}") from None
    params = decode_params(obj["params"]) if obj.get("params") is not None else None
    return rho, params


def load_state(path: str) -> tuple[np.ndarray, FamilyParams | None]:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read state file {path!r}: {exc}") from None
    return state_from_json(obj)


# -- helpers ------------------------------------------------------------------


def params_from_args(args, eps=None) -> FamilyParams:
    eps = getattr(args, "eps", None) if eps is None else eps
    if eps is None:
        raise InputError("--eps is required unless --in is given")
    amps = [args.a, args.b, args.c, args.d]
    try:
        if args.normalize:
            return FamilyParams.normalized(*amps, eps)
        return FamilyParams(*amps, eps)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def resolve_state(args) -> tuple[np.ndarray, FamilyParams | None]:
    if getattr(args, "infile", None):
        return load_state(args.infile)
    params = params_from_args(args)
    return family_state(params), params


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def ppt_payload(rho, params: FamilyParams | None, tol: float) -> dict:
    w = hermitian_eig(partial_transpose(rho))[0]
    numeric_min = float(w[0])
    out = {
        "numeric_eigenvalues": [float(x) for x in w],
        "numeric_min_eig": numeric_min,
    }
    if params is not None:
        report = spectrum_report(params, tol=tol)
        out.update(report.to_dict())
        out["listed"] = [[v, m] for v, m in report.listed]
    else:
        out["min_eig"] = numeric_min
        out["is_ppt"] = numeric_min >= -tol
        out["threshold"] = None
    return out


# -- commands -----------------------------------------------------------------


def cmd_state(args) -> int:
    params = params_from_args(args)
    emit(dump(state_to_json(family_state(params), params)), args.out)
    return EXIT_OK


def cmd_ppt(args) -> int:
    rho, params = resolve_state(args)
    emit(dump(ppt_payload(rho, params, args.tol)), args.out)
    return EXIT_OK


def cmd_ccnr(args) -> int:
    rho, _ = resolve_state(args)
    emit(dump(criterion_report(rho).to_dict()), args.out)
    return EXIT_OK


def certificate_payload(params: FamilyParams, seed: int, tol: float, sampling: str) -> dict:
    cert = certify(params, seed=seed, tol=tol, sampling=sampling)
    rho = family_state(params)
    out = {"schema_version": SCHEMA_VERSION, "params": encode_params(params)}
    out.update(cert.to_dict())
    out["spectrum"] = ppt_payload(rho, params, PPT_TOL)
    out["criteria"] = criterion_report(rho).to_dict()
    return out


def cmd_certify(args) -> int:
    if args.infile:
        _, params = load_state(args.infile)
        if params is None:
            raise InputError("certify needs family parameters; the state file has none")
    else:
        params = params_from_args(args)
    emit(dump(certificate_payload(params, args.seed, args.tol, args.sampling)), args.out)
    return EXIT_OK


SWEEP_COLUMNS = ("eps", "min_pt_eig", "pt_trace_norm", "ccnr_trace_norm", "verdict")


def sweep_grid(start: float, end: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise InputError(f"steps must be >= 1, got {steps}")
    if not (0.0 <= start <= 1.0 and 0.0 <= end <= 1.0):
        raise InputError("sweep bounds must lie in [0, 1]")
    if end < start:
        raise InputError("sweep end must not be below start")
    if steps == 1:
        return np.array([start])
    return np.round(np.linspace(start, end, steps), 12)


def sweep_rows(params: FamilyParams, grid, seed: int, tol: float, sampling: str):
    for eps in grid:
        p = params.with_eps(float(eps))
        rho = family_state(p)
        crit = criterion_report(rho)
        cert = certify(p, seed=seed, tol=tol, sampling=sampling)
        yield {
            "eps": float(eps),
            "min_pt_eig": crit.min_pt_eig,
            "pt_trace_norm": crit.pt_trace_norm,
            "ccnr_trace_norm": crit.ccnr_trace_norm,
            "verdict": cert.verdict.value,
        }


def format_row(row: dict) -> list[str]:
    return [row[k] if isinstance(row[k], str) else f"{row[k]:.12g}" for k in SWEEP_COLUMNS]


def cmd_sweep(args) -> int:
    grid = sweep_grid(args.start, args.end, args.steps)
    params = params_from_args(args, eps=0.0)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in sweep_rows(params, grid, args.seed, args.tol, args.sampling):
        writer.writerow(format_row(row))
    emit(buf.getvalue(), args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boundent",
        description="PPT, realignment and range-criterion checks for a 4x4 family of states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def family_flags(p, eps_required=False, with_eps=True):
        if with_eps:
            p.add_argument("--eps", type=float, required=eps_required,
                           help="mixing weight in [0, 1]")
        for name in "abcd":
            p.add_argument(f"--{name}", type=parse_complex, default=complex(0.5),
                           help=f"amplitude {name} as 're' or 're,im' (default 0.5)")
        p.add_argument("--normalize", action="store_true",
                       help="rescale a, b, c, d to unit norm instead of rejecting them")

    def common(p):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--tol", type=float, default=1e-10, help="rank/PPT tolerance")

    p = sub.add_parser("state", help="write a family state as JSON")
    family_flags(p, eps_required=True)
    common(p)
    p.set_defaults(func=cmd_state)

    for name, func, text in (
        ("ppt", cmd_ppt, "partial-transpose spectrum report"),
        ("ccnr", cmd_ccnr, "trace norms of the partial transpose and realignment"),
        ("certify", cmd_certify, "range-criterion certificate"),
    ):
        p = sub.add_parser(name, help=text)
        family_flags(p)
        p.add_argument("--in", dest="infile", help="read the state from a JSON state file")
        common(p)
        if name == "certify":
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--sampling", choices=("complex", "positive_real"), default="complex")
        p.set_defaults(func=func)

    p = sub.add_parser("sweep", help="CSV of criteria over an eps grid")
    p.add_argument("start", type=float)
    p.add_argument("end", type=float)
    p.add_argument("steps", type=int)
    family_flags(p, with_eps=False)
    common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sampling", choices=("complex", "positive_real"), default="complex")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NoConvergence, NoStabilization, NegativeRadicand) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (BoundEntError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
