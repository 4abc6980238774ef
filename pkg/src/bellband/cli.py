"""Command-line interface: every analysis as a reproducible batch command.

All angle flags are radians unless ``--degrees`` is given.  Structured
reports are JSON with floats printed to 17 significant digits; sequence
files are plain CSV with cells exactly ``+1`` or ``-1``.  Exit codes:
0 success, 1 operational failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import __version__
from .band import band_map, feasible_band, lp_band
from .chsh import boole_check, chsh_value, correlations_from_angles, polytope_member
from .core import AngleTriple, empirical_correlation
from .errors import BellbandError
from .f4 import F4Candidate, contradiction_report, inequality_scan
from .sampling import sample_lhv_pairs, sample_octet, sample_singlet_pairs
from .band import feasible_distribution


def _format_number(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return repr(x)


def dumps(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  "{k}": {dumps(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v, indent) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_number(float(obj))
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj)}")


def _report(command: str, config: dict, result: dict) -> str:
    return dumps(
        {
            "tool": "bellband",
            "version": __version__,
            "command": command,
            "config": config,
            "result": result,
        }
    )


def _angle(args, value: float) -> float:
    return math.radians(value) if args.degrees else value


def _triple(args) -> AngleTriple:
    return AngleTriple(
        _angle(args, args.theta1), _angle(args, args.theta2), _angle(args, args.theta3)
    )


def _candidate(args) -> F4Candidate:
    if args.candidate == "grid":
        if not args.candidate_file:
            raise BellbandError("--candidate grid requires --candidate-file")
        with open(args.candidate_file, "r", encoding="utf-8") as fh:
            return F4Candidate.from_json(fh.read())
    return F4Candidate.builtin(args.candidate)


def _write_sequence_csv(path: str, columns: dict) -> None:
    names = list(columns)
    data = np.column_stack([columns[n] for n in names])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(names) + "\n")
        np.savetxt(fh, data, fmt="%+d", delimiter=",")


def _read_sequence_csv(path: str) -> dict:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        names = next(reader)
        rows = [[int(cell) for cell in row] for row in reader if row]
    data = np.array(rows, dtype=np.int8)
    return {name: data[:, k] for k, name in enumerate(names)}


def _add_seed_out(parser, out_required=True):
    parser.add_argument("--seed", type=int, default=0, help="64-bit unsigned RNG seed")
    parser.add_argument("--out", required=out_required, help="output CSV path")


def _add_triple(parser):
    parser.add_argument("--theta1", type=float, required=True)
    parser.add_argument("--theta2", type=float, required=True)
    parser.add_argument("--theta3", type=float, required=True)


def _add_candidate(parser):
    parser.add_argument(
        "--candidate",
        choices=("locality", "product", "product-diagonal", "grid"),
        required=True,
    )
    parser.add_argument("--candidate-file", help="grid candidate JSON document")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellband",
        description="CHSH band and correlation-regularity toolkit",
    )
    parser.add_argument("--version", action="version", version=f"bellband {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample singlet outcome pairs")
    p.add_argument("--theta", type=float, required=True, help="relative detector angle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degrees", action="store_true")
    _add_seed_out(p)

    p = sub.add_parser("lhv", help="sample the local hidden-variable baseline")
    p.add_argument("--theta-a", type=float, required=True)
    p.add_argument("--theta-b", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degrees", action="store_true")
    _add_seed_out(p)

    p = sub.add_parser("octet", help="sample the identified counterfactual quadruple")
    _add_triple(p)
    p.add_argument("--f", type=float, default=None, help="fourth moment (default: band midpoint)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degrees", action="store_true")
    _add_seed_out(p)

    p = sub.add_parser("boole", help="check both Boole inequalities on a sequence CSV")
    p.add_argument("--in", dest="infile", required=True, help="octet CSV (a_oo,b_oo,a_bo,b_ob)")

    p = sub.add_parser("chsh", help="CHSH value of a candidate at a configuration")
    _add_triple(p)
    _add_candidate(p)
    p.add_argument("--degrees", action="store_true")

    p = sub.add_parser("band", help="feasible band endpoints at a configuration")
    _add_triple(p)
    p.add_argument("--degrees", action="store_true")

    p = sub.add_parser("band-map", help="band endpoints over a uniform grid, as CSV")
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("lp-band", help="LP oracle extremes for the fourth moment")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--c3", type=float, required=True)

    p = sub.add_parser("analyze", help="full regularity report for a candidate")
    _add_candidate(p)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("scan", help="band and diagonal violations over a grid")
    _add_candidate(p)
    p.add_argument("--resolution", type=int, required=True)

    return parser


def _cmd_simulate(args) -> dict:
    theta = _angle(args, args.theta)
    a, b = sample_singlet_pairs(theta, args.n, args.seed)
    _write_sequence_csv(args.out, {"a": a, "b": b})
    return {
        "out": args.out,
        "empirical_correlation": empirical_correlation(a, b),
        "expected_correlation": -math.cos(theta),
    }


def _cmd_lhv(args) -> dict:
    ta, tb = _angle(args, args.theta_a), _angle(args, args.theta_b)
    a, b = sample_lhv_pairs(ta, tb, args.n, args.seed)
    gap = abs(ta - tb)
    expected = -1.0 + 2.0 * gap / math.pi if gap <= math.pi else None
    return_doc = {
        "out": args.out,
        "empirical_correlation": empirical_correlation(a, b),
    }
    if expected is not None:
        return_doc["expected_correlation"] = expected
    _write_sequence_csv(args.out, {"a": a, "b": b})
    return return_doc


def _cmd_octet(args) -> dict:
    theta = _triple(args)
    interval = feasible_band(theta)
    f = interval.midpoint if args.f is None else args.f
    c1 = -math.cos(theta.theta1)
    c2 = -math.cos(theta.theta2)
    c3 = -math.cos(theta.theta3)
    dist = feasible_distribution(c1, c2, c3, f)
    octet = sample_octet(dist, args.n, args.seed)
    _write_sequence_csv(
        args.out,
        {"a_oo": octet.a_oo, "b_oo": octet.b_oo, "a_bo": octet.a_bo, "b_ob": octet.b_ob},
    )
    return {
        "out": args.out,
        "targets": {"c1": c1, "c2": c2, "c3": c3, "f": f},
        "empirical": {
            "c1": empirical_correlation(octet.a_oo, octet.b_oo),
            "c2": empirical_correlation(octet.a_bo, octet.b_oo),
            "c3": empirical_correlation(octet.a_oo, octet.b_ob),
            "f": empirical_correlation(octet.a_bo, octet.b_ob),
        },
    }


def _cmd_boole(args) -> dict:
    cols = _read_sequence_csv(args.infile)
    required = ("a_oo", "b_oo", "a_bo", "b_ob")
    missing = [name for name in required if name not in cols]
    if missing:
        raise BellbandError(f"input CSV is missing columns {missing}")
    result = boole_check(cols["a_oo"], cols["b_oo"], cols["a_bo"], cols["b_ob"])
    return {"lhs1": result.lhs1, "lhs2": result.lhs2, "holds": result.holds}


def _cmd_chsh(args) -> dict:
    theta = _triple(args)
    candidate = _candidate(args)
    vector = correlations_from_angles(theta, candidate)
    value = chsh_value(vector)
    return {
        "correlations": [vector.c1, vector.c2, vector.c3, vector.c4],
        "chsh_value": value,
        "violated": not polytope_member(vector),
    }


def _cmd_band(args) -> dict:
    interval = feasible_band(_triple(args))
    return {"lo": interval.lo, "hi": interval.hi, "width": interval.width}


def _cmd_band_map(args) -> dict:
    rows = band_map(args.resolution)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write("theta1,theta2,theta3,lo,hi,width\n")
        for row in rows:
            fh.write(",".join(format(x, ".17g") for x in row) + "\n")
    return {"out": args.out, "rows": int(rows.shape[0])}


def _cmd_lp_band(args) -> dict:
    result = lp_band(args.c1, args.c2, args.c3)
    return {
        "min": result.min_value,
        "max": result.max_value,
        "witness_min": list(result.witness_min.p),
        "witness_max": list(result.witness_max.p),
    }


def _cmd_analyze(args) -> dict:
    report = contradiction_report(_candidate(args), seed=args.seed)
    return report.to_dict()


def _cmd_scan(args) -> dict:
    violations = inequality_scan(_candidate(args), args.resolution)
    return {
        "resolution": args.resolution,
        "violation_count": len(violations),
        "violations": [
            {
                "theta": list(v.theta),
                "kind": v.kind,
                "value": v.value,
                "lo": v.lo,
                "hi": v.hi,
            }
            for v in violations
        ],
    }


_COMMANDS = {
    "simulate": _cmd_simulate,
    "lhv": _cmd_lhv,
    "octet": _cmd_octet,
    "boole": _cmd_boole,
    "chsh": _cmd_chsh,
    "band": _cmd_band,
    "band-map": _cmd_band_map,
    "lp-band": _cmd_lp_band,
    "analyze": _cmd_analyze,
    "scan": _cmd_scan,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {
        k: v for k, v in sorted(vars(args).items()) if k != "command" and v is not None
    }
    try:
        result = _COMMANDS[args.command](args)
    except (BellbandError, OSError) as exc:
        print(f"bellband: error: {exc}", file=sys.stderr)
        return 1
    print(_report(args.command, config, result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
