"""Command line entry point.

Every command prints one JSON object to stdout and exits 0.  Invalid input
exits 2 with ``{"error": <code>, "detail": <text>}`` on stderr; anything
else exits 1.  Each report starts with a ``params`` object holding every
effective setting, defaults included.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .blocks import DEFAULT_ORACLE_CAP, BlockInstance, oracle_min_spread, partition, partition_scaled
from .construct2d import (
    ConstructionParams,
    build_theorem3,
    claim1_transversal,
    component_labels,
    jump_sequence,
    trivial_transversal,
)
from .errors import BlocklineError, ValidationError
from .geom2d import MEMBERSHIP_TOL, DensityProbe, NormKind
from .optimize2d import SearchConfig, assignment_search, facts_diagnostics, local_search, min_triangle_diameter
from .serialize import (
    dumps,
    num_in,
    num_out,
    seq1d_from_json,
    seq2d_from_json,
    seq2d_to_json,
    transversal1d_to_json,
    transversal2d_from_json,
    transversal2d_to_json,
    vec_out,
)
from .transversal1d import DEFAULT_EPS, solve, solve_exact_finite


class InputError(ValidationError):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def _read_values(path: str) -> list[float]:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            raw = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise InputError(f"{path} is not valid JSON: {e}") from None
        if not isinstance(raw, list):
            raise InputError("JSON input must be an array of numbers")
        return [num_in(v) for v in raw]
    out = []
    for lineno, line in enumerate(stripped.splitlines(), start=1):
        line = line.strip().rstrip(",")
        if not line or line.startswith("#"):
            continue
        try:
            out.append(float(line))
        except ValueError:
            raise InputError(f"line {lineno}: {line!r} is not a number") from None
    return out


def _probe(args) -> DensityProbe:
    if args.density == "analytic":
        return DensityProbe("analytic")
    return DensityProbe("sampled", tuple(args.window), args.h)


def _probe_params(args) -> dict:
    p = {"density": args.density}
    if args.density == "sampled":
        p["window"] = list(args.window)
        p["h"] = args.h
    return p


def _load_seq2d(args):
    return seq2d_from_json(_read_json(args.seq), _probe(args), args.norm)


# -- commands ---------------------------------------------------------------


def cmd_blocks(args) -> dict:
    values = _read_values(args.input)
    params = {"n": args.n, "input": args.input, "oracle": args.oracle, "scale": args.scale, "cap": args.cap}
    if args.scale:
        part, scale = partition_scaled(values, args.n)
        out = {"params": params, **part.to_dict(), "scale": scale}
    else:
        inst = BlockInstance(tuple(values), args.n)
        out = {"params": params, **partition(inst).to_dict()}
    if args.oracle:
        inst = BlockInstance(tuple(v / out.get("scale", 1.0) for v in values), args.n)
        best, witness = oracle_min_spread(inst, args.cap)
        out["oracle"] = {"min_spread": best, "boundaries": list(witness.boundaries)}
    return out


def cmd_oracle(args) -> dict:
    values = _read_values(args.input)
    best, witness = oracle_min_spread(BlockInstance(tuple(values), args.n), args.cap)
    return {"params": {"n": args.n, "input": args.input, "cap": args.cap}, "min_spread": best, **witness.to_dict()}


def cmd_transversal1d(args) -> dict:
    seq = seq1d_from_json(_read_json(args.input))
    params = {"input": args.input, "eps": args.eps}
    interior_finite = all(a.is_finite for a in seq.sets[1:-1])
    if not seq.dense or (args.exact and interior_finite):
        params["solver"] = "exact_finite"
        t = solve_exact_finite(seq)
    else:
        params["solver"] = "bisection"
        t = solve(seq, args.eps)
    return {"params": params, **transversal1d_to_json(t)}


def cmd_generate(args) -> dict:
    seq = build_theorem3(ConstructionParams(args.m))
    params = {"m": args.m, "n": seq.n, "delta": ConstructionParams(args.m).delta, "density": "analytic"}
    body = seq2d_to_json(seq)
    if args.out:
        Path(args.out).write_text(dumps(body) + "\n")
        return {"params": params, "out": args.out, "sets": len(seq.sets)}
    return {"params": params, **body}


def cmd_claim1(args) -> dict:
    params = ConstructionParams(args.m)
    seq = build_theorem3(params, probe=None)
    t = claim1_transversal(params, seq)
    return {
        "params": {"m": args.m, "n": seq.n, "norm": args.norm},
        **transversal2d_to_json(t, args.norm),
        "jumps": [list(j) for j in jump_sequence(seq, t)],
    }


def cmd_trivial(args) -> dict:
    seq = _load_seq2d(args)
    t = trivial_transversal(seq, args.norm)
    return {"params": {"seq": args.seq, "norm": args.norm, **_probe_params(args)}, **transversal2d_to_json(t, args.norm)}


def _jumps_or_none(seq, t):
    return [list(j) for j in jump_sequence(seq, t)] if seq.labeled else None


def cmd_eval(args) -> dict:
    seq = _load_seq2d(args)
    t = transversal2d_from_json(_read_json(args.transversal))
    if len(t.points) != len(seq.sets):
        raise ValidationError(f"transversal has {len(t.points)} points for {len(seq.sets)} sets")
    outside = [i for i, (a, p) in enumerate(zip(seq.sets, t.points)) if not a.contains(p, MEMBERSHIP_TOL)]
    out = {"params": {"seq": args.seq, "transversal": args.transversal, "norm": args.norm, **_probe_params(args)}}
    out.update(transversal2d_to_json(t, args.norm))
    out["members"] = not outside
    out["outside"] = outside
    out["jumps"] = _jumps_or_none(seq, t) if not outside else None
    return out


def cmd_optimize(args) -> dict:
    seq = _load_seq2d(args)
    params = {
        "seq": args.seq,
        "norm": args.norm,
        "restarts": args.restarts,
        "iters": args.iters,
        "seed": args.seed,
        "init": args.init,
        "threads": args.threads,
        "pattern": args.pattern,
        **_probe_params(args),
    }
    if args.pattern:
        labels = args.pattern.split(",")
        res = assignment_search(seq, labels, args.norm, iterations=args.iters)
    else:
        cfg = SearchConfig(args.restarts, args.iters, args.seed, args.init, args.threads)
        res = local_search(seq, args.norm, cfg)
    t = res.transversal
    out = {"params": params, "best_diameter": num_out(res.diameter), "restart": res.restart}
    out["transversal"] = [vec_out(p) for p in t.points]
    out["jumps"] = _jumps_or_none(seq, t)
    if seq.labeled:
        out["labels"] = component_labels(seq, t)
        out["warnings"] = facts_diagnostics(seq, t)
    return out


def cmd_triangle(args) -> dict:
    diam, z1, zj, zn = min_triangle_diameter(args.delta)
    return {"params": {"delta": args.delta}, "diameter": num_out(diam), "z1": vec_out(z1), "zj": vec_out(zj), "zn": vec_out(zn)}


# -- parser -----------------------------------------------------------------


def _density_flags(p):
    p.add_argument("--density", choices=("sampled", "analytic"), default="sampled", help="density check for interior sets (default: sampled)")
    p.add_argument("--window", type=float, nargs=4, default=[-5.0, 5.0, -5.0, 5.0], metavar=("XMIN", "XMAX", "YMIN", "YMAX"), help="sampling window (default: -5 5 -5 5)")
    p.add_argument("--h", type=float, default=0.05, help="sampling step (default: 0.05)")


def _norm_flag(p):
    p.add_argument("--norm", choices=[k.value for k in NormKind], default="euclidean", help="norm (default: euclidean)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blockline", description="Balanced block partitions and transversals of set sequences.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("blocks", help="partition a sequence of numbers in [0, 1] into n contiguous blocks")
    p.add_argument("--n", type=int, required=True, help="number of blocks")
    p.add_argument("--input", required=True, help="CSV (one value per line) or JSON array; '-' for stdin")
    p.add_argument("--oracle", action="store_true", help="also report the exhaustive minimum spread")
    p.add_argument("--scale", action="store_true", help="divide by the largest value first (for values outside [0, 1])")
    p.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP, help=f"oracle enumeration cap (default: {DEFAULT_ORACLE_CAP})")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("oracle", help="exhaustive minimum-spread partition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP, help=f"enumeration cap (default: {DEFAULT_ORACLE_CAP})")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("transversal1d", help="transversal of a 1D sequence with spread at most 1 (+eps)")
    p.add_argument("--input", required=True, help="sequence JSON")
    p.add_argument("--eps", type=float, default=DEFAULT_EPS, help=f"bisection tolerance (default: {DEFAULT_EPS})")
    p.add_argument("--exact", action="store_true", help="use the exact solver when all interior sets are finite")
    p.set_defaults(func=cmd_transversal1d)

    g = sub.add_parser("grid2d", help="planar sequences").add_subparsers(dest="action", required=True)

    p = g.add_parser("generate", help="emit the lower-bound construction for n = 2m + 1")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out", help="write the sequence here instead of stdout")
    p.set_defaults(func=cmd_generate)

    p = g.add_parser("claim1", help="two-arm transversal of the construction")
    p.add_argument("--m", type=int, required=True)
    _norm_flag(p)
    p.set_defaults(func=cmd_claim1)

    p = g.add_parser("trivial", help="nearest points to i*s/n")
    p.add_argument("--seq", required=True)
    _norm_flag(p)
    _density_flags(p)
    p.set_defaults(func=cmd_trivial)

    p = g.add_parser("eval", help="diameter, membership and jumps of a given transversal")
    p.add_argument("--seq", required=True)
    p.add_argument("--transversal", required=True, help="JSON with 'points' or a bare list of [x, y]")
    _norm_flag(p)
    _density_flags(p)
    p.set_defaults(func=cmd_eval)

    p = g.add_parser("optimize", help="search for a low-diameter transversal (best found, not certified)")
    p.add_argument("--seq", required=True)
    _norm_flag(p)
    p.add_argument("--restarts", type=int, default=20, help="independent restarts (default: 20)")
    p.add_argument("--iters", type=int, default=2000, help="moves per restart (default: 2000)")
    p.add_argument("--seed", type=int, default=0, help="PCG64 seed (default: 0)")
    p.add_argument("--init", choices=("trivial", "claim1", "random"), default="random", help="starting transversal (default: random)")
    p.add_argument("--threads", type=int, default=1, help="worker threads, capped by BLOCKLINE_THREADS (default: 1)")
    p.add_argument("--pattern", help="comma-separated component labels for indices 1..n-1; runs the convex assignment search instead")
    _density_flags(p)
    p.set_defaults(func=cmd_optimize)

    p = g.add_parser("triangle", help="minimum triangle diameter under the closing constraints")
    p.add_argument("--delta", type=float, default=0.0, help="slack delta in [0, 1) (default: 0)")
    p.set_defaults(func=cmd_triangle)
    return ap


def _fail(code: str, detail: str, status: int) -> int:
    sys.stderr.write(dumps({"error": code, "detail": detail}) + "\n")
    return status


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except ValidationError as e:
        return _fail(e.code, str(e), 2)
    except BlocklineError as e:
        return _fail(e.code, str(e), 1)
    except Exception as e:  # noqa: BLE001 - reported as an internal failure
        return _fail("InternalError", f"{type(e).__name__}: {e}", 1)
    sys.stdout.write(dumps(out) + "\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
