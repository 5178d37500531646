"""Command-line surface: construct, verify, bound, encode, corrupt, decode,
PDS generate/locate, and Monte-Carlo statistics.

Structured objects travel as JSON, sequences as the text format (one char per
symbol for q <= 10, comma-separated otherwise), statistics as CSV.  Seeds are
mandatory on randomized subcommands; identical flags, inputs, and seeds give
byte-identical outputs.  Exit codes: 0 success, 1 validation/decode failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import channel, codec, construct, core, pds
from .errors import DsskitError
from .rng import Seed
from .shuffle import sample_trace


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DsskitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsskit",
        description="Difference systems of sets: construction, verification, "
        "self-synchronizing codes, and phase detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="randomized DSS construction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--target-index", type=int, default=None)
    p.add_argument("--max-attempts", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None, help="DSS JSON path (default stdout)")
    p.add_argument("--dump-trace", default=None, help="write the shuffle trace JSON")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="verify a DSS and print its report")
    p.add_argument("--in", dest="path", required=True, help="DSS JSON path")
    p.add_argument("--method", choices=["auto", "naive", "fast"], default="auto")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bound", help="Levenshtein redundancy lower bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--rho", type=int, required=True)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("template", help="print the template sequence of a DSS")
    p.add_argument("--in", dest="path", required=True, help="DSS JSON path")
    p.set_defaults(func=_cmd_template)

    p = sub.add_parser("encode", help="encode a payload into one frame")
    p.add_argument("--code", required=True, help="sync-code config JSON path")
    p.add_argument("--payload", required=True, help="payload in sequence text format")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("corrupt", help="substitution noise on a symbol stream")
    p.add_argument("--mode", choices=["iid", "exact"], required=True)
    p.add_argument("--rate", type=float, default=None, help="iid error rate")
    p.add_argument("--budget", type=int, default=None, help="errors per window")
    p.add_argument("--window", type=int, default=None, help="window length (exact mode)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--in", dest="path", default=None, help="stream path (default stdin)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--positions", default=None, help="write error positions JSON")
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("decode", help="locate the frame in a window and decode it")
    p.add_argument("--code", required=True, help="sync-code config JSON path")
    p.add_argument("--window", required=True, help="window path, '-' for stdin")
    p.set_defaults(func=_cmd_decode)

    pds_parser = sub.add_parser("pds", help="phase detection sequences")
    pds_sub = pds_parser.add_subparsers(dest="pds_command", required=True)

    p = pds_sub.add_parser("gen", help="build a PDS from a sync code")
    p.add_argument("--code", required=True, help="sync-code config JSON path")
    p.add_argument("--frames", type=int, required=True)
    p.add_argument("--out", default=None, help="PDS JSON path (default stdout)")
    p.add_argument("--sequence-out", default=None, help="write the sequence text")
    p.set_defaults(func=_cmd_pds_gen)

    p = pds_sub.add_parser("locate", help="decode the phase of one window")
    p.add_argument("--pds", required=True, help="PDS JSON path")
    p.add_argument("--window", required=True, help="window path, '-' for stdin")
    p.set_defaults(func=_cmd_pds_locate)

    p = sub.add_parser("stats", help="Monte-Carlo index statistics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--csv", default=None, help="write per-trial rows to this path")
    p.set_defaults(func=_cmd_stats)

    return parser


def _cmd_construct(args) -> int:
    config = construct.ConstructionConfig(
        n=args.n, q=args.q, p=args.p,
        target_index=args.target_index,
        max_attempts=args.max_attempts,
        seed=Seed(args.seed),
    )
    if args.target_index is not None:
        outcome = construct.construct_with_target(config)
    else:
        outcome = construct.construct_once(config)
    _write_text(args.out, _json(outcome.dss.to_json_dict()))
    print(
        f"achieved_index={outcome.achieved_index} "
        f"attempts={outcome.attempts_used} "
        f"expectation={outcome.expectation}",
        file=sys.stderr,
    )
    if args.dump_trace:
        trace = sample_trace(args.n, outcome.trace_seed)
        _write_text(args.dump_trace, _json(trace.to_json_list()))
    return 0


def _cmd_verify(args) -> int:
    dss = core.Dss.from_json_dict(_load_json(args.path))
    rep = core.report(dss, method=args.method)
    print(_json(rep.to_json_dict()), end="")
    return 0


def _cmd_bound(args) -> int:
    print(core.levenshtein_bound(args.n, args.q, args.rho))
    return 0


def _cmd_template(args) -> int:
    dss = core.Dss.from_json_dict(_load_json(args.path))
    template = codec.template_from_dss(dss)
    print(codec.format_symbols(template.symbols, template.q))
    return 0


def _cmd_encode(args) -> int:
    code = codec.SyncCode.from_json_dict(_load_json(args.code))
    payload = codec.parse_symbols(args.payload, code.q)
    frame = codec.encode(code, payload)
    print(codec.format_symbols(frame, code.q))
    return 0


def _cmd_corrupt(args) -> int:
    if args.mode == "iid":
        if args.rate is None:
            raise ValueError("--rate is required in iid mode")
        spec = channel.NoiseSpec(mode="iid_rate", rate=args.rate, seed=Seed(args.seed))
    else:
        if args.budget is None or args.window is None:
            raise ValueError("--budget and --window are required in exact mode")
        spec = channel.NoiseSpec(
            mode="exact_per_window", budget=args.budget,
            window=args.window, seed=Seed(args.seed),
        )
    stream = codec.parse_symbols(_read_text(args.path), args.q)
    corrupted, positions = channel.corrupt(stream, spec, args.q)
    _write_text(args.out, codec.format_symbols(corrupted, args.q) + "\n")
    if args.positions:
        _write_text(args.positions, _json(positions))
    return 0


def _cmd_decode(args) -> int:
    code = codec.SyncCode.from_json_dict(_load_json(args.code))
    window = codec.parse_symbols(_read_text(args.window), code.q)
    estimate = codec.locate_frame(code, window)
    result = estimate.to_json_dict()
    if not estimate.confident:
        result["error"] = "alignment not confident"
        print(_json(result), end="")
        return 1
    frame = window[estimate.offset : estimate.offset + code.n]
    payload, corrections = codec.decode_payload(code, frame)
    result["payload"] = codec.format_symbols(payload, code.q)
    result["corrections"] = corrections
    print(_json(result), end="")
    return 0


def _cmd_pds_gen(args) -> int:
    code = codec.SyncCode.from_json_dict(_load_json(args.code))
    built = pds.build_pds(code, args.frames)
    _write_text(args.out, _json(built.to_json_dict()))
    if args.sequence_out:
        _write_text(
            args.sequence_out,
            codec.format_symbols(built.sequence, built.code.q) + "\n",
        )
    print(
        f"length={built.length} window={built.window_size} "
        f"claimed_min_distance={built.claimed_min_distance}",
        file=sys.stderr,
    )
    return 0


def _cmd_pds_locate(args) -> int:
    built = pds.Pds.from_json_dict(_load_json(args.pds))
    window = codec.parse_symbols(_read_text(args.window), built.code.q)
    estimate = pds.locate_phase(built, window)
    print(_json(estimate.to_json_dict()), end="")
    return 0


def _cmd_stats(args) -> int:
    stats = construct.min_index_statistics(
        args.n, args.q, args.p, args.trials, Seed(args.seed)
    )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            stats.to_csv(fh)
    print(_json(stats.to_json_dict()), end="")
    return 0


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _read_text(path) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write_text(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    sys.exit(main())
