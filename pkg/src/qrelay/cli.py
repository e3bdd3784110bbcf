"""Command-line front end.

Three subcommands: ``simulate`` (one sampled trajectory by default),
``enumerate`` (every measurement branch), and ``verify`` (claim-level check
suites). All emit a single JSON report — to stdout or ``--output`` — that
embeds the resolved channel coefficients so runs are self-describing, plus
a short human summary on stderr. Exit codes: 0 success (and, for verify,
all claims passed), 1 failed claim, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from datetime import datetime, timezone

from .bell import as_rng
from .channels import (
    ChannelValidationError,
    Endpoint,
    load_channel,
    resolve_preset,
    spec_to_json,
)
from .protocol import MAX_EXHAUSTIVE_PARTIES, InputQubit, random_input, run_end_to_end
from .statevec import CapacityError
from .verify import run_suite

# Split "aRe,aIm+bRe,bIm" on the pair separator without biting into
# exponents like 1e+05.
_PAIR_SPLIT = re.compile(r"(?<![eE])\+")

_PRESET_PREFIX = "preset:"


def parse_input_spec(text: str, rng=None) -> InputQubit:
    """Parse the --input flag: 'random' or two comma-separated re,im pairs
    joined by '+'."""
    if text == "random":
        if rng is None:
            raise ValueError("--input random requires --seed")
        return random_input(rng)
    parts = _PAIR_SPLIT.split(text)
    if len(parts) != 2:
        raise ValueError(f"input: expected 'aRe,aIm+bRe,bIm' or 'random', got {text!r}")
    pair = []
    for part in parts:
        nums = part.split(",")
        if len(nums) != 2:
            raise ValueError(f"input: {part!r} is not a 're,im' pair")
        pair.append(complex(float(nums[0]), float(nums[1])))
    return InputQubit(pair[0], pair[1])


def resolve_channel_arg(arg: str, endpoint: Endpoint):
    """Turn a --dist/--conc value ('preset:NAME' or a JSON path) into a
    channel for the given side."""
    if arg.startswith(_PRESET_PREFIX):
        return resolve_preset(arg[len(_PRESET_PREFIX):], endpoint)
    spec = load_channel(arg)
    if spec.endpoint is not endpoint:
        raise ChannelValidationError(
            f"endpoint: {arg} is a '{spec.endpoint.value}'-side channel, expected '{endpoint.value}'"
        )
    return spec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrelay",
        description="Simulate and verify relay protocols that distribute a qubit "
        "over many parties and concentrate it back onto one receiver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p, modes, default_mode):
        p.add_argument("--dist", required=True,
                       help="sender-side channel: JSON path or preset:NAME")
        p.add_argument("--conc", required=True,
                       help="receiver-side channel: JSON path or preset:NAME")
        p.add_argument("--input", required=True,
                       help="input qubit as 'aRe,aIm+bRe,bIm', or 'random' (needs --seed)")
        p.add_argument("--mode", choices=modes, default=default_mode)
        p.add_argument("--seed", type=int, help="RNG seed (required for sampling)")
        p.add_argument("--output", help="write the JSON report to this path instead of stdout")

    sim = sub.add_parser("simulate", help="run the protocol, sampling one trajectory by default")
    add_run_flags(sim, ("sampled", "exhaustive"), "sampled")
    enum = sub.add_parser("enumerate", help="enumerate every measurement branch exhaustively")
    add_run_flags(enum, ("exhaustive",), "exhaustive")

    ver = sub.add_parser("verify", help="run claim-level verification suites")
    ver.add_argument("--suite", default="all",
                     choices=("all", "faithfulness", "smolin", "clone", "even-n"))
    ver.add_argument("--seed", type=int, default=1)
    ver.add_argument("--n", type=int, help="restrict suite checks to one party count")
    ver.add_argument("--tolerance", type=float, help="override the faithfulness tolerance")
    ver.add_argument("--output", help="write the JSON report to this path instead of stdout")
    return parser


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def _run_protocol(args) -> int:
    if args.mode == "sampled" and args.seed is None:
        raise ValueError("sampled mode requires --seed")
    rng = as_rng(args.seed) if args.seed is not None else None
    dist = resolve_channel_arg(args.dist, Endpoint.SENDER_FIRST)
    conc = resolve_channel_arg(args.conc, Endpoint.RECEIVER_LAST)
    if args.mode == "exhaustive" and dist.n_parties > MAX_EXHAUSTIVE_PARTIES:
        raise ValueError(
            f"exhaustive mode supports at most {MAX_EXHAUSTIVE_PARTIES} parties, "
            f"got {dist.n_parties}"
        )
    inp = parse_input_spec(args.input, rng)
    reports = run_end_to_end(inp, dist, conc, mode=args.mode, seed=rng)

    total = sum(r.joint_prob for r in reports)
    fids = [r.fidelity for r in reports if r.fidelity is not None]
    report = {
        "config": {
            "command": args.command,
            "mode": args.mode,
            "seed": args.seed,
            "input": {
                "alpha": [inp.alpha.real, inp.alpha.imag],
                "beta": [inp.beta.real, inp.beta.imag],
            },
            "dist_channel": spec_to_json(dist),
            "conc_channel": spec_to_json(conc),
            "n_parties": dist.n_parties,
            "faithfulness_guaranteed": dist.faithfulness_guaranteed
            and conc.faithfulness_guaranteed,
        },
        "branches": [r.to_json() for r in reports],
        "summary": {
            "total_prob": total,
            "min_fidelity": min(fids) if fids else None,
            "verdicts": [],
        },
        "timestamp": _timestamp(),
    }
    _emit(report, args.output)
    line = f"{len(reports)} branch(es); total probability {total:.9f}"
    if fids:
        line += f"; min fidelity {min(fids):.9f}"
    print(line, file=sys.stderr)
    return 0


def _run_verify(args) -> int:
    verdicts = run_suite(args.suite, seed=args.seed, n=args.n, tolerance=args.tolerance)
    report = {
        "config": {
            "command": "verify",
            "suite": args.suite,
            "seed": args.seed,
            "n": args.n,
            "tolerance": args.tolerance,
        },
        "branches": [],
        "summary": {
            "total_prob": None,
            "min_fidelity": None,
            "verdicts": [v.to_json() for v in verdicts],
        },
        "timestamp": _timestamp(),
    }
    _emit(report, args.output)
    for v in verdicts:
        status = "PASS" if v.passed else "FAIL"
        print(
            f"{status} {v.claim_id} (worst deviation {v.worst_deviation:.3e}, "
            f"tolerance {v.tolerance:.1e})",
            file=sys.stderr,
        )
    return 0 if all(v.passed for v in verdicts) else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return _run_verify(args)
        return _run_protocol(args)
    except (ChannelValidationError, CapacityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
