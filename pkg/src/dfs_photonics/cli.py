"""Command-line front end: one report per invocation, JSON or CSV."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .protocols.common import ChannelModel, ProtocolReport

SUBCOMMANDS = ("bb84", "chsh", "hardy", "dense-coding", "teleport", "bsm-table", "verify")


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _theta(text: str):
    if text.strip().lower() == "random":
        return "random"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"theta must be radians or 'random', got {text!r}")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("trials must be positive")
    return v


def _angles(n):
    def parse(text: str):
        parts = [float(x) for x in text.split(",")]
        if len(parts) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated angles")
        return tuple(parts)

    return parse


def _logical_input(text: str):
    if text.strip().lower() in ("haar", "haar_random"):
        return "haar_random"
    try:
        parts = [complex(x.replace(" ", "")) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad input state {text!r}")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("input must be 'haar' or 'alpha,beta'")
    return tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trials", type=_positive, default=100_000)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--theta", type=_theta, default="random",
                        help="frame rotation in radians, or 'random'")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default="-", help="output path, '-' for stdout")

    parser = argparse.ArgumentParser(prog="dfs-photonics", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("bb84", parents=[common], help="BB84 key distribution")
    p.add_argument("--channel", choices=("session", "photon"), default="session",
                   help="how a random theta is drawn")
    p.add_argument("--control", action="store_true", help="bare-polarization encoding baseline")

    p = sub.add_parser("chsh", parents=[common], help="CHSH test on a logical Phi+ pair")
    p.add_argument("--settings", type=_angles(4), help="a,a',b,b' in radians")
    p.add_argument("--channel", choices=("session", "photon"), default="session")

    p = sub.add_parser("hardy", parents=[common], help="Hardy test on a non-maximally entangled pair")
    p.add_argument("--epsilon", type=float, help="state angle; optimized when omitted")
    p.add_argument("--settings", type=_angles(4), help="a0,a1,b0,b1 in radians")
    p.add_argument("--channel", choices=("session", "photon"), default="session")

    p = sub.add_parser("dense-coding", parents=[common], help="three-symbol dense coding")
    p.add_argument("--channel", choices=("session", "photon"), default="session")

    p = sub.add_parser("teleport", parents=[common], help="logical-qubit teleportation")
    p.add_argument("--mode", choices=("unambiguous", "coincidence", "coincidence_basis"),
                   default="coincidence")
    p.add_argument("--input", type=_logical_input, default="haar_random",
                   help="'haar' or 'alpha,beta' (Python complex literals)")
    p.add_argument("--channel", choices=("session", "photon"), default="session")

    sub.add_parser("bsm-table", parents=[common], help="dump the Bell-analyzer event table")
    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    return parser


def _channel(args) -> ChannelModel:
    if args.theta != "random":
        return ChannelModel.fixed(args.theta)
    return ChannelModel("per_photon" if getattr(args, "channel", "session") == "photon" else "per_session")


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("output",)}
    if isinstance(cfg.get("input"), tuple):
        cfg["input"] = [str(x) for x in cfg["input"]]
    if isinstance(cfg.get("settings"), tuple):
        cfg["settings"] = list(cfg["settings"])
    return cfg


def _run(args) -> tuple[dict, int]:
    cmd = args.subcommand
    if cmd == "bsm-table":
        from .bsm import classifier_table

        rep = ProtocolReport("bsm_table", args.seed, 0)
        out = rep.to_dict()
        out["rows"] = classifier_table()
        return out, 0
    if cmd == "verify":
        from .verify import run_checks

        checks = run_checks(args.seed)
        rep = ProtocolReport("verify", args.seed, 0)
        out = rep.to_dict()
        out["checks"] = checks
        out["passed"] = all(c["passed"] for c in checks)
        return out, 0 if out["passed"] else 1
    if cmd == "bb84":
        from .protocols.bb84 import run_bb84

        enc = "polarization" if args.control else "logical"
        rep = run_bb84(args.trials, _channel(args), args.seed, encoding=enc)
    elif cmd == "chsh":
        from .protocols.nonlocality import STANDARD_CHSH_SETTINGS, run_chsh

        rep = run_chsh(args.trials, args.seed, _channel(args), args.settings or STANDARD_CHSH_SETTINGS)
    elif cmd == "hardy":
        from .protocols.nonlocality import run_hardy

        rep = run_hardy(args.trials, args.seed, _channel(args), args.epsilon, args.settings)
    elif cmd == "dense-coding":
        from .protocols.dense_coding import run_dense_coding

        rep = run_dense_coding(args.trials, args.seed, _channel(args))
    elif cmd == "teleport":
        from .protocols.teleport import run_teleportation

        rep = run_teleportation(args.mode, args.trials, args.seed, args.input, _channel(args))
    else:  # pragma: no cover - argparse rejects it first
        raise ValueError(cmd)
    return rep.to_dict(), 0


def _finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite(v) for v in obj]
    return obj


def flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    """Scalar leaves of a nested report as (dotted.key, value)."""
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(flatten(v, f"{prefix}{k}."))
        return out
    if isinstance(obj, list):
        out = []
        for i, v in enumerate(obj):
            out.extend(flatten(v, f"{prefix}{i}."))
        return out
    return [(prefix[:-1], obj)]


def render(report: dict, fmt: str) -> str:
    report = _finite(report)
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value"])
    for k, v in flatten(report):
        w.writerow([k, "" if v is None else (json.dumps(v) if isinstance(v, bool) else v)])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        report, code = _run(args)
    except ValueError as e:
        print(f"dfs-photonics: error: {e}", file=sys.stderr)
        return 2
    report["config"] = _config(args)
    text = render(report, args.format)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
