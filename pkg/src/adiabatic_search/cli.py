"""Command-line entry point: ``adiabatic-search {sweep,demo,validate}``."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import load_config
from .errors import ConfigError
from .sweep import PRESETS, run_failure_demo, run_sweep


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    out = args.out or cfg.out
    if out is None:
        raise ConfigError("out: no output path given (use --out or set 'out' in the config)")
    rows = run_sweep(cfg, out=out, workers=args.workers)
    failed = [r for r in rows if not r.ok]
    print(f"wrote {len(rows)} rows to {out}; {len(failed)} failed")
    for r in failed:
        print(f"  x_min={r.x_min} T={r.T:g}: {r.status}")
    return 1 if failed else 0


def _cmd_demo(args) -> int:
    report, _, status = run_failure_demo(args.preset, out=args.out, workers=args.workers)
    print(report)
    if args.out:
        print(f"rows written to {args.out}")
    return status


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    cells = len(cfg.x_min or (None,)) * len(cfg.T)
    print(f"ok: dim={cfg.dim}, H_I={cfg.hi_kind.value}, {cells} sweep cells")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adiabatic-search",
        description="Adiabatic minimization over a truncated number basis and its deviation bound.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run an (x_min, T) sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("demo", help="run a canned scenario")
    p.add_argument("--preset", required=True, help=f"one of: {', '.join(sorted(PRESETS))}")
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_demo)

    p = sub.add_parser("validate", help="check a config file and report every problem")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print("config error:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  {problem}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
