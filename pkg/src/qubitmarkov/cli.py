"""Command-line entry point: ``qubitmarkov {fig2,fig3,fig4,diagnose,scan-cp}``.

Every subcommand accepts ``--config PATH``, ``--out PATH``, ``--tol X``,
``--steps N`` and ``--<key> <value>`` overrides for any config key. The
summary is printed to stdout as JSON when ``--out`` is given; otherwise the
CSV itself goes to stdout.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .config import build_config
from .errors import ConfigError, QuadratureError, SingularMapError, StepSizeUnderflowError
from .scenarios import RUNNERS

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def _parser():
    parser = argparse.ArgumentParser(prog="qubitmarkov", description="Qubit dynamical-map scenarios and diagnostics.")
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in RUNNERS:
        p = sub.add_parser(name, help=f"run the {name} scenario")
        p.add_argument("--config", help="flat 'key = value' config file")
        p.add_argument("--out", help="CSV output path (summary JSON then goes to stdout)")
        p.add_argument("--tol", help="verdict tolerance")
        p.add_argument("--steps", help="number of time steps (n_t for scan-cp)")
    return parser


def _overrides(scenario, args, extra):
    pairs = []
    if args.tol is not None:
        pairs.append(("tol", args.tol))
    if args.steps is not None:
        pairs.append(("n_t" if scenario == "scan-cp" else "n_steps", args.steps))
    i = 0
    while i < len(extra):
        token = extra[i]
        if not token.startswith("--"):
            raise ConfigError(f"unexpected argument {token!r}")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        elif i + 1 < len(extra):
            value = extra[i + 1]
            i += 2
        else:
            raise ConfigError(f"missing value for {token}")
        pairs.append((key.replace("-", "_"), value))
    return pairs


def _companion_path(out, scenario, cfg):
    if scenario == "fig4" and cfg.get("region_out"):
        return cfg["region_out"]
    stem, ext = os.path.splitext(out)
    return f"{stem}_cpregion{ext or '.csv'}"


def main(argv=None):
    args, extra = _parser().parse_known_args(argv)
    scenario = args.scenario
    try:
        text = None
        if args.config:
            try:
                with open(args.config) as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        cfg = build_config(scenario, text, _overrides(scenario, args, extra), out=args.out,
                           source=args.config or "<config>")
        result = RUNNERS[scenario](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (StepSizeUnderflowError, SingularMapError, QuadratureError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    if cfg.out:
        result.emission.write(cfg.out)
        written = {"csv": cfg.out}
        for name, emission in result.companions.items():
            path = _companion_path(cfg.out, scenario, cfg)
            emission.write(path)
            written[name] = path
        print(json.dumps({**result.summary, "files": written}, indent=2, sort_keys=True))
    else:
        sys.stdout.write(result.emission.to_text())
        if result.companions and cfg.get("region_out"):
            result.companions["region"].write(cfg["region_out"])
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
