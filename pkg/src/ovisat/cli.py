"""Command-line front end.

Commands: synth, ingest, screen, train, evaluate, predict. All but
synth are driven by a TOML config (--config); --seed and --out override
the config's values. Exit codes: 0 ok, 1 usage/config, 2 data, 3 model.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, pipeline, synth
from .config import load_config
from .errors import ConfigError, DataError, ModelError


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are 1
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ovisat", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p):
        p.add_argument("--config", required=True, help="path to the TOML run config")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", help="override the output directory")

    p = sub.add_parser("synth", help="generate a synthetic input directory")
    p.add_argument("--out", required=True, help="directory for the generated files")
    p.add_argument("--weeks", type=int, default=209)
    p.add_argument("--drivers", type=int, default=5)
    p.add_argument("--autocorr", type=float, default=0.7)
    p.add_argument("--response", choices=["linear", "threshold"], default="threshold")
    p.add_argument("--noise-sd", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", default="2012-W31", help="first ISO week, YYYY-Www")

    for name, help_text in [
        ("ingest", "parse inputs and write the weekly dataset"),
        ("screen", "rank candidate features by correlation significance"),
        ("train", "fit the configured models on the training split"),
        ("evaluate", "score trained models; write report and plots"),
    ]:
        p = sub.add_parser(name, help=help_text)
        add_config_flags(p)

    p = sub.add_parser("predict", help="apply a saved model to the dataset")
    add_config_flags(p)
    p.add_argument("--model", required=True, help="path to a saved model file")
    p.add_argument(
        "--weeks", help="inclusive label range, e.g. 2016-W01:2016-W30"
    )
    return parser


def _cmd_synth(args) -> int:
    spec = synth.SyntheticSpec(
        weeks=args.weeks,
        drivers=args.drivers,
        autocorrelation=args.autocorr,
        response=args.response,
        noise_sd=args.noise_sd,
        seed=args.seed,
        start=args.start,
    )
    data = synth.generate(spec)
    paths = synth.write_inputs(data, args.out)
    config_path = synth.write_config(data, args.out)
    for name, path in paths.items():
        print(f"wrote {path}")
    print(f"wrote {config_path}")
    return 0


def _cmd_ingest(cfg) -> int:
    dataset_path, prov_path = pipeline.run_ingest(cfg)
    print(f"wrote {dataset_path}")
    print(f"wrote {prov_path}")
    return 0


def _cmd_screen(cfg) -> int:
    result, path = pipeline.run_screen(cfg)
    print(f"wrote {path}")
    print("selected features:")
    for c in result.candidates:
        if c.selected:
            print(f"  {c.spec}  r={c.r:+.3f}  p={c.p:.2e}")
    return 0


def _cmd_train(cfg) -> int:
    written, failures = pipeline.run_train(cfg)
    for name, path in written:
        print(f"wrote {path}")
    for name, exc in failures:
        print(f"model {name} failed: {exc}", file=sys.stderr)
    if failures:
        raise ModelError(f"{len(failures)} model(s) failed to fit")
    return 0


def _cmd_evaluate(cfg) -> int:
    pipeline.run_evaluate(cfg)
    with open(pipeline._out(cfg, pipeline.REPORT_TXT)) as fh:
        print(fh.read(), end="")
    print(f"report and plots under {cfg.out_dir}")
    return 0


def _cmd_predict(cfg, args) -> int:
    path = pipeline.run_predict(cfg, args.model, weeks=args.weeks)
    print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "synth":
            return _cmd_synth(args)
        cfg = load_config(args.config, seed=args.seed, out_dir=args.out)
        if args.command == "ingest":
            return _cmd_ingest(cfg)
        if args.command == "screen":
            return _cmd_screen(cfg)
        if args.command == "train":
            return _cmd_train(cfg)
        if args.command == "evaluate":
            return _cmd_evaluate(cfg)
        if args.command == "predict":
            return _cmd_predict(cfg, args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"ovisat: config error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"ovisat: data error: {exc}", file=sys.stderr)
        return 2
    except ModelError as exc:
        print(f"ovisat: model error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"ovisat: i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
