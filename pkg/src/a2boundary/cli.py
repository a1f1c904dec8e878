"""Command line entry point: ``a2boundary <verb> [options]``."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .pipeline import ConfigError, PipelineConfig, export_matrices, load_config, run_pipeline
from .report import emit_report, exit_code

VERB_STAGES = {
    "build": ("build", "links"),
    "matrices": ("matrices",),
    "verify": ("build", "links", "alphabets", "matrices", "verify"),
    "ktheory": ("matrices", "ktheory", "arithmetic"),
    "report": None,
    "oracle-snf": ("oracle",),
}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="a2boundary", description=__doc__)
    p.add_argument("verb", choices=list(VERB_STAGES))
    p.add_argument("--preset", help="named group datum (default paper-q2)")
    p.add_argument("--config", help="JSON config file; a file with a 'generators' key is read as a group datum")
    p.add_argument("--radius", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--format", choices=("markdown", "json"), default="markdown",
                   help="what to print on stdout")
    p.add_argument("-q", "--quiet", action="store_true")
    return p


def config_from_args(args) -> PipelineConfig:
    cfg = PipelineConfig()
    if args.config:
        import json
        from pathlib import Path

        doc = json.loads(Path(args.config).read_text())
        if "generators" in doc:
            cfg = dataclasses.replace(cfg, preset=None, datum_path=args.config)
        else:
            cfg = load_config(args.config)
    over = {}
    if args.preset:
        over.update(preset=args.preset, datum_path=None)
    if args.radius is not None:
        over["radius"] = args.radius
    if args.out:
        over["out_dir"] = args.out
    if args.workers is not None:
        over["workers"] = args.workers
    if args.no_cache:
        over["cache"] = False
    return dataclasses.replace(cfg, **over)


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    log = (lambda m: None) if args.quiet else (lambda m: print(f"[a2boundary] {m}", file=sys.stderr))
    try:
        cfg = config_from_args(args)
        if args.verb == "matrices":
            for path in export_matrices(cfg, log=log):
                print(path)
            return 0
        stages = VERB_STAGES[args.verb]
        rep = run_pipeline(cfg, log=log, **({} if stages is None else {"stages": stages}))
    except ConfigError as exc:
        print(f"a2boundary: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError) as exc:
        print(f"a2boundary: {exc}", file=sys.stderr)
        return 1
    print(emit_report(rep, args.format))
    return exit_code(rep)


if __name__ == "__main__":
    sys.exit(main())
