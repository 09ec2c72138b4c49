"""
Command-line front-end.

    group <spec>                          order, m, Q8 x C2^l test, set counts
    verify <spec>                         structural facts of the canonical B
    classify <spec> --set <hex>           one census record
    census <spec> (--exhaustive | --sample N) --out <jsonl>
    trend <spec>... --sample N --out <csv>

Exit status: 0 on success, 1 when a containment, bound or structural fact
fails, 2 on usage errors (bad spec, bad flags, cap refused).
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence
import argparse
import json
import logging
import sys

from pydantic import BaseModel, ValidationError, model_validator

from ..census.census import CensusRunner, RecordSink, run_trend, write_summary_csv
from ..config.census_config import load_config, validate_config
from ..core import monitoring
from ..core.canonical import build_canonical_B, verify_canonical_facts
from ..core.cayley import ConnectionSet, count_inverse_closed
from ..core.config import get_settings
from ..core.dicyclic import element_order_le2_count, is_q8_x_c2l
from ..core.exceptions import (
    BoundViolation,
    CapExceededError,
    ContainmentViolation,
    DomainError,
    StructuralError,
)
from ..core.group_spec import parse_group_spec

logger = logging.getLogger(__name__)

__version__ = "0.1.0"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class RunMode(str, Enum):
    GROUP = "group"
    VERIFY_FACTS = "verify-facts"
    CLASSIFY = "classify"
    EXHAUSTIVE = "exhaustive"
    SAMPLE = "sample"
    TREND = "trend"


class RunConfig(BaseModel):
    """Validated invocation"""
    specs: List[str]
    mode: RunMode
    trials: Optional[int] = None
    seed: int = 0
    directed: bool = False
    set_hex: Optional[str] = None
    out: Optional[str] = None
    summary_csv: Optional[str] = None
    jobs: int = 1
    config_path: Optional[str] = None
    max_degree: Optional[int] = None
    max_sets: Optional[int] = None
    metrics_out: Optional[str] = None

    @model_validator(mode="after")
    def _mode_requirements(self) -> "RunConfig":
        if not self.specs:
            raise ValueError("at least one group spec is required")
        if self.mode in (RunMode.SAMPLE, RunMode.TREND) and (self.trials is None or self.trials < 1):
            raise ValueError("sampling needs --sample N with N >= 1")
        if self.mode is RunMode.CLASSIFY and not self.set_hex:
            raise ValueError("classify needs --set <hex>")
        if self.mode in (RunMode.EXHAUSTIVE, RunMode.SAMPLE, RunMode.TREND) and not self.out:
            raise ValueError("census and trend need --out <path>")
        if self.jobs < 1:
            raise ValueError("--jobs must be at least 1")
        return self

    def library_config(self) -> Dict[str, Any]:
        config = load_config(self.config_path)
        config['census']['jobs'] = self.jobs
        if self.max_degree is not None:
            config['search']['max_degree'] = self.max_degree
        if self.max_sets is not None:
            config['enumeration']['max_sets'] = self.max_sets
            config['enumeration']['directed_max_sets'] = self.max_sets
        if not validate_config(config):
            raise StructuralError("configuration failed validation")
        return config


def _print_json(payload: Any) -> None:
    print(json.dumps(payload, indent=2, sort_keys=False))


def cmd_group(run: RunConfig, config: Dict[str, Any]) -> int:
    G = parse_group_spec(run.specs[0])
    _print_json({
        "group": G.spec,
        "n": G.n,
        "m": element_order_le2_count(G),
        "q8e": is_q8_x_c2l(G),
        "inverse_closed_count": count_inverse_closed(G),
        "subset_count": 2 ** G.n,
    })
    return EXIT_OK


def cmd_verify(run: RunConfig, config: Dict[str, Any]) -> int:
    G = parse_group_spec(run.specs[0])
    report = verify_canonical_facts(G, build_canonical_B(G), config)
    print(report.model_dump_json(indent=2))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_classify(run: RunConfig, config: Dict[str, Any]) -> int:
    G = parse_group_spec(run.specs[0])
    S = ConnectionSet.from_hex(G.n, run.set_hex)
    record = CensusRunner(G, run.directed, config).classify(S)
    print(record.model_dump_json(indent=2))
    return EXIT_OK


def cmd_census(run: RunConfig, config: Dict[str, Any]) -> int:
    G = parse_group_spec(run.specs[0])
    runner = CensusRunner(G, run.directed, config)
    with RecordSink(run.out) as sink:
        if run.mode is RunMode.EXHAUSTIVE:
            summary, _ = runner.run_exhaustive(sink)
        else:
            summary, _ = runner.run_sampled(run.trials, run.seed, sink)
    csv_path = run.summary_csv or str(Path(run.out).with_suffix(".summary.csv"))
    write_summary_csv([summary], csv_path)
    print(summary.model_dump_json(indent=2))
    if summary.bound_satisfied is False:
        logger.error(f"{G.spec}: exceptional count {summary.exceptional} exceeds the bound")
        return EXIT_FAILED
    return EXIT_OK


def cmd_trend(run: RunConfig, config: Dict[str, Any]) -> int:
    groups = [parse_group_spec(spec) for spec in run.specs]
    frame = run_trend(groups, run.trials, run.seed, directed=run.directed, config=config)
    frame.to_csv(run.out, index=False)
    print(frame.to_string(index=False))
    return EXIT_OK


COMMANDS = {
    RunMode.GROUP: cmd_group,
    RunMode.VERIFY_FACTS: cmd_verify,
    RunMode.CLASSIFY: cmd_classify,
    RunMode.EXHAUSTIVE: cmd_census,
    RunMode.SAMPLE: cmd_census,
    RunMode.TREND: cmd_trend,
}


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", dest="config_path", help="JSON file overriding the default caps")
    common.add_argument("--metrics-out", help="write Prometheus text metrics to this file")
    common.add_argument("--max-degree", type=int, help="automorphism search cap (default 256)")
    common.add_argument("--max-sets", type=int, help="exhaustive enumeration cap (default 65536)")

    parser = argparse.ArgumentParser(
        prog="dicyclic-census",
        description="Cayley graphs on generalised dicyclic groups: automorphism censuses",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_group = subparsers.add_parser("group", parents=[common], help="describe a group")
    p_group.add_argument("spec", help="dic:<A>:y=<coords> or q8e:<l>")

    p_verify = subparsers.add_parser("verify", parents=[common], help="check structural facts of B")
    p_verify.add_argument("spec")

    p_classify = subparsers.add_parser("classify", parents=[common], help="classify one connection set")
    p_classify.add_argument("spec")
    p_classify.add_argument("--set", dest="set_hex", required=True, help="hex bitmask, bit i = element i")
    p_classify.add_argument("--directed", action="store_true")

    p_census = subparsers.add_parser("census", parents=[common], help="exhaustive or sampled census")
    p_census.add_argument("spec")
    how = p_census.add_mutually_exclusive_group(required=True)
    how.add_argument("--exhaustive", action="store_true")
    how.add_argument("--sample", dest="trials", type=int, metavar="N")
    p_census.add_argument("--seed", type=int, default=0)
    p_census.add_argument("--directed", action="store_true")
    p_census.add_argument("--jobs", type=int, default=settings.CENSUS_JOBS)
    p_census.add_argument("--out", required=True, help="records, one JSON object per line")
    p_census.add_argument("--summary-csv", help="summary CSV (default: <out>.summary.csv)")

    p_trend = subparsers.add_parser("trend", parents=[common], help="sampled proportion against n")
    p_trend.add_argument("specs", nargs="+")
    p_trend.add_argument("--sample", dest="trials", type=int, required=True, metavar="N")
    p_trend.add_argument("--seed", type=int, default=0)
    p_trend.add_argument("--directed", action="store_true")
    p_trend.add_argument("--jobs", type=int, default=settings.CENSUS_JOBS)
    p_trend.add_argument("--out", required=True, help="trend CSV")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    if args.command == "census":
        mode = RunMode.EXHAUSTIVE if args.exhaustive else RunMode.SAMPLE
    else:
        mode = {
            "group": RunMode.GROUP,
            "verify": RunMode.VERIFY_FACTS,
            "classify": RunMode.CLASSIFY,
            "trend": RunMode.TREND,
        }[args.command]
    specs = args.specs if args.command == "trend" else [args.spec]
    return RunConfig(
        specs=specs,
        mode=mode,
        trials=getattr(args, "trials", None),
        seed=getattr(args, "seed", 0),
        directed=getattr(args, "directed", False),
        set_hex=getattr(args, "set_hex", None),
        out=getattr(args, "out", None),
        summary_csv=getattr(args, "summary_csv", None),
        jobs=getattr(args, "jobs", 1),
        config_path=args.config_path,
        max_degree=args.max_degree,
        max_sets=args.max_sets,
        metrics_out=args.metrics_out,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        run = _run_config(args)
        config = run.library_config()
        if settings.METRICS_ENABLED:
            monitoring.init_metrics(__version__)
        status = COMMANDS[run.mode](run, config)
    except ValidationError as exc:
        print(f"error: {exc.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_USAGE
    except (StructuralError, DomainError, CapExceededError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ContainmentViolation, BoundViolation) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAILED

    if settings.METRICS_ENABLED:
        monitoring.write_metrics(run.metrics_out or settings.METRICS_PATH)
    return status
