"""Command-line entry point.

Exit status is 0 on success, 2 for invalid input and 1 for runtime failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import export
from .config import load_config
from .errors import FormatError, ValidationError
from .experiments import POLICIES, STRATEGIES, welfare_table
from .metrics import critical_node_medians, gain, mean_cia, quality_report
from .network import NetworkGenSpec, dump_network, generate_scale_free
from .runner import run, run_paired

log = logging.getLogger("infoshare")


def cmd_generate(args: argparse.Namespace) -> None:
    doc = export.read_json(args.spec)
    if not isinstance(doc, dict):
        raise FormatError("generator spec must be a JSON object")
    try:
        spec = NetworkGenSpec(**doc)
    except TypeError as exc:
        raise ValidationError("spec", str(exc)) from None
    net = generate_scale_free(spec)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    dump_network(net, args.out)
    log.info("wrote %d-node network with %d edges to %s", net.n, len(net.edges()), args.out)


def cmd_run(args: argparse.Namespace) -> None:
    config = load_config(args.config)
    result = run(config)
    export.export_result(result, args.out)
    series = mean_cia(result)
    print(f"final MeanCIA ({config.policy_label}, {config.scenario.strategy.value}): {series[-1]:.6f}")


def cmd_compare(args: argparse.Namespace) -> None:
    config_a = load_config(args.config_a)
    config_b = load_config(args.config_b)
    result_a, result_b = run_paired([config_a, config_b])
    g = gain(result_a, result_b, args.epoch)
    report = quality_report(result_b, g)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    export.export_gain(g, args.epoch, out / "gain.json")
    export.export_quality(report, out / "quality.csv")
    export.export_quality_json(report, out / "quality.json")
    nongain, gained = critical_node_medians(report)
    series_a, series_b = mean_cia(result_a), mean_cia(result_b)
    export.write_json(
        {
            "epoch": args.epoch,
            "policy_a": config_a.policy_label,
            "policy_b": config_b.policy_label,
            "mean_cia_a": [float(x) for x in series_a],
            "mean_cia_b": [float(x) for x in series_b],
            "nodes_gaining": int(report.gained.sum()),
            "median_balance_nongain": None if nongain != nongain else nongain,
            "median_balance_gain": None if gained != gained else gained,
        },
        out / "summary.json",
    )
    print(f"{int(report.gained.sum())}/{g.size} nodes gain from {config_b.policy_label} over {config_a.policy_label} at epoch {args.epoch}")


def cmd_analyze(args: argparse.Namespace) -> None:
    values = export.load_epoch_values(args.results)
    series = values.mean(axis=2).mean(axis=0)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    export.export_mean_cia(series, out / "mean_cia.json")
    export.export_mean_cia_csv(series, out / "mean_cia.csv")
    print(f"{values.shape[0]} simulations x {values.shape[1]} epochs, final MeanCIA {series[-1]:.6f}")


def cmd_sweep(args: argparse.Namespace) -> None:
    base = load_config(args.config)
    rows = welfare_table(base, strategies=args.strategies or STRATEGIES, policies=POLICIES)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    export.write_json({"rows": rows}, out / "welfare.json")
    for r in rows:
        print(f"{r['strategy']:<11} {r['policy']:<14} {r['final_mean_cia']:.6f} {100 * r['improvement']:+9.1f}%")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infoshare", description="Attack propagation and information-sharing simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a scale-free dependency network")
    p.add_argument("--spec", required=True, help="JSON generator spec (n, attach_count, edge_weight, seed)")
    p.add_argument("--out", required=True, help="network JSON to write")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="run all simulations of a configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="directory for summary.json and epoch tables")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="paired run of two policies: gain and information quality")
    p.add_argument("--config-a", required=True, help="baseline (not-sharing) configuration")
    p.add_argument("--config-b", required=True, help="sharing configuration")
    p.add_argument("--epoch", required=True, type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("analyze", help="MeanCIA series from exported epoch tables")
    p.add_argument("--results", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="final MeanCIA for every attack scenario and sharing policy")
    p.add_argument("--config", required=True, help="base configuration; policy and strategy are overridden")
    p.add_argument("--strategy", dest="strategies", action="append", choices=STRATEGIES)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ValidationError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
