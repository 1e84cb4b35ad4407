"""Command-line interface: ``blowup-embed <command> ...``.

Commands
    gen host|blowup|pattern   write a generated instance file
    regcheck                  regularity verdict for one cluster pair
    embed                     run the embedder, write a JSON report and a map
    verify                    re-check a persisted map
    sweep                     batch experiment from a JSON config
    cascade                   log10 values of the parameter cascade

Exit status is 0 on success, 1 when the algorithm or verifier reports a
failure, and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from . import graphio
from .bitset import to_list
from .embedder import EmbedConfig, compute_cascade, embed
from .embedder.cascade import NAMES, PRACTICAL_DEFAULTS
from .experiment import ExperimentConfig, run_experiment, verify_file
from .generators import HostRecipe, blowup, cluster_graph_from_spec, pattern_cycles, pattern_random_bounded, random_host
from .graph import PartitionedHost, Pattern
from .regularity import BipartitePair, check_regular_exact, check_regular_sampled, check_super_regular

log = logging.getLogger("blowup_embed")


def _override(text: str):
    key, sep, value = text.partition("=")
    if not sep or key not in NAMES:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE with NAME in {', '.join(NAMES)}")
    try:
        return key, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad value in {text!r}") from None


def _seed_range(text: str) -> List[int]:
    """'7' -> [7]; '0:50' -> 0..49; '1,4,9' -> those seeds."""
    if ":" in text:
        a, b = text.split(":", 1)
        return list(range(int(a), int(b)))
    return [int(s) for s in text.split(",")]


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="blowup-embed", description="Embed bounded-degree graphs into super-regular blow-ups.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gsub = gen.add_subparsers(dest="kind", required=True)
    g = gsub.add_parser("host", help="random (eps, d, delta)-style host")
    g.add_argument("--cluster-graph", default="triangle", help="triangle, edge, cycle:R, complete:R, path:R, edges:R:0-1,... (default: triangle)")
    g.add_argument("--N", type=int, required=True, help="vertices per cluster")
    g.add_argument("--d", type=float, required=True, help="edge probability per cross pair")
    g.add_argument("--delta", type=float, required=True, help="degree fraction of degraded vertices")
    g.add_argument("--low-degree-fraction", type=float, default=0.0, help="fraction of each class to degrade (default: 0)")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output", required=True)
    g = gsub.add_parser("blowup", help="complete blow-up R(N)")
    g.add_argument("--cluster-graph", default="triangle")
    g.add_argument("--N", type=int, required=True)
    g.add_argument("-o", "--output", required=True)
    g = gsub.add_parser("pattern", help="pattern graph with its cluster assignment")
    g.add_argument("--cluster-graph", default="triangle")
    g.add_argument("--N", type=int, required=True)
    g.add_argument("--shape", choices=("cycles", "random"), default="cycles", help="default: cycles")
    g.add_argument("--cycle", help="cluster sequence for cycles, e.g. 0,1,2 (default: 0..r-1)")
    g.add_argument("--delta-max", type=int, default=3, help="degree bound for random patterns (default: 3)")
    g.add_argument("--fill-fraction", type=float, default=1.0, help="class fill for random patterns (default: 1)")
    g.add_argument("--edges", type=int, help="target edge count for random patterns")
    g.add_argument("--seed", type=int, help="required for random patterns")
    g.add_argument("-o", "--output", required=True)

    g = sub.add_parser("regcheck", help="regularity check of one bipartite pair")
    g.add_argument("--pair", required=True, help="host file; a two-cluster host is the pair itself")
    g.add_argument("--clusters", type=int, nargs=2, default=(0, 1), metavar=("I", "J"),
                   help="which cluster pair of the host to check (default: 0 1)")
    g.add_argument("--eps", type=_fraction, required=True)
    g.add_argument("--exact", action="store_true", help="exhaustive search (at most 14 vertices per side)")
    g.add_argument("--trials", type=int, default=1000, help="sampled subset pairs (default: 1000)")
    g.add_argument("--super", dest="super_", action="store_true", help="also check density >= d and degrees >= delta N")
    g.add_argument("--d", type=_fraction, help="density bound for --super")
    g.add_argument("--delta", type=_fraction, help="degree fraction for --super")
    g.add_argument("--seed", type=int, help="required unless --exact")
    g.add_argument("--json", action="store_true", help="print a JSON record instead of text")

    g = sub.add_parser("embed", help="embed a pattern into a host")
    g.add_argument("--pattern", required=True)
    g.add_argument("--host", required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--config", help="JSON file with EmbedConfig fields; flags below take precedence")
    g.add_argument("--mode", choices=("practical", "paper"), help="default: practical")
    g.add_argument("--override", type=_override, action="append", default=[], metavar="NAME=VALUE",
                   help=f"cascade override (practical defaults: {', '.join(f'{k}={v}' for k, v in PRACTICAL_DEFAULTS.items())})")
    g.add_argument("--d", type=float, help="density for the cascade (default: smallest measured pair density)")
    g.add_argument("--delta", type=float, help="degree fraction for the cascade (default: measured)")
    g.add_argument("--Delta", type=int, help="degree bound (default: max degree of the pattern)")
    g.add_argument("--lenient", action="store_true", help="pad the pattern with isolated vertices up to N per class")
    g.add_argument("--exhaustive-selection", action="store_true")
    g.add_argument("--nominal-density", action="store_true", help="use d instead of measured pair densities")
    g.add_argument("--include-self", action="store_true", help="count y itself in the Case 1 proportion")
    g.add_argument("--check-rate", type=float, help="fraction of steps with full invariant checks (default: 0)")
    g.add_argument("--map-out", help="write 'map x v' lines here on success")
    g.add_argument("--report", help="write the JSON report here (default: stdout)")
    g.add_argument("--no-timings", action="store_true", help="omit timings from the report")

    g = sub.add_parser("verify", help="verify a persisted map")
    g.add_argument("--pattern", required=True)
    g.add_argument("--host", required=True)
    g.add_argument("--map", required=True)

    g = sub.add_parser("sweep", help="run a batch experiment")
    g.add_argument("--config", required=True, help="JSON file with ExperimentConfig fields")
    g.add_argument("--out", help="output directory (overrides out_dir)")
    g.add_argument("--seeds", type=_seed_range, help="e.g. 0:50 or 1,2,3 (overrides seeds)")
    g.add_argument("--workers", type=int)
    g.add_argument("--no-plots", action="store_true")

    g = sub.add_parser("cascade", help="print the parameter cascade in log10")
    g.add_argument("--d", type=_fraction, required=True)
    g.add_argument("--delta", type=_fraction, required=True)
    g.add_argument("--Delta", type=int, required=True)
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--json", action="store_true")
    return p


def _cmd_gen(args) -> int:
    R = cluster_graph_from_spec(args.cluster_graph)
    if args.kind == "host":
        obj = random_host(HostRecipe(R, args.N, args.d, args.delta, args.low_degree_fraction, seed=args.seed))
    elif args.kind == "blowup":
        obj = blowup(R, args.N)
    elif args.shape == "cycles":
        cycle = [int(c) for c in args.cycle.split(",")] if args.cycle else None
        obj = pattern_cycles(R, args.N, cycle)
    else:
        if args.seed is None:
            raise ValueError("--seed is required for random patterns")
        obj = pattern_random_bounded(R, args.N, args.delta_max, args.fill_fraction, args.seed, edge_target=args.edges)
    graphio.write(args.output, obj)
    print(f"wrote {args.output}")
    return 0


def _cmd_regcheck(args) -> int:
    host = graphio.read(args.pair)
    if not isinstance(host, PartitionedHost):
        raise ValueError(f"{args.pair} is not a host file")
    i, j = args.clusters
    if not host.cluster_graph.has_edge(i, j):
        raise ValueError(f"({i}, {j}) is not an edge of the cluster graph")
    if not args.exact and args.seed is None:
        raise ValueError("--seed is required for sampled checks")
    pair = BipartitePair.from_host(host, i, j)
    out: Dict[str, object] = {"clusters": [i, j], "eps": str(args.eps), "density": str(pair.density())}
    if args.super_:
        if args.d is None or args.delta is None:
            raise ValueError("--super needs --d and --delta")
        sv = check_super_regular(pair, args.eps, args.d, args.delta, args.trials, args.seed or 0)
        verdict = sv.regularity
        out.update(
            super_regular=sv.ok,
            density_ok=sv.density_ok,
            min_degree=[sv.min_deg_A, sv.min_deg_B],
            low_degree=[[i * host.N + a for a in sv.low_A], [j * host.N + b for b in sv.low_B]],
        )
    elif args.exact:
        verdict = check_regular_exact(pair, args.eps)
    else:
        verdict = check_regular_sampled(pair, args.eps, args.trials, args.seed)
    out["status"] = verdict.status
    out["trials"] = verdict.trials
    w = verdict.witness
    if w is not None:
        out["witness"] = {
            "X": [i * host.N + a for a in to_list(w.X)],
            "Y": [j * host.N + b for b in to_list(w.Y)],
            "d_XY": str(w.d_XY),
            "d_AB": str(w.d_AB),
        }
    if args.json:
        print(json.dumps(out, indent=1))
    else:
        line = f"{verdict.status} eps={args.eps} d(A,B)={pair.density()} trials={verdict.trials}"
        if args.super_:
            line += f" super_regular={sv.ok} min_degree={sv.min_deg_A},{sv.min_deg_B}"
        print(line)
        if w is not None:
            print("witness X: " + " ".join(map(str, out["witness"]["X"])))
            print("witness Y: " + " ".join(map(str, out["witness"]["Y"])))
            print(f"witness d(X,Y)={w.d_XY} deviation={w.deviation}")
    return 1 if verdict.irregular or out.get("super_regular") is False else 0


def _embed_config(args) -> EmbedConfig:
    data: Dict[str, object] = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        unknown = set(data) - set(EmbedConfig.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    data["seed"] = args.seed
    if args.mode:
        data["mode"] = args.mode
    for key in ("d", "delta", "Delta"):
        if getattr(args, key) is not None:
            data[key] = getattr(args, key)
    if args.override:
        data["overrides"] = {**data.get("overrides", {}), **dict(args.override)}
    if args.lenient:
        data["strict"] = False
    if args.exhaustive_selection:
        data["exhaustive_selection"] = True
    if args.nominal_density:
        data["measured_density"] = False
    if args.include_self:
        data["proportion_includes_self"] = True
    if args.check_rate is not None:
        data["invariant_check_rate"] = args.check_rate
    data["verbosity"] = args.verbose
    return EmbedConfig(**data)


def _cmd_embed(args) -> int:
    pattern = graphio.read(args.pattern)
    host = graphio.read(args.host)
    if not isinstance(pattern, Pattern) or not isinstance(host, PartitionedHost):
        raise ValueError("expected a pattern file and a host file")
    report = embed(pattern, host, _embed_config(args))
    text = report.to_json(timings=not args.no_timings)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if report.success and args.map_out:
        with open(args.map_out, "w") as fh:
            fh.write(graphio.dumps_map(report.phi))
    print(f"{report.outcome}{': ' + report.message if report.message else ''}", file=sys.stderr)
    return 0 if report.success else 1


def _cmd_sweep(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    if args.out:
        cfg.out_dir = args.out
    if args.seeds:
        cfg.seeds = args.seeds
    if args.workers:
        cfg.workers = args.workers
    if args.no_plots:
        cfg.plots = False

    def progress(row):
        log.info("%s seed %s: %s", row["point"], row["seed"], row["outcome"])

    result = run_experiment(cfg, progress)
    for s in result.summary:
        print(f"{s['point']}  N={s['N']} d={s['d']} delta={s['delta']} Delta={s['Delta']} "
              f"{s['overrides'] or '-'}  {s['successes']}/{s['runs']}")
    for name, path in sorted(result.paths.items()):
        print(f"{name}: {path}")
    return 0


def _cmd_cascade(args) -> int:
    c = compute_cascade(args.d, args.delta, args.Delta, args.r)
    if args.json:
        print(json.dumps(c.to_dict(), indent=1))
        return 0
    print(f"log10 base = {c.to_dict()['log10_base']:.9f}")
    for name in NAMES:
        print(f"log10 {name:<5} = {c.log10(name):.9f}")
    return 0


COMMANDS = {
    "gen": _cmd_gen,
    "regcheck": _cmd_regcheck,
    "embed": _cmd_embed,
    "verify": lambda a: verify_file(a.pattern, a.host, a.map),
    "sweep": _cmd_sweep,
    "cascade": _cmd_cascade,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
