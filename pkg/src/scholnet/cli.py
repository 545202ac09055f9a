"""Command-line front door: harvest, ingest, build, the five queries, serve.

Exit codes: 0 success, 1 runtime failure (bad files, unknown nodes), 2 usage
errors (argparse convention).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import builder, harvest as harvest_mod, records, workflows
from .graph import EdgeLabel, GraphError, MultiGraph, NodeId, NodeKind
from .walker import WalkerConfig

DEFAULT_DELTA = 0.15
DEFAULT_THETA = 0.05
DEFAULT_WALKERS = 10000
DEFAULT_TOP = 20
DEFAULT_MASTER_SEED = 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scholnet",
        description=(
            "Build a multi-relational author/paper/journal network from "
            "bibliographic metadata and rank nodes with energy-decay random walkers."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_harvest = sub.add_parser("harvest", help="harvest records over OAI-PMH")
    p_harvest.add_argument("--base-url", required=True)
    p_harvest.add_argument("--set", dest="set_spec", default=None)
    p_harvest.add_argument("--format", required=True, help="metadataPrefix")
    p_harvest.add_argument("--out", required=True, help="directory for record XML files")

    p_ingest = sub.add_parser("ingest", help="parse record XML files into a corpus")
    p_ingest.add_argument("--records", required=True, help="directory of record XML files")
    p_ingest.add_argument("--out", required=True, help="corpus JSONL path")

    p_build = sub.add_parser("build", help="assemble the graph from a corpus")
    p_build.add_argument("--corpus", required=True)
    p_build.add_argument(
        "--paper-layer",
        choices=builder.PAPER_LAYER_MODES,
        default="citation",
    )
    p_build.add_argument("--out", required=True, help="graph TSV path")
    p_build.add_argument(
        "--no-stubs",
        action="store_true",
        help="drop unresolved-reference stub papers from the graph",
    )
    p_build.add_argument("--min-cocite", type=float, default=0.0)

    p_query = sub.add_parser("query", help="run one of the five ranking queries")
    p_query.add_argument("workflow", choices=workflows.WORKFLOW_NAMES)
    p_query.add_argument("--graph", required=True)
    p_query.add_argument(
        "--seed",
        action="append",
        default=[],
        metavar="KIND:KEY",
        help="stimulus paper (repeatable)",
    )
    p_query.add_argument(
        "--author",
        action="append",
        default=[],
        metavar="KEY",
        help="author key (repeatable); role depends on the workflow",
    )
    p_query.add_argument("--journal", default=None, metavar="KEY")
    p_query.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p_query.add_argument("--theta", type=float, default=DEFAULT_THETA)
    p_query.add_argument("--walkers", type=int, default=DEFAULT_WALKERS)
    p_query.add_argument("--seed-rng", type=int, default=DEFAULT_MASTER_SEED)
    p_query.add_argument("--top", type=int, default=DEFAULT_TOP)
    p_query.add_argument(
        "--label-mult",
        action="append",
        default=[],
        metavar="LABEL=X",
        help="traversal multiplier for an edge label (repeatable)",
    )
    p_query.add_argument("--json", action="store_true", dest="as_json")

    p_serve = sub.add_parser("serve", help="serve the HTTP API over a graph")
    p_serve.add_argument("--graph", required=True)
    p_serve.add_argument("--port", type=int, required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--session-capacity", type=int, default=1024)

    return parser


def _load_graph(path: str) -> MultiGraph:
    with open(path, "r", encoding="utf-8") as fp:
        return MultiGraph.load(fp)


def _cmd_harvest(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    counter = 0

    def sink(record_xml: str) -> None:
        nonlocal counter
        counter += 1
        (out_dir / f"record-{counter:06d}.xml").write_text(record_xml, encoding="utf-8")

    try:
        summary = harvest_mod.harvest(
            args.base_url, args.format, sink, set_spec=args.set_spec
        )
    except harvest_mod.HarvestError as exc:
        print(f"harvest failed: {exc}", file=sys.stderr)
        return 1
    print(
        f"harvested {summary.records} records in {summary.batches} batches "
        f"({summary.errors} errors) to {out_dir}"
    )
    return 0


def _cmd_ingest(args: argparse.Namespace) -> int:
    src = Path(args.records)
    if not src.is_dir():
        print(f"not a directory: {src}", file=sys.stderr)
        return 1
    parsed: list[records.PaperRecord] = []
    skipped = 0
    for path in sorted(src.iterdir()):
        if not path.is_file():
            continue
        try:
            parsed.append(records.parse_record(path.read_text(encoding="utf-8")))
        except records.RecordError as exc:
            skipped += 1
            print(f"skipping {path.name}: {exc}", file=sys.stderr)
    try:
        with open(args.out, "w", encoding="utf-8") as fp:
            records.write_corpus(parsed, fp)
    except OSError as exc:
        print(f"cannot write corpus: {exc}", file=sys.stderr)
        return 1
    print(f"ingested {len(parsed)} records ({skipped} skipped) to {args.out}")
    return 0


def _cmd_build(args: argparse.Namespace) -> int:
    try:
        with open(args.corpus, "r", encoding="utf-8") as fp:
            corpus = records.read_corpus(fp)
    except OSError as exc:
        print(f"cannot read corpus: {exc}", file=sys.stderr)
        return 1
    except records.RecordError as exc:
        print(f"bad corpus: {exc}", file=sys.stderr)
        return 1
    cfg = builder.BuildConfig(
        paper_layer_mode=args.paper_layer,
        include_stub_papers_as_nodes=not args.no_stubs,
        min_cocite_weight=args.min_cocite,
    )
    try:
        g = builder.assemble(corpus, cfg)
    except builder.BuildError as exc:
        print(f"build failed: {exc}", file=sys.stderr)
        return 1
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fp:
            g.save(fp)
    except OSError as exc:
        print(f"cannot write graph: {exc}", file=sys.stderr)
        return 1
    print(f"built graph: {g.node_count} nodes, {g.edge_count} edges -> {args.out}")
    return 0


def _parse_label_multipliers(
    parser: argparse.ArgumentParser, pairs: list[str]
) -> dict[EdgeLabel, float]:
    multipliers: dict[EdgeLabel, float] = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            parser.error(f"--label-mult needs LABEL=X, got {pair!r}")
        try:
            label = EdgeLabel(name)
        except ValueError:
            parser.error(f"unknown edge label {name!r}")
        try:
            multipliers[label] = float(value)
        except ValueError:
            parser.error(f"bad multiplier {value!r} for label {name}")
    return multipliers


def _build_query_spec(
    parser: argparse.ArgumentParser, args: argparse.Namespace
) -> workflows.QuerySpec:
    seeds: list[NodeId] = []
    for ref in args.seed:
        try:
            node = NodeId.parse(ref)
        except ValueError as exc:
            parser.error(str(exc))
        if node.kind is not NodeKind.PAPER:
            parser.error(f"--seed expects paper nodes, got {ref!r}")
        seeds.append(node)
    authors = [NodeId(NodeKind.AUTHOR, key) for key in args.author]
    journals = [NodeId(NodeKind.JOURNAL, args.journal)] if args.journal else []

    wf = args.workflow
    if wf in ("references", "collaborators"):
        if not seeds:
            parser.error(f"{wf} query requires at least one --seed paper:KEY")
        if authors:
            parser.error(f"{wf} query does not accept --author")
    if wf == "journal" and not seeds and not authors:
        parser.error("journal query requires --seed and/or --author")
    if wf == "reviewers":
        if not seeds:
            parser.error("reviewers query requires --seed paper:KEY (referenced papers)")
        if not authors:
            parser.error("reviewers query requires --author KEY (submitting authors)")
    if wf == "readers" and not seeds and not authors:
        parser.error("readers query requires --seed and/or --author")
    if wf != "reviewers" and journals:
        parser.error(f"{wf} query does not accept --journal")

    try:
        cfg = WalkerConfig(
            delta=args.delta,
            theta=args.theta,
            walkers_per_stimulus=args.walkers,
            master_seed=args.seed_rng,
            label_multipliers=_parse_label_multipliers(parser, args.label_mult),
        )
    except ValueError as exc:
        parser.error(str(exc))
    if args.top < 1:
        parser.error("--top must be >= 1")

    return workflows.QuerySpec(
        kind=wf,
        positive_papers=seeds,
        positive_authors=authors if wf in ("journal", "readers") else [],
        positive_journals=journals,
        negative_authors=authors if wf == "reviewers" else [],
        cfg=cfg,
        top=args.top,
    )


def _result_rows(result: workflows.QueryResult, g: MultiGraph) -> list[dict]:
    rows = []
    for rank, (node, energy) in enumerate(result.entries, start=1):
        row = {
            "rank": rank,
            "node": str(node),
            "display": g.display(node),
            "energy": energy,
        }
        if result.shares is not None:
            row["share"] = result.shares[rank - 1]
        rows.append(row)
    return rows


def _cmd_query(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    spec = _build_query_spec(parser, args)
    try:
        g = _load_graph(args.graph)
    except OSError as exc:
        print(f"cannot read graph: {exc}", file=sys.stderr)
        return 1
    except GraphError as exc:
        print(f"bad graph file: {exc}", file=sys.stderr)
        return 1
    try:
        result = workflows.run_query(g, spec)
    except (GraphError, workflows.WorkflowError) as exc:
        print(f"query failed: {exc}", file=sys.stderr)
        return 1

    rows = _result_rows(result, g)
    if args.as_json:
        payload = {
            "workflow": result.workflow,
            "layer": result.layer.value,
            "master_seed": spec.cfg.master_seed,
            "config": {
                "delta": spec.cfg.delta,
                "theta": spec.cfg.theta,
                "walkers": spec.cfg.walkers_per_stimulus,
                "top": spec.top,
                "label_multipliers": {
                    label.value: mult
                    for label, mult in sorted(
                        spec.cfg.label_multipliers.items(), key=lambda kv: kv[0].value
                    )
                },
            },
            "results": rows,
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        header = "rank\tkind\tkey\tdisplay\tenergy"
        if result.shares is not None:
            header += "\tshare"
        print(header)
        for row in rows:
            node = NodeId.parse(row["node"])
            line = (
                f"{row['rank']}\t{node.kind.value}\t{node.key}\t"
                f"{row['display']}\t{row['energy']:.6f}"
            )
            if "share" in row:
                line += f"\t{row['share']:.6f}"
            print(line)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    try:
        g = _load_graph(args.graph)
    except OSError as exc:
        print(f"cannot read graph: {exc}", file=sys.stderr)
        return 1
    except GraphError as exc:
        print(f"bad graph file: {exc}", file=sys.stderr)
        return 1
    app = create_app(g, session_capacity=args.session_capacity)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def run_cli(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    try:
        if args.command == "harvest":
            return _cmd_harvest(args)
        if args.command == "ingest":
            return _cmd_ingest(args)
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "query":
            return _cmd_query(args, parser)
        if args.command == "serve":
            return _cmd_serve(args)
    except SystemExit as exc:  # parser.error inside subcommand handling
        return exc.code if isinstance(exc.code, int) else 2
    parser.error(f"unknown command {args.command!r}")
    return 2


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
