"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 I/O or input-format error,
3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from momd import harness, ingest, netmetrics, synth
from momd.errors import ConfigInvalid, FormatViolation, MalformedXml, MismatchedInputs, MissingNodeReference, MomdError

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _radii(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad radius list {text!r}") from None


def cmd_ingest(args) -> None:
    highways = set(args.highways.split(",")) if args.highways else None
    g = ingest.parse_osm(args.osm, highways)
    ingest.write_compact(g, args.out)
    print(f"{g.n_vertices} vertices, {g.n_edges} edges -> {args.out}")


def cmd_clean(args) -> None:
    g = ingest.read_compact(args.graph)
    giant = ingest.clean(g)
    ingest.write_compact(giant, args.out)
    idmap = Path(str(args.out) + ".idmap")
    ingest.write_id_map(giant, idmap)
    print(f"kept {giant.n_vertices}/{g.n_vertices} vertices, {giant.n_edges} edges -> {args.out} (id map {idmap})")


def cmd_sample_od(args) -> None:
    g = ingest.read_compact(args.graph)
    ingest.write_od(ingest.sample_od_pairs(g, args.n, args.seed), args.out)


def cmd_gen(args) -> None:
    spec = synth.SynthSpec(
        topology=args.topology,
        n=args.n,
        p=args.p,
        m=args.m,
        spacing=args.spacing,
        rng_seed=args.seed,
        neighborhood=args.neighborhood,
    )
    g = synth.generate(spec)
    ingest.write_compact(g, args.out)
    print(f"{spec.topology}: {g.n_vertices} vertices, {g.n_edges} edges -> {args.out}")


def cmd_run(args) -> None:
    cfg = harness.ExperimentConfig(
        graph_path=Path(args.graph),
        od_path=Path(args.od),
        output_dir=Path(args.out),
        radii=args.radii,
        strategy=args.strategy,
        workers=args.workers,
        rng_seed=args.seed,
        limit=args.limit,
        private_graphs=args.private_graphs,
    )
    outcome = harness.run_experiment(cfg)
    for (strategy, radius), path in sorted(outcome.result_files.items()):
        print(f"{strategy} r={radius:g}: {path} (search time {outcome.total_elapsed[(strategy, radius)]:.3f}s)")


def cmd_profile(args) -> None:
    g = ingest.read_compact(args.graph)
    prof = netmetrics.profile(g, name=args.name or Path(args.graph).stem, pairs=args.pairs, rng_seed=args.seed)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(prof.csv_header())
    w.writerow(prof.csv_row())


def _result_files(target: Path, strategy: str) -> dict[float, Path]:
    if target.is_dir():
        files = sorted(target.glob(f"{strategy}_r*.csv"))
        files = [f for f in files if not f.name.endswith(".meta.csv")]
    else:
        files = [target]
    if not files:
        raise ConfigInvalid(f"no {strategy} result files under {target}")
    return {harness.radius_from_name(f): f for f in files}


def cmd_analyze(args) -> None:
    collapse = _result_files(Path(args.collapse), harness.COLLAPSE)
    brute = _result_files(Path(args.brute), harness.BRUTE_FORCE)
    if set(collapse) != set(brute):
        raise MismatchedInputs(f"radii differ: {sorted(collapse)} vs {sorted(brute)}")
    rows = harness.analyze([(r, collapse[r], brute[r]) for r in sorted(collapse)], Path(args.out))
    for row in rows:
        print(
            f"r={row['radius']:g} accuracy={row['accuracy']:.4f} "
            f"max_error={row['max_error']:.2f} mean_error={row['mean_error_all']:.2f}"
        )


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="momd", description="Region-to-region routing experiments.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ingest", help="convert OSM XML to a compact graph file")
    s.add_argument("osm")
    s.add_argument("out")
    s.add_argument("--highways", help="comma-separated highway classes to keep (default: all)")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("clean", help="keep the largest connected component")
    s.add_argument("graph")
    s.add_argument("out")
    s.set_defaults(func=cmd_clean)

    s = sub.add_parser("sample-od", help="sample uniform OD pairs")
    s.add_argument("graph")
    s.add_argument("n", type=int)
    s.add_argument("seed", type=int)
    s.add_argument("out")
    s.set_defaults(func=cmd_sample_od)

    s = sub.add_parser("gen", help="generate a synthetic grid-laid network")
    s.add_argument("topology", choices=synth.TOPOLOGIES)
    s.add_argument("n", type=int)
    s.add_argument("seed", type=int)
    s.add_argument("out")
    s.add_argument("--p", type=float, default=0.1)
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--spacing", type=float, default=100.0)
    s.add_argument("--neighborhood", type=int, choices=(4, 8), default=4)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("run", help="run collapse and/or brute-force over an OD file")
    s.add_argument("graph")
    s.add_argument("od")
    s.add_argument("--strategy", choices=("collapse", "brute_force", "both"), default="both")
    s.add_argument("--radii", type=_radii, default=(50.0, 100.0, 150.0, 200.0, 250.0))
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.add_argument("--limit", type=int, help="only use the first N OD pairs")
    s.add_argument("--private-graphs", action="store_true", help="give each worker its own graph copy")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("profile", help="print complex-network metrics as CSV")
    s.add_argument("graph")
    s.add_argument("--pairs", type=int, default=0, help="sampled pairs for mean path length (0 skips)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--name")
    s.set_defaults(func=cmd_profile)

    s = sub.add_parser("analyze", help="summarise paired collapse/brute-force result files")
    s.add_argument("collapse", help="collapse result file or run directory")
    s.add_argument("brute", help="brute-force result file or run directory")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_analyze)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, FormatViolation, MalformedXml, MissingNodeReference, MismatchedInputs) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MomdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        logging.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
