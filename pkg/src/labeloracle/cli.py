"""Command-line front end: gen, build, query, audit, bench."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import bundle
from .generate import FAMILIES, LABEL_SCHEMES, GenSpec, generate, parse_kv, spec_from_config
from .graph import GraphFormatError, load_graph
from .oracles import PathReportingLabelOracle, TwoSidedLabelOracle
from .verify import (
    all_pairs_distances,
    audit_paths,
    audit_probes,
    audit_size,
    audit_stretch,
    check_case_coverage,
    check_cluster_claims,
    check_duality,
    check_lemmas,
    check_tree_exactness,
    compute_ground_truth,
    sweep,
)

LEMMA_APSP_LIMIT = 2500


class CliError(Exception):
    pass


def _read_graph(path):
    try:
        return load_graph(Path(path).read_text())
    except FileNotFoundError:
        raise CliError(f"graph file not found: {path}") from None
    except GraphFormatError as e:
        raise CliError(f"{path}: {e}") from None


def _read_bundle(path):
    try:
        return bundle.load(path)
    except FileNotFoundError:
        raise CliError(f"bundle file not found: {path}") from None
    except bundle.BundleError as e:
        raise CliError(f"{path}: {e}") from None


def _check_match(oracle, g):
    if oracle.graph_hash_ != g.content_hash():
        raise CliError("bundle was built from a different graph (content hash mismatch)")


def _fmt_dist(d):
    if d == float("inf"):
        return "inf"
    return str(int(d)) if float(d).is_integer() else repr(float(d))


def format_result(v, lam, res) -> str:
    parts = [f"v={v}", f"label={lam}", f"distance={_fmt_dist(res.distance)}", f"phase={res.phase}", f"probes={res.probes}"]
    if res.target is not None:
        parts.append(f"target={res.target}")
    if res.path is not None:
        parts.append("path=" + ",".join(map(str, res.path)))
    return " ".join(parts)


def cmd_gen(args):
    spec = spec_from_config(Path(args.config).read_text()) if args.config else GenSpec()
    overrides = {
        "family": args.family,
        "n": args.n,
        "m": args.m,
        "rows": args.rows,
        "weight_max": args.weight_max,
        "labels": args.labels,
        "label_scheme": args.label_scheme,
        "seed": args.seed,
    }
    spec = replace(spec, **{k: v for k, v in overrides.items() if v is not None})
    try:
        g = generate(spec)
    except ValueError as e:
        raise CliError(str(e)) from None
    text = g.to_text()
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote {args.output}: n={g.n} m={g.m} labels={g.n_labels}")
    else:
        sys.stdout.write(text)
    return 0


def _make_oracle(kind, k, seed, shortcut, paths):
    if kind == "pr":
        return PathReportingLabelOracle(k=k, random_state=seed, use_cluster_shortcut=shortcut)
    return TwoSidedLabelOracle(k=k, random_state=seed, path_reporting=paths)


def cmd_build(args):
    g = _read_graph(args.graph)
    try:
        oracle = _make_oracle(args.oracle, args.k, args.seed, args.shortcut, args.paths).fit(g)
    except ValueError as e:
        raise CliError(str(e)) from None
    bundle.save(oracle, args.output)
    sizes = oracle.size_breakdown()
    print(
        f"wrote {args.output}: oracle={args.oracle} k={args.k} k_effective={oracle.k_effective_} "
        f"seed={oracle.hierarchy_.seed} words={sum(v for n, v in sizes.items() if n != 'pairwise_path_words')}"
    )
    return 0


def _parse_queries(path):
    out = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CliError(f"{path}: line {lineno}: expected 'v label'")
        try:
            out.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise CliError(f"{path}: line {lineno}: non-integer query") from None
    return out


def cmd_query(args):
    oracle = _read_bundle(args.bundle)
    if args.graph:
        _check_match(oracle, _read_graph(args.graph))
    if args.queries:
        queries = _parse_queries(args.queries)
    elif args.vertex is not None and args.label is not None:
        queries = [(args.vertex, args.label)]
    else:
        raise CliError("give --vertex and --label, or --queries FILE")
    want_path = args.paths or isinstance(oracle, PathReportingLabelOracle)
    if want_path and isinstance(oracle, TwoSidedLabelOracle) and not oracle.path_reporting:
        if args.paths:
            raise CliError("bundle was built without --paths; rebuild to report paths")
        want_path = False
    for v, lam in queries:
        try:
            res = oracle.query_path(v, lam) if want_path else oracle.query(v, lam)
        except ValueError as e:
            raise CliError(f"query ({v}, {lam}): {e}") from None
        print(format_result(v, lam, res))
    return 0


def run_audit(oracle, g, size_limit=8.0) -> list:
    gt = compute_ground_truth(g)
    path_capable = isinstance(oracle, PathReportingLabelOracle) or oracle.path_reporting
    results = sweep(oracle, with_path=path_capable)
    reports = [audit_stretch(oracle, gt, results=results)]
    if path_capable:
        reports.append(audit_paths(oracle, g, results=results))
    reports.append(audit_size(oracle, limit=size_limit))
    reports.append(audit_probes(oracle, results=sweep(oracle) if path_capable else results))
    if g.n <= LEMMA_APSP_LIMIT:
        apsp = all_pairs_distances(g)
        reports.append(check_lemmas(g, oracle.hierarchy_, oracle.pivots_, oracle.bunches_, gt, apsp))
    if oracle.clusters_ is not None:
        reports.append(check_duality(oracle))
        reports.append(check_tree_exactness(oracle.clusters_, g))
    if isinstance(oracle, PathReportingLabelOracle) and oracle.use_cluster_shortcut:
        reports.append(check_cluster_claims(oracle, gt))
    if isinstance(oracle, TwoSidedLabelOracle):
        reports.append(check_case_coverage(oracle, gt))
    return reports


def cmd_audit(args):
    g = _read_graph(args.graph)
    oracle = _read_bundle(args.bundle)
    _check_match(oracle, g)
    reports = run_audit(oracle, g, args.size_limit)
    for r in reports:
        print(r.to_text())
        print()
    for r in reports:
        print(r.summary_line())
    return 0 if all(r.passed for r in reports) else 1


def _int_list(text):
    return [int(x) for x in str(text).split(",") if x.strip()]


def cmd_bench(args):
    cfg = parse_kv(Path(args.config).read_text()) if args.config else {}

    def pick(name, default):
        value = getattr(args, name)
        if value is not None:
            return value
        return cfg.get(name, default)

    base = GenSpec(
        family=pick("family", "uniform-random-edges"),
        n=int(pick("n", 500)),
        m=int(pick("m", 3000)),
        weight_max=int(pick("weight_max", 100)),
        label_scheme=pick("label_scheme", "uniform"),
    )
    labels = _int_list(pick("labels", "16"))
    ks = _int_list(pick("k", "2,3,4"))
    seeds = int(pick("seeds", 10))
    kinds = {"both": ["pr", "2k1"]}.get(pick("oracle", "2k1"), [pick("oracle", "2k1")])

    header = f"{'oracle':>6} {'k':>2} {'l':>4} {'bound':>6} {'mean_str':>9} {'max_str':>8} {'words':>10} {'c':>6} {'probes':>7} {'viol':>5}"
    print(header)
    total_violations = 0
    for kind in kinds:
        for lam_count in labels:
            for k in ks:
                if kind == "pr" and k < 2:
                    continue
                means, maxes, words, consts, probes, viol, bounds = [], [], [], [], [], 0, []
                for seed in range(seeds):
                    g = generate(replace(base, labels=lam_count, seed=seed))
                    oracle = _make_oracle(kind, k, seed, True, False).fit(g)
                    gt = compute_ground_truth(g)
                    results = sweep(oracle)
                    st = audit_stretch(oracle, gt, bound=_nominal_bound(kind, k), results=results)
                    sz = audit_size(oracle)
                    pr = audit_probes(oracle, results=results)
                    means.append(st.stats["mean_stretch"])
                    maxes.append(st.stats["max_stretch"])
                    bounds.append(st.stats["bound"])
                    words.append(sz.stats["core_words"])
                    consts.append(sz.stats["constant"])
                    probes.append(pr.stats["mean_probes"])
                    viol += len(st.violations) + len(sz.violations) + len(pr.violations)
                total_violations += viol
                print(
                    f"{kind:>6} {k:>2} {lam_count:>4} {max(bounds):>6.0f} {np.mean(means):>9.4f} "
                    f"{max(maxes):>8.4f} {np.mean(words):>10.1f} {max(consts):>6.3f} {np.mean(probes):>7.2f} {viol:>5}"
                )
    return 0 if total_violations == 0 else 1


def _nominal_bound(kind, k):
    return float(4 * k - 5) if kind == "pr" else float(2 * k - 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="labeloracle", description="Vertex-label approximate distance oracles")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random labeled graph")
    p.add_argument("--config", help="key=value generator config file")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--weight-max", type=int)
    p.add_argument("--labels", type=int)
    p.add_argument("--label-scheme", choices=LABEL_SCHEMES)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="build an oracle bundle from a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--oracle", choices=["pr", "2k1"], default="pr")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shortcut", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--paths", action="store_true", help="2k1 only: store path-reporting extension")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer (vertex, label) queries from a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--graph", help="verify the bundle against this graph")
    p.add_argument("--vertex", type=int)
    p.add_argument("--label", type=int)
    p.add_argument("--queries", help="file with one 'v label' pair per line")
    p.add_argument("--paths", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("audit", help="run the verifier suite on a bundle")
    p.add_argument("--graph", required=True)
    p.add_argument("--bundle", required=True)
    p.add_argument("--size-limit", type=float, default=8.0)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bench", help="sweep k, labels and seeds")
    p.add_argument("--config")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--weight-max", type=int)
    p.add_argument("--label-scheme", choices=LABEL_SCHEMES)
    p.add_argument("--labels", help="comma-separated label counts")
    p.add_argument("--k", help="comma-separated k values")
    p.add_argument("--seeds", type=int)
    p.add_argument("--oracle", choices=["pr", "2k1", "both"])
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
