"""Command-line entry point.

One binary with subcommands for generation, summarization, reconstruction,
error evaluation, search-database management, decomposition, and
experiment reproduction.  Every run writes a manifest (command, resolved
configuration, seed, timings, output paths) and re-running a manifest
reproduces all CSV/JSON outputs byte for byte: all randomness flows from
the seed, numeric output uses the '.' decimal separator, and timings are
confined to the manifest and stderr, never to output files.
"""

from __future__ import annotations

import csv
import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import decomposition as dc
from . import generators as gen
from . import search as srch
from .errors import DimensionMismatch, PreconditionError, RegsumError
from .graph import Graph, read_edge_list, write_edge_list
from .regularity import SummarizationConfig, pair_verdicts, summarize
from .summary import ReducedGraph, blow_up, build_reduced_graph, \
    reconstruction_error

TRACE_COLUMNS = ["iteration", "k", "ind", "irregular_pairs",
                 "compression_rate"]


def _write_manifest(ctx_args: list[str], config: dict, seed: int,
                    timings: dict, outputs: list[str],
                    manifest_path: str) -> None:
    doc = {
        "command": " ".join(ctx_args[:2]) if len(ctx_args) > 1
        and not ctx_args[1].startswith("-") else ctx_args[0],
        "argv": ctx_args,
        "config": config,
        "seed": seed,
        "timings": {k: round(v, 6) for k, v in timings.items()},
        "outputs": outputs,
    }
    Path(manifest_path).write_text(json.dumps(doc, sort_keys=True, indent=1))


def _default_manifest(out: str) -> str:
    return str(out) + ".manifest.json"


def _read_graph(path: str) -> tuple[Graph, list[str]]:
    return read_edge_list(path)


def _write_labels_csv(path: str, labels: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["vertex", "label"])
        for v, lab in enumerate(labels):
            w.writerow([v, int(lab)])


class _Catcher(click.Group):
    """Translate package errors into a machine-readable failure line."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except RegsumError as exc:
            category = type(exc).__name__
            click.echo(json.dumps({"error": category, "message": str(exc)}),
                       err=True)
            sys.exit(2)


@click.group(cls=_Catcher)
def main():
    """Graph summarization, summary-based search, and block decomposition
    of distance matrices."""


# -- generate --------------------------------------------------------------


@main.group()
def generate():
    """Synthetic benchmark graphs."""


@generate.command("noisy-clique")
@click.option("--n", type=int, required=True)
@click.option("--num-c", type=int, required=True)
@click.option("--eta1", type=float, required=True)
@click.option("--eta2", type=float, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True)
@click.option("--labels-out", default=None)
def generate_noisy_clique(n, num_c, eta1, eta2, seed, out, labels_out):
    """Union of cliques with inter- and intra-cluster noise; clean ground
    truth is written alongside with suffix .gt."""
    t0 = time.perf_counter()
    g, gt, labels = gen.synth_graph_gen(
        gen.NoisyCliqueSpec(n=n, num_c=num_c, eta1=eta1, eta2=eta2,
                            seed=seed))
    write_edge_list(g, out, declare_n=True)
    gt_path = str(out) + ".gt"
    write_edge_list(gt, gt_path, declare_n=True)
    outputs = [str(out), gt_path]
    if labels_out:
        _write_labels_csv(labels_out, labels)
        outputs.append(str(labels_out))
    _write_manifest(sys.argv[1:],
                    {"n": n, "num_c": num_c, "eta1": eta1, "eta2": eta2},
                    seed, {"t_total": time.perf_counter() - t0}, outputs,
                    _default_manifest(out))


@generate.command("er")
@click.option("--n", type=int, required=True)
@click.option("--p", type=float, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True)
def generate_er(n, p, seed, out):
    """Independent-edge random graph."""
    t0 = time.perf_counter()
    g = gen.erdos_renyi(n, p, seed)
    write_edge_list(g, out, declare_n=True)
    _write_manifest(sys.argv[1:], {"n": n, "p": p}, seed,
                    {"t_total": time.perf_counter() - t0}, [str(out)],
                    _default_manifest(out))


@generate.command("planted")
@click.option("--n", type=int, required=True)
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True)
@click.option("--labels-out", default=None)
def generate_planted(n, a, b, seed, out, labels_out):
    """Two-community random graph with within-rate a/n, cross-rate b/n."""
    t0 = time.perf_counter()
    g, labels = gen.planted_partition(
        gen.PlantedPartitionSpec(n=n, a=a, b=b, seed=seed))
    write_edge_list(g, out, declare_n=True)
    outputs = [str(out)]
    if labels_out:
        _write_labels_csv(labels_out, labels)
        outputs.append(str(labels_out))
    _write_manifest(sys.argv[1:], {"n": n, "a": a, "b": b}, seed,
                    {"t_total": time.perf_counter() - t0}, outputs,
                    _default_manifest(out))


# -- summarize / blowup / eval-error ---------------------------------------


@main.command("summarize")
@click.option("--input", "input_", required=True)
@click.option("--epsilon", type=float, default=0.05, show_default=True)
@click.option("--c-min", type=float, default=0.0, show_default=True)
@click.option("--max-iter", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--d-prime", type=float, default=None,
              help="Density floor of the summary; defaults to epsilon.")
@click.option("--output", required=True)
@click.option("--trace-out", default=None,
              help="Per-iteration CSV of the refinement loop.")
def cmd_summarize(input_, epsilon, c_min, max_iter, seed, d_prime, output,
                  trace_out):
    """Summarize a graph into a reduced graph (summary.json)."""
    t0 = time.perf_counter()
    g, _ = _read_graph(input_)
    cfg = SummarizationConfig(epsilon=epsilon, c_min=c_min,
                              max_iterations=max_iter, rng_seed=seed)
    best, trace = summarize(g, cfg)
    t1 = time.perf_counter()
    verdicts = pair_verdicts(g, best, cfg.epsilon)
    r = build_reduced_graph(g, best, verdicts, d_prime)
    Path(output).write_text(r.to_json(g.n))
    outputs = [str(output)]
    if trace_out:
        with open(trace_out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(TRACE_COLUMNS)
            for rec in trace:
                w.writerow([rec.iteration, rec.k, repr(float(rec.index)),
                            rec.irregular_pairs,
                            repr(float(rec.compression))])
        outputs.append(str(trace_out))
    _write_manifest(sys.argv[1:],
                    {"input": str(input_), "epsilon": epsilon,
                     "c_min": c_min, "max_iter": max_iter,
                     "d_prime": d_prime}, seed,
                    {"t_summarize": t1 - t0,
                     "t_total": time.perf_counter() - t0},
                    outputs, _default_manifest(output))


@main.command("blowup")
@click.option("--summary", "summary_path", required=True)
@click.option("--out", required=True)
@click.option("--sample", is_flag=True,
              help="Bernoulli-sample unweighted edges instead of writing "
                   "constant-weight blocks.")
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_blowup(summary_path, out, sample, seed):
    """Reconstruct a full graph from a summary."""
    t0 = time.perf_counter()
    r, _n = ReducedGraph.from_json(Path(summary_path).read_text())
    rng = np.random.default_rng(seed) if sample else None
    g = blow_up(r, rng)
    write_edge_list(g, out, declare_n=True)
    _write_manifest(sys.argv[1:],
                    {"summary": str(summary_path), "sample": sample}, seed,
                    {"t_total": time.perf_counter() - t0}, [str(out)],
                    _default_manifest(out))


@main.command("eval-error")
@click.option("--original", required=True)
@click.option("--reconstructed", required=True)
@click.option("--ground-truth", default=None)
@click.option("--p", type=float, default=2.0, show_default=True)
@click.option("--out", required=True)
def cmd_eval_error(original, reconstructed, ground_truth, p, out):
    """Reconstruction errors between a graph, its reconstruction, and an
    optional ground truth, with n**2-normalized variants."""
    t0 = time.perf_counter()
    g, _ = _read_graph(original)
    gp, _ = _read_graph(reconstructed)
    if g.n != gp.n:
        raise DimensionMismatch(
            f"vertex counts differ: {g.n} vs {gp.n} (write edge lists "
            "with a '# n=' header to preserve isolated vertices)")
    report = {
        "n": g.n,
        "p": p,
        "error_original_vs_reconstructed": reconstruction_error(g, gp, p),
    }
    report["normalized_original_vs_reconstructed"] = \
        report["error_original_vs_reconstructed"] / g.n ** 2
    if ground_truth:
        gt, _ = _read_graph(ground_truth)
        report["error_reconstructed_vs_ground_truth"] = \
            reconstruction_error(gp, gt, p)
        report["error_original_vs_ground_truth"] = \
            reconstruction_error(g, gt, p)
        report["normalized_reconstructed_vs_ground_truth"] = \
            report["error_reconstructed_vs_ground_truth"] / g.n ** 2
    Path(out).write_text(json.dumps(report, sort_keys=True, indent=1))
    _write_manifest(sys.argv[1:],
                    {"original": str(original),
                     "reconstructed": str(reconstructed),
                     "ground_truth": ground_truth and str(ground_truth),
                     "p": p}, 0,
                    {"t_total": time.perf_counter() - t0}, [str(out)],
                    _default_manifest(out))


# -- search database -------------------------------------------------------


@main.group()
def db():
    """Summary search database."""


@db.command("add")
@click.option("--db", "db_path", required=True)
@click.option("--id", "entry_id", required=True)
@click.option("--input", "input_", required=True)
@click.option("--epsilon", type=float, default=0.05, show_default=True)
@click.option("--c-min", type=float, default=0.0, show_default=True)
@click.option("--max-iter", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--store-raw", is_flag=True,
              help="Also store the full-graph spectrum for the raw "
                   "search baseline.")
def cmd_db_add(db_path, entry_id, input_, epsilon, c_min, max_iter, seed,
               store_raw):
    """Summarize a graph and add it to the database."""
    t0 = time.perf_counter()
    g, _ = _read_graph(input_)
    cfg = SummarizationConfig(epsilon=epsilon, c_min=c_min,
                              max_iterations=max_iter, rng_seed=seed)
    database = srch.Database(db_path)
    entry = srch.db_add(database, entry_id, g, cfg,
                        store_raw_spectrum=store_raw)
    out = str(database._entry_path(entry_id))
    _write_manifest(sys.argv[1:],
                    {"db": str(db_path), "id": entry_id,
                     "input": str(input_), "epsilon": epsilon,
                     "c_min": c_min, "max_iter": max_iter,
                     "store_raw": store_raw}, seed,
                    {"t_total": time.perf_counter() - t0}, [out],
                    _default_manifest(out))
    click.echo(f"added {entry_id} (summary k={entry.summary.k})", err=True)


@db.command("query")
@click.option("--db", "db_path", required=True)
@click.option("--input", "input_", required=True)
@click.option("--k", type=int, required=True)
@click.option("--l", "l_split", type=int, default=None,
              help="Head/tail split index; defaults to half the shorter "
                   "spectrum.")
@click.option("--epsilon", type=float, default=0.05, show_default=True)
@click.option("--c-min", type=float, default=0.0, show_default=True)
@click.option("--max-iter", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--raw", is_flag=True,
              help="Rank by full-graph spectra instead of summaries.")
@click.option("--fmt", type=click.Choice(["json", "csv"]), default="csv",
              show_default=True)
@click.option("--out", required=True)
def cmd_db_query(db_path, input_, k, l_split, epsilon, c_min, max_iter,
                 seed, raw, fmt, out):
    """Rank the k stored graphs nearest to a query graph."""
    t0 = time.perf_counter()
    g, _ = _read_graph(input_)
    database = srch.Database(db_path)
    if raw:
        ranked = srch.query_top_k_raw(database, g, k, l_split)
        timing = None
    else:
        cfg = SummarizationConfig(epsilon=epsilon, c_min=c_min,
                                  max_iterations=max_iter, rng_seed=seed)
        ranked, timing = srch.query_top_k(database, g, k, cfg, l_split)
    if fmt == "json":
        Path(out).write_text(json.dumps(
            {"results": [{"id": i, "distance": d} for i, d in ranked]},
            sort_keys=True, indent=1))
    else:
        with open(out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rank", "id", "distance"])
            for rank, (i, d) in enumerate(ranked, start=1):
                w.writerow([rank, i, repr(float(d))])
    if timing is not None:
        click.echo(f"t_s={timing.t_s:.3f} t_eig={timing.t_eig:.3f} "
                   f"t_sd={timing.t_sd:.3f}", err=True)
    _write_manifest(sys.argv[1:],
                    {"db": str(db_path), "input": str(input_), "k": k,
                     "l": l_split, "epsilon": epsilon, "raw": raw,
                     "fmt": fmt}, seed,
                    {"t_total": time.perf_counter() - t0}, [str(out)],
                    _default_manifest(out))


# -- decomposition ---------------------------------------------------------


def _resolve_refs(g: Graph, refs_spec: str, seed: int) -> np.ndarray:
    if refs_spec == "all":
        return dc.largest_component(g)
    kind, _, num = refs_spec.partition(":")
    if kind == "uniform" and num:
        return dc.sample_references(g, "uniform", int(num), seed)
    if kind == "paths" and num:
        return dc.sample_references(g, "path_cover", int(num), seed)
    raise PreconditionError(
        f"--refs must be all, uniform:M or paths:P, got {refs_spec!r}")


@main.command("distances")
@click.option("--input", "input_", required=True)
@click.option("--refs", default="all", show_default=True,
              help="all, uniform:M, or paths:P")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True,
              help="Binary distance cache (.bin) or CSV (.csv).")
def cmd_distances(input_, refs, seed, out):
    """Reference-to-target hop distance matrix over the largest
    connected component."""
    t0 = time.perf_counter()
    g, _ = _read_graph(input_)
    ref_ids = _resolve_refs(g, refs, seed)
    targets = dc.largest_component(g)
    d = dc.distance_matrix(g, ref_ids, targets)
    if str(out).endswith(".csv"):
        with open(out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["reference"] + [str(t) for t in d.target_ids])
            for i, r in enumerate(d.reference_ids):
                w.writerow([str(r)] + [int(x) for x in d.values[i]])
    else:
        dc.write_distance_cache(d, out)
    _write_manifest(sys.argv[1:],
                    {"input": str(input_), "refs": refs}, seed,
                    {"t_total": time.perf_counter() - t0}, [str(out)],
                    _default_manifest(out))


@main.command("decompose")
@click.option("--input", "input_", default=None,
              help="Edge list input; alternative to --cache.")
@click.option("--cache", default=None,
              help="Binary distance cache from the distances command.")
@click.option("--k", type=int, default=None)
@click.option("--estimate-k", "do_estimate", is_flag=True)
@click.option("--kmax", type=int, default=10, show_default=True)
@click.option("--refs", default="all", show_default=True)
@click.option("--restarts", type=int, default=20, show_default=True)
@click.option("--iters", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--labels-out", required=True)
@click.option("--curve-out", default=None)
def cmd_decompose(input_, cache, k, do_estimate, kmax, refs, restarts,
                  iters, seed, labels_out, curve_out):
    """Group vertices by block-fitting their distance matrix."""
    t0 = time.perf_counter()
    if (input_ is None) == (cache is None):
        raise PreconditionError("exactly one of --input or --cache required")
    if cache is not None:
        d = dc.read_distance_cache(cache)
    else:
        g, _ = _read_graph(input_)
        ref_ids = _resolve_refs(g, refs, seed)
        targets = dc.largest_component(g)
        d = dc.distance_matrix(g, ref_ids, targets)
    t1 = time.perf_counter()
    outputs = []
    if do_estimate:
        k_star, curve = dc.estimate_k(d, kmax, restarts, iters, seed)
        k = int(k_star)
        if curve_out:
            _write_curve(curve_out, curve)
            outputs.append(str(curve_out))
        click.echo(f"estimated k={k}", err=True)
    if k is None:
        raise PreconditionError("either --k or --estimate-k is required")
    part, model = dc.regular_decomposition(d, k, restarts, iters, seed)
    with open(labels_out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["vertex", "group"])
        for v, grp in zip(d.target_ids, part.labels):
            w.writerow([int(v), int(grp)])
    outputs.insert(0, str(labels_out))
    _write_manifest(sys.argv[1:],
                    {"input": input_ and str(input_),
                     "cache": cache and str(cache), "k": k,
                     "estimate_k": do_estimate, "kmax": kmax,
                     "refs": refs, "restarts": restarts, "iters": iters},
                    seed,
                    {"t_distances": t1 - t0,
                     "t_total": time.perf_counter() - t0},
                    outputs, _default_manifest(labels_out))


def _write_curve(path: str, curve: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "cost"])
        for i, c in enumerate(curve, start=1):
            w.writerow([i, repr(float(c))])


@main.command("estimate-k")
@click.option("--input", "input_", default=None)
@click.option("--cache", default=None)
@click.option("--kmax", type=int, default=10, show_default=True)
@click.option("--refs", default="all", show_default=True)
@click.option("--restarts", type=int, default=20, show_default=True)
@click.option("--iters", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--curve-out", required=True)
def cmd_estimate_k(input_, cache, kmax, refs, restarts, iters, seed,
                   curve_out):
    """Cost curve over group counts and its knee."""
    t0 = time.perf_counter()
    if (input_ is None) == (cache is None):
        raise PreconditionError("exactly one of --input or --cache required")
    if cache is not None:
        d = dc.read_distance_cache(cache)
    else:
        g, _ = _read_graph(input_)
        ref_ids = _resolve_refs(g, refs, seed)
        targets = dc.largest_component(g)
        d = dc.distance_matrix(g, ref_ids, targets)
    k_star, curve = dc.estimate_k(d, kmax, restarts, iters, seed)
    _write_curve(curve_out, curve)
    report_path = str(curve_out) + ".kstar.json"
    Path(report_path).write_text(json.dumps(
        {"k_star": int(k_star), "k_max": kmax}, sort_keys=True, indent=1))
    _write_manifest(sys.argv[1:],
                    {"input": input_ and str(input_),
                     "cache": cache and str(cache), "kmax": kmax,
                     "refs": refs, "restarts": restarts, "iters": iters},
                    seed, {"t_total": time.perf_counter() - t0},
                    [str(curve_out), report_path],
                    _default_manifest(curve_out))


# -- reproduce -------------------------------------------------------------


@main.command("reproduce")
@click.argument("experiment",
                type=click.Choice(["noise-sweep", "search-quality",
                                   "planted", "knee"]))
@click.option("--n", type=int, default=1000, show_default=True)
@click.option("--a", type=float, default=20.0, show_default=True)
@click.option("--b", type=float, default=2.0, show_default=True)
@click.option("--kmax", type=int, default=10, show_default=True)
@click.option("--num-c", type=int, default=5, show_default=True)
@click.option("--epsilon", type=float, default=0.05, show_default=True)
@click.option("--c-min", type=float, default=0.95, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True)
def cmd_reproduce(experiment, n, a, b, kmax, num_c, epsilon, c_min, seed,
                  out):
    """Desk-scale experiment protocols, one plot-ready CSV per run."""
    t0 = time.perf_counter()
    if experiment == "noise-sweep":
        rows = _reproduce_noise_sweep(n, num_c, epsilon, c_min, seed)
        header = ["n", "eta1", "eta2", "l2_reconstructed_vs_gt",
                  "l2_original_vs_gt"]
    elif experiment == "planted":
        rows = _reproduce_planted(n, a, b, seed)
        header = ["n", "a", "b", "scheme", "misclassification"]
    elif experiment == "knee":
        rows = _reproduce_knee(n, a, b, kmax, seed)
        header = ["k", "cost", "k_star"]
    else:
        rows = _reproduce_search(n, num_c, epsilon, c_min, seed)
        header = ["query_group", "query_seed", "ap_summary", "ap_raw"]
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow(row)
    _write_manifest(sys.argv[1:],
                    {"experiment": experiment, "n": n, "a": a, "b": b,
                     "kmax": kmax, "num_c": num_c, "epsilon": epsilon,
                     "c_min": c_min}, seed,
                    {"t_total": time.perf_counter() - t0}, [str(out)],
                    _default_manifest(out))


def _summary_reconstruction(g: Graph, cfg: SummarizationConfig):
    best, _ = summarize(g, cfg)
    verdicts = pair_verdicts(g, best, cfg.epsilon)
    r = build_reduced_graph(g, best, verdicts)
    keep = np.sort(np.concatenate(best.classes))
    return blow_up(r), keep


def _reproduce_noise_sweep(n, num_c, epsilon, c_min, seed):
    rows = []
    for eta1 in (0.1, 0.2, 0.3, 0.4, 0.5):
        for eta2 in (0.1, 0.2, 0.3, 0.4, 0.5):
            g, gt, _ = gen.synth_graph_gen(gen.NoisyCliqueSpec(
                n=n, num_c=num_c, eta1=eta1, eta2=eta2, seed=seed))
            cfg = SummarizationConfig(epsilon=epsilon, c_min=c_min,
                                      rng_seed=seed)
            gp, keep = _summary_reconstruction(g, cfg)
            rows.append([n, eta1, eta2,
                         repr(reconstruction_error(gp, gt, 2, restrict=keep)),
                         repr(reconstruction_error(g, gt, 2, restrict=keep))])
    return rows


def _reproduce_planted(n, a, b, seed):
    g, labels = gen.planted_partition(gen.PlantedPartitionSpec(
        n=n, a=a, b=b, seed=seed))
    comp = dc.largest_component(g)
    rows = []
    for scheme, refs in (("all", comp),
                         ("uniform_400",
                          dc.sample_references(g, "uniform",
                                               min(400, comp.size), seed))):
        d = dc.distance_matrix(g, refs, comp)
        part, _ = dc.regular_decomposition(d, 2, seed=seed)
        err = _misclassification(part.labels, labels[comp])
        rows.append([n, a, b, scheme, repr(err)])
    return rows


def _misclassification(pred: np.ndarray, truth: np.ndarray) -> float:
    agree = (pred == truth).mean()
    return float(min(agree, 1.0 - agree))


def _reproduce_knee(n, a, b, kmax, seed):
    g, _ = gen.planted_partition(gen.PlantedPartitionSpec(
        n=n, a=a, b=b, seed=seed))
    comp = dc.largest_component(g)
    d = dc.distance_matrix(g, comp, comp)
    k_star, curve = dc.estimate_k(d, kmax, seed=seed)
    return [[i + 1, repr(float(c)), int(k_star)]
            for i, c in enumerate(curve)]


def _reproduce_search(n, num_c, epsilon, c_min, seed):
    """Scaled-down retrieval benchmark: one database per run, groups by
    cluster count, three query seeds per group."""
    import tempfile
    counts = (4, 8, 12)
    noises = (0.1, 0.2)
    cfg = SummarizationConfig(epsilon=epsilon, c_min=c_min, rng_seed=seed)
    with tempfile.TemporaryDirectory() as tmp:
        database = srch.Database(tmp)
        groups: dict[int, list[str]] = {c: [] for c in counts}
        for c in counts:
            for e1 in noises:
                for e2 in noises:
                    gid = f"c{c}_e{e1}_{e2}"
                    g, _, _ = gen.synth_graph_gen(gen.NoisyCliqueSpec(
                        n=n, num_c=c, eta1=e1, eta2=e2, seed=seed))
                    srch.db_add(database, gid, g, cfg,
                                store_raw_spectrum=True)
                    groups[c].append(gid)
        k = len(groups[counts[0]])
        rows = []
        for c in counts:
            for qseed in range(3):
                q, _, _ = gen.synth_graph_gen(gen.NoisyCliqueSpec(
                    n=n, num_c=c, eta1=noises[0], eta2=noises[0],
                    seed=1000 + qseed))
                ranked, _ = srch.query_top_k(database, q, k, cfg)
                ranked_raw = srch.query_top_k_raw(database, q, k)
                ap_s = srch.ap_at_k([i for i, _ in ranked], groups[c], k)
                ap_r = srch.ap_at_k([i for i, _ in ranked_raw], groups[c], k)
                rows.append([c, qseed, repr(ap_s), repr(ap_r)])
    return rows


# -- replay ----------------------------------------------------------------


@main.command("replay")
@click.argument("manifest", type=click.Path(exists=True))
def cmd_replay(manifest):
    """Re-run the command recorded in a manifest; outputs are reproduced
    byte for byte."""
    import subprocess
    doc = json.loads(Path(manifest).read_text())
    argv = doc["argv"]
    click.echo(f"replaying: regsum {' '.join(argv)}", err=True)
    # a fresh process keeps sys.argv (and thus the re-written manifest)
    # identical to the original invocation
    proc = subprocess.run([sys.executable, "-m", "regsum.cli"] + argv)
    sys.exit(proc.returncode)


if __name__ == "__main__":
    main()
