"""Command-line surface: persistence, centrality, stability, signal and
sampling commands, each writing CSV/JSON artifacts with a metadata header.

Exit codes: 0 success, 2 usage error, 3 input format error, 4 numeric or
degenerate-input error.  Every randomized command takes --seed (default from
CYCLECENT_SEED or 0) and echoes it in the output metadata.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .centrality import VARIANT_NAMES, curve_family
from .errors import (DegenerateClassError, EmptyInputError, PointFormatError,
                     UndefinedConstantsError)
from .merge import first_order_clusters
from .metric import (bottleneck_distance, centrality_collection,
                     centrality_distance, centrality_distance_inf,
                     verify_bounds)
from .persistence import compute_pairs, pairs_to_diagram
from .pointcloud import (load_points, pairwise_distances, perturb,
                         sample_annuli_wedge, sample_fern, sample_sierpinski)
from .signals import bootstrap_hole_stats, extract_signal, threshold_counts

USAGE_ERROR, FORMAT_ERROR, NUMERIC_ERROR = 2, 3, 4


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _config_hash(args: argparse.Namespace) -> str:
    skip = {"func", "out"}  # the output path is not part of the computation
    payload = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _meta_lines(args) -> list[str]:
    return [
        f"# command: {args.command}",
        f"# version: {__version__}",
        f"# seed: {getattr(args, 'seed', '')}",
        f"# config: {_config_hash(args)}",
    ]


def _write_csv(path, args, header: str, rows) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in _meta_lines(args):
            fh.write(line + "\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path, args, payload: dict) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    payload = {"meta": {"command": args.command, "version": __version__,
                        "seed": getattr(args, "seed", None),
                        "config": _config_hash(args)}, **payload}
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def _analysis(args, X):
    """Shared pipeline: pairs, clusters, curves for one cloud."""
    pairs, source = compute_pairs(X=X, k=args.k, max_dim=args.max_dim,
                                  max_scale=args.max_scale)
    positive = sorted((p for p in pairs if p.persistence > 0),
                      key=lambda p: (p.birth, p.death, p.birth_simplex.vertices))
    clusters = first_order_clusters(positive, rule=args.merge_rule)
    return pairs, source, clusters


# --------------------------------------------------------------------------
# commands

def _write_points(args, X) -> str:
    path = os.path.join(args.out, "points.csv")
    os.makedirs(args.out, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in _meta_lines(args):
            fh.write(line + "\n")
        for row in X:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    return path


def cmd_sample(args):
    if args.kind == "sierpinski":
        X = sample_sierpinski(args.n, args.seed)
    elif args.kind == "fern":
        X = sample_fern(args.n, args.seed)
    else:
        X = sample_annuli_wedge(args.n, args.seed)
    print(_write_points(args, X))


def cmd_perturb(args):
    X = load_points(args.input)
    print(_write_points(args, perturb(X, args.kappa, args.seed)))


def cmd_persist(args):
    X = load_points(args.input)
    pairs, _ = compute_pairs(X=X, k=args.k, max_dim=args.max_dim,
                             max_scale=args.max_scale,
                             include_zero_persistence=args.include_zero_persistence)
    rows = [(p.k, p.birth, p.death, int(p.essential)) for p in pairs]
    _write_csv(os.path.join(args.out, "diagram.csv"), args,
               "k,birth,death,essential", rows)
    reps = {str(p.index): sorted(list(s) for s in p.representative.simplices)
            for p in pairs}
    _write_json(os.path.join(args.out, "representatives.json"), args,
                {"k": args.k, "representatives": reps})
    print(os.path.join(args.out, "diagram.csv"))


def _curves_payload(curves, clusters, order, scaling):
    out = []
    for sigma, c in sorted(curves.items()):
        pr = clusters.pairs[sigma]
        out.append({
            "id": sigma,
            "birth": pr.birth,
            "death": pr.death,
            "breakpoints": [[t, v] for t, v in c.breakpoints()],
            "max_value": c.max_value(),
            "scaling": scaling,
            "order": order,
        })
    return out


def _write_svg(path, curves, end):
    width, height = 640, 400
    pad = 40
    top = max((c.max_value() for c in curves.values()), default=1.0) or 1.0
    end = end or 1.0

    def sx(x):
        return pad + (width - 2 * pad) * x / end

    def sy(y):
        return height - pad - (height - 2 * pad) * y / top

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<line x1="{pad}" y1="{height-pad}" x2="{width-pad}" '
             f'y2="{height-pad}" stroke="black"/>',
             f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height-pad}" '
             f'stroke="black"/>']
    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
               "#8c564b", "#17becf", "#7f7f7f"]
    for idx, (sigma, c) in enumerate(sorted(curves.items())):
        color = palette[idx % len(palette)]
        pts = [(0.0, 0.0)]
        for t in c.knots():
            if t > end:
                break
            pts.append((t, c.evaluate_left(t)))
            pts.append((t, c.evaluate(t)))      # jumps drawn as vertical segments
        pts.append((end, c.evaluate(end)))
        path_d = " ".join(f"{'M' if i == 0 else 'L'}{sx(x):.2f},{sy(y):.2f}"
                          for i, (x, y) in enumerate(pts))
        lines.append(f'<path d="{path_d}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_centrality(args):
    X = load_points(args.input)
    if args.variant:
        order, scaling = VARIANT_NAMES[args.variant]
    else:
        order, scaling = args.order, args.scaling
    pairs, source, clusters = _analysis(args, X)
    curves = curve_family(clusters, order, scaling)
    _write_json(os.path.join(args.out, "curves.json"), args,
                {"order": order, "scaling": scaling,
                 "variant": args.variant or f"J{order}",
                 "curves": _curves_payload(curves, clusters, order, scaling)})
    _write_json(os.path.join(args.out, "clusters.json"), args,
                {"k": args.k, "merge_rule": args.merge_rule,
                 "clusters": {str(owner): [{"member": m, "merge_time": t}
                                           for m, t in members]
                              for owner, members in clusters.first_order.items()}})
    end = max((c.support_end() for c in curves.values()), default=1.0)
    rows = []
    for sigma, c in sorted(curves.items()):
        for t in sorted({0.0, *c.knots(), end}):
            rows.append((sigma, t, c.evaluate(t)))
    _write_csv(os.path.join(args.out, "curves.csv"), args,
               "id,eps,value", rows)
    _write_svg(os.path.join(args.out, "curves.svg"), curves, end)
    print(os.path.join(args.out, "curves.json"))


def cmd_stability(args):
    X = load_points(args.input)
    kappas = [float(k) for k in args.kappa]
    p = math.inf if args.p == "inf" else float(args.p)
    base_pairs, base_source, base_clusters = _analysis(args, X)
    base_coll = centrality_collection(
        base_source, [base_clusters.pairs[i] for i in base_clusters.ordering],
        base_clusters, args.order, args.scaling, p, not args.no_geodesic)
    base_diag = pairs_to_diagram([base_clusters.pairs[i]
                                  for i in base_clusters.ordering])
    dist_rows, gap_rows = [], []
    for ki, kappa in enumerate(kappas):
        for rep in range(args.reps):
            Y = perturb(X, kappa, args.seed, index=(ki, rep))
            pert_pairs, pert_source, pert_clusters = _analysis(args, Y)
            coll = centrality_collection(
                pert_source,
                [pert_clusters.pairs[i] for i in pert_clusters.ordering],
                pert_clusters, args.order, args.scaling, p, not args.no_geodesic)
            diag = pairs_to_diagram([pert_clusters.pairs[i]
                                     for i in pert_clusters.ordering])
            if math.isinf(p):
                C = centrality_distance_inf(base_coll, coll)
            else:
                C = centrality_distance(base_coll, coll).value
            dB = bottleneck_distance(base_diag, diag)
            wdiff = float(np.abs(pairwise_distances(X) - pairwise_distances(Y)).max() / 2.0)
            dist_rows.append((kappa, rep, C, dB, wdiff))
            for chk in verify_bounds(base_coll, coll, base_diag, diag, wdiff):
                gap_rows.append((kappa, rep, chk.name, chk.lhs, chk.rhs,
                                 chk.rhs - chk.lhs, int(chk.holds)))
    _write_csv(os.path.join(args.out, "distances.csv"), args,
               "kappa,rep,distance,bottleneck,weight_diff", dist_rows)
    _write_csv(os.path.join(args.out, "bound_gaps.csv"), args,
               "kappa,rep,inequality,lhs,rhs,gap,pass", gap_rows)
    print(os.path.join(args.out, "bound_gaps.csv"))


def cmd_signal(args):
    X = load_points(args.input)
    pairs, _ = compute_pairs(X=X, k=args.k, max_dim=args.max_dim,
                             max_scale=args.max_scale)
    report = extract_signal(pairs_to_diagram(pairs), args.alpha, args.A)
    _write_json(os.path.join(args.out, "signal.json"), args, report.to_dict())
    print(os.path.join(args.out, "signal.json"))


def cmd_bootstrap(args):
    X = load_points(args.input)
    stats = bootstrap_hole_stats(X, args.reps, args.fraction, args.alpha,
                                 args.k, args.seed, args.max_scale, args.A)
    _write_csv(os.path.join(args.out, "bootstrap.csv"), args, "rep,holes",
               list(enumerate(stats.counts)))
    _write_json(os.path.join(args.out, "bootstrap_stats.json"), args, {
        "mean": stats.mean, "se": stats.se,
        "ci95_low": stats.ci95[0], "ci95_high": stats.ci95[1],
        "reps": stats.reps, "sample_size": stats.sample_size,
        "degenerate": stats.degenerate,
    })
    print(os.path.join(args.out, "bootstrap.csv"))


def cmd_thresholds(args):
    X = load_points(args.input)
    if args.variant:
        order, scaling = VARIANT_NAMES[args.variant]
    else:
        order, scaling = args.order, args.scaling
    pairs, source, clusters = _analysis(args, X)
    curves = curve_family(clusters, order, scaling)
    pers = [clusters.pairs[i].persistence for i in clusters.ordering]
    cent = [curves[i].max_value() for i in clusters.ordering]
    if not pers:
        raise ValueError("no positive-persistence classes to threshold")
    pc = threshold_counts(pers)
    cc = threshold_counts(cent)
    rows = [(i, a, b) for (i, a), (_, b) in zip(pc, cc)]
    _write_csv(os.path.join(args.out, "thresholds.csv"), args,
               "i,persistence_count,centrality_count", rows)
    print(os.path.join(args.out, "thresholds.csv"))


# --------------------------------------------------------------------------
# parser

def _add_common(sp, seed_default):
    sp.add_argument("--out", default=".", help="output directory")
    sp.add_argument("--seed", type=int, default=seed_default)


def _add_complex_flags(sp):
    sp.add_argument("--input", required=True, help="point CSV (one point per line)")
    sp.add_argument("--k", type=int, default=1, help="homology dimension")
    sp.add_argument("--max-dim", dest="max_dim", type=int, default=None)
    sp.add_argument("--max-scale", dest="max_scale", type=float, default=None)
    sp.add_argument("--merge-rule", dest="merge_rule", default="exact",
                    choices=("exact", "near"))


def build_parser(seed_default: int) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cyclecent",
        description="cycle centrality from persistent homology")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="sample a synthetic point cloud")
    sp.add_argument("kind", choices=("sierpinski", "fern", "annuli"))
    sp.add_argument("--n", type=int, required=True)
    _add_common(sp, seed_default)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("perturb", help="uniformly perturb a point cloud")
    sp.add_argument("--input", required=True)
    sp.add_argument("--kappa", type=float, required=True)
    _add_common(sp, seed_default)
    sp.set_defaults(func=cmd_perturb)

    sp = sub.add_parser("persist", help="persistence diagram + representatives")
    _add_complex_flags(sp)
    sp.add_argument("--include-zero-persistence", action="store_true")
    _add_common(sp, seed_default)
    sp.set_defaults(func=cmd_persist)

    sp = sub.add_parser("centrality", help="centrality curves (JSON/CSV/SVG)")
    _add_complex_flags(sp)
    sp.add_argument("--order", type=int, default=3, choices=(1, 2, 3))
    sp.add_argument("--scaling", default="unit", choices=("unit", "early", "late"))
    sp.add_argument("--variant", default=None, choices=tuple(VARIANT_NAMES),
                    help="J4/J5/J6 = J3 with unit/late/early scaling")
    _add_common(sp, seed_default)
    sp.set_defaults(func=cmd_centrality)

    sp = sub.add_parser("stability", help="perturbation study with bound gaps")
    _add_complex_flags(sp)
    sp.add_argument("--kappa", nargs="+", required=True)
    sp.add_argument("--reps", type=int, default=30)
    sp.add_argument("--p", default="1")
    sp.add_argument("--order", type=int, default=3, choices=(1, 2, 3))
    sp.add_argument("--scaling", default="unit", choices=("unit", "early", "late"))
    sp.add_argument("--no-geodesic", dest="no_geodesic", action="store_true")
    _add_common(sp, seed_default)
    sp.set_defaults(func=cmd_stability)

    sp = sub.add_parser("signal", help="LGumbel signal test")
    _add_complex_flags(sp)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--A", type=float, default=1.0, choices=(1.0, 0.5))
    _add_common(sp, seed_default)
    sp.set_defaults(func=cmd_signal)

    sp = sub.add_parser("bootstrap", help="bootstrap signal-hole statistics")
    _add_complex_flags(sp)
    sp.add_argument("--reps", type=int, default=1000)
    sp.add_argument("--fraction", type=float, default=0.8)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--A", type=float, default=1.0, choices=(1.0, 0.5))
    _add_common(sp, seed_default)
    sp.set_defaults(func=cmd_bootstrap)

    sp = sub.add_parser("thresholds",
                        help="hole counts vs fraction-of-max thresholds")
    _add_complex_flags(sp)
    sp.add_argument("--order", type=int, default=3, choices=(1, 2, 3))
    sp.add_argument("--scaling", default="late", choices=("unit", "early", "late"))
    sp.add_argument("--variant", default="J5", choices=tuple(VARIANT_NAMES))
    _add_common(sp, seed_default)
    sp.set_defaults(func=cmd_thresholds)

    return ap


def main(argv=None) -> int:
    seed_default = int(os.environ.get("CYCLECENT_SEED", "0"))
    ap = build_parser(seed_default)
    args = ap.parse_args(argv)
    try:
        args.func(args)
    except (PointFormatError, EmptyInputError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FORMAT_ERROR
    except (DegenerateClassError, UndefinedConstantsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NUMERIC_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
