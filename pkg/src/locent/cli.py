"""Command-line front end: ``locent {bounds,qc,linear,curve,verify}``.

Node labels on the command line and in graph/noise files are 1-based.
CSV output has a header row and prints floats with 12 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import analytic, dense, entanglement, gd, localizable, noise, verify
from .graphs import as_region, graph_from_json, load_graph
from .presets import PRESETS


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return "%.12g" % v
    return str(v)


def parse_grid(spec) -> list[float]:
    """``"start:stop:steps"`` (inclusive linspace) or a comma list."""
    if isinstance(spec, (list, tuple)):
        vals = [float(x) for x in spec]
    elif ":" in str(spec):
        a, b, k = str(spec).split(":")
        vals = np.linspace(float(a), float(b), int(k)).tolist()
    else:
        vals = [float(x) for x in str(spec).split(",") if x.strip()]
    if not vals or any(not 0.0 <= v <= 1.0 for v in vals):
        raise ValueError(f"q grid {spec!r} must be non-empty and within [0, 1]")
    return vals


def parse_range(spec) -> list[int]:
    """``"lo:hi"`` inclusive, or a comma list."""
    if ":" in str(spec):
        lo, hi = str(spec).split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in str(spec).split(",") if x.strip()]


def parse_labels(spec) -> list[int]:
    """1-based labels (comma string or list) to 0-based indices."""
    if isinstance(spec, (list, tuple)):
        return [int(x) - 1 for x in spec]
    return [int(x) - 1 for x in str(spec).split(",") if x.strip()]


def write_csv(header, rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    text = buf.getvalue()
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
    return text


# --- bounds ------------------------------------------------------------------

BOUNDS_HEADER = ["q", "E_full", "E_pauli", "E0", "E_reduced", "E_wlb", "omega",
                 "l", "E_l", "pauli_ge_l", "pauli_ge_zero", "zero_ge_reduced", "reduced_ge_wlb", "full_ge_pauli"]


def _bounds_row(job):
    cfg, q = job
    g = cfg["graph"]
    layer = noise.noise_layer_from_obj(cfg["noise"], g.n, q)
    om = cfg["region"]
    frame = cfg["frame"]
    part = cfg["part"]
    measure = cfg["measure"]
    notes = []
    if g.n <= dense.MAX_DENSITY_QUBITS:
        rho = noise.apply_noise(dense.to_density(dense.graph_state(g)), layer)
        full = None
        if cfg["full_le"]:
            if g.n - len(om) <= localizable.MAX_OPT_MEASURED:
                full = localizable.OptimizerConfig(seed=cfg["seed"])
            else:
                notes.append("E_full: optimizer guard exceeded")
        rep = localizable.hierarchy_report(rho, g, om, frame, measure, part, full=full)
        f = rep.flags
        row = [q, rep.e_full, rep.e_pauli, rep.e_zero, rep.e_reduced, rep.e_wlb, rep.omega,
               rep.l_index, rep.e_l, f["pauli_ge_l"], f["pauli_ge_zero"], f["zero_ge_reduced"],
               f["reduced_ge_wlb"], f.get("full_ge_pauli")]
        return row, notes, rep
    # beyond the dense cap only the GD route is available
    notes.append("E_full, E_pauli, E_l: dense cap exceeded")
    if not layer.is_pauli:
        notes.append("all columns: non-Pauli noise beyond the dense cap")
        return [q] + [None] * (len(BOUNDS_HEADER) - 1), notes, None
    gp = g if frame is None else frame.graph
    lay = layer if frame is None else layer.conjugated(list(frame.layer))
    st = gd.gd_from_pauli_noise(gp, lay)
    e0 = localizable.mlb_zbasis(st, om, measure, part)
    w = entanglement.witness_expectation(st, entanglement.local_witness(gp, om))
    ewlb = localizable.measure_bound(entanglement.wlb(w), measure)
    row = [q, None, None, e0, e0, ewlb, w, None, None, None, None, True, e0 >= ewlb - localizable.TOL, None]
    return row, notes, None


def run_bounds(cfg: dict, jobs: int = 1):
    qs = cfg["q_grid"]
    work = [(cfg, q) for q in qs]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_bounds_row, work))
    else:
        results = [_bounds_row(w) for w in work]
    return results


def resolve_bounds_config(args) -> dict:
    base = dict(PRESETS.get(args.preset, {})) if args.preset else {}
    if args.config:
        base.update(json.loads(Path(args.config).read_text()))
    for key in ("graph", "noise", "region", "q_grid", "frame", "part", "measure"):
        v = getattr(args, key, None)
        if v is not None:
            base[key] = v
    if "graph" not in base or "region" not in base:
        raise SystemExit("bounds needs a graph and a region (or a preset)")
    gspec = base["graph"]
    g = graph_from_json(gspec) if isinstance(gspec, dict) else load_graph(gspec)
    nspec = base.get("noise", {"default": {"kind": "I"}})
    if not isinstance(nspec, dict):
        nspec = json.loads(Path(nspec).read_text())
    om = as_region(parse_labels(base["region"]), g.n, min_size=2)
    fspec = base.get("frame", "auto")
    if fspec in (None, "auto"):
        frame = None if g.induced(om).is_connected() else localizable.Frame.connect(g, om)
    elif fspec == "none":
        frame = None
    else:
        frame = localizable.Frame.from_sequence(g, parse_labels(fspec))
    part = parse_labels(base["part"]) if base.get("part") is not None else None
    return {
        "graph": g, "noise": nspec, "region": om, "frame": frame, "part": part,
        "q_grid": parse_grid(base.get("q_grid", "0:1:11")),
        "measure": base.get("measure", "log_negativity"),
        "full_le": bool(args.full_le or base.get("full_le", False)),
        "seed": args.seed,
    }


def cmd_bounds(args) -> int:
    cfg = resolve_bounds_config(args)
    results = run_bounds(cfg, args.jobs)
    for row, notes, _ in results:
        for n in notes:
            print(f"q={fmt(row[0])}: {n}", file=sys.stderr)
    if args.format == "json":
        payload = [json.loads(rep.to_json()) | {"q": row[0]} for row, _, rep in results if rep is not None]
        text = json.dumps(payload, indent=2) + "\n"
        if args.out in (None, "-"):
            sys.stdout.write(text)
        else:
            Path(args.out).write_text(text)
    else:
        write_csv(BOUNDS_HEADER, [r for r, _, _ in results], args.out)
    for r, _, _ in results:
        broken = [h for h, v in zip(BOUNDS_HEADER[9:], r[9:]) if v is not None and not v]
        if broken:
            print(f"q={fmt(r[0])}: hierarchy flags violated: {', '.join(broken)}", file=sys.stderr)
    return 0


# --- analytic commands -------------------------------------------------------


def _pairs(spec) -> list[str]:
    if isinstance(spec, (list, tuple)):
        return list(spec)
    return [p.strip() for p in str(spec).split(",") if p.strip()]


def cmd_qc(args) -> int:
    base = dict(PRESETS.get(args.preset, {})) if args.preset else {}
    ns = parse_range(args.n_range or base.get("n_range", "1:20"))
    pairs = _pairs(args.pairs or base.get("pairs", ["00"]))
    rows = []
    for n in ns:
        c = analytic.NeighborhoodCounts.symmetric(n)
        for pair in pairs:
            if pair == "00" and args.flip_kind.upper() in ("BF", "BPF", "DP"):
                rows.append((n, pair, analytic.critical_noise(n), "closed_form"))
            else:
                rows.append((n, pair, analytic.critical_noise_numeric(c, pair, args.flip_kind), "bisection"))
    write_csv(["n", "channel_pair", "q_c", "method"], rows, args.out)
    return 0


def cmd_linear(args) -> int:
    base = dict(PRESETS.get(args.preset, {})) if args.preset else {}
    nls = parse_range(args.nl_range or base.get("nl_range", "3:10"))
    kind = args.kind or base.get("kind", "PF")
    qs = parse_grid(args.q_grid or base.get("q_grid", "0:1:11"))
    rows = []
    for n_l in nls:
        for q in qs:
            prm = analytic.linear_graph_params(n_l, kind, q, bulk=not args.boundary)
            e0 = analytic.e0_from_counts(prm.counts, prm.flip_probability, prm.ch_a, prm.ch_b)
            rows.append((n_l, *prm.counts.as_tuple(), q, e0))
    write_csv(["n_L", "n_a", "n_ab", "n_b", "q", "e0"], rows, args.out)
    return 0


def cmd_curve(args) -> int:
    counts = [int(x) for x in args.counts.split(",")]
    if len(counts) != 3:
        raise SystemExit("--counts expects n_a,n_ab,n_b")
    c = analytic.NeighborhoodCounts(*counts)
    qs = parse_grid(args.q_grid or "0:1:101")
    rows = []
    for pair in _pairs(args.pairs):
        rows.extend(analytic.analytic_curve(c, pair, qs, args.flip_kind).rows())
    write_csv(["channel_pair", "n_a", "n_ab", "n_b", "q", "e0"], rows, args.out)
    return 0


def cmd_verify(args) -> int:
    if args.trials == 0:
        print("warning: zero trials requested, nothing checked", file=sys.stderr)
    suites = _pairs(args.suite) if args.suite else None
    results = verify.run_all(args.seed, args.trials, suites)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name} ({r.trials} trials){': ' + r.message if r.message else ''}")
        ok &= r.passed
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="locent", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--preset", choices=sorted(PRESETS))
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--seed", type=int, default=0)

    b = sub.add_parser("bounds", help="hierarchy of bounds over a q grid")
    common(b)
    b.add_argument("--config", help="JSON file with any of the options below")
    b.add_argument("--graph", help="graph JSON file")
    b.add_argument("--noise", help="noise spec JSON file")
    b.add_argument("--region", help="comma-separated 1-based labels")
    b.add_argument("--q-grid", dest="q_grid", help="start:stop:steps or comma list")
    b.add_argument("--frame", help="'auto', 'none' or a comma list of LC nodes")
    b.add_argument("--part", help="region members on the transposed side")
    b.add_argument("--measure", choices=["log_negativity", "negativity"])
    b.add_argument("--full-le", dest="full_le", action="store_true", help="run the continuous optimizer")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--format", choices=["csv", "json"], default="csv")
    b.set_defaults(func=cmd_bounds)

    q = sub.add_parser("qc", help="critical noise against neighbourhood size")
    common(q)
    q.add_argument("--n-range", dest="n_range")
    q.add_argument("--pairs", help="channel pair labels such as 00,01,11")
    q.add_argument("--flip-kind", dest="flip_kind", default="BF")
    q.set_defaults(func=cmd_qc)

    li = sub.add_parser("linear", help="analytic bound on a connectified chain")
    common(li)
    li.add_argument("--nl-range", dest="nl_range")
    li.add_argument("--kind", choices=["BF", "BPF", "PF", "DP"])
    li.add_argument("--q-grid", dest="q_grid")
    li.add_argument("--boundary", action="store_true", help="a and b at the chain ends")
    li.set_defaults(func=cmd_linear)

    cu = sub.add_parser("curve", help="analytic bound against q for given counts")
    common(cu)
    cu.add_argument("--counts", default="1,1,1", help="n_a,n_ab,n_b")
    cu.add_argument("--pairs", default="00")
    cu.add_argument("--q-grid", dest="q_grid")
    cu.add_argument("--flip-kind", dest="flip_kind", default="BF")
    cu.set_defaults(func=cmd_curve)

    v = sub.add_parser("verify", help="randomized invariant checks")
    common(v)
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--suite", help="comma list of suites (default: all)")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.preset and PRESETS[args.preset]["command"] != args.command:
        raise SystemExit(f"preset {args.preset} belongs to the '{PRESETS[args.preset]['command']}' command")
    try:
        return args.func(args)
    except (ValueError, dense.CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
