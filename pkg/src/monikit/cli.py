"""Command-line interface: ensemble runs, fits over stored tables, the
embedded self-check suite, lattice/region exports, and a report path
that renders figures next to the delimited output."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, analysis, runner
from .lattice import build as build_lattice


# -- argument helpers -------------------------------------------------------------


def _parse_sizes(text: str) -> tuple:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _parse_p_values(text: str) -> tuple:
    """Either '0.6,0.62,0.64' or an inclusive range '0.6:0.76:0.02'."""
    if ":" in text:
        a, b, step = (float(tok) for tok in text.split(":"))
        vals = np.round(np.arange(a, b + step / 2.0, step), 12)
        return tuple(float(v) for v in vals)
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _parse_point(text: str) -> tuple:
    parts = tuple(float(tok) for tok in text.split(","))
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(
            "a point needs four comma-separated probabilities")
    return parts


def _build_config(args) -> runner.ExperimentConfig:
    base: dict = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
    overrides = {
        "kind": args.kind,
        "sizes": _parse_sizes(args.sizes) if args.sizes else None,
        "n_samples": args.samples,
        "seed": args.seed,
        "line": args.line,
        "p_values": _parse_p_values(args.p_values) if args.p_values else None,
        "points": tuple(args.point) if args.point else None,
        "sweeps": args.sweeps,
        "mode": args.mode,
        "workers": args.workers,
        "out": args.out,
    }
    for key, val in overrides.items():
        if val is not None:
            base[key] = val
    if args.point:
        base.pop("line", None)
        base.pop("p_values", None)
    return runner.ExperimentConfig.from_dict(base)


# -- verbs ------------------------------------------------------------------------


def _cmd_run(args) -> int:
    cfg = _build_config(args)
    res = runner.run(cfg)
    print(f"wrote {res['rows']} rows to {res['csv']} (meta: {res['meta']})")
    return 0


def _cmd_fit(args) -> int:
    fitter = runner.FITTERS[args.which]
    kwargs = {}
    if args.which == "page" and args.sizes:
        kwargs["sizes"] = _parse_sizes(args.sizes)
    if args.which in ("collapse", "lifshitz") and args.size:
        kwargs["L"] = args.size
    result = fitter(args.csv, **kwargs)
    out = args.out or os.path.join(
        os.path.dirname(os.path.abspath(args.csv)), f"{args.which}_fit.json")
    with open(out, "w") as fh:
        json.dump(result, fh, indent=2)
        fh.write("\n")
    headline = {
        "page": lambda r: ", ".join(
            f"{k}={v['value']:.6g}+-{v['stderr']:.2g}"
            for k, v in r["coefficients"].items()),
        "collapse": lambda r: (f"c={r['coefficients']['c']['value']:.6g}"
                               f"+-{r['coefficients']['c']['stderr']:.2g}"),
        "lifshitz": lambda r: (f"lam={r['lam']:.6g} beta={r['beta']:.6g} "
                               f"chi2={r['chi2']:.6g} "
                               f"(log-sine chi2={r['lnsine_chi2']:.6g})"),
        "crossing": lambda r: (f"p_c={r['p_c']:.6g}+-{r['p_c_err']:.2g} "
                               f"nu_inv={r['nu_inv']:.3g}"),
    }[args.which](result)
    print(f"{args.which}: {headline}")
    print(f"wrote {out}")
    return 0


def _cmd_selfcheck(_args) -> int:
    results = runner.selfcheck()
    ok = True
    for r in results:
        flag = "ok  " if r.passed else "FAIL"
        print(f"{flag} {r.name}: {r.detail}")
        ok &= r.passed
    print("selfcheck " + ("passed" if ok else "FAILED"))
    return 0 if ok else 1


def _cmd_graph(args) -> int:
    lat = build_lattice(args.size)
    nodes = []
    ops = []
    for kind in "xyz":
        for i in range(lat.L):
            for j in range(lat.L):
                nodes.append({"id": f"{kind}:{i},{j}", "type": f"{kind}-bond",
                              "i": i, "j": j})
        ops.extend(lat.all_bond_checks(kind))
    if args.ops == "all":
        for i in range(lat.L):
            for j in range(lat.L):
                nodes.append({"id": f"V:{i},{j}", "type": "plaquette",
                              "i": i, "j": j})
        ops.extend(lat.all_plaquette_V())
    edges = [[int(a), int(b)] for a, b in lat.frustration_graph(ops)]
    payload = {"L": lat.L, "nodes": nodes, "edges": edges}
    _emit_json(payload, args.out)
    return 0


def _cmd_regions(args) -> int:
    lat = build_lattice(args.size)
    payload = {
        "L": lat.L,
        "n_sites": lat.n_sites,
        "half_cylinder": lat.cylinder_region(lat.L // 2),
        "tmi": (dict(zip("ABCD", lat.tmi_regions()))
                if lat.L % 4 == 0 else None),
        "tee": dict(zip("ABC", lat.tee_regions())),
    }
    _emit_json(payload, args.out)
    return 0


def _emit_json(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)


# -- report: figures beside the table ----------------------------------------------


def _load_fit(path: str | None) -> dict | None:
    if not path:
        return None
    with open(path) as fh:
        return json.load(fh)


def _page_model(fit: dict, l: np.ndarray, L: int) -> np.ndarray:
    coef = {k: v["value"] for k, v in fit["coefficients"].items()}
    g = np.log((L / np.pi) * np.sin(np.pi * l / L))
    return (coef.get("v", 0.0) * analysis.vol_term(l, L)
            + coef.get("c", 0.0) * L * g / 3.0
            + coef.get("c1", 0.0) * g / 3.0
            + coef.get("a", 0.0) * L - coef.get("gamma", 0.0))


def _overlay_arc_fit(ax, fit: dict, L: int, data_l, data_y):
    l = np.linspace(1.2, L - 1.2, 300)
    if fit["kind"] == "page_ansatz":
        ax.plot(l, _page_model(fit, l, L), "-", color="crimson", lw=1.2,
                label="profile ansatz")
    elif fit["kind"] == "lifshitz":
        y = fit["beta"] * analysis.lifshitz_J(l / L, fit["lam"]) + fit["offset"]
        ax.plot(l, y, "-", color="crimson", lw=1.2, label="Lifshitz profile")
        g = np.log((L / np.pi) * np.sin(np.pi * l / L))
        ax.plot(l, fit["lnsine_c"] * L * g / 3.0 + fit["lnsine_offset"], "--",
                color="gray", lw=1.0, label="log-sine alternative")
    elif fit["kind"] == "collapse":
        mid = np.asarray(data_l) == L // 2
        if mid.any():
            s_mid = float(np.asarray(data_y)[mid][0])
            c = fit["coefficients"]["c"]["value"]
            y = s_mid + (c / 3.0) * L * np.log(np.sin(np.pi * l / L))
            ax.plot(l, y, "-", color="crimson", lw=1.2, label="log-sine fit")


def report(csv_path: str, fit_path: str | None = None,
           outdir: str | None = None) -> list[str]:
    """Render one figure per observable found in the table, written
    next to the CSV (or into outdir). Returns the written paths."""
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    table = runner.read_table(csv_path)
    fit = _load_fit(fit_path)
    outdir = outdir or os.path.dirname(os.path.abspath(csv_path))
    os.makedirs(outdir, exist_ok=True)
    base = os.path.splitext(os.path.basename(csv_path))[0]
    written = []

    for observable in sorted(set(table["observable"].tolist())):
        keep = table["observable"] == observable
        sub = {k: v[keep] for k, v in table.items()}
        fig, ax = plt.subplots(figsize=(5.2, 3.6), dpi=150)
        sizes = sorted(set(sub["L"].tolist()))

        if observable == "arc":
            for L in sizes:
                for pt in sorted(set(map(tuple, np.column_stack(
                        [sub[c][sub["L"] == L] for c in
                         ("p", "px", "py", "pz")])))):
                    m = ((sub["L"] == L) & (sub["p"] == pt[0])
                         & (sub["px"] == pt[1]) & (sub["py"] == pt[2])
                         & (sub["pz"] == pt[3]))
                    ax.errorbar(sub["index"][m], sub["mean"][m],
                                yerr=sub["stderr"][m], fmt="o", ms=3,
                                capsize=2, label=f"L={L}, p={pt[0]:g}")
                    if fit is not None and len(sizes) >= 1:
                        _overlay_arc_fit(ax, fit, int(L), sub["index"][m],
                                         sub["mean"][m])
            ax.set_xlabel("cut position l")
            ax.set_ylabel("entanglement entropy [bits]")
        elif observable in ("tmi", "tee", "half_entropy"):
            for L in sizes:
                m = sub["L"] == L
                order = np.argsort(sub["p"][m])
                ax.errorbar(sub["p"][m][order], sub["mean"][m][order],
                            yerr=sub["stderr"][m][order], fmt="o-", ms=3,
                            capsize=2, lw=1, label=f"L={L}")
            if fit is not None and fit.get("kind") == "crossing":
                ax.axvline(fit["p_c"], color="crimson", lw=1, ls="--",
                           label=f"crossing p_c={fit['p_c']:.4g}")
            ax.set_xlabel("plaquette probability p")
            labels = {"tmi": "tripartite mutual information [bits]",
                      "tee": "topological entropy [bits]",
                      "half_entropy": "half-cylinder entropy [bits]"}
            ax.set_ylabel(labels[observable])
        elif observable == "purify":
            for L in sizes:
                m = (sub["L"] == L) & (sub["index"] > 0)
                t = sub["index"][m].astype(float)
                ax.errorbar(t, sub["mean"][m], yerr=sub["stderr"][m],
                            fmt="o", ms=2.5, capsize=1.5, label=f"L={L}")
                anchor = np.nonzero(t >= 10)[0]
                if len(anchor) and sub["mean"][m][anchor[0]] > 0:
                    a = anchor[0]
                    guide = sub["mean"][m][a] * t[a] / t
                    ax.plot(t, guide, "--", color="gray", lw=1,
                            label="1/t guide")
            ax.set_xscale("log")
            ax.set_yscale("log")
            ax.set_xlabel("time [sweeps]")
            ax.set_ylabel("total entropy [bits]")
        else:
            plt.close(fig)
            continue

        ax.legend(fontsize=7, frameon=False)
        fig.tight_layout()
        path = os.path.join(outdir, f"{base}_{observable}.png")
        fig.savefig(path)
        plt.close(fig)
        written.append(path)
    return written


def _cmd_report(args) -> int:
    paths = report(args.csv, args.fit, args.outdir)
    for p in paths:
        print(f"wrote {p}")
    if not paths:
        print("no renderable observables found", file=sys.stderr)
        return 1
    return 0


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="monikit",
        description="Measurement-only honeycomb circuits: ensemble runs, "
                    "fits, self-checks, and reports.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="verb", required=True)

    rp = sub.add_parser("run", help="run an ensemble experiment")
    rp.add_argument("--config", help="JSON file with ExperimentConfig fields")
    rp.add_argument("--kind", choices=runner.KINDS)
    rp.add_argument("--sizes", help="comma-separated system sizes")
    rp.add_argument("--samples", type=int, dest="samples")
    rp.add_argument("--seed", type=int)
    rp.add_argument("--line", choices=sorted(runner.NAMED_LINES))
    rp.add_argument("--p-values", dest="p_values",
                    help="'0.6,0.62' or inclusive range '0.6:0.76:0.02'")
    rp.add_argument("--point", action="append", type=_parse_point,
                    help="explicit p,px,py,pz (repeatable)")
    rp.add_argument("--sweeps", type=int)
    rp.add_argument("--mode", choices=runner.MODES)
    rp.add_argument("--workers", type=int)
    rp.add_argument("--out")
    rp.set_defaults(func=_cmd_run, samples=None, seed=None, kind=None,
                    sizes=None, line=None, p_values=None, point=None,
                    sweeps=None, mode=None, workers=None, out=None)

    fp = sub.add_parser("fit", help="fit a stored table")
    fp.add_argument("which", choices=sorted(runner.FITTERS))
    fp.add_argument("--csv", required=True)
    fp.add_argument("--out")
    fp.add_argument("--sizes", help="restrict the page fit to these sizes")
    fp.add_argument("--size", type=int,
                    help="system size for collapse/lifshitz")
    fp.set_defaults(func=_cmd_fit)

    sp = sub.add_parser("selfcheck", help="run the embedded oracle suite")
    sp.set_defaults(func=_cmd_selfcheck)

    gp = sub.add_parser("graph", help="emit the frustration graph")
    gp.add_argument("--size", type=int, required=True)
    gp.add_argument("--ops", choices=("bonds", "all"), default="bonds")
    gp.add_argument("--out")
    gp.set_defaults(func=_cmd_graph)

    qp = sub.add_parser("regions", help="emit bipartition site lists")
    qp.add_argument("--size", type=int, required=True)
    qp.add_argument("--out")
    qp.set_defaults(func=_cmd_regions)

    tp = sub.add_parser("report",
                        help="render figures next to a stored table")
    tp.add_argument("--csv", required=True)
    tp.add_argument("--fit", help="fit JSON to overlay")
    tp.add_argument("--outdir")
    tp.set_defaults(func=_cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
