"""Command-line front end: spectrum queries, evolution runs, validation.

Subcommands: ``validate``, ``spectrum``, ``evolve``, ``coherent``.  A JSON
config file (``--config``) supplies defaults; explicit flags override it.
Exit codes: 0 success, 1 numerical/validation failure, 2 usage errors.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__, coherent, evolution, onemode, rep, twomode, validation
from .errors import BoundaryAmbiguityError
from .jacobi import oracle_eigs

USAGE_ERROR = 2
FAILURE = 1

_KNOWN_KEYS = {
    "validate": {"hd_convention", "quick"},
    "spectrum": {"model", "mu", "nu", "alpha0_table", "l", "r", "n_levels",
                 "count", "K", "alpha0", "beta0", "format"},
    "evolve": {"preset", "n_per_mode", "omega0", "omega1", "state", "times",
               "tail_tol", "format"},
    "coherent": {"zeta_re", "zeta_im", "alpha0", "n_levels", "k_max", "format"},
}


def _fmt(x) -> str:
    return f"{x:.17g}"


def _load_config(path, command):
    if path is None:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    unknown = set(cfg) - _KNOWN_KEYS[command]
    if unknown:
        raise ValueError(f"unknown config keys for {command}: {sorted(unknown)}")
    return cfg


def _merge(cfg: dict, args: argparse.Namespace, keys) -> dict:
    out = dict(cfg)
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    return out


def _emit(payload: dict, fmt: str, out_path, csv_rows=None, csv_header=None):
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
        text += "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(csv_header)
        for row in csv_rows:
            writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
        buf.write("# config: " + json.dumps(payload["config"], sort_keys=True,
                                            default=_json_default) + "\n")
        buf.write(f"# version: {payload['version']}\n")
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj)}")


def cmd_validate(args) -> int:
    cfg = _merge(_load_config(args.config, "validate"), args,
                 ("hd_convention", "quick"))
    convention = cfg.get("hd_convention", "operator-derived")
    results = validation.run_all(hd_convention=convention,
                                 quick=bool(cfg.get("quick", False)))
    report = validation.format_report(results)
    payload = {
        "config": {"command": "validate", "hd_convention": convention,
                   "quick": bool(cfg.get("quick", False))},
        "version": __version__,
        "results": [r.to_dict() for r in results],
        "diagnostics": {"n_checks": len(results),
                        "n_passed": sum(r.passed for r in results)},
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
            fh.write("\n")
    print(report)
    return 0 if all(r.passed for r in results) else FAILURE


def _measure_rows(meas, count):
    rows = [("atom", _fmt(loc), _fmt(w)) for loc, w in meas.atoms[:count]]
    if meas.continuous is not None:
        lo, hi = meas.continuous.support
        rows.append(("continuum", f"[{_fmt(lo)}, {_fmt(hi)}]", ""))
    return rows


def cmd_spectrum(args) -> int:
    cfg = _merge(_load_config(args.config, "spectrum"), args,
                 ("model", "mu", "nu", "l", "r", "n_levels", "count", "K",
                  "alpha0", "beta0", "format"))
    if args.alpha0_table is not None:
        cfg["alpha0_table"] = [float(x) for x in args.alpha0_table.split(",")]
    model = cfg.get("model", "onemode")
    count = int(cfg.get("count", 8))
    fmt = cfg.get("format", "json")
    results = {}
    diagnostics = {}
    if model == "onemode":
        l = int(cfg.get("l", 1))
        table = tuple(cfg.get("alpha0_table", [1.0] * l))
        sector = rep.OneModeSector(rep.MultibosonRep(l, table),
                                   int(cfg.get("r", 0)),
                                   int(cfg.get("n_levels", 100)))
        h = onemode.OneModeHamiltonian(float(cfg["mu"]), float(cfg["nu"]), sector)
        label = onemode.classify(h.mu, h.nu, sector.alpha0)
        meas = onemode.spectrum(h, n_atoms=count)
        results["case_index"] = label.index
        results["family"] = type(label.family).__name__ if label.family else "diagonal"
        results["family_params"] = _family_params(label.family)
        results["scale"] = label.scale
        results["atoms"] = [{"location": loc, "weight": w}
                            for loc, w in meas.atoms[:count]]
        if meas.continuous is not None:
            results["continuum"] = list(meas.continuous.support)
        if label.discrete:
            w = oracle_eigs(onemode.jacobi(h), count=min(count, 5))
            closed = meas.atom_locations()[:w.size]
            results["oracle_delta"] = float(np.abs(np.sort(closed) - w).max()) \
                if label.index != 9 else float(np.abs(closed - w).max())
    elif model in ("two-d", "two-c"):
        a0 = float(cfg.get("alpha0", 1.0))
        b0 = float(cfg.get("beta0", 1.0))
        K = int(cfg.get("K", 0))
        if model == "two-d":
            blk = twomode.DBlock(K, a0, b0)
            ev = twomode.hd_spectrum(blk)
            w = oracle_eigs(twomode.hd_block_jacobi(blk))
            results["eigenvalues"] = ev.tolist()
            results["oracle_delta"] = float(np.abs(ev - w).max())
        else:
            blk = twomode.CBlock(K, a0, b0, n_levels=int(cfg.get("n_levels", 4000)))
            try:
                meas = twomode.hc_spectrum(blk)
            except BoundaryAmbiguityError as exc:
                results["warning"] = str(exc)
                results["uvw_candidates"] = list(exc.candidates)
                meas = None
            if meas is not None:
                p = twomode.uvw_params(K, a0, b0)
                results["uvw"] = {"u": p.u, "v": p.v, "w": p.w, "branch": p.branch}
                results["atoms"] = [{"location": loc, "weight": w}
                                    for loc, w in meas.atoms]
                results["continuum"] = list(meas.continuous.support)
                if meas.atoms:
                    chk = twomode.hc_truncation_check(blk, count=len(meas.atoms) + 1)
                    diagnostics["truncation_top"] = chk.top_full.tolist()
                    diagnostics["richardson"] = chk.extrapolated.tolist()
                    diagnostics["agreement"] = chk.agreement
                    results["oracle_delta"] = float(
                        abs(chk.extrapolated[-1] - meas.atoms[-1][0]))
    else:
        raise ValueError(f"unknown model {model!r}")
    payload = {"config": {"command": "spectrum", **cfg}, "version": __version__,
               "results": results, "diagnostics": diagnostics}
    rows = [(k, json.dumps(v, sort_keys=True, default=_json_default), "")
            for k, v in results.items()]
    _emit(payload, fmt, args.out, rows, ("key", "value", ""))
    return 0


def _family_params(fam):
    if fam is None:
        return {}
    return {k: v for k, v in fam.__dict__.items()}


def cmd_evolve(args) -> int:
    cfg = _merge(_load_config(args.config, "evolve"), args,
                 ("preset", "n_per_mode", "omega0", "omega1", "state", "times",
                  "tail_tol", "format"))
    name = cfg.get("preset", "HIV")
    n = int(cfg.get("n_per_mode", 48))
    pm = evolution.preset(name, n)
    tail = float(cfg.get("tail_tol", math.inf))
    model = evolution.FullModel(pm.mapping,
                                (float(cfg.get("omega0", 1.0)),
                                 float(cfg.get("omega1", 1.0))),
                                tail_tol=tail)
    occ = tuple(int(x) for x in str(cfg.get("state", "2,3")).split(","))
    psi0 = evolution.basis_state(model, occ)
    times = _parse_times(cfg.get("times", "0:10:21"))
    series = evolution.run_series(model, psi0, times)
    rows = []
    for t, rec, err in zip(series.times, series.records, series.norm_errors):
        rows.append((t, rec.means[0], rec.variances[0], rec.fanos[0],
                     rec.means[1], rec.variances[1], rec.fanos[1], err))
    header = ("t", "mean_n0", "var_n0", "fano_n0",
              "mean_n1", "var_n1", "fano_n1", "norm_error")
    payload = {"config": {"command": "evolve", **cfg}, "version": __version__,
               "results": [dict(zip(header, row)) for row in rows],
               "diagnostics": {"max_norm_error": max(series.norm_errors)}}
    _emit(payload, cfg.get("format", "csv"), args.out, rows, header)
    return 0


def _parse_times(arg) -> list[float]:
    if isinstance(arg, (list, tuple)):
        return [float(t) for t in arg]
    if ":" in str(arg):
        lo, hi, num = str(arg).split(":")
        return np.linspace(float(lo), float(hi), int(num)).tolist()
    return [float(t) for t in str(arg).split(",")]


def cmd_coherent(args) -> int:
    cfg = _merge(_load_config(args.config, "coherent"), args,
                 ("zeta_re", "zeta_im", "alpha0", "n_levels", "k_max", "format"))
    zeta = complex(float(cfg.get("zeta_re", 1.0)), float(cfg.get("zeta_im", 0.0)))
    al = float(cfg.get("alpha0", 1.0))
    n = int(cfg.get("n_levels", 80))
    state = coherent.coherent_amplitudes(zeta, al, n)
    sector = rep.OneModeSector(rep.MultibosonRep(1, (al,)), 0, n)
    _, am, _ = rep.sector_matrices(sector)
    resid = float(np.linalg.norm(am @ state.amplitudes - zeta * state.amplitudes)
                  / state.norm())
    norm2 = state.norm() ** 2
    kern = coherent.kernel(abs(zeta) ** 2, al)
    meas = coherent.radial_measure(al, k_checked=int(cfg.get("k_max", 6)))
    moments = [{"k": k, "value": meas.moment(k), "target": meas.target_moment(k),
                "rel_error": meas.moment_error(k)}
               for k in range(int(cfg.get("k_max", 6)) + 1)]
    results = {
        "eigenstate_residual": resid,
        "norm_sq": norm2,
        "kernel_norm_sq": float(np.real(kern)),
        "kernel_identity_error": float(abs(norm2 - kern)),
        "moments": moments,
    }
    payload = {"config": {"command": "coherent", **cfg}, "version": __version__,
               "results": results, "diagnostics": {}}
    rows = [("eigenstate_residual", resid, ""), ("norm_sq", norm2, ""),
            ("kernel_identity_error", float(abs(norm2 - kern)), "")]
    rows += [("moment_rel_error_k%d" % m["k"], m["rel_error"], "") for m in moments]
    _emit(payload, cfg.get("format", "json"), args.out, rows, ("key", "value", ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multiboson",
                                description="cluster-model spectra and evolution")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("validate", help="run the cross-module invariant suite")
    pv.add_argument("--hd-convention", dest="hd_convention",
                    choices=("operator-derived", "printed"))
    pv.add_argument("--quick", action="store_const", const=True)

    ps = sub.add_parser("spectrum", help="closed-form spectra with oracle deltas")
    ps.add_argument("--model", choices=("onemode", "two-d", "two-c"))
    ps.add_argument("--mu", type=float)
    ps.add_argument("--nu", type=float)
    ps.add_argument("--alpha0-table", dest="alpha0_table")
    ps.add_argument("--l", type=int)
    ps.add_argument("--r", type=int)
    ps.add_argument("--n-levels", dest="n_levels", type=int)
    ps.add_argument("--count", type=int)
    ps.add_argument("--K", type=int)
    ps.add_argument("--alpha0", type=float)
    ps.add_argument("--beta0", type=float)

    pe = sub.add_parser("evolve", help="observable series under a preset")
    pe.add_argument("--preset", choices=("HI", "HII", "HIII", "HIV"))
    pe.add_argument("--n-per-mode", dest="n_per_mode", type=int)
    pe.add_argument("--omega0", type=float)
    pe.add_argument("--omega1", type=float)
    pe.add_argument("--state")
    pe.add_argument("--times")
    pe.add_argument("--tail-tol", dest="tail_tol", type=float)

    pc = sub.add_parser("coherent", help="coherent-state diagnostics")
    pc.add_argument("--zeta-re", dest="zeta_re", type=float)
    pc.add_argument("--zeta-im", dest="zeta_im", type=float)
    pc.add_argument("--alpha0", type=float)
    pc.add_argument("--n-levels", dest="n_levels", type=int)
    pc.add_argument("--k-max", dest="k_max", type=int)

    for sp in (pv, ps, pe, pc):
        sp.add_argument("--config")
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("json", "csv"))
    return p


_COMMANDS = {
    "validate": cmd_validate,
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "coherent": cmd_coherent,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:  # numerical failures
        print(f"failure: {exc}", file=sys.stderr)
        return FAILURE


if __name__ == "__main__":
    sys.exit(main())
