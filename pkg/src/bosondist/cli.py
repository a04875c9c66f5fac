"""Command-line interface.

Exit codes: 0 success, 2 usage, 3 validation, 4 numeric range. Ports are
1-based on the command line. Numbers are printed with 9 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .distinguishability import MAX_EXACT_N, ds_closed_form, ds_exact, ds_monte_carlo
from .errors import BosonDistError, NumericRangeError, UnitarityError
from .interference import (
    Experiment,
    prob_a,
    prob_a_classical,
    prob_a_ideal,
    prob_a_occupation,
    prob_b,
    prob_b_ideal,
)
from .linalg import (
    beam_splitter_50_50,
    haar_unitary,
    load_unitary,
    save_unitary,
    unitary_from_json,
    unitarity_residual,
)
from .metrics import purity_to_eta, required_purity, summarize, deviation_bound
from .photon_model import GaussianModel, purity_approx, purity_order_n, time_density

log = logging.getLogger("bosondist")

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_RANGE = 0, 2, 3, 4
DEFAULT_SAMPLES = 10_000


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.9g}"


def _round(obj):
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return float(f"{float(obj):.9g}")


def emit(rows: list[dict], fmt_name: str, out: str | None) -> None:
    """Write rows as CSV (with header) or as a JSON list."""
    if fmt_name == "json":
        text = json.dumps(_round(rows), indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow(fmt(v) for v in row.values())
        text = buf.getvalue()
    _write(text, out)


def emit_report(report: dict, out: str | None) -> None:
    _write(json.dumps(_round(report), indent=2) + "\n", out)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _resolve_unitary(entry, base: Path) -> np.ndarray:
    if isinstance(entry, str):
        path = Path(entry)
        return load_unitary(path if path.is_absolute() else base / path)
    if isinstance(entry, dict) and "haar" in entry:
        h = entry["haar"]
        return haar_unitary(int(h["M"]), int(h.get("seed", 0)))
    if isinstance(entry, dict) and entry.get("beam_splitter") is True:
        return beam_splitter_50_50()
    if isinstance(entry, dict):
        return unitary_from_json(entry)
    raise BosonDistError(f"cannot interpret unitary entry {entry!r}")


def load_config(path: str) -> tuple[Experiment, dict]:
    """Read a run config and build the experiment it describes."""
    p = Path(path)
    with open(p) as fh:
        cfg = json.load(fh)
    if "model" not in cfg or "unitary" not in cfg:
        raise BosonDistError("config needs 'model' and 'unitary' entries")
    model = GaussianModel.from_config(cfg["model"])
    exp = Experiment(model, _resolve_unitary(cfg["unitary"], p.parent))
    return exp, cfg


# -- subcommands -------------------------------------------------------------


def cmd_purity(args) -> int:
    if not 1 <= args.n_max <= 200:
        raise BosonDistError("--n-max must be in 1..200")
    rows = []
    for n in range(1, args.n_max + 1):
        exact = purity_order_n(args.eta, n)
        approx = purity_approx(args.eta, n)
        rows.append({"n": n, "exact": exact, "approx": approx, "rel_diff": abs(approx - exact) / exact})
    emit(rows, args.format, args.out)
    return EXIT_OK


def cmd_ds(args) -> int:
    n, eta = args.N, args.eta
    report = {"N": n, "eta": eta, "method": args.method}
    if args.method == "exact":
        if n > MAX_EXACT_N:
            raise BosonDistError(
                f"N={n} is too large for the exact group sum (limit {MAX_EXACT_N}); use --method closed"
            )
        report["ds"] = ds_exact(eta, n)
    elif args.method == "closed":
        report["ds"] = ds_closed_form(n, eta)
    else:
        model = GaussianModel.from_eta(n, eta)
        est, err = ds_monte_carlo(model, args.seed, args.samples)
        report.update(ds=est, std_error=err, seed=args.seed, samples=args.samples)
    report["bound"] = 1.0 - report["ds"]
    if args.format == "json":
        emit_report(report, args.out)
    else:
        _write("".join(f"{k}: {v if isinstance(v, str) else fmt(v)}\n" for k, v in report.items()), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    exp, cfg = load_config(args.config)
    samples = int(cfg.get("samples", DEFAULT_SAMPLES))
    seed = int(cfg.get("seed", cfg["model"].get("seed", 0)))
    log.info("compare: N=%d M=%d eta=%g samples=%d", exp.n_photons, exp.n_modes, exp.model.eta, samples)
    summary = summarize(exp, seed, samples, ds_route=args.ds_route)
    report = {"N": exp.n_photons, "M": exp.n_modes, "eta": exp.model.eta, "seed": seed, "samples": samples}
    report.update(summary.to_dict())
    emit_report(report, args.out)
    return EXIT_OK


def cmd_required_purity(args) -> int:
    p = required_purity(args.N, args.target)
    report = {
        "N": args.N,
        "target": args.target,
        "purity": p,
        "eta": purity_to_eta(p),
        "deviation_bound": deviation_bound(args.N, p),
    }
    if args.format == "json":
        emit_report(report, args.out)
    else:
        _write("".join(f"{k}: {fmt(v)}\n" for k, v in report.items()), args.out)
    return EXIT_OK


def cmd_haar(args) -> int:
    if not 1 <= args.M <= 64:
        raise BosonDistError("--M must be in 1..64")
    u = haar_unitary(args.M, args.seed)
    save_unitary(args.out, u)
    sys.stdout.write(f"wrote {args.out} (M={args.M}, seed={args.seed}); residual {fmt(unitarity_residual(u))}\n")
    return EXIT_OK


def _zero_based(exp: Experiment, ports: list[int]) -> list[int]:
    if any(p < 1 or p > exp.n_modes for p in ports):
        raise BosonDistError(f"ports must lie in 1..{exp.n_modes}")
    return [p - 1 for p in ports]


def cmd_prob_a(args) -> int:
    exp, _ = load_config(args.config)
    report = {"N": exp.n_photons, "M": exp.n_modes, "eta": exp.model.eta}
    if args.occupation is not None:
        report["occupation"] = args.occupation
        report["probability"] = prob_a_occupation(exp, args.occupation)
    else:
        if args.ports is None:
            raise BosonDistError("give --ports or --occupation")
        l = _zero_based(exp, args.ports)
        report.update(
            ports=args.ports,
            probability=prob_a(exp, l),
            ideal=prob_a_ideal(exp, l),
            classical=prob_a_classical(exp, l),
        )
    emit_report(report, args.out)
    return EXIT_OK


def cmd_prob_b(args) -> int:
    exp, _ = load_config(args.config)
    l = _zero_based(exp, args.ports)
    t = np.asarray(args.times, dtype=float)
    report = {
        "N": exp.n_photons,
        "M": exp.n_modes,
        "eta": exp.model.eta,
        "ports": args.ports,
        "times": list(t),
        "density": prob_b(exp, l, t),
        "ideal_density": prob_b_ideal(exp, l, t),
        "time_density": time_density(exp.model, t),
        "units": f"T^-{exp.n_photons}",
    }
    emit_report(report, args.out)
    return EXIT_OK


def cmd_hom(args) -> int:
    u = beam_splitter_50_50()
    rows = []
    for eta in args.eta:
        exp = Experiment(GaussianModel.from_eta(2, eta), u)
        rows.append({
            "eta": eta,
            "purity": purity_order_n(eta, 2),
            "coincidence": prob_a_occupation(exp, (1, 1)),
            "formula": 0.5 * (1.0 - (1.0 + 4.0 * eta * eta) ** -0.5),
        })
    emit(rows, args.format, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bosondist", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--verbose", "-v", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def out_opts(p, formats=True):
        p.add_argument("--out", help="write to this file instead of stdout")
        if formats:
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("purity", help="exact vs exponential higher-order purities")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--n-max", type=int, default=20)
    out_opts(p)
    p.set_defaults(func=cmd_purity)

    p = sub.add_parser("ds", help="indistinguishability probability d_s")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--method", choices=("exact", "closed", "mc"), default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100_000)
    out_opts(p)
    p.set_defaults(func=cmd_ds)

    p = sub.add_parser("compare", help="distances to the ideal for both setups and the bound")
    p.add_argument("config")
    p.add_argument("--ds-route", choices=("exact", "closed"), default="exact")
    out_opts(p, formats=False)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("required-purity", help="purity needed for a target deviation bound")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--target", type=float, required=True)
    out_opts(p)
    p.set_defaults(func=cmd_required_purity)

    p = sub.add_parser("haar", help="write a Haar-random unitary as JSON")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_haar)

    p = sub.add_parser("prob-a", help="setup (a) probability of one output event")
    p.add_argument("config")
    p.add_argument("--ports", type=_int_list, help="1-based output ports, e.g. 1,2,4")
    p.add_argument("--occupation", type=_int_list, help="occupation numbers, e.g. 1,1,0")
    out_opts(p, formats=False)
    p.set_defaults(func=cmd_prob_a)

    p = sub.add_parser("prob-b", help="setup (b) density at given ports and times")
    p.add_argument("config")
    p.add_argument("--ports", type=_int_list, required=True)
    p.add_argument("--times", type=_float_list, required=True)
    out_opts(p, formats=False)
    p.set_defaults(func=cmd_prob_b)

    p = sub.add_parser("hom", help="two-photon coincidence on a balanced beam splitter")
    p.add_argument("--eta", type=_float_list, required=True, help="comma-separated eta values")
    out_opts(p)
    p.set_defaults(func=cmd_hom)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except NumericRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except UnitarityError as exc:
        print(f"error: {exc} (norm residual {exc.residual:.3e})", file=sys.stderr)
        return EXIT_VALIDATION
    except (BosonDistError, ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
