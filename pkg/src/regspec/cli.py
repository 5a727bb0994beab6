"""
Command line entry point: ``regspec {capps,moments,simulate,compare}``.

Option precedence is command-line flag > ``REGSPEC_*`` environment variable >
``--config`` JSON file > built-in default. Environment variables use the
upper-cased option name with dashes as underscores, e.g. ``REGSPEC_SEED``,
``REGSPEC_THREADS``, ``REGSPEC_MAX_LENGTH``, ``REGSPEC_TRIALS``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .capp import (
    DEFAULT_MAX_LENGTH,
    EnumerationLimitError,
    count_by_signature,
    enumerate_triples,
    iter_pattern_records,
    signature_type,
)
from .ensemble import RNG_ALGORITHM, RNG_VERSION, SamplingError, WeightSpec
from .moments import (
    DomainError,
    deviation_table,
    eigenmoments,
    format_fraction,
    kesten_moment_exact,
    moment_expansion,
    moment_expansion_symbolic,
)
from .spectra import (
    aggregate_moments,
    attach_references,
    compare_moments,
    default_range,
    empirical_density,
    kesten_tv_distance,
    run_trials,
)

ENV_PREFIX = "REGSPEC_"

DEFAULTS = {
    "seed": None,
    "output": None,
    "format": "csv",
    "threads": 1,
    "max_length": DEFAULT_MAX_LENGTH,
    "trials": 100,
    "max_order": 8,
    "bins": 50,
    "weights": "constant",
}

_INT_KEYS = {"seed", "threads", "max_length", "trials", "max_order", "bins", "N", "d"}


class UsageError(Exception):
    pass


def _ffmt(x: float) -> str:
    return format(float(x), ".17g")


def _write(text: str, output: str | None, name: str | None = None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    if name is not None:
        path.mkdir(parents=True, exist_ok=True)
        path = path / name
    path.write_text(text)


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _int_range(text: str) -> list[int]:
    """'3:10' (inclusive), '3,5,7' or '4'."""
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",") if t]


def resolve_config(args: argparse.Namespace, keys) -> dict:
    file_cfg = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise UsageError(f"config file not found: {path}")
        file_cfg = json.loads(path.read_text())
    cfg = {}
    for key in keys:
        val = getattr(args, key, None)
        if val is None:
            env = os.environ.get(ENV_PREFIX + key.upper())
            if env is not None:
                val = int(env) if key in _INT_KEYS else env
        if val is None:
            val = file_cfg.get(key, file_cfg.get(key.replace("_", "-")))
        if val is None:
            val = DEFAULTS.get(key)
        cfg[key] = val
    return cfg


def _check_output(output: str | None, directory: bool) -> None:
    if output is None:
        return
    path = Path(output)
    parent = path if directory else path.parent
    while not parent.exists():
        parent = parent.parent
    if not os.access(parent, os.W_OK):
        raise UsageError(f"output location not writable: {output}")
    if directory and path.exists() and not path.is_dir():
        raise UsageError(f"output must be a directory: {output}")


# --- capps ------------------------------------------------------------------------


def cmd_capps(args) -> int:
    cfg = resolve_config(args, ["output", "format", "max_length"])
    _check_output(cfg["output"], directory=False)
    length = args.length
    wanted = None
    if args.signature:
        wanted = signature_type(int(t) for t in args.signature.split(","))
    try:
        records = [
            (p, sig, m) for p, sig, m in iter_pattern_records(length, cfg["max_length"])
            if wanted is None or signature_type(sig) == wanted
        ]
        counts = count_by_signature(length, cfg["max_length"])
        n_triples = len(enumerate_triples(length, cfg["max_length"])) if length % 2 == 0 else 0
    except EnumerationLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    note = "P_k empty for odd k" if length % 2 else None
    summary = {
        "length": length,
        "total": counts.total,
        "by_signature": {",".join(map(str, s)): c for s, c in counts.by_signature.items()},
        "all_twos": counts.all_twos,
        "one_four": counts.one_four,
        "triples": n_triples,
        "serendipity": n_triples == 2 * counts.one_four,
    }
    if note:
        summary["note"] = note
    if cfg["format"] == "json":
        body = dict(summary)
        body["patterns"] = [
            {"pattern": str(p), "signature": list(sig), "multiplicity_roots": list(m.roots)}
            for p, sig, m in records
        ]
        _write(json.dumps(body, indent=2) + "\n", cfg["output"])
    elif cfg["format"] == "jsonl":
        _write("".join(
            json.dumps({"pattern": str(p), "signature": list(sig), "multiplicity_roots": list(m.roots)}) + "\n"
            for p, sig, m in records
        ), cfg["output"])
    else:
        _write(_csv(
            ["pattern", "signature", "multiplicity_roots"],
            [(str(p), " ".join(map(str, sig)), " ".join(map(str, m.roots))) for p, sig, m in records],
        ), cfg["output"])
    if cfg["format"] != "json":
        print(json.dumps(summary), file=sys.stderr)
    return 0


# --- moments ----------------------------------------------------------------------


def _moment_rows(args, cfg) -> list[dict]:
    limit = cfg["max_length"]
    kind = args.kind
    if kind == "expand":
        spec = WeightSpec.parse(args.weights or DEFAULTS["weights"])
        return [{"d": d, "order": k, "value": moment_expansion(k, d, spec.moment, limit)}
                for d in _int_range(args.d) for k in _int_range(args.order)]
    if kind == "kesten":
        return [{"d": d, "order": k, "value": kesten_moment_exact(d, k, limit)}
                for d in _int_range(args.d) for k in _int_range(args.order)]
    if kind == "eigen":
        top = args.max or max(_int_range(args.order or "8"))
        rows = []
        for d in _int_range(args.d):
            table = eigenmoments(d, top, limit)
            rows += [{"d": d, "order": k, "value": table(k)} for k in range(2, top + 1, 2)]
        return rows
    if kind == "deviation":
        orders = _int_range(args.order or "8")
        dev = deviation_table(_int_range(args.d), orders, limit)
        return [{"d": d, "order": k, "value": v} for (d, k), v in dev.items()]
    raise UsageError(f"unknown moments kind {kind}")


def cmd_moments(args) -> int:
    cfg = resolve_config(args, ["output", "format", "max_length"])
    _check_output(cfg["output"], directory=False)
    try:
        if args.kind == "symbolic":
            return _symbolic(args, cfg)
        if args.d is None:
            raise UsageError("--d is required")
        if args.kind in ("expand", "kesten") and args.order is None:
            raise UsageError("--order is required")
        rows = _moment_rows(args, cfg)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc} (d={args.d}, order={args.order})", file=sys.stderr)
        return 2
    except EnumerationLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if cfg["format"] == "json":
        out = [{"d": r["d"], "order": r["order"],
                "value_num": r["value"].numerator, "value_den": r["value"].denominator} for r in rows]
        _write(json.dumps(out, indent=2) + "\n", cfg["output"])
    else:
        _write(_csv(["d", "order", "value"],
                    [(r["d"], r["order"], format_fraction(r["value"])) for r in rows]), cfg["output"])
    return 0


def _monomial(sig_type) -> str:
    parts = []
    for n in sorted(set(sig_type), reverse=True):
        e = sig_type.count(n)
        parts.append(f"mu({n})" if e == 1 else f"mu({n})^{e}")
    return "*".join(parts)


def _symbolic(args, cfg) -> int:
    if args.order is None:
        raise UsageError("--order is required")
    order = int(args.order)
    if args.weights:
        spec = WeightSpec.parse(args.weights)
        poly = moment_expansion_symbolic(order, spec.moment, cfg["max_length"])
        table = {str(spec): poly}
    else:
        table = {_monomial(sig): poly
                 for sig, poly in moment_expansion_symbolic(order, None, cfg["max_length"]).items()}
    if cfg["format"] == "json":
        _write(json.dumps({"order": order, "terms": {k: p.to_strings() for k, p in table.items()}},
                          indent=2) + "\n", cfg["output"])
    else:
        width = max((len(p.coeffs) for p in table.values()), default=0)
        rows = [[k] + p.to_strings() + ["0/1"] * (width - len(p.coeffs)) for k, p in table.items()]
        _write(_csv(["term"] + [f"d^{i}" for i in range(width)], rows), cfg["output"])
    return 0


# --- simulate / compare -----------------------------------------------------------


SIM_KEYS = ["seed", "output", "format", "threads", "trials", "max_order", "bins", "weights", "max_length"]


def _resolve_sim(args) -> dict:
    cfg = resolve_config(args, SIM_KEYS)
    cfg["N"] = args.N
    cfg["d"] = args.d
    if cfg["N"] is None or cfg["d"] is None:
        raise UsageError("--N and --d are required")
    if cfg["trials"] < 1:
        raise UsageError("--trials must be at least 1")
    if (cfg["N"] * cfg["d"]) % 2:
        raise UsageError(f"N*d must be even (parity), got N={cfg['N']}, d={cfg['d']}")
    if cfg["d"] >= cfg["N"]:
        raise UsageError(f"d must be smaller than N, got d={cfg['d']}, N={cfg['N']}")
    if cfg["seed"] is None:
        cfg["seed"] = int(np.random.SeedSequence().entropy % (2**63))
    WeightSpec.parse(cfg["weights"])
    _check_output(cfg["output"], directory=True)
    return cfg


def _manifest(cfg: dict, command: str, extra: dict | None = None) -> str:
    body = {
        "command": command,
        "config": {k: cfg[k] for k in sorted(cfg)},
        "seed_rule": "trial i uses SeedSequence(seed).spawn(trials)[i]; its spawn(2) gives graph and weight streams",
        "rng": {"algorithm": RNG_ALGORITHM, "numpy": RNG_VERSION},
        "regspec": __version__,
        "python": platform.python_version(),
    }
    if extra:
        body.update(extra)
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def _comparison_csv(rows) -> str:
    return _csv(
        ["order", "exact_prediction", "mc_mean", "mc_se", "z_score", "tolerance", "pass"],
        [(r.order, format_fraction(r.exact), _ffmt(r.mc_mean), _ffmt(r.mc_se),
          _ffmt(r.z_score), _ffmt(r.tolerance), "pass" if r.passed else "fail") for r in rows],
    )


def cmd_simulate(args) -> int:
    cfg = _resolve_sim(args)
    spec = WeightSpec.parse(cfg["weights"])
    samples = run_trials(cfg["N"], cfg["d"], spec, cfg["trials"], cfg["max_order"], cfg["seed"],
                         eigen=True, threads=cfg["threads"])
    rows = compare_moments(aggregate_moments(samples), cfg["N"], cfg["d"], spec)
    eig = [s.eigenvalues for s in samples]
    rng = default_range(cfg["d"]) if spec.kind == "constant" else None
    table = empirical_density(eig, cfg["bins"], rng)
    # semicircle with the ensemble's own second moment d * mu_W(2)
    attach_references(table, cfg["d"], float(spec.moment(2)) * cfg["d"])
    tv = kesten_tv_distance(table, cfg["d"])
    density_csv = _csv(
        ["bin_center", "empirical", "kesten", "semicircle_ref"],
        [tuple(_ffmt(v) for v in row) for row in table.rows()],
    )
    out = cfg["output"]
    if out is None:
        sys.stdout.write(_comparison_csv(rows))
        sys.stdout.write(density_csv)
        sys.stdout.write(_manifest(cfg, "simulate", {"kesten_tv": _ffmt(tv)}))
    else:
        _write(_comparison_csv(rows), out, "moments.csv")
        _write(density_csv, out, "density.csv")
        _write(_manifest(cfg, "simulate", {"kesten_tv": _ffmt(tv)}), out, "manifest.json")
    return 0


def cmd_compare(args) -> int:
    cfg = _resolve_sim(args)
    spec = WeightSpec.parse(cfg["weights"])
    orders = _int_range(args.orders) if args.orders else list(range(2, cfg["max_order"] + 1, 2))
    top = max(orders)
    samples = run_trials(cfg["N"], cfg["d"], spec, cfg["trials"], top, cfg["seed"],
                         eigen=False, threads=cfg["threads"])
    rows = [r for r in compare_moments(aggregate_moments(samples), cfg["N"], cfg["d"], spec)
            if r.order in orders]
    ok = all(r.passed for r in rows)
    if cfg["format"] == "json":
        text = json.dumps([{
            "order": r.order, "exact_prediction": format_fraction(r.exact), "mc_mean": _ffmt(r.mc_mean),
            "mc_se": _ffmt(r.mc_se), "z_score": _ffmt(r.z_score), "tolerance": _ffmt(r.tolerance),
            "pass": r.passed} for r in rows], indent=2) + "\n"
        name = "compare.json"
    else:
        text = _comparison_csv(rows)
        name = "compare.csv"
    if cfg["output"] is None:
        sys.stdout.write(text)
    else:
        _write(text, cfg["output"], name)
        _write(_manifest(cfg, "compare", {"orders": orders, "verdict": ok}), cfg["output"], "manifest.json")
    print("verdict:", "pass" if ok else "fail", file=sys.stderr)
    return 0 if ok else 1


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--output", help="file (capps, moments) or directory (simulate, compare)")
    common.add_argument("--format", choices=["csv", "json", "jsonl"])
    common.add_argument("--threads", type=int)
    common.add_argument("--max-length", dest="max_length", type=int,
                        help=f"pattern length cap (default {DEFAULT_MAX_LENGTH})")
    common.add_argument("--config", help="JSON file of option defaults")

    p = argparse.ArgumentParser(prog="regspec", description=__doc__.strip().splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("capps", parents=[common], help="enumerate closed acyclic path patterns")
    c.add_argument("--length", type=int, required=True)
    c.add_argument("--signature", help="keep one signature type, e.g. 4,2,2")
    c.set_defaults(func=cmd_capps)

    m = sub.add_parser("moments", parents=[common], help="exact moment computations")
    m.add_argument("kind", choices=["expand", "symbolic", "eigen", "kesten", "deviation"])
    m.add_argument("--d", help="degree, list '3,4' or range '3:10'")
    m.add_argument("--order", help="order, list or range")
    m.add_argument("--max", type=int, help="largest eigenmoment order")
    m.add_argument("--weights", help="weight law, e.g. semicircle:1/4, gaussian:1, rademacher")
    m.set_defaults(func=cmd_moments)

    for name, func, helptext in (("simulate", cmd_simulate, "Monte Carlo spectra and densities"),
                                 ("compare", cmd_compare, "exact predictions vs Monte Carlo")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--N", type=int)
        s.add_argument("--d", type=int)
        s.add_argument("--weights")
        s.add_argument("--trials", type=int)
        s.add_argument("--max-order", dest="max_order", type=int)
        s.add_argument("--bins", type=int)
        if name == "compare":
            s.add_argument("--orders", help="orders to gate, default even orders up to --max-order")
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, SamplingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
