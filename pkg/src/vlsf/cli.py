"""Command-line entry point.

Every output embeds the tool version, the seed and the full configuration
and contains no timestamps, so identical invocations produce identical
bytes. Exit codes: 0 success, 1 failed self-test, 2 infeasible,
3 invalid input, 4 non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from vlsf import __version__
from vlsf.bounds import Regime, asymptotic_rate, bound_design, table_rows
from vlsf.errors import DomainError, InfeasibleError, ValidationError, VLSFError
from vlsf.optimizer import CodeDesign, design_vlsf_code, k_infinity_design, kkt_refine
from vlsf.simulator import renewal_bound, simulate_code, simulate_renewal, write_trace_csv

COMMANDS = ("rates", "bound", "optimize", "simulate", "table", "selftest")
DEFAULT_RATE_GRID = tuple(float(x) for x in np.round(np.logspace(3, 6, 31), 6))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ValidationError.exit_code, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _k_list(text: str) -> list[float]:
    out = []
    for x in text.split(","):
        x = x.strip().lower()
        if not x:
            continue
        if x in ("inf", "infinity"):
            out.append(math.inf)
            continue
        try:
            k = int(x)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad K value {x!r}") from exc
        if k < 1:
            raise argparse.ArgumentTypeError(f"K must be >= 1, got {k}")
        out.append(k)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vlsf", description="Design, bound and simulate VLSF codes on the AWGN channel.")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--snr", type=float, default=None, help="SNR P (default 1)")
    p.add_argument("--eps", type=float, default=1e-3, help="target average error probability")
    p.add_argument("--n-grid", type=_float_list, default=None, help="comma-separated average decoding times")
    p.add_argument("--k-set", type=_k_list, default=None, help="comma-separated K values; 'inf' allowed")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--joint", dest="mode", action="store_const", const="joint")
    mode.add_argument("--marginal", dest="mode", action="store_const", const="marginal")
    p.set_defaults(mode="joint")
    p.add_argument("--fixed-codebook", action="store_true")
    p.add_argument("--design", type=Path, default=None, help="JSON written by --command optimize")
    p.add_argument("--m-cap", type=int, default=1024, help="largest M simulated (simulate)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--trace", type=Path, default=None, help="per-trial CSV trace (simulate)")
    p.add_argument("--no-j-slack", dest="j_slack", action="store_false")
    return p


# ---------------------------------------------------------------- output


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _meta(command: str, config: dict) -> dict:
    return {"tool": "vlsf", "version": __version__, "command": command, "seed": config["seed"], "config": config}


def render(meta: dict, records: list[dict], fmt: str, columns: list[str] | None = None) -> str:
    if fmt == "json":
        return json.dumps(_jsonable({"meta": meta, "records": records}), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write("# " + json.dumps(_jsonable(meta), sort_keys=True) + "\n")
    columns = columns or sorted({k for r in records for k in r})
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow({k: _csv_cell(r.get(k)) for k in columns})
    return buf.getvalue()


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(_jsonable(v), sort_keys=True)
    return v


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


# ---------------------------------------------------------------- commands


def _k_label(k) -> str:
    return "inf" if k == math.inf else str(int(k))


def cmd_rates(cfg: dict) -> tuple[list[dict], list[str], int]:
    """Asymptotic rate curves: one row per (N, regime, K); undefined points are flagged."""
    rows = []
    for n in cfg["n_grid"]:
        for k in cfg["k_set"]:
            if k == 1:
                regime = Regime.K1_MAXPOWER
            elif k == math.inf:
                regime = Regime.KINF_MAXPOWER
            else:
                regime = Regime.FINITE_K
            rows.append(_rate_row(regime, n, k, cfg))
        rows.append(_rate_row(Regime.CONVERSE, n, math.inf, cfg))
    cols = ["N", "regime", "K", "rate", "eps_capacity_ratio", "log_m", "dropped_terms", "flag"]
    return rows, cols, 0


def _rate_row(regime, n, k, cfg) -> dict:
    row = {"N": float(n), "regime": regime.value, "K": _k_label(k)}
    try:
        pt = asymptotic_rate(regime, n, cfg["eps"], cfg["snr"], k=None if k == math.inf else int(k))
    except DomainError as exc:
        row.update(rate=None, eps_capacity_ratio=None, log_m=None, dropped_terms="", flag=f"domain_gap: {exc}")
        return row
    row.update(
        rate=pt.rate,
        eps_capacity_ratio=pt.eps_capacity_ratio,
        log_m=pt.log_m,
        dropped_terms=";".join(pt.dropped_terms),
        flag="ok",
    )
    return row


def cmd_table(cfg: dict) -> tuple[list[dict], list[str], int]:
    rows = []
    for n in cfg["n_grid"]:
        rows.extend(table_rows(n, cfg["eps"], cfg["snr"], [k for k in cfg["k_set"] if k != math.inf and k >= 2]))
    for r in rows:
        r["flag"] = "ok" if r["second_lower_value"] is not None else "order_only"
    cols = [
        "n", "eps", "snr", "scenario", "feedback", "power", "first_order", "first_order_value",
        "second_lower", "second_lower_value", "second_upper", "second_upper_value", "rate_lower",
        "citation", "flag",
    ]
    return rows, cols, 0


def _design_one(n, k, cfg) -> CodeDesign:
    if k == math.inf:
        return k_infinity_design(n, cfg["eps"], cfg["snr"])
    if k == 1:
        raise ValidationError("K = 1 has no variable-length design; use K >= 2")
    return design_vlsf_code(n, int(k), cfg["eps"], cfg["snr"])


def cmd_optimize(cfg: dict) -> tuple[list[dict], list[str], int]:
    records, status = [], 0
    for n in cfg["n_grid"]:
        for k in cfg["k_set"]:
            rec = {"n_target": float(n), "requested_k": _k_label(k)}
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                try:
                    design = _design_one(n, k, cfg)
                except InfeasibleError as exc:
                    rec["error"] = f"infeasible: {exc}"
                    status = max(status, InfeasibleError.exit_code)
                    records.append(rec)
                    continue
                rec["design"] = design.to_dict()
                rec["predicted_rate_ratio"] = design.metadata.get("predicted_rate_ratio")
                if design.schedule is not None and design.inner_schedule().k >= 2:
                    try:
                        rec["kkt"] = kkt_refine(design.inner_schedule(), design.gamma, design.snr).to_dict()
                    except VLSFError as exc:
                        rec["kkt"] = {"error": str(exc)}
            rec["warnings"] = sorted({str(w.message) for w in caught})
            records.append(rec)
    return records, None, status


def _load_designs(cfg: dict) -> list[CodeDesign]:
    if cfg.get("design") is None:
        designs = []
        for n in cfg["n_grid"]:
            for k in cfg["k_set"]:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    designs.append(_design_one(n, k, cfg))
        return designs
    path = Path(cfg["design"])
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read design file {path}: {exc}") from exc
    recs = doc.get("records") if isinstance(doc, dict) else None
    if not isinstance(recs, list):
        raise ValidationError(f"{path} is not an optimize output")
    designs = []
    for rec in recs:
        if "design" in rec:
            designs.append(CodeDesign.from_dict(_unjson(rec["design"])))
    if not designs:
        raise InfeasibleError(f"{path} contains no feasible design")
    if cfg.get("snr_given"):
        for d in designs:
            if not math.isclose(d.snr, cfg["snr"], rel_tol=1e-12):
                raise ValidationError(f"design SNR {d.snr} does not match --snr {cfg['snr']}")
    return designs


def _unjson(d):
    if isinstance(d, dict):
        return {k: _unjson(v) for k, v in d.items()}
    if isinstance(d, list):
        return [_unjson(v) for v in d]
    if d in ("inf", "-inf", "nan") and isinstance(d, str):
        return float(d)
    return d


def _design_summary(d: CodeDesign) -> dict:
    return {
        "n_target": d.n_target,
        "k": _k_label(d.k),
        "eps_target": d.eps_target,
        "gamma": d.gamma,
        "log_m": d.log_m,
        "p_zero": d.p_zero,
        "times": None if d.schedule is None else list(d.schedule.times),
        "grid_spacing": d.grid_spacing,
    }


def cmd_bound(cfg: dict) -> tuple[list[dict], list[str], int]:
    records = []
    trials = cfg["trials"] or 10**5
    for i, d in enumerate(_load_designs(cfg)):
        rec = {"design": _design_summary(d)}
        if d.schedule is None:
            rec["bound"] = renewal_bound(d)
        else:
            rec["bound"] = bound_design(d, trials, cfg["seed"] + i, cfg["mode"], workers=cfg["workers"]).to_dict()
        rec["within_budget"] = rec["bound"]["eps_upper"] <= d.eps_target
        records.append(rec)
    return records, None, 0


def cmd_simulate(cfg: dict) -> tuple[list[dict], list[str], int]:
    designs = _load_designs(cfg)
    trials = cfg["trials"] or 10**4
    records = []
    for i, d in enumerate(designs):
        rec = {"design": _design_summary(d)}
        seed = cfg["seed"] + i
        if d.schedule is None:
            rec["renewal"] = simulate_renewal(
                d.grid_spacing, d.gamma, d.snr, trials, seed, workers=cfg["workers"]
            ).to_dict()
        else:
            m = d.m
            m_sim = cfg["m_cap"] if m is None or m > cfg["m_cap"] else m
            rec["m_simulated"] = m_sim
            rec["m_capped"] = m_sim != m
            stats = simulate_code(
                d,
                trials,
                seed,
                m=m_sim,
                fixed_codebook=cfg["fixed_codebook"],
                j_slack=cfg["j_slack"],
                workers=cfg["workers"],
                record=cfg.get("trace") is not None,
            )
            if cfg.get("trace") is not None:
                path = Path(cfg["trace"])
                if len(designs) > 1:
                    path = path.with_name(f"{path.stem}_{i}{path.suffix}")
                write_trace_csv(stats, path)
            rec["sim"] = stats.to_dict()
        records.append(rec)
    return records, None, 0


def cmd_selftest(cfg: dict) -> tuple[list[dict], list[str], int]:
    from vlsf import selftest

    records = selftest.run(seed=cfg["seed"])
    status = 0 if all(r["passed"] for r in records) else 1
    return records, ["check", "passed", "value", "target", "seconds"], status


HANDLERS = {
    "rates": cmd_rates,
    "table": cmd_table,
    "optimize": cmd_optimize,
    "bound": cmd_bound,
    "simulate": cmd_simulate,
    "selftest": cmd_selftest,
}


def _config(args) -> dict:
    defaults_grid = {"rates": DEFAULT_RATE_GRID, "table": (1e4,)}.get(args.command, (2000.0,))
    default_k = {"rates": [1, 2, 3, 4], "table": [2, 3, 4]}.get(args.command, [3])
    if args.trials is not None and args.trials < 1:
        raise ValidationError(f"--trials must be positive, got {args.trials}")
    if args.seed < 0:
        raise ValidationError(f"--seed must be non-negative, got {args.seed}")
    if args.workers < 1:
        raise ValidationError(f"--workers must be positive, got {args.workers}")
    if args.m_cap < 1:
        raise ValidationError(f"--m-cap must be positive, got {args.m_cap}")
    snr = 1.0 if args.snr is None else args.snr
    if not (snr > 0 and math.isfinite(snr)):
        raise ValidationError(f"--snr must be positive, got {snr}")
    if not 0.0 < args.eps < 1.0:
        raise ValidationError(f"--eps must lie in (0, 1), got {args.eps}")
    grid = list(args.n_grid) if args.n_grid is not None else list(defaults_grid)
    if any(not (n > 0) for n in grid):
        raise ValidationError(f"--n-grid values must be positive: {grid}")
    return {
        "command": args.command,
        "snr": snr,
        "snr_given": args.snr is not None,
        "eps": args.eps,
        "n_grid": grid,
        "k_set": list(args.k_set) if args.k_set is not None else default_k,
        "trials": args.trials,
        "seed": args.seed,
        "format": args.format,
        "mode": args.mode,
        "fixed_codebook": args.fixed_codebook,
        "design": None if args.design is None else str(args.design),
        "m_cap": args.m_cap,
        "workers": args.workers,
        "trace": None if args.trace is None else str(args.trace),
        "j_slack": args.j_slack,
    }


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        records, columns, status = HANDLERS[cfg["command"]](cfg)
    except VLSFError as exc:
        print(f"vlsf: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    meta_cfg = {k: ("inf" if v == math.inf else v) for k, v in cfg.items()}
    meta_cfg["k_set"] = [_k_label(k) for k in cfg["k_set"]]
    _emit(render(_meta(cfg["command"], meta_cfg), records, cfg["format"], columns), args.out)
    return status


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
