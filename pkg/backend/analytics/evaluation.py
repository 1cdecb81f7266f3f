# backend/analytics/evaluation.py
import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor

from .. import config, logger
from ..errors import DomainError
from ..relay import resolve_constant
from ..secrecy import (
    sop_lower_bound_result,
    pnz_exact_result,
    sop_asymptotic_high_main_result,
    sop_asymptotic_high_eve_result,
    pnz_asymptotic_high_main_result,
    pnz_asymptotic_high_eve_result,
    sop_rayleigh_special,
)
from ..montecarlo import McConfig, mc_all
from ..monitors.resource_monitor import ResourceMonitor

METRIC_COLUMNS = ("sop_l", "sop_a", "sop_ae", "pnz", "pnz_a", "pnz_ae")
MC_COLUMNS = ("mc_sop_exact", "mc_sop_exact_se", "mc_sop_lower", "mc_sop_lower_se", "mc_pnz", "mc_pnz_se")


def run_eval(scenario, with_mc=False):
    """
    All analytic metrics of one scenario point.

    returns:
        {
            "scenario": name,
            "C": fixed-gain constant,
            "theta": secrecy threshold,
            "metrics": {"sop_l", "sop_a", "sop_ae", "pnz", "pnz_a", "pnz_ae", "sop_rayleigh" (or None)},
            "diagnostics": {metric: {"nodes": int, "error": float, "terms": int}},
            "mc": {...} (only when with_mc)
        }
    """
    links, eve, relay, sc = scenario.links, scenario.eve, scenario.relay, scenario.secrecy
    results = {
        "sop_l": sop_lower_bound_result(links, eve, relay, sc),
        "sop_a": sop_asymptotic_high_main_result(links, eve, relay, sc),
        "sop_ae": sop_asymptotic_high_eve_result(links, eve, relay, sc),
        "pnz": pnz_exact_result(links, eve, relay),
        "pnz_a": pnz_asymptotic_high_main_result(links, eve, relay),
        "pnz_ae": pnz_asymptotic_high_eve_result(links, eve, relay),
    }
    try:
        rayleigh = sop_rayleigh_special(links, eve, relay, sc)
    except DomainError:
        rayleigh = None

    metrics = {k: r.value for k, r in results.items()}
    metrics["sop_rayleigh"] = rayleigh
    record = {
        "scenario": scenario.name,
        "C": resolve_constant(links, relay),
        "theta": sc.theta,
        "metrics": metrics,
        "diagnostics": {
            k: {"nodes": r.nodes, "error": r.error, "terms": len(r.evaluations)} for k, r in results.items()
        },
    }
    if with_mc:
        mc = scenario.mc or McConfig()
        est = mc_all(links, eve, relay, sc, mc, scenario.cdf_grid)
        record["mc"] = {
            "trials": mc.trials,
            "seed": mc.master_seed,
            "sop_exact": [est["sop_exact"].value, est["sop_exact"].std_error],
            "sop_lower": [est["sop_lower"].value, est["sop_lower"].std_error],
            "pnz": [est["pnz"].value, est["pnz"].std_error],
            "cdf": [[g, e.value, e.std_error] for g, e in zip(scenario.cdf_grid, est["cdf"])],
        }
    logger.debug(f"[Eval] {scenario.name}: " + ", ".join(f"{k}={v:.6g}" for k, v in metrics.items() if v is not None))
    return record


def _row(label, variable, value, scenario, with_mc):
    rec = run_eval(scenario, with_mc)
    row = {"variant": label, "axis": variable or "", "value": "" if value is None else f"{value:g}"}
    for k in METRIC_COLUMNS:
        row[k] = f"{rec['metrics'][k]:.10g}"
    if with_mc:
        m = rec["mc"]
        for key in ("sop_exact", "sop_lower", "pnz"):
            row[f"mc_{key}"] = f"{m[key][0]:.10g}"
            row[f"mc_{key}_se"] = f"{m[key][1]:.4g}"
    return row


def sweep_points(scenario):
    """[(variant label, axis variable, axis value, point scenario)] in output order."""
    points = []
    for label, variant in scenario.expand_variants():
        if variant.sweep is None:
            points.append((label, None, None, variant))
            continue
        for v in variant.sweep.values():
            points.append((label, variant.sweep.variable, v, variant.at(variant.sweep.variable, v)))
    return points


def run_sweep(scenario, with_mc=None, workers=None):
    """
    Evaluates every (variant, axis point) in parallel.

    returns list of row dicts in axis order (variants in file order)
    """
    with_mc = scenario.mc is not None if with_mc is None else with_mc
    points = sweep_points(scenario)
    if workers is None:
        # Monte Carlo points already fan out over streams
        workers = 1 if with_mc else ResourceMonitor().worker_count(len(points))
    logger.log(f"[Sweep] {scenario.name}: {len(points)} point(s) on {workers} worker(s)")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_row, label, var, val, sc, with_mc) for label, var, val, sc in points]
        return [f.result() for f in futures]


def sweep_csv(scenario, rows, with_mc=None):
    """CSV text with '#' metadata header lines; no timestamps, so output is reproducible."""
    with_mc = scenario.mc is not None if with_mc is None else with_mc
    buf = io.StringIO()
    buf.write(f"# schema: {config.CSV_SCHEMA_VERSION}\n")
    buf.write(f"# scenario: {scenario.name}\n")
    if scenario.description:
        buf.write(f"# description: {scenario.description}\n")
    buf.write(f"# axis: {scenario.sweep.variable if scenario.sweep else 'none'}\n")
    buf.write(f"# theta: {scenario.secrecy.theta:.10g} ({scenario.secrecy.threshold_base} base)\n")
    if with_mc:
        mc = scenario.mc or McConfig()
        buf.write(f"# mc: trials={mc.trials} seed={mc.master_seed} streams={mc.stream_count}\n")
    columns = ["variant", "axis", "value", *METRIC_COLUMNS]
    if with_mc:
        columns += list(MC_COLUMNS)
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def read_sweep_csv(text):
    """Parses sweep CSV text back into row dicts with float metric columns."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    rows = []
    for row in csv.DictReader(lines):
        for k in list(row):
            if k in METRIC_COLUMNS or k in MC_COLUMNS or k == "value":
                row[k] = float(row[k]) if row[k] not in ("", None) else math.nan
        rows.append(row)
    return rows
