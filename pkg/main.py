# main.py
import argparse
import json
import sys

from backend import config, logger, data_store
from backend.errors import AquaGuardError, ConfigError, DomainError, InfeasibleError
from backend.analytics import Scenario, run_eval, run_sweep, sweep_csv, run_selftest
from backend.montecarlo import McConfig
from backend.optimizer import PowerTarget, min_power_for_target, saturation_report


# ============================================================
#                    ANALYSIS CONTROLLER
# ============================================================
class AnalysisController:
    def __init__(self, args):
        self.args = args
        self.registry = None
        self.scenario = None

    # ============================================================
    #                         LOADING
    # ============================================================
    def load(self):
        # --------------------------------------------------
        # 1) Preset registry
        # --------------------------------------------------
        self.registry = data_store.load_presets(self.args.presets)

        # --------------------------------------------------
        # 2) Scenario (file or stdin)
        # --------------------------------------------------
        if not self.args.scenario:
            raise ConfigError("--scenario is required for this command")
        self.scenario = Scenario.load(self.args.scenario, self.registry)

        # --------------------------------------------------
        # 3) Command-line overrides
        # --------------------------------------------------
        if self.args.seed is not None or self.args.trials is not None:
            mc = self.scenario.mc or McConfig()
            self.scenario.mc = McConfig(
                self.args.trials if self.args.trials is not None else mc.trials,
                self.args.seed if self.args.seed is not None else mc.master_seed,
                mc.stream_count,
            )
        return self.scenario

    def _emit(self, text):
        data_store.write_text(self.args.out, text)
        if self.args.out not in (None, "-"):
            logger.log(f"[CLI] wrote {self.args.out}")

    # ============================================================
    #                         COMMANDS
    # ============================================================
    def cmd_eval(self):
        sc = self.load()
        records = []
        for label, variant in sc.expand_variants():
            rec = run_eval(variant, with_mc=self.args.with_mc)
            rec["variant"] = label
            records.append(rec)
        out = records[0] if len(records) == 1 else records
        self._emit(json.dumps(out, indent=2) + "\n")
        return config.EXIT_OK

    def cmd_sweep(self, with_mc=False):
        sc = self.load()
        if with_mc and sc.mc is None:
            sc.mc = McConfig()
        rows = run_sweep(sc, with_mc=with_mc)
        self._emit(sweep_csv(sc, rows, with_mc=with_mc))
        return config.EXIT_OK

    def cmd_mc(self):
        return self.cmd_sweep(with_mc=True)

    def cmd_optimize(self):
        sc = self.load()
        base = sc.optimize
        metric = self.args.metric or (base.metric if base else "sop")
        target = self.args.target if self.args.target is not None else (base.target if base else None)
        if target is None:
            raise ConfigError("optimize needs a target (--target or an 'optimize' block)", field="optimize.target")
        try:
            t = PowerTarget(
                metric, target,
                base.search_lo if base else None, base.search_hi if base else None, base.tol_db if base else None,
            )
        except DomainError as e:
            raise ConfigError(str(e), field="optimize")
        results = []
        for label, variant in sc.expand_variants():
            links, eve, relay, secrecy = variant.links, variant.eve, variant.relay, variant.secrecy
            report = saturation_report(links, eve, relay, secrecy, t.metric, t.search_lo, t.search_hi, t.tol_db)
            try:
                snr_db = min_power_for_target(links, eve, relay, secrecy, t)
                status = "ok"
            except InfeasibleError as e:
                logger.log(f"[Optimizer] {label}: {e}")
                snr_db, status = None, "infeasible"
            results.append({"variant": label, "metric": t.metric, "target": t.target,
                            "min_mean_snr_db": snr_db, "status": status, "saturation": report})
        self._emit(json.dumps(results[0] if len(results) == 1 else results, indent=2) + "\n")
        if any(r["status"] == "infeasible" for r in results):
            return config.EXIT_INFEASIBLE
        return config.EXIT_OK

    def cmd_selftest(self):
        report = run_selftest(self.args.tol)
        lines = [f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}" for c in report["checks"]]
        lines.append(f"self-test {'passed' if report['passed'] else 'FAILED'} in {report['elapsed_s']:.1f} s")
        self._emit("\n".join(lines) + "\n")
        return config.EXIT_OK if report["passed"] else config.EXIT_NUMERICAL


# ============================================================
#                       ARGUMENTS
# ============================================================
def build_parser():
    p = argparse.ArgumentParser(
        prog="aquaguard",
        description="Secrecy performance of a fixed-gain mixed RF / underwater optical relay link.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--scenario", help="scenario JSON file ('-' for stdin)")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--seed", type=int, help="Monte Carlo master seed")
        sp.add_argument("--trials", type=int, help="Monte Carlo trials")
        sp.add_argument("--tol", type=float, help="relative tolerance of univariate H-function quadrature")
        sp.add_argument("--presets", help="EGG preset registry (default presets/egg_presets.json)")
        sp.add_argument("--verbose", action="store_true", help="log per-evaluation diagnostics")
        return sp

    ev = common(sub.add_parser("eval", help="all analytic metrics at the scenario point (JSON)"))
    ev.add_argument("--with-mc", dest="with_mc", action="store_true", help="add Monte Carlo estimates")
    common(sub.add_parser("sweep", help="metric sweep along the scenario axis (CSV)"))
    common(sub.add_parser("mc", help="sweep with Monte Carlo columns (CSV)"))
    op = common(sub.add_parser("optimize", help="minimal main-link SNR meeting a target (JSON)"))
    op.add_argument("--metric", choices=("sop", "pnz"))
    op.add_argument("--target", type=float)
    common(sub.add_parser("selftest", help="run the invariant suite"))
    return p


# ============================================================
#                       MAIN APPLICATION
# ============================================================
def main(argv=None):
    args = build_parser().parse_args(argv)
    config.VERBOSE = bool(args.verbose)
    if args.tol is not None:
        if not 0.0 < args.tol < 1.0:
            logger.log(f"[CLI] --tol must lie in (0, 1), got {args.tol}")
            return config.EXIT_CONFIG
        if args.command != "selftest":
            config.REL_TOL = args.tol

    controller = AnalysisController(args)
    commands = {
        "eval": controller.cmd_eval,
        "sweep": controller.cmd_sweep,
        "mc": controller.cmd_mc,
        "optimize": controller.cmd_optimize,
        "selftest": controller.cmd_selftest,
    }
    try:
        rv = commands[args.command]()
    except ConfigError as e:
        logger.log(f"[CLI] configuration error: {e}")
        rv = config.EXIT_CONFIG
    except InfeasibleError as e:
        logger.log(f"[CLI] infeasible: {e}")
        rv = config.EXIT_INFEASIBLE
    except AquaGuardError as e:
        logger.log(f"[CLI] numerical failure ({type(e).__name__}): {e}")
        rv = config.EXIT_NUMERICAL
    return rv


if __name__ == "__main__":
    sys.exit(main())
