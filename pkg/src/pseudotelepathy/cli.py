"""Command-line entry point: one subcommand per analysis.

Rationals are always printed exactly (``p/q``); only quantum probabilities are
floats, printed with 15 significant digits alongside the tolerance used.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import appendix, bounds, classical, nonsignaling, quantum, reproduce
from .game import Game, GameError, GameSpecError, build_c5, build_c5_prime, format_bits, load_game

SUBCOMMANDS = (
    "classical-value",
    "quantum-check",
    "ns-value",
    "restricted-scan",
    "appendix-table",
    "optimize-weights",
    "bound-tables",
    "separation",
    "reproduce-all",
)

CSV_HELP = {
    "classical-value": "CSV columns: profile, win_probability (one row per optimal profile)",
    "quantum-check": "CSV columns: kind, name, expected, value, tolerance",
    "ns-value": "CSV columns: inputs, answers, probability (nonzero entries of the optimal table)",
    "restricted-scan": "CSV columns: field, value",
    "appendix-table": "CSV columns: class, size, computed, printed, flag (--printed-rows: one row per printed row)",
    "optimize-weights": "CSV columns: x, y, z, t, grid_t, agrees",
    "bound-tables": "CSV columns: table, strategy, then one column per question",
    "separation": "CSV columns: field, value",
    "reproduce-all": "CSV columns: status, check, expected, observed, note",
}


SUMMARY = {
    "classical-value": "best deterministic winning probability and its optimal profiles",
    "quantum-check": "graph-state strategy: per-question win probability and stabilizer checks",
    "ns-value": "exact non-signaling value and an optimal behaviour table",
    "restricted-scan": "best value when only one adjacent pair shares a PR box",
    "appendix-table": "losing-weight forms per symmetry class, checked against the printed rows",
    "optimize-weights": "family weights maximising the least classical losing weight",
    "bound-tables": "per-question loss bounds along the removal schedule",
    "separation": "lower bound on the loss of any two-local strategy",
    "reproduce-all": "every golden value, one PASS/FAIL line each",
}


@dataclass
class RunConfig:
    command: str
    game: str = "c5"
    x: Fraction | None = None
    y: Fraction | None = None
    z: Fraction | None = None
    spec: Path | None = None
    format: str = "text"
    out: Path | None = None

    def build_game(self) -> Game:
        if self.spec is not None:
            return load_game(self.spec)
        if self.game == "c5":
            return build_c5()
        return build_c5_prime(self.x, self.y, self.z)


@dataclass
class Report:
    data: dict
    text: str
    rows: list[dict]
    ok: bool = True


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _pair_arg(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("pair must look like 2,3")
    return a - 1, b - 1


def _profile(p) -> str:
    return " ".join(b.value for b in p)


def _classical(cfg: RunConfig, args) -> Report:
    g = cfg.build_game()
    value, best = classical.classical_value(g)
    rows = [{"profile": _profile(p), "win_probability": str(value)} for p in best]
    text = f"{value}\n{len(best)} optimal deterministic profiles\n"
    return Report({"classical_value": str(value), "optimal_profiles": [r["profile"] for r in rows]}, text, rows)


def _quantum(cfg: RunConfig, args) -> Report:
    g = cfg.build_game()
    tol = reproduce.QUANTUM_TOL
    psi = quantum.build_cycle_graph_state(g.n)
    rows = []
    for q in g.questions:
        p = quantum.question_win_probability(psi, q)
        rows.append({"kind": "question", "name": q.label, "expected": "1", "value": f"{p:.15g}", "tolerance": f"{tol:g}"})
    total = quantum.quantum_win_probability(g, psi)
    rows.append({"kind": "game", "name": "total", "expected": "1", "value": f"{total:.15g}", "tolerance": f"{tol:g}"})
    if g.n >= 3:
        for word, expected, measured in quantum.stabilizer_table(g.n):
            rows.append({"kind": "stabilizer", "name": word, "expected": str(expected), "value": f"{measured:.15g}", "tolerance": f"{tol:g}"})
    ok = all(abs(float(r["value"]) - float(r["expected"])) < tol for r in rows)
    lines = [f"{r['kind']:<10} {r['name']:<6} {r['value']} (expected {r['expected']}, tol {r['tolerance']})" for r in rows]
    return Report({"tolerance": tol, "results": rows, "ok": ok}, "\n".join(lines) + "\n", rows, ok)


def _ns(cfg: RunConfig, args) -> Report:
    g = cfg.build_game()
    res = nonsignaling.ns_value(g)
    rows = []
    for ctx, vec in res.table.probs.items():
        for a, p in enumerate(vec):
            if p:
                rows.append({"inputs": format_bits(ctx), "answers": format_bits(nonsignaling.answer_bits(a, g.n)), "probability": str(p)})
    text = f"{res.value}\n{len(res.constraints)} marginal constraints, {res.lp.pivots} pivots\n"
    text += "optimal table (nonzero entries):\n" + "".join(f"  {r['inputs']} -> {r['answers']}: {r['probability']}\n" for r in rows)
    data = {"ns_value": str(res.value), "constraints": len(res.constraints), "table": rows}
    return Report(data, text, rows)


def _scan(cfg: RunConfig, args) -> Report:
    g = cfg.build_game()
    res = nonsignaling.restricted_scan(g, args.pair)
    data = {
        "restricted_value": str(res.value),
        "pair": [p + 1 for p in args.pair],
        "best_scenario": res.best.describe(),
        "scenarios": res.scenarios,
        "classical_pair_value": str(res.classical_value),
        "box_scenarios": res.box_scenarios,
        "box_min_loss": str(res.box_min_loss),
        "assumption": res.assumption,
    }
    rows = [{"field": k, "value": str(v)} for k, v in data.items()]
    text = "".join(f"{k}: {v}\n" for k, v in data.items())
    return Report(data, text, rows)


def _appendix(cfg: RunConfig, args) -> Report:
    rep = appendix.appendix_report()
    classes = appendix.class_table(rep)
    printed = appendix.row_table(rep)
    data = {"profiles": rep.profiles_covered, "classes": classes, "printed_rows": printed, "counts": rep.counts()}
    text = appendix.to_text(classes, appendix.CLASS_COLUMNS)
    text += "\nprinted rows\n" + appendix.to_text(printed, appendix.ROW_COLUMNS)
    text += f"\n{rep.profiles_covered} profiles in {len(rep.classes)} classes; {rep.counts()}\n"
    rows = printed if args.printed_rows else classes
    return Report(data, text, rows)


def _optimize(cfg: RunConfig, args) -> Report:
    d = classical.optimize_weights(tie_yz=args.tie_yz, drop_prime=args.drop_prime)
    row = {"x": str(d.x), "y": str(d.y), "z": str(d.z), "t": str(d.t), "grid_t": str(d.grid_t), "agrees": str(d.agrees)}
    g = build_c5_prime(d.x, d.y, d.z)
    cv, _ = classical.classical_value(g)
    text = f"x={d.x} y={d.y} z={d.z}\nt={d.t}\nclassical value {cv}\ngrid optimum {d.grid_t} at {list(d.grid_argmax)}\n"
    return Report({**row, "classical_value": str(cv)}, text, [row], d.agrees)


def _bound_tables(cfg: RunConfig, args) -> Report:
    g = build_c5()
    sched = bounds.load_schedule(args.schedule)
    final, tables = bounds.run_schedule(g, sched)
    avg = bounds.orbit_average(g, final)
    tables.append(bounds.BoundTable("S-bar", [("S-bar", avg)]))
    rows, lines = [], []
    for t in tables:
        lines.append(f"P(S loses | Q) <=   [{t.title}]")
        lines.append("strategy      " + "  ".join(f"{lab:>6}" for lab in g.labels))
        for name, b in t.rows:
            lines.append(f"{name:<13} " + "  ".join(f"{bounds._eps(c):>6}" for c in b.coeffs))
            rows.append({"table": t.title, "strategy": name, **{lab: str(c) for lab, c in zip(g.labels, b.coeffs)}})
        lines.append("")
    return Report({"tables": rows}, "\n".join(lines), rows)


def _separation(cfg: RunConfig, args) -> Report:
    g = build_c5()
    final, _ = bounds.run_schedule(g, bounds.load_schedule(args.schedule))
    avg = bounds.orbit_average(g, final)
    scan = nonsignaling.restricted_scan(g, (1, 2))
    loss = 1 - scan.value
    sep = bounds.derive_separation(g, avg, loss)
    data = {
        "epsilon": str(sep.epsilon),
        "restricted_loss": str(loss),
        "max_coefficient": str(sep.max_coefficient),
        "weighted_diagnostic": str(sep.weighted_diagnostic),
    }
    text = (
        f"epsilon >= {sep.epsilon}\n"
        f"(restricted loss {loss} / largest coefficient {sep.max_coefficient})\n"
        f"weighted diagnostic, not the headline bound: {sep.weighted_diagnostic}\n"
    )
    rows = [{"field": k, "value": v} for k, v in data.items()]
    return Report(data, text, rows)


def _reproduce(cfg: RunConfig, args) -> Report:
    checks = reproduce.golden_checks()
    rows = [
        {"status": "PASS" if c.passed else "FAIL", "check": c.name, "expected": c.expected, "observed": c.observed, "note": c.note}
        for c in checks
    ]
    n_pass = sum(c.passed for c in checks)
    text = "\n".join(c.line() for c in checks) + f"\n{n_pass}/{len(checks)} checks passed\n"
    return Report({"checks": rows, "passed": n_pass, "total": len(checks)}, text, rows, n_pass == len(checks))


HANDLERS = {
    "classical-value": _classical,
    "quantum-check": _quantum,
    "ns-value": _ns,
    "restricted-scan": _scan,
    "appendix-table": _appendix,
    "optimize-weights": _optimize,
    "bound-tables": _bound_tables,
    "separation": _separation,
    "reproduce-all": _reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--game", choices=("c5", "c5-prime"), default="c5")
    common.add_argument("--x", type=_fraction_arg)
    common.add_argument("--y", type=_fraction_arg)
    common.add_argument("--z", type=_fraction_arg)
    common.add_argument("--spec", type=Path, help="JSON game-spec file (replaces --game)")
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--out", type=Path, help="write here instead of standard output")

    parser = argparse.ArgumentParser(prog="pseudotelepathy", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[common], help=SUMMARY[name], description=f"{SUMMARY[name]}. {CSV_HELP[name]}")
        if name == "restricted-scan":
            p.add_argument("--pair", type=_pair_arg, default=(1, 2), help="adjacent pair, 1-based (default 2,3)")
        if name == "appendix-table":
            p.add_argument("--printed-rows", action="store_true", help="CSV of the printed rows instead of the classes")
        if name == "optimize-weights":
            p.add_argument("--tie-yz", action="store_true", help="impose y = z")
            p.add_argument("--drop-prime", action="store_true", help="force z = 0 (six-question game)")
        if name in ("bound-tables", "separation"):
            p.add_argument("--schedule", type=Path, help="schedule config (JSON); default is the shipped C5 schedule")
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(args.command, args.game, args.x, args.y, args.z, args.spec, args.format, args.out)
    weights = (cfg.x, cfg.y, cfg.z)
    if cfg.spec is not None and (cfg.game != "c5" or any(w is not None for w in weights)):
        raise GameError("--spec cannot be combined with --game or --x/--y/--z")
    if cfg.game == "c5-prime" and any(w is None for w in weights):
        raise GameError("--game c5-prime needs --x, --y and --z")
    if cfg.game == "c5" and any(w is not None for w in weights):
        raise GameError("--x/--y/--z only apply to --game c5-prime")
    return cfg


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.data, indent=2) + "\n"
    if fmt == "csv":
        if not report.rows:
            return ""
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(report.rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(report.rows)
        return buf.getvalue()
    return report.text


def run(cfg: RunConfig, args) -> tuple[int, str]:
    report = HANDLERS[cfg.command](cfg, args)
    return (0 if report.ok else 1), render(report, cfg.format)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        status, output = run(cfg, args)
    except GameSpecError as exc:
        print(f"error: invalid game spec: {exc}", file=sys.stderr)
        return 2
    except (GameError, bounds.NotApplicable, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out is not None:
        cfg.out.write_text(output)
    else:
        sys.stdout.write(output)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
