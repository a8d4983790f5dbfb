"""Golden-value checks for the full pipeline, shared by ``reproduce-all``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import appendix, bounds, classical, nonsignaling, quantum
from .game import build_c5, build_c5_prime

QUANTUM_TOL = 1e-12


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    observed: str
    passed: bool
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name}: expected {self.expected}, got {self.observed}"
        return text + (f"  [{self.note}]" if self.note else "")


def _vec(b: bounds.BoundVector) -> str:
    return "(" + ",".join(str(c) for c in b.coeffs) + ")"


def reduction_counterexample(bound: int = 20) -> tuple[int, int, int] | None:
    """First positive integer triple where the profile minimum differs from ``min(x, y + 2z)``."""
    rng = range(1, bound + 1)
    for x, y, z in itertools.product(rng, rng, rng):
        if classical.min_form_value(x, y, z) != min(x, y + 2 * z):
            return (x, y, z)
    return None


def golden_checks() -> list[Check]:
    c5 = build_c5()
    c5p = build_c5_prime(3, 1, 1)
    checks: list[Check] = []

    def add(name, expected, observed, passed, note=""):
        checks.append(Check(name, str(expected), str(observed), bool(passed), note))

    v, _ = classical.classical_value(c5)
    add("classical value of C5", Fraction(5, 6), v, v == Fraction(5, 6))
    v, _ = classical.classical_value(c5p)
    add("classical value of C5' (3,1,1)", Fraction(10, 13), v, v == Fraction(10, 13))

    d = classical.optimize_weights()
    witness = tuple(int(w) for w in d.weights)
    add(
        "maximin weights (unrestricted LP)",
        "t=3/13 at (3,1,1)",
        f"t={d.t} at {witness}",
        d.t == Fraction(3, 13) and witness == (3, 1, 1) and d.agrees,
        f"LP and grid agree: {d.agrees}",
    )
    tied = classical.optimize_weights(tie_yz=True)
    tw = tuple(int(w) for w in tied.weights)
    add(
        "maximin weights with y=z imposed",
        "t=3/13 at (3,1,1)",
        f"t={tied.t} at {tw}",
        tied.t == Fraction(3, 13) and tw == (3, 1, 1) and tied.agrees,
    )

    for label, g in (("C5", c5), ("C5' (3,1,1)", c5p)):
        p = quantum.quantum_win_probability(g)
        add(f"quantum win probability on {label}", "1", f"{p:.15g}", abs(p - 1) < QUANTUM_TOL, f"tol {QUANTUM_TOL:g}")
    for word, expected, measured in quantum.stabilizer_table(5):
        add(f"eigenvalue of {word}", expected, f"{measured:.15g}", abs(measured - expected) < QUANTUM_TOL)

    _, final, tables = bounds.c5_schedule(c5)
    printed = {
        "S''": (1, 7, 1, 1, 3, 1),
        "S'''": (1, 3, 1, 1, 7, 1),
        "S_{1}": (1, 5, 1, 1, 5, 1),
        "S_{1}''": (7, 5, 1, 3, 5, 1),
        "S_{1}'''": (3, 5, 1, 7, 5, 1),
        "S_{1,5}": (5, 5, 1, 5, 5, 1),
        "S_{1,5}''": (27, 5, 11, 5, 5, 1),
        "S_{1,5}'''": (7, 5, 15, 5, 5, 1),
        "S_{1,5,2}": (17, 5, 13, 5, 5, 1),
    }
    rows = {name: b for t in tables for name, b in t.rows}
    for name, expected in printed.items():
        got = rows.get(name)
        add(f"bound table {name}", "(" + ",".join(map(str, expected)) + ")",
            _vec(got) if got else "missing", got is not None and got.coeffs == expected)
    avg = bounds.orbit_average(c5, final)
    add("bound table S-bar", "(9,9,9,9,9,1)", _vec(avg), avg.coeffs == (9, 9, 9, 9, 9, 1))
    sep = bounds.derive_separation(c5, avg, Fraction(1, 6))
    add("separation", Fraction(1, 54), sep.epsilon, sep.epsilon == Fraction(1, 54),
        f"weighted diagnostic {sep.weighted_diagnostic}")

    scan = nonsignaling.restricted_scan(c5, (1, 2))
    add("restricted two-local value, pair {2,3}", Fraction(5, 6), scan.value, scan.value == Fraction(5, 6))
    add("least loss of PR-box-dependent scenarios", ">= 1/6", scan.box_min_loss, scan.box_min_loss >= Fraction(1, 6))

    for label, g in (("C5", c5), ("C5' (3,1,1)", c5p)):
        res = nonsignaling.ns_value(g)
        table = nonsignaling.export_quantum_tables(g)
        feasible = res.constraints.satisfied_by(table)
        qv = table.win_probability(g)
        add(f"non-signaling value of {label}", 1, res.value, res.value == 1)
        add(f"quantum table feasible and optimal on {label}", "feasible, 1",
            f"{'feasible' if feasible else 'infeasible'}, {qv}", feasible and qv == res.value)

    rep = appendix.appendix_report()
    counts = rep.counts()
    add("appendix covers all profiles", 1024, rep.profiles_covered, rep.profiles_covered == 1024)
    witnessed = all(r.losing for r in rep.discrepancies() if r.computed is not None)
    add("appendix rows classified", f"{len(appendix.PRINTED_ROWS)} rows",
        f"{counts}", sum(counts.values()) == len(appendix.PRINTED_ROWS) and witnessed,
        "every mismatch carries its losing questions")
    cex = reduction_counterexample()
    add("profile minimum equals min(x, y+2z) on positive weights", "no counterexample",
        cex if cex else "no counterexample", cex is None,
        "the exact minimum is min(x, 5y, y+2z)" if cex else "")
    return checks
