"""Non-signaling value by exact LP, and the restricted two-local scan.

Behaviour tables are indexed by *context*, the distinct input vectors asked by
the game, so two questions with the same inputs share one distribution.
Answer vectors are indexed like the quantum state: bit ``k`` of the index is
player ``k``'s answer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .classical import BEHAVIORS, Behavior, answers
from .game import Bits, Game, GameError, predicate_holds
from .lp import LPResult, linprog_exact
from .quantum import build_cycle_graph_state, measurement_plan, outcome_distribution


class ExportError(RuntimeError):
    """A simulated probability is not a multiple of 2**-n."""


def contexts(g: Game) -> list[Bits]:
    seen: dict[Bits, None] = {}
    for q in g.questions:
        seen.setdefault(q.inputs, None)
    return list(seen)


def answer_bits(index: int, n: int) -> Bits:
    return tuple((index >> k) & 1 for k in range(n))


def answer_index(bits: Sequence[int]) -> int:
    return sum(b << k for k, b in enumerate(bits))


@dataclass(frozen=True)
class BehaviorTable:
    """``p(a | inputs)`` for every context of a game, as exact rationals."""

    n: int
    probs: dict[Bits, tuple[Fraction, ...]]

    def __post_init__(self):
        for ctx, vec in self.probs.items():
            if len(vec) != 2**self.n:
                raise GameError(f"context {ctx} has {len(vec)} entries, expected {2 ** self.n}")
            if any(p < 0 for p in vec) or sum(vec) != 1:
                raise GameError(f"context {ctx} is not a probability vector")

    def win_probability(self, g: Game) -> Fraction:
        total = Fraction(0)
        for q in g.questions:
            vec = self.probs[q.inputs]
            total += q.weight * sum(
                (p for i, p in enumerate(vec) if p and predicate_holds(q, answer_bits(i, g.n))),
                Fraction(0),
            )
        return total

    def flat(self, ctxs: Sequence[Bits]) -> list[Fraction]:
        return [p for c in ctxs for p in self.probs[c]]

    @classmethod
    def from_profile(cls, g: Game, profile: Sequence[Behavior]) -> "BehaviorTable":
        probs = {}
        for ctx in contexts(g):
            vec = [Fraction(0)] * 2**g.n
            vec[answer_index(answers(profile, ctx))] = Fraction(1)
            probs[ctx] = tuple(vec)
        return cls(g.n, probs)

    @classmethod
    def uniform(cls, g: Game) -> "BehaviorTable":
        u = Fraction(1, 2**g.n)
        return cls(g.n, {ctx: (u,) * 2**g.n for ctx in contexts(g)})


@dataclass(frozen=True)
class NSConstraintSet:
    """Marginal equalities between contexts plus one normalisation row per context.

    Each row is a sparse ``{variable: coefficient}`` dict; variable
    ``c * 2**n + a`` is ``p(a | contexts[c])``. Marginal rows have right-hand
    side 0, normalisation rows 1.
    """

    n: int
    contexts: tuple[Bits, ...]
    marginal: tuple[dict[int, int], ...]
    normalisation: tuple[dict[int, int], ...]

    @property
    def n_vars(self) -> int:
        return len(self.contexts) * 2**self.n

    def __len__(self) -> int:
        return len(self.marginal)

    def satisfied_by(self, table: BehaviorTable) -> bool:
        x = table.flat(self.contexts)
        ok = all(sum(c * x[j] for j, c in row.items()) == 0 for row in self.marginal)
        return ok and all(sum(c * x[j] for j, c in row.items()) == 1 for row in self.normalisation)


def ns_constraints(g: Game) -> NSConstraintSet:
    """For each pair of contexts, equate the marginals on the players whose inputs agree."""
    n = g.n
    ctxs = contexts(g)
    size = 2**n
    rows: list[dict[int, int]] = []
    seen: set[tuple] = set()
    for (c1, x1), (c2, x2) in itertools.permutations(enumerate(ctxs), 2):
        same = [k for k in range(n) if x1[k] == x2[k]]
        for kept in itertools.product((0, 1), repeat=len(same)):
            row: dict[int, int] = {}
            for a in range(size):
                if all(((a >> k) & 1) == v for k, v in zip(same, kept)):
                    row[c1 * size + a] = row.get(c1 * size + a, 0) + 1
                    row[c2 * size + a] = row.get(c2 * size + a, 0) - 1
            row = {j: v for j, v in row.items() if v}
            if not row:
                continue
            key = tuple(sorted(row.items()))
            neg = tuple(sorted((j, -v) for j, v in row.items()))
            if key in seen or neg in seen:
                continue
            seen.add(key)
            rows.append(row)
    norm = tuple({c * size + a: 1 for a in range(size)} for c in range(len(ctxs)))
    return NSConstraintSet(n, tuple(ctxs), tuple(rows), norm)


def count_ns_constraints(g: Game) -> int:
    """Independent recount: one equality per unordered context pair and per agreeing-player assignment."""
    ctxs = contexts(g)
    total = 0
    for x1, x2 in itertools.combinations(ctxs, 2):
        agree = sum(a == b for a, b in zip(x1, x2))
        total += 2**agree
    return total


def objective(g: Game, ctxs: Sequence[Bits]) -> dict[int, Fraction]:
    size = 2**g.n
    pos = {c: k for k, c in enumerate(ctxs)}
    c: dict[int, Fraction] = {}
    for q in g.questions:
        base = pos[q.inputs] * size
        for a in range(size):
            if predicate_holds(q, answer_bits(a, g.n)):
                c[base + a] = c.get(base + a, Fraction(0)) + q.weight
    return c


@dataclass
class NSResult:
    value: Fraction
    table: BehaviorTable
    constraints: NSConstraintSet
    lp: LPResult


def ns_value(g: Game, *, seed: int | None = None) -> NSResult:
    """Exact maximum winning probability over the non-signaling polytope of ``g``."""
    cons = ns_constraints(g)
    rows = list(cons.marginal) + list(cons.normalisation)
    rhs = [0] * len(cons.marginal) + [1] * len(cons.normalisation)
    c = objective(g, cons.contexts)
    dense_c = [c.get(j, 0) for j in range(cons.n_vars)]
    res = linprog_exact(dense_c, rows, rhs, seed=seed)
    size = 2**g.n
    probs = {
        ctx: tuple(res.x[k * size : (k + 1) * size]) for k, ctx in enumerate(cons.contexts)
    }
    return NSResult(res.value, BehaviorTable(g.n, probs), cons, res)


def export_quantum_tables(g: Game) -> BehaviorTable:
    """Outcome tables of the graph-state strategy as exact dyadic rationals."""
    psi = build_cycle_graph_state(g.n)
    scale = 2**g.n
    probs = {}
    for ctx in contexts(g):
        dist = outcome_distribution(psi, measurement_plan(ctx))
        vec = []
        for p in dist:
            k = round(p * scale)
            if abs(p * scale - k) > 1e-9:
                raise ExportError(f"probability {p!r} at inputs {ctx} is not a multiple of 1/{scale}")
            vec.append(Fraction(k, scale))
        probs[ctx] = tuple(vec)
    return BehaviorTable(g.n, probs)


# --- restricted two-local scenario --------------------------------------


@dataclass(frozen=True)
class PRBoxWiring:
    """One pair player's use of a PR box.

    ``box_input`` maps the game input to the box input; ``output`` is the
    truth table of ``(x, b) -> a`` packed as bit ``2*x + b``.
    """

    box_input: Behavior
    output: int

    def answer(self, x: int, b: int) -> int:
        return (self.output >> (2 * x + b)) & 1

    @property
    def uses_box(self) -> bool:
        return any(self.answer(x, 0) != self.answer(x, 1) for x in (0, 1))


ALL_WIRINGS = tuple(PRBoxWiring(g, h) for g in BEHAVIORS for h in range(16))


@dataclass(frozen=True)
class RestrictedScenario:
    pair: tuple[int, int]
    others: dict[int, Behavior]
    pair_strategy: tuple[Behavior, Behavior] | tuple[PRBoxWiring, PRBoxWiring]

    @property
    def uses_box(self) -> bool:
        return isinstance(self.pair_strategy[0], PRBoxWiring) and any(
            w.uses_box for w in self.pair_strategy
        )

    def describe(self) -> str:
        others = ", ".join(f"player {k + 1}: {b.value}" for k, b in sorted(self.others.items()))
        if isinstance(self.pair_strategy[0], PRBoxWiring):
            pair = "; ".join(
                f"player {p + 1}: box input {w.box_input.value}, output table {w.output:04b}"
                for p, w in zip(self.pair, self.pair_strategy)
            )
            return f"{others}; PR box {pair}"
        pair = ", ".join(f"player {p + 1}: {b.value}" for p, b in zip(self.pair, self.pair_strategy))
        return f"{others}, {pair} (classical pair)"


@dataclass(frozen=True)
class ReducedRow:
    """A question seen from the pair once the other players' answers are fixed.

    ``target`` is the parity the involved pair players must produce; when
    neither is involved it is ``None`` and ``fixed_win`` says whether the
    question is won regardless.
    """

    label: str
    pair_inputs: tuple[int, int]
    involved: tuple[bool, bool]
    target: int | None
    fixed_win: bool | None = None

    def pair_label(self) -> tuple[str, str]:
        return tuple(str(x) if inv else f"({x})" for x, inv in zip(self.pair_inputs, self.involved))


def _check_pair(g: Game, pair: Sequence[int]) -> tuple[int, int]:
    i, j = pair
    if i == j or not (0 <= i < g.n and 0 <= j < g.n):
        raise GameError(f"bad pair {pair}")
    if (j - i) % g.n not in (1, g.n - 1):
        raise GameError(f"players {i + 1} and {j + 1} are not adjacent on the cycle")
    return (i, j)


def reduced_game(g: Game, others: dict[int, Behavior], pair: Sequence[int] = (1, 2)) -> list[ReducedRow]:
    """Substitute the other players' deterministic answers into every question."""
    pair = _check_pair(g, pair)
    rows = []
    for q in g.questions:
        fixed = sum(others[k].output(q.inputs[k]) for k in q.involved if k not in pair) % 2
        involved = tuple(p in q.involved for p in pair)
        pin = (q.inputs[pair[0]], q.inputs[pair[1]])
        if any(involved):
            rows.append(ReducedRow(q.label, pin, involved, q.parity ^ fixed))
        else:
            rows.append(ReducedRow(q.label, pin, involved, None, fixed == q.parity))
    return rows


def reduced_game_symbolic(g: Game, pair: Sequence[int] = (1, 2)) -> list[tuple[tuple[str, str], str]]:
    """The reduced table with the others' answers left symbolic, e.g. ``1+a_1(1)+a_4(1)+a_5(1)``.

    A row where no pair player is involved is shown as ``*``.
    """
    pair = _check_pair(g, pair)
    out = []
    for q in g.questions:
        involved = tuple(p in q.involved for p in pair)
        pin = tuple(
            str(q.inputs[p]) if inv else f"({q.inputs[p]})" for p, inv in zip(pair, involved)
        )
        if not any(involved):
            out.append((pin, "*"))
            continue
        terms = ([str(q.parity)] if q.parity else []) + [
            f"a_{k + 1}({q.inputs[k]})" for k in sorted(q.involved) if k not in pair
        ]
        out.append((pin, "+".join(terms) or "0"))
    return out


def _pair_parity_one(rows: Sequence[ReducedRow], strategy) -> list[Fraction]:
    """Probability that the involved pair players' answers XOR to 1, per row."""
    out = []
    if isinstance(strategy[0], PRBoxWiring):
        w1, w2 = strategy
        for r in rows:
            if r.target is None:
                out.append(Fraction(0))
                continue
            x1, x2 = r.pair_inputs
            corr = w1.box_input.output(x1) & w2.box_input.output(x2)
            ones = 0
            for b1 in (0, 1):
                b2 = b1 ^ corr
                par = (w1.answer(x1, b1) if r.involved[0] else 0) ^ (w2.answer(x2, b2) if r.involved[1] else 0)
                ones += par
            out.append(Fraction(ones, 2))
    else:
        s1, s2 = strategy
        for r in rows:
            if r.target is None:
                out.append(Fraction(0))
                continue
            x1, x2 = r.pair_inputs
            par = (s1.output(x1) if r.involved[0] else 0) ^ (s2.output(x2) if r.involved[1] else 0)
            out.append(Fraction(par))
    return out


def scenario_win_probability(g: Game, scenario: RestrictedScenario) -> Fraction:
    rows = reduced_game(g, scenario.others, scenario.pair)
    ones = _pair_parity_one(rows, scenario.pair_strategy)
    total = Fraction(0)
    for q, r, p1 in zip(g.questions, rows, ones):
        if r.target is None:
            total += q.weight if r.fixed_win else 0
        else:
            total += q.weight * (p1 if r.target else 1 - p1)
    return total


def pair_strategies() -> Iterator[tuple]:
    yield from itertools.product(BEHAVIORS, repeat=2)
    yield from itertools.product(ALL_WIRINGS, repeat=2)


@dataclass
class RestrictedScanResult:
    value: Fraction
    best: RestrictedScenario
    scenarios: int
    classical_value: Fraction
    box_scenarios: int
    box_min_loss: Fraction
    assumption: str = (
        "two-party non-signaling resources between the pair are modelled as one PR box "
        "with arbitrary local wirings; mixtures need not be scanned (extreme points suffice)"
    )


def restricted_scan(g: Game, pair: Sequence[int] = (1, 2)) -> RestrictedScanResult:
    """Best winning probability when only ``pair`` may share a (PR-box) resource.

    The remaining players answer with a deterministic behaviour each. Every
    combination is scored exactly; the per-question pair statistics are
    precomputed once per pair strategy, as they do not depend on the others.
    """
    pair = _check_pair(g, pair)
    others_idx = [k for k in range(g.n) if k not in pair]
    strategies = list(pair_strategies())
    weights = [q.weight for q in g.questions]
    # twice the probability that the pair's parity is 1, per strategy and question
    reference = reduced_game(g, {k: Behavior.ZERO for k in others_idx}, pair)
    twice_ones = np.array(
        [[int(2 * p) for p in _pair_parity_one(reference, s)] for s in strategies], dtype=np.int64
    )
    is_box = np.array(
        [isinstance(s[0], PRBoxWiring) and any(w.uses_box for w in s) for s in strategies]
    )
    is_classical = np.array([not isinstance(s[0], PRBoxWiring) for s in strategies])
    denom = math.lcm(*(w.denominator for w in weights))
    int_w = np.array([int(w * denom) for w in weights], dtype=np.int64)

    best_val, best = Fraction(-1), None
    classical_best = Fraction(-1)
    box_min_loss = Fraction(2)
    count = 0
    for combo in itertools.product(BEHAVIORS, repeat=len(others_idx)):
        others = dict(zip(others_idx, combo))
        rows = reduced_game(g, others, pair)
        # twice the win probability per question, as an affine function of twice_ones
        slope = np.array([0 if r.target is None else (1 if r.target else -1) for r in rows])
        const = np.array(
            [2 * int(bool(r.fixed_win)) if r.target is None else (0 if r.target else 2) for r in rows]
        )
        twice_win = twice_ones * slope + const
        scores = twice_win @ int_w  # = 2 * denom * P(win)
        count += len(strategies)
        k = int(np.argmax(scores))
        val = Fraction(int(scores[k]), 2 * denom)
        if val > best_val:
            best_val = val
            best = RestrictedScenario(pair, others, strategies[k])
        classical_best = max(classical_best, Fraction(int(scores[is_classical].max()), 2 * denom))
        if is_box.any():
            box_min_loss = min(box_min_loss, 1 - Fraction(int(scores[is_box].max()), 2 * denom))
    n_box = int(is_box.sum()) * 4 ** len(others_idx)
    return RestrictedScanResult(best_val, best, count, classical_best, n_box, box_min_loss)
