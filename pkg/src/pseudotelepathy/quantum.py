"""Dense state-vector simulation of the cycle graph-state strategy.

Qubit ``k`` is player ``k`` and is bit ``k`` of the basis index (little
endian), so amplitude ``psi[i]`` belongs to the basis state whose player-k bit
is ``(i >> k) & 1``. Player ``k`` measures X when their input bit is 1 and Z
when it is 0; outcome bit 0 is the +1 eigenvalue.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .game import Game, GameError, predicate_holds

TOL = 1e-12

_H = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
_PAULI = {
    "I": np.eye(2),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}


def _bit(index: np.ndarray, k: int) -> np.ndarray:
    return (index >> k) & 1


def build_cycle_graph_state(n: int) -> np.ndarray:
    """CZ on every edge ``(i, i+1 mod n)`` applied to ``|+>^n``."""
    if not 2 <= n <= 12:
        raise ValueError(f"cycle graph states are simulated for 2 <= n <= 12, got {n}")
    idx = np.arange(2**n)
    psi = np.full(2**n, 2.0 ** (-n / 2), dtype=complex)
    edges = {tuple(sorted((i, (i + 1) % n))) for i in range(n)}
    for i, j in sorted(edges):
        psi[(_bit(idx, i) & _bit(idx, j)) == 1] *= -1
    return psi


def apply_local(psi: np.ndarray, ops: Sequence[np.ndarray]) -> np.ndarray:
    """Apply ``ops[k]`` (2x2) to qubit ``k``."""
    n = len(ops)
    # reshape puts qubit n-1 on axis 0
    t = psi.reshape((2,) * n)
    for k, op in enumerate(ops):
        axis = n - 1 - k
        t = np.moveaxis(np.tensordot(op, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)


def pauli_expectation(psi: np.ndarray, word: str) -> float:
    """``<psi| P |psi>`` for a Pauli word over {I, X, Z}, character k acting on qubit k."""
    ops = [_PAULI[c] for c in word]
    return float(np.real(np.vdot(psi, apply_local(psi, ops))))


def cycle_stabilizers(n: int) -> list[str]:
    """Generators ``Z_{i-1} X_i Z_{i+1}``."""
    words = []
    for i in range(n):
        w = ["I"] * n
        w[i] = "X"
        w[(i - 1) % n] = "Z"
        w[(i + 1) % n] = "Z"
        words.append("".join(w))
    return words


def measurement_plan(inputs: Sequence[int]) -> tuple[str, ...]:
    return tuple("X" if x else "Z" for x in inputs)


def outcome_distribution(psi: np.ndarray, plan: Sequence[str]) -> np.ndarray:
    """Outcome probabilities indexed like the state (bit k = player k's answer)."""
    n = len(plan)
    if psi.shape != (2**n,):
        raise GameError(f"plan for {n} players does not fit a state of size {psi.shape[0]}")
    if any(basis not in ("X", "Z") for basis in plan):
        raise ValueError(f"unknown basis in plan {plan}")
    ops = [_H if basis == "X" else _PAULI["I"] for basis in plan]
    amps = apply_local(psi, ops)
    return np.abs(amps) ** 2


def outcome_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> k) & 1 for k in range(n))


def question_win_probability(psi: np.ndarray, q) -> float:
    probs = outcome_distribution(psi, measurement_plan(q.inputs))
    n = q.n
    return float(sum(p for i, p in enumerate(probs) if predicate_holds(q, outcome_bits(i, n))))


def quantum_win_probability(g: Game, psi: np.ndarray | None = None) -> float:
    """Winning probability of the X/Z graph-state strategy."""
    if psi is None:
        psi = build_cycle_graph_state(g.n)
    return sum(float(q.weight) * question_win_probability(psi, q) for q in g.questions)


def stabilizer_table(n: int = 5) -> list[tuple[str, int, float]]:
    """(Pauli word, expected eigenvalue, measured expectation) for the checks we rely on."""
    if n < 3:
        raise ValueError("the cycle needs at least three vertices here")
    psi = build_cycle_graph_state(n)
    rows = [(w, 1, pauli_expectation(psi, w)) for w in cycle_stabilizers(n)]
    # product of all generators: the Zs cancel in pairs, each edge contributes one XZ = -ZX swap
    all_x = "X" * n
    rows.append((all_x, (-1) ** n, pauli_expectation(psi, all_x)))
    return rows
