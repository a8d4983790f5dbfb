"""Loss-bound transfer under resource removal, schedules and the separation."""

import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudotelepathy.bounds import (
    BoundVector,
    NotApplicable,
    RemovalStep,
    applicability_violation,
    apply_removal,
    check_applicability,
    c5_schedule,
    derive_separation,
    load_schedule,
    mix,
    orbit_average,
    orbit_images,
    run_schedule,
)
from pseudotelepathy.game import build_c5, build_c5_prime, dihedral_group, question_image

C5 = build_c5()


def vec(*coeffs, g=C5):
    return BoundVector(tuple(g.labels), coeffs)


def test_applicability_examples():
    base = BoundVector.base(C5)
    assert check_applicability(C5, base, RemovalStep(0, "Q2", {3, 4}))
    assert not check_applicability(C5, base, RemovalStep(0, "Q2", {1, 2}))
    assert check_applicability(C5, base, RemovalStep(4, "Q1", {2, 3}))


def test_refusal_names_condition():
    with pytest.raises(NotApplicable, match=r"\(i\)"):
        apply_removal(C5, BoundVector.base(C5), RemovalStep(0, "Q2", {1, 2}))
    assert "not involved" in applicability_violation(C5, RemovalStep(0, "Q3", {3}))


def test_step_rejects_self():
    with pytest.raises(ValueError):
        RemovalStep(0, "Q2", {0, 3})


def test_first_two_steps():
    b = apply_removal(C5, BoundVector.base(C5), RemovalStep(0, "Q2", {3, 4}))
    assert b.coeffs == (1, 1, 1, 1, 3, 1)
    b = apply_removal(C5, b, RemovalStep(0, "Q5", {1, 2}))
    assert b.coeffs == (1, 7, 1, 1, 3, 1)


def test_mix_examples():
    assert mix([vec(1, 7, 1, 1, 3, 1), vec(1, 3, 1, 1, 7, 1)]).coeffs == (1, 5, 1, 1, 5, 1)
    m = mix([vec(27, 5, 11, 5, 5, 1), vec(7, 5, 15, 5, 5, 1)])
    assert m["Q1"] == 17 and m["Q3"] == 13
    v = vec(3, 1, 4, 1, 5, 9)
    assert mix([v, v]) == v
    with pytest.raises(ValueError):
        mix([v, v], [Fraction(1, 2), Fraction(1, 3)])


def test_schedule_tables():
    _, final, tables = c5_schedule()
    rows = {name: b.coeffs for t in tables for name, b in t.rows}
    assert rows["S_{1}"] == (1, 5, 1, 1, 5, 1)
    assert rows["S_{1,5}"] == (5, 5, 1, 5, 5, 1)
    assert rows["S_{1,5}''"] == (27, 5, 11, 5, 5, 1)
    assert rows["S_{1,5}'''"] == (7, 5, 15, 5, 5, 1)
    assert final.coeffs == (17, 5, 13, 5, 5, 1)


def test_orbit_average():
    assert orbit_average().coeffs == (9, 9, 9, 9, 9, 1)


def test_separation():
    sep = derive_separation(C5, orbit_average(), Fraction(1, 6))
    assert sep.epsilon == Fraction(1, 54)
    assert sep.weighted_diagnostic == Fraction(1, 46)
    assert derive_separation(C5, BoundVector.base(C5), Fraction(1, 6)).epsilon == Fraction(1, 6)


def test_schedule_from_file(tmp_path):
    raw = {"stages": [{"name": "only", "branches": [
        {"name": "a", "steps": [{"player": 1, "anchor": "Q2", "removed": [4, 5]}]},
        {"name": "b", "steps": [{"player": 1, "anchor": "Q5", "removed": [2, 3]}]},
    ]}]}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(raw))
    final, tables = run_schedule(C5, load_schedule(path))
    assert final.coeffs == (1, 2, 1, 1, 2, 1)
    assert len(tables) == 1 and len(tables[0].rows) == 3


def test_bad_schedule_refused(tmp_path):
    raw = {"stages": [{"name": "x", "branches": [
        {"name": "a", "steps": [{"player": 1, "anchor": "Q2", "removed": [2, 3]}]},
    ]}]}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(NotApplicable):
        run_schedule(C5, load_schedule(path))


def applicable_steps(g):
    out = []
    for v in range(g.n):
        others = [u for u in range(g.n) if u != v]
        for anchor in g.labels:
            for r in range(len(others) + 1):
                for removed in itertools.combinations(others, r):
                    step = RemovalStep(v, anchor, frozenset(removed))
                    if applicability_violation(g, step) is None:
                        out.append(step)
    return out


STEPS = applicable_steps(C5)
coeff = st.fractions(min_value=1, max_value=100, max_denominator=12)


def test_weighted_game_has_no_applicable_step():
    # the extra questions involve four players each, so condition (ii) always fails
    assert applicable_steps(build_c5_prime(3, 1, 1)) == []


@given(st.data())
@settings(max_examples=1000, deadline=None)
def test_removal_monotone_and_local(data):
    g = C5
    step = data.draw(st.sampled_from(STEPS))
    b = BoundVector(tuple(g.labels), tuple(data.draw(st.lists(coeff, min_size=len(g), max_size=len(g)))))
    after = apply_removal(g, b, step)
    anchor = g.question(step.anchor)
    for q, old, new in zip(g.questions, b.coeffs, after.coeffs):
        assert new >= old
        touched = q is not anchor and q.inputs[step.player] == anchor.inputs[step.player] and step.player in q.involved
        assert new == (old + 2 * b[step.anchor] if touched else old)


@given(st.lists(coeff, min_size=6, max_size=6), st.integers(0, 9))
@settings(max_examples=1000, deadline=None)
def test_orbit_average_invariant(coeffs, k):
    b = orbit_average(C5, vec(*coeffs))
    perm = dihedral_group(5)[k]
    moved = [Fraction(0)] * 6
    for j in range(6):
        moved[question_image(C5, j, perm)] = b.coeffs[j]
    assert tuple(moved) == b.coeffs
    assert len(orbit_images(C5, b)) == 10


@given(st.lists(coeff, min_size=6, max_size=6), st.integers(0, 5), coeff)
@settings(max_examples=300, deadline=None)
def test_separation_monotone(coeffs, k, extra):
    b = vec(*coeffs)
    bigger = b.replace({k: b.coeffs[k] + extra})
    loss = Fraction(1, 6)
    assert derive_separation(C5, bigger, loss).epsilon <= derive_separation(C5, b, loss).epsilon
