import itertools
import random

import pytest

from knowval.bisim import (
    BisimRelation,
    bisimilar_multi,
    bisimilar_single,
    difference_pattern,
    logically_equivalent,
    relation_closed,
)
from knowval.canonical import CanonicalModelSpec, canonical_model_multi
from knowval.dependency import FD, FDSet
from knowval.semantics import (
    ModelError,
    PointedModel,
    enumerate_models,
    make_model,
    pointed_models,
)


@pytest.fixture
def four_rows():
    rows = {
        "w1": {"c": "1", "d": "1", "e": "3"},
        "w2": {"c": "1", "d": "1", "e": "2"},
        "w3": {"c": "2", "d": "2", "e": "1"},
        "w4": {"c": "2", "d": "3", "e": "1"},
    }
    return make_model(["c", "d", "e"], ["w1", "w2", "w3", "w4"], rows)


@pytest.fixture
def example_canonical():
    # the canonical three-state model: s:{e}, t:{d,e}, u:{c,d,e}
    rows = {
        "s": {"c": "1", "d": "1", "e": "0"},
        "t": {"c": "1", "d": "0", "e": "0"},
        "u": {"c": "0", "d": "0", "e": "0"},
    }
    return make_model(["c", "d", "e"], ["s", "t", "u"], rows)


def single_state(value):
    return PointedModel(make_model(["c"], ["w"], {"w": {"c": value}}), "w")


def direct_single_bisimilar(pm1, pm2):
    """Literal two-way witness condition, enumerating all C and d over the
    union signature (test-local oracle for the pattern method)."""
    union = sorted(set(pm1.model.constants) | set(pm2.model.constants))

    def witness_exists(pm, C, d):
        m, s = pm.model, pm.actual
        if d not in m.constants:
            return False
        for t in m.states:
            if m.value(t, d) == m.value(s, d):
                continue
            if all(
                c not in m.constants or m.value(s, c) == m.value(t, c) for c in C
            ):
                return True
        return False

    for r in range(len(union) + 1):
        for C in itertools.combinations(union, r):
            for d in union:
                if witness_exists(pm1, C, d) != witness_exists(pm2, C, d):
                    return False
    return True


class TestDifferencePattern:
    def test_single_state_model(self):
        pm = single_state("0")
        assert difference_pattern(pm) == {"c": frozenset()}

    def test_four_row_table(self, four_rows):
        pattern = difference_pattern(PointedModel(four_rows, "w1"))
        # rows 2,3,4 differ on e with agreement sets {c,d}, {}, {}
        assert pattern["e"] == frozenset({frozenset(("c", "d"))})
        assert pattern["c"] == frozenset({frozenset()})
        assert pattern["d"] == frozenset({frozenset()})

    def test_canonical_example_at_point(self, example_canonical):
        pattern = difference_pattern(PointedModel(example_canonical, "u"))
        # witnesses s,t differ on c with agreement sets {e} and {d,e}
        assert pattern["c"] == frozenset({frozenset(("d", "e"))})

    def test_rejects_multi_agent(self):
        m = make_model(
            ["c"], ["a"], {"a": {"c": "0"}}, agents=["1"], relations={"1": [["a"]]}
        )
        with pytest.raises(ModelError):
            difference_pattern(PointedModel(m, "a"))


class TestBisimilarSingle:
    def test_reflexive(self, four_rows):
        pm = PointedModel(four_rows, "w1")
        assert bisimilar_single(pm, pm) is True

    def test_single_states_with_different_values(self):
        # values themselves are invisible to the language
        assert bisimilar_single(single_state("0"), single_state("7")) is True

    def test_verdict_matches_equivalence_oracle(self, four_rows):
        pm1 = PointedModel(four_rows, "w1")
        pm3 = PointedModel(four_rows, "w3")
        assert bisimilar_single(pm1, pm3) == logically_equivalent(pm1, pm3)

    def test_rows_one_and_two_equivalent(self, four_rows):
        pm1 = PointedModel(four_rows, "w1")
        pm2 = PointedModel(four_rows, "w2")
        assert logically_equivalent(pm1, pm2) is True
        assert bisimilar_single(pm1, pm2) is True

    def test_pattern_method_matches_direct_enumeration(self):
        random.seed(5)
        pool = []
        for m in enumerate_models(3, 2, 2, 1, mode="single"):
            pool.extend(pointed_models(m))
        sample = random.sample(pool, 60)
        for pm1 in sample[:30]:
            for pm2 in sample[30:]:
                assert bisimilar_single(pm1, pm2) == direct_single_bisimilar(pm1, pm2)


class TestBisimilarMulti:
    def test_reflexive_contains_identity(self):
        m = make_model(
            ["c"],
            ["a", "b"],
            {"a": {"c": "0"}, "b": {"c": "1"}},
            agents=["1", "2"],
            relations={"1": [["a", "b"]], "2": [["a"], ["b"]]},
        )
        pm = PointedModel(m, "a")
        rel = bisimilar_multi(pm, pm)
        assert rel is not None
        assert {("a", "a"), ("b", "b")} <= rel.pairs
        assert relation_closed(pm, pm, rel)

    def test_identical_canonical_specs_linked(self):
        sig = frozenset(("c", "d"))
        f1 = FDSet("1", sig, frozenset({FD(frozenset("c"), frozenset("d"))}))
        f2 = FDSet("2", sig, frozenset({FD(frozenset("d"), frozenset("c"))}))
        spec = CanonicalModelSpec(sig, {"1": f1, "2": f2}, "multi")
        a = canonical_model_multi(spec)
        b = canonical_model_multi(spec)
        rel = bisimilar_multi(a, b)
        assert rel is not None
        assert (a.actual, b.actual) in rel.pairs

    def test_canonical_points_verdict_matches_oracle(self):
        sig = frozenset(("c", "d"))
        f1 = FDSet("1", sig, frozenset({FD(frozenset("c"), frozenset("d"))}))
        f2 = FDSet("2", sig, frozenset({FD(frozenset("d"), frozenset("c"))}))
        spec = CanonicalModelSpec(sig, {"1": f1, "2": f2}, "multi")
        pm = canonical_model_multi(spec)
        other = PointedModel(pm.model, "{}")
        verdict = bisimilar_multi(pm, other) is not None
        assert verdict == logically_equivalent(pm, other)

    def test_agent_mismatch_rejected(self):
        m1 = make_model(
            ["c"], ["a"], {"a": {"c": "0"}}, agents=["1"], relations={"1": [["a"]]}
        )
        m2 = make_model(
            ["c"], ["a"], {"a": {"c": "0"}},
            agents=["1", "2"], relations={"1": [["a"]], "2": [["a"]]},
        )
        with pytest.raises(ModelError):
            bisimilar_multi(PointedModel(m1, "a"), PointedModel(m2, "a"))

    def test_result_closed_under_clauses(self):
        random.seed(6)
        pool = []
        for m in enumerate_models(2, 2, 2, 2):
            if len(m.agents) == 2:
                pool.extend(pointed_models(m))
        sample = random.sample(pool, 40)
        closed_checked = 0
        for pm1, pm2 in zip(sample[:20], sample[20:]):
            rel = bisimilar_multi(pm1, pm2)
            if rel is not None:
                assert relation_closed(pm1, pm2, rel)
                closed_checked += 1
        assert closed_checked > 0

    def test_agrees_with_single_on_universal_models(self):
        # one-agent models with the universal relation are the single-agent case
        random.seed(8)
        pool = []
        for m in enumerate_models(3, 2, 2, 1, mode="single"):
            pool.extend(pointed_models(m))
        sample = random.sample(pool, 40)
        for pm1, pm2 in zip(sample[:20], sample[20:]):
            assert (bisimilar_multi(pm1, pm2) is not None) == bisimilar_single(pm1, pm2)


class TestLogicallyEquivalent:
    def test_reflexive(self, four_rows):
        pm = PointedModel(four_rows, "w1")
        assert logically_equivalent(pm, pm)

    def test_single_states(self):
        assert logically_equivalent(single_state("0"), single_state("9"))

    def test_union_signature_convention(self):
        a = single_state("0")
        m = make_model(["c", "x"], ["w", "v"],
                       {"w": {"c": "0", "x": "0"}, "v": {"c": "0", "x": "1"}})
        b = PointedModel(m, "w")
        # b does not know x's value, a vacuously does
        assert logically_equivalent(a, b) is False


def def9_discrepancy_pair():
    """Minimal pair witnessing that the documented greatest-fixpoint reading
    of the multi-agent bisimulation is strictly stronger than logical
    equivalence (see the acceptance suite and the project notes)."""
    m_a = make_model(
        ["c1"], ["s0", "s1"], {"s0": {"c1": "0"}, "s1": {"c1": "1"}},
        agents=["1", "2"],
        relations={"1": [["s0", "s1"]], "2": [["s0", "s1"]]},
    )
    m_b = make_model(
        ["c1"], ["s0", "s1", "s2"],
        {"s0": {"c1": "0"}, "s1": {"c1": "0"}, "s2": {"c1": "1"}},
        agents=["1", "2"],
        relations={"1": [["s0", "s1", "s2"]], "2": [["s0", "s2"], ["s1"]]},
    )
    return PointedModel(m_a, "s0"), PointedModel(m_b, "s0")


def test_def9_linkage_discrepancy_witness():
    """Regression guard for the documented reading: the witness pair is
    logically equivalent yet not linked by any greatest-fixpoint
    bisimulation, because (s0,s0) forces (s1,s2), which forces (s0,s1),
    which violates the zig clause for agent 2 outright."""
    pm_a, pm_b = def9_discrepancy_pair()
    assert logically_equivalent(pm_a, pm_b) is True
    assert bisimilar_multi(pm_a, pm_b) is None
    # the forced chain: the bad pair is rejected even as a seed relation
    bad = BisimRelation(frozenset({("s0", "s1")}))
    assert relation_closed(pm_a, pm_b, bad) is False
