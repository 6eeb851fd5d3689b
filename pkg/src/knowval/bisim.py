"""Bisimilarity checking and the logical-equivalence oracle.

Single-agent bisimilarity compares difference patterns: for each constant
d, the maximal agreement sets of states that differ from the point on d.
Multi-agent bisimilarity is a greatest-fixpoint refinement over state
pairs, delegated to the kernel backend.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from knowval import kernel
from knowval.semantics import (
    Model,
    ModelError,
    PointedModel,
    evaluate,
    extend_signature,
)
from knowval.syntax import DepAtom

_EQUIV_MAX_CONSTS = 14


@dataclass(frozen=True)
class BisimRelation:
    pairs: frozenset  # (state id of model 1, state id of model 2)

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(tuple(p) for p in self.pairs))


def _maximal(sets: Iterable[frozenset]) -> frozenset:
    sets = list(sets)
    out = []
    for a in sets:
        if not any(a < b for b in sets) and a not in out:
            out.append(a)
    return frozenset(out)


def _pattern_over(pm: PointedModel, consts) -> dict:
    m, s = pm.model, pm.actual
    declared = set(m.constants)
    pattern = {}
    for d in consts:
        if d not in declared:
            pattern[d] = frozenset()
            continue
        vd = m.value(s, d)
        agrees = [
            frozenset(
                c
                for c in consts
                if c not in declared or m.value(s, c) == m.value(t, c)
            )
            for t in m.states
            if m.value(t, d) != vd
        ]
        pattern[d] = _maximal(agrees)
    return pattern


def difference_pattern(pm: PointedModel) -> dict:
    """For each constant d, the maximal agreement sets (with the point)
    among states whose d-value differs from the point's."""
    if not pm.model.is_single:
        raise ModelError("difference patterns are defined for single-agent models")
    return _pattern_over(pm, pm.model.constants)


def _union_signature(m1: Model, m2: Model) -> list[str]:
    return sorted(set(m1.constants) | set(m2.constants))


def bisimilar_single(pm1: PointedModel, pm2: PointedModel) -> bool:
    """Equality of difference patterns over the union signature, which is
    exactly the two-way witness condition for all finite C and d."""
    if not (pm1.model.is_single and pm2.model.is_single):
        raise ModelError("bisimilar_single expects single-agent models")
    union = _union_signature(pm1.model, pm2.model)
    return _pattern_over(pm1, union) == _pattern_over(pm2, union)


def _shared_agents(pm1: PointedModel, pm2: PointedModel) -> list[str]:
    a1, a2 = set(pm1.model.agents), set(pm2.model.agents)
    if a1 != a2:
        raise ModelError(f"agent sets differ: {sorted(a1)} vs {sorted(a2)}")
    return sorted(a1)


def bisimilar_multi(pm1: PointedModel, pm2: PointedModel):
    """Greatest-fixpoint bisimulation; returns the witness relation when it
    links the two actual states, else None."""
    agents = _shared_agents(pm1, pm2)
    union = _union_signature(pm1.model, pm2.model)
    d1 = kernel.bisim_data(pm1, union, agents)
    d2 = kernel.bisim_data(pm2, union, agents)
    pairs = kernel.bisim_pair(d1, d2, len(agents), (1 << len(union)) - 1)
    if pairs is None:
        return None
    s1, s2 = pm1.model.states, pm2.model.states
    return BisimRelation(frozenset((s1[i], s2[j]) for i, j in pairs))


def relation_closed(pm1: PointedModel, pm2: PointedModel, rel: BisimRelation) -> bool:
    """One further refinement pass produces no deletions (the coinductive
    closure invariant on witness relations)."""
    from knowval import _pykernel

    agents = _shared_agents(pm1, pm2)
    union = _union_signature(pm1.model, pm2.model)
    d1 = kernel.bisim_data(pm1, union, agents)
    d2 = kernel.bisim_data(pm2, union, agents)
    idx1 = {s: i for i, s in enumerate(pm1.model.states)}
    idx2 = {s: i for i, s in enumerate(pm2.model.states)}
    rows = [0] * d1.n
    for s, t in rel.pairs:
        rows[idx1[s]] |= 1 << idx2[t]
    kfull = (1 << len(union)) - 1
    for s in range(d1.n):
        for t in range(d2.n):
            if (rows[s] >> t) & 1 and not _pykernel._pair_ok(
                s, t, rows, d1.n, d2.n, d1.ag, d1.agree, d2.ag, d2.agree,
                len(agents), kfull,
            ):
                return False
    return True


def logically_equivalent(pm1: PointedModel, pm2: PointedModel) -> bool:
    """Agreement on every dependency atom Kv_i(C,{d}) over the union
    signature; every formula is a boolean combination of these."""
    agents = _shared_agents(pm1, pm2)
    union = _union_signature(pm1.model, pm2.model)
    if len(union) > _EQUIV_MAX_CONSTS:
        raise ModelError(
            f"signature too large for the equivalence sweep ({len(union)} constants)"
        )
    e1 = PointedModel(extend_signature(pm1.model, union), pm1.actual)
    e2 = PointedModel(extend_signature(pm2.model, union), pm2.actual)
    for i in agents:
        for r in range(len(union) + 1):
            for combo in itertools.combinations(union, r):
                lhs = frozenset(combo)
                for d in union:
                    atom = DepAtom(i, lhs, frozenset((d,)))
                    if evaluate(e1, atom) != evaluate(e2, atom):
                        return False
    return True


def atom_truth_vector(pm: PointedModel, union, agents) -> int:
    """Packed truths of all atoms Kv_i(C,{d}) over the given signature and
    agent order; equal vectors mean logically equivalent models."""
    ext = PointedModel(extend_signature(pm.model, union), pm.actual)
    vec = 0
    bit = 0
    for i in agents:
        for r in range(len(union) + 1):
            for combo in itertools.combinations(union, r):
                lhs = frozenset(combo)
                for d in union:
                    if evaluate(ext, DepAtom(i, lhs, frozenset((d,)))):
                        vec |= 1 << bit
                    bit += 1
    return vec
