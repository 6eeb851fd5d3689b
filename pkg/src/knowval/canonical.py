"""Canonical dependency graphs and the canonical models they induce.

The single-agent construction takes the closed constant sets as states;
the multi-agent one takes all subsets and relates two states for agent i
iff both or neither are closed under i's dependency graph.  In both the
valuation is binary: a constant is 0 exactly at the states containing it,
and the designated point is the full signature set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from knowval.dependency import FD, DependencyError, FDSet
from knowval.semantics import PointedModel, make_model
from knowval.syntax import RESERVED_AGENT


@dataclass(frozen=True)
class CanonicalModelSpec:
    signature: frozenset[str]
    per_agent: dict  # agent -> FDSet of positive dependencies
    mode: str

    def __post_init__(self):
        object.__setattr__(self, "signature", frozenset(self.signature))
        if self.mode not in ("single", "multi"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "single" and len(self.per_agent) != 1:
            raise DependencyError("single mode takes exactly one agent entry")
        if not self.per_agent:
            raise DependencyError("at least one agent entry required")
        for agent, fds in self.per_agent.items():
            if not isinstance(fds, FDSet) or fds.agent != agent:
                raise DependencyError(f"bad dependency set for agent {agent!r}")
            if not self.signature >= fds.signature:
                raise DependencyError("dependency set exceeds the declared signature")


def _is_closed(subset: frozenset, fds: FDSet) -> bool:
    return all(not fd.lhs <= subset or fd.rhs <= subset for fd in fds.deps)


def _subsets(signature: frozenset) -> list[frozenset]:
    elems = sorted(signature)
    out = []
    for r in range(len(elems) + 1):
        for combo in itertools.combinations(elems, r):
            out.append(frozenset(combo))
    return out


def closed_sets(fds: FDSet) -> list[frozenset]:
    """All subsets of the signature from which every dependency edge stays
    inside the set, in (size, lexicographic) order."""
    return [s for s in _subsets(fds.signature) if _is_closed(s, fds)]


def state_id(subset: frozenset) -> str:
    return "{" + ",".join(sorted(subset)) + "}"


def _binary_valuation(subsets, constants) -> dict:
    return {
        state_id(s): {c: ("0" if c in s else "1") for c in constants} for s in subsets
    }


def canonical_model_single(spec: CanonicalModelSpec) -> PointedModel:
    """States are the closed sets; the point is the full signature set,
    which is always closed."""
    if spec.mode != "single":
        raise DependencyError("spec is not in single mode")
    (fds,) = spec.per_agent.values()
    sets = [s for s in _subsets(spec.signature) if _is_closed(s, fds)]
    constants = tuple(sorted(spec.signature))
    model = make_model(
        constants,
        [state_id(s) for s in sets],
        _binary_valuation(sets, constants),
        domain=("0", "1"),
    )
    return PointedModel(model, state_id(spec.signature))


def canonical_model_multi(spec: CanonicalModelSpec) -> PointedModel:
    """States are all subsets; each agent's partition has (at most) two
    classes: the sets closed under its graph and the rest."""
    if spec.mode != "multi":
        raise DependencyError("spec is not in multi mode")
    subsets = _subsets(spec.signature)
    constants = tuple(sorted(spec.signature))
    agents = tuple(sorted(spec.per_agent))
    relations = {}
    for agent in agents:
        fds = spec.per_agent[agent]
        closed = [state_id(s) for s in subsets if _is_closed(s, fds)]
        open_ = [state_id(s) for s in subsets if not _is_closed(s, fds)]
        classes = [frozenset(closed)]
        if open_:
            classes.append(frozenset(open_))
        relations[agent] = tuple(classes)
    model = make_model(
        constants,
        [state_id(s) for s in subsets],
        _binary_valuation(subsets, constants),
        agents=agents,
        relations=relations,
        domain=("0", "1"),
    )
    return PointedModel(model, state_id(spec.signature))


def spec_from_dict(doc: dict) -> CanonicalModelSpec:
    """Reads the CLI ``deps.json`` schema.

    Single mode: ``{"constants": [...], "dependencies": [{"lhs": [...],
    "rhs": [...]}, ...]}``.  Multi mode adds ``"agents"`` and keys the
    dependency lists by agent.
    """
    if not isinstance(doc, dict):
        raise DependencyError("dependency document must be a JSON object")
    unknown = set(doc) - {"constants", "agents", "dependencies", "mode"}
    if unknown:
        raise DependencyError(f"unknown dependency fields: {sorted(unknown)}")
    if "constants" not in doc or "dependencies" not in doc:
        raise DependencyError("dependency document needs 'constants' and 'dependencies'")
    sig = frozenset(doc["constants"])

    def read_fds(agent, items) -> FDSet:
        deps = set()
        for item in items:
            if set(item) != {"lhs", "rhs"}:
                raise DependencyError(f"bad dependency entry {item!r}")
            deps.add(FD(frozenset(item["lhs"]), frozenset(item["rhs"])))
        return FDSet(agent, sig, frozenset(deps))

    deps = doc["dependencies"]
    declared_mode = doc.get("mode")
    if isinstance(deps, list):
        mode = declared_mode or "single"
        if mode != "single":
            raise DependencyError("a flat dependency list means single mode")
        if "agents" in doc:
            raise DependencyError("'agents' not allowed in single mode")
        return CanonicalModelSpec(sig, {RESERVED_AGENT: read_fds(RESERVED_AGENT, deps)}, "single")
    if isinstance(deps, dict):
        mode = declared_mode or "multi"
        if mode != "multi":
            raise DependencyError("per-agent dependencies mean multi mode")
        agents = doc.get("agents", sorted(deps))
        if set(agents) != set(deps):
            raise DependencyError("'dependencies' must cover exactly the agents")
        return CanonicalModelSpec(
            sig, {a: read_fds(a, deps[a]) for a in agents}, "multi"
        )
    raise DependencyError("'dependencies' must be a list or an object")
