"""Pointed value models, the public-inspection update, and evaluation.

Models are finite: a state set, a value table, and one equivalence
partition per agent.  Single-agent models carry the reserved agent with
the universal (one-class) partition, so the single-agent knowing-value
clause quantifies over all states.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from knowval.syntax import (
    And,
    DepAtom,
    Formula,
    Inspect,
    Kv,
    Not,
    RESERVED_AGENT,
    Top,
    agents_of,
    signature_of,
    valid_agent,
    valid_const,
)


class ModelError(ValueError):
    """Ill-formed model, valuation, partition or state reference."""


@dataclass(frozen=True)
class Model:
    constants: tuple[str, ...]
    agents: tuple[str, ...]
    states: tuple[str, ...]
    domain: tuple[str, ...]
    valuation: dict  # (state, const) -> value token
    relations: dict  # agent -> tuple of frozenset state classes

    @property
    def is_single(self) -> bool:
        return self.agents == (RESERVED_AGENT,)

    def value(self, state: str, const: str) -> str:
        return self.valuation[(state, const)]

    def class_of(self, agent: str, state: str) -> frozenset[str]:
        for cls in self.relations[agent]:
            if state in cls:
                return cls
        raise ModelError(f"state {state!r} missing from partition of agent {agent!r}")

    def agree_set(self, s: str, t: str) -> frozenset[str]:
        """Constants on which states s and t carry the same value."""
        return frozenset(c for c in self.constants if self.value(s, c) == self.value(t, c))


@dataclass(frozen=True)
class PointedModel:
    model: Model
    actual: str

    def __post_init__(self):
        if self.actual not in self.model.states:
            raise ModelError(f"actual state {self.actual!r} not in model")


def make_model(
    constants: Iterable[str],
    states: Iterable[str],
    valuation: dict,
    *,
    agents: Iterable[str] | None = None,
    relations: dict | None = None,
    domain: Iterable[str] | None = None,
) -> Model:
    """Validating constructor.

    ``valuation`` is a nested mapping ``state -> const -> value``.  Omitting
    ``agents`` builds a single-agent model (universal relation); then
    ``relations`` must be omitted as well.
    """
    constants = tuple(constants)
    states = tuple(states)
    if not states:
        raise ModelError("state set must be non-empty")
    if len(set(states)) != len(states):
        raise ModelError("duplicate state ids")
    if len(set(constants)) != len(constants):
        raise ModelError("duplicate constants")
    for c in constants:
        if not valid_const(c):
            raise ModelError(f"bad constant name {c!r}")
    for s in states:
        if not isinstance(s, str) or not s:
            raise ModelError(f"bad state id {s!r}")

    flat: dict = {}
    for s in states:
        row = valuation.get(s)
        if row is None:
            raise ModelError(f"partial valuation: no row for state {s!r}")
        extra = set(row) - set(constants)
        if extra:
            raise ModelError(f"valuation mentions unknown constants {sorted(extra)}")
        for c in constants:
            if c not in row:
                raise ModelError(f"partial valuation: missing value for ({s!r}, {c!r})")
            v = row[c]
            if not isinstance(v, str) or not v:
                raise ModelError(f"bad value token {v!r}")
            flat[(s, c)] = v
    if set(valuation) - set(states):
        raise ModelError("valuation mentions unknown states")

    used = sorted(set(flat.values()))
    if domain is None:
        domain = tuple(used) if used else ("0",)
    else:
        domain = tuple(dict.fromkeys(domain))
        if not domain:
            raise ModelError("domain must be non-empty")
        missing = set(used) - set(domain)
        if missing:
            raise ModelError(f"valuation uses tokens outside domain: {sorted(missing)}")

    if agents is None:
        if relations is not None:
            raise ModelError("relations given for a single-agent model")
        agents = (RESERVED_AGENT,)
        rel = {RESERVED_AGENT: (frozenset(states),)}
    else:
        agents = tuple(agents)
        if not agents:
            raise ModelError("agent set must be non-empty")
        if len(set(agents)) != len(agents):
            raise ModelError("duplicate agents")
        for a in agents:
            if not valid_agent(a):
                raise ModelError(f"bad agent name {a!r}")
            if a == RESERVED_AGENT:
                raise ModelError(f"agent id {RESERVED_AGENT!r} is reserved")
        if relations is None:
            raise ModelError("multi-agent model requires relations")
        if set(relations) != set(agents):
            raise ModelError("relations must cover exactly the declared agents")
        rel = {}
        for a in agents:
            rel[a] = _check_partition(relations[a], states, a)

    return Model(constants, agents, states, domain, flat, rel)


def _check_partition(classes, states, agent) -> tuple[frozenset[str], ...]:
    seen: set[str] = set()
    out = []
    for cls in classes:
        cls = frozenset(cls)
        if not cls:
            raise ModelError(f"empty partition class for agent {agent!r}")
        unknown = cls - set(states)
        if unknown:
            raise ModelError(f"partition of agent {agent!r} mentions unknown states {sorted(unknown)}")
        if cls & seen:
            raise ModelError(f"overlapping partition classes for agent {agent!r}")
        seen |= cls
        out.append(cls)
    if seen != set(states):
        raise ModelError(f"partition of agent {agent!r} does not cover all states")
    return tuple(out)


def validate_model(m: Model) -> None:
    """Re-checks all Model invariants (used on enumerated/synthesized output)."""
    nested: dict = {s: {} for s in m.states}
    for (s, c), v in m.valuation.items():
        nested[s][c] = v
    rebuilt = make_model(
        m.constants,
        m.states,
        nested,
        agents=None if m.is_single else m.agents,
        relations=None if m.is_single else {a: m.relations[a] for a in m.agents},
        domain=m.domain,
    )
    if rebuilt != m:
        raise ModelError("model failed invariant validation")


# --- evaluation ---

def _check_formula_fits(m: Model, f: Formula) -> None:
    bad = signature_of(f) - set(m.constants)
    if bad:
        raise ModelError(f"undeclared constants in formula: {sorted(bad)}")
    bad_a = agents_of(f) - set(m.agents)
    if bad_a:
        raise ModelError(f"undeclared agents in formula: {sorted(bad_a)}")


def evaluate(pm: PointedModel, f: Formula) -> bool:
    """Truth at the pointed model, by the recursive clauses; inspection
    evaluates the subformula in the updated model."""
    _check_formula_fits(pm.model, f)
    return _eval(pm, f)


def _eval(pm: PointedModel, f: Formula) -> bool:
    m, s = pm.model, pm.actual
    if isinstance(f, Top):
        return True
    if isinstance(f, Not):
        return not _eval(pm, f.sub)
    if isinstance(f, And):
        return _eval(pm, f.left) and _eval(pm, f.right)
    if isinstance(f, Kv):
        v = m.value(s, f.const)
        return all(m.value(t, f.const) == v for t in m.class_of(f.agent, s))
    if isinstance(f, Inspect):
        return _eval(inspect_update(pm, f.const), f.sub)
    if isinstance(f, DepAtom):
        for t in m.class_of(f.agent, s):
            if all(m.value(s, c) == m.value(t, c) for c in f.lhs):
                if not all(m.value(s, d) == m.value(t, d) for d in f.rhs):
                    return False
        return True
    raise ModelError(f"cannot evaluate {f!r}")


def inspect_update(pm: PointedModel, const: str) -> PointedModel:
    """Publicly inspect ``const``: restrict to states agreeing with the
    actual state on it; valuation and partitions restrict accordingly."""
    m, s = pm.model, pm.actual
    if const not in m.constants:
        raise ModelError(f"undeclared constant {const!r}")
    v = m.value(s, const)
    keep = tuple(t for t in m.states if m.value(t, const) == v)
    keep_set = set(keep)
    valuation = {(t, c): m.valuation[(t, c)] for t in keep for c in m.constants}
    relations = {}
    for a in m.agents:
        classes = tuple(
            cls & keep_set for cls in m.relations[a] if cls & keep_set
        )
        relations[a] = tuple(frozenset(cls) for cls in classes)
    updated = Model(m.constants, m.agents, keep, m.domain, valuation, relations)
    return PointedModel(updated, s)


def globally_true(m: Model, f: Formula) -> bool:
    return all(evaluate(PointedModel(m, s), f) for s in m.states)


def pointed_models(m: Model) -> Iterator[PointedModel]:
    for s in m.states:
        yield PointedModel(m, s)


def extend_signature(m: Model, consts: Iterable[str]) -> Model:
    """Adds undeclared constants with one fixed value everywhere, so they
    never differentiate states (the undeclared-constant convention)."""
    extra = [c for c in consts if c not in m.constants]
    if not extra:
        return m
    filler = m.domain[0]
    valuation = dict(m.valuation)
    for s in m.states:
        for c in extra:
            valuation[(s, c)] = filler
    return Model(
        m.constants + tuple(extra), m.agents, m.states, m.domain, valuation, m.relations
    )


# --- bounded enumeration (oracle harness) ---

def set_partitions(items: tuple) -> Iterator[tuple[frozenset, ...]]:
    """All set partitions in canonical (restricted-growth) order."""
    n = len(items)
    if n == 0:
        yield ()
        return
    rgs = [0] * n

    def rec(i: int, maxseen: int):
        if i == n:
            k = maxseen + 1
            classes = [[] for _ in range(k)]
            for j, g in enumerate(rgs):
                classes[g].append(items[j])
            yield tuple(frozenset(c) for c in classes)
            return
        for g in range(maxseen + 2):
            rgs[i] = g
            yield from rec(i + 1, max(maxseen, g))

    yield from rec(1, 0)


def enumerate_models_exact(
    n_states: int, n_consts: int, n_values: int, n_agents: int, mode: str = "multi"
) -> Iterator[Model]:
    """One stratum: exactly the given sizes, canonical labels, raw valuations.

    Single mode fixes the universal relation (and requires ``n_agents == 1``).
    """
    if min(n_states, n_consts, n_values, n_agents) < 1:
        raise ValueError("all bounds must be >= 1")
    if mode == "single" and n_agents != 1:
        raise ValueError("single mode enumerates one-agent models only")
    states = tuple(f"s{i}" for i in range(n_states))
    consts = tuple(f"c{i + 1}" for i in range(n_consts))
    values = tuple(str(v) for v in range(n_values))
    slots = [(s, c) for s in states for c in consts]
    for assignment in itertools.product(values, repeat=len(slots)):
        nested: dict = {s: {} for s in states}
        for (s, c), v in zip(slots, assignment):
            nested[s][c] = v
        if mode == "single":
            yield make_model(consts, states, nested, domain=values)
        else:
            agents = tuple(str(i + 1) for i in range(n_agents))
            all_parts = list(set_partitions(states))
            for combo in itertools.product(all_parts, repeat=n_agents):
                yield make_model(
                    consts,
                    states,
                    nested,
                    agents=agents,
                    relations=dict(zip(agents, combo)),
                    domain=values,
                )


def enumerate_models(
    max_states: int, max_consts: int, max_domain: int, max_agents: int, mode: str = "multi"
) -> Iterator[Model]:
    """Exhaustively yields all models up to the bounds (every stratum)."""
    if min(max_states, max_consts, max_domain, max_agents) < 1:
        raise ValueError("all bounds must be >= 1")
    agent_range = (1,) if mode == "single" else range(1, max_agents + 1)
    for n in range(1, max_states + 1):
        for k in range(1, max_consts + 1):
            for m in range(1, max_domain + 1):
                for a in agent_range:
                    yield from enumerate_models_exact(n, k, m, a, mode)


# --- JSON model files ---

def model_to_dict(m: Model, actual: str | None = None) -> dict:
    doc: dict = {
        "constants": list(m.constants),
        "states": list(m.states),
        "domain": list(m.domain),
        "valuation": {s: {c: m.value(s, c) for c in m.constants} for s in m.states},
    }
    if not m.is_single:
        doc["agents"] = list(m.agents)
        order = {s: i for i, s in enumerate(m.states)}
        doc["relations"] = {
            a: sorted(
                (sorted(cls, key=order.get) for cls in m.relations[a]),
                key=lambda cls: order[cls[0]],
            )
            for a in m.agents
        }
    if actual is not None:
        doc["actual"] = actual
    return doc


_MODEL_KEYS = {"constants", "agents", "domain", "states", "valuation", "relations", "actual"}


def model_from_dict(doc: dict) -> tuple[Model, str | None]:
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    unknown = set(doc) - _MODEL_KEYS
    if unknown:
        raise ModelError(f"unknown model fields: {sorted(unknown)}")
    for key in ("constants", "states", "valuation"):
        if key not in doc:
            raise ModelError(f"missing model field {key!r}")
    agents = doc.get("agents")
    relations = doc.get("relations")
    if agents is None and relations is not None:
        raise ModelError("relations given for a single-agent model")
    model = make_model(
        doc["constants"],
        doc["states"],
        doc["valuation"],
        agents=agents,
        relations=relations,
        domain=doc.get("domain"),
    )
    actual = doc.get("actual")
    if actual is not None and actual not in model.states:
        raise ModelError(f"actual state {actual!r} not in model")
    return model, actual


def load_model(path: str) -> tuple[Model, str | None]:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def load_pointed(path: str) -> PointedModel:
    model, actual = load_model(path)
    if actual is None:
        raise ModelError(f"model file {path!r} has no 'actual' state")
    return PointedModel(model, actual)
