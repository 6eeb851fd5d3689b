"""Hot-kernel front end: compact model/formula encodings plus dispatch to
the compiled extension (``knowval._ckernel``) or the pure-Python fallback.

The sweeps behind the validity and bisimulation test batteries evaluate
on the order of 1e8 formula instances and 1e7 pairwise fixpoints; both
backends implement the same integer-bitmask semantics, so results are
identical and the choice only affects speed.  Set ``KNOWVAL_PURE=1`` to
force the fallback.
"""

from __future__ import annotations

import os
from array import array
from dataclasses import dataclass
from typing import Sequence

from knowval.syntax import And, DepAtom, Formula, Inspect, Kv, Not, Top
from knowval.semantics import Model, PointedModel

OP_TOP, OP_NOT, OP_AND, OP_KV, OP_INSPECT, OP_DEP = range(6)

if os.environ.get("KNOWVAL_PURE"):
    from knowval import _pykernel as _impl

    BACKEND = "pure"
else:
    try:
        from knowval import _ckernel as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from knowval import _pykernel as _impl

        BACKEND = "pure"

_KERNEL_MAX_STATES = 63


@dataclass
class EvalData:
    """Per-model bitmask tables: for every constant and state, the mask of
    states sharing its value; for every agent and state, its class mask."""

    n: int
    eq: array
    ag: array


@dataclass
class FormulaCode:
    nodes: array
    aux: array
    roots: array


def eval_data(model: Model, consts: Sequence[str] | None = None,
              agents: Sequence[str] | None = None) -> EvalData:
    consts = list(model.constants if consts is None else consts)
    agents = list(model.agents if agents is None else agents)
    n = len(model.states)
    if n > _KERNEL_MAX_STATES:
        raise ValueError(f"kernel supports at most {_KERNEL_MAX_STATES} states")
    full = (1 << n) - 1
    sidx = {s: i for i, s in enumerate(model.states)}
    eq = array("Q", bytes(8 * len(consts) * n))
    for ci, c in enumerate(consts):
        if c not in model.constants:
            for p in range(n):
                eq[ci * n + p] = full
            continue
        for p, s in enumerate(model.states):
            v = model.value(s, c)
            mask = 0
            for t, ts in enumerate(model.states):
                if model.value(ts, c) == v:
                    mask |= 1 << t
            eq[ci * n + p] = mask
    ag = array("Q", bytes(8 * len(agents) * n))
    for ai, a in enumerate(agents):
        for cls in model.relations[a]:
            mask = 0
            for t in cls:
                mask |= 1 << sidx[t]
            for t in cls:
                ag[ai * n + sidx[t]] = mask
    return EvalData(n, eq, ag)


def encode_formulas(formulas: Sequence[Formula], consts: Sequence[str],
                    agents: Sequence[str]) -> FormulaCode:
    cidx = {c: i for i, c in enumerate(consts)}
    aidx = {a: i for i, a in enumerate(agents)}
    nodes: list[int] = []
    aux: list[int] = []
    roots: list[int] = []

    def emit(op: int, x: int, y: int) -> int:
        nodes.extend((op, x, y))
        return len(nodes) // 3 - 1

    def enc(f: Formula) -> int:
        if isinstance(f, Top):
            return emit(OP_TOP, 0, 0)
        if isinstance(f, Not):
            return emit(OP_NOT, enc(f.sub), 0)
        if isinstance(f, And):
            x = enc(f.left)
            y = enc(f.right)
            return emit(OP_AND, x, y)
        if isinstance(f, Kv):
            return emit(OP_KV, aidx[f.agent], cidx[f.const])
        if isinstance(f, Inspect):
            y = enc(f.sub)
            return emit(OP_INSPECT, cidx[f.const], y)
        if isinstance(f, DepAtom):
            cm = sum(1 << cidx[c] for c in f.lhs)
            dm = sum(1 << cidx[d] for d in f.rhs)
            aux.extend((cm, dm))
            return emit(OP_DEP, aidx[f.agent], len(aux) // 2 - 1)
        raise TypeError(f"cannot encode {f!r}")

    for f in formulas:
        roots.append(enc(f))
    return FormulaCode(array("i", nodes), array("q", aux), array("i", roots))


def eval_codes(data: EvalData, code: FormulaCode) -> list[int]:
    """For each encoded formula, the bitmask of states at which it holds
    when taken as the actual state."""
    if not code.roots:
        return []
    return _impl.eval_codes(data.n, data.eq, data.ag, code.nodes, code.aux, code.roots)


@dataclass
class BisimData:
    """Point-free structure for the bisimulation fixpoint: class masks per
    agent/state and per-state-pair agreement masks over the signature."""

    n: int
    actual: int
    ag: array
    agree: array


def bisim_data(pm: PointedModel, consts: Sequence[str],
               agents: Sequence[str]) -> BisimData:
    m = pm.model
    n = len(m.states)
    if n > _KERNEL_MAX_STATES:
        raise ValueError(f"kernel supports at most {_KERNEL_MAX_STATES} states")
    sidx = {s: i for i, s in enumerate(m.states)}
    ag = array("Q", bytes(8 * len(agents) * n))
    for ai, a in enumerate(agents):
        for cls in m.relations[a]:
            mask = 0
            for t in cls:
                mask |= 1 << sidx[t]
            for t in cls:
                ag[ai * n + sidx[t]] = mask
    agree = array("Q", bytes(8 * n * n))
    declared = set(m.constants)
    for i, s in enumerate(m.states):
        for j, t in enumerate(m.states):
            mask = 0
            for ci, c in enumerate(consts):
                if c not in declared or m.value(s, c) == m.value(t, c):
                    mask |= 1 << ci
            agree[i * n + j] = mask
    return BisimData(n, sidx[pm.actual], ag, agree)


def bisim_pair(a: BisimData, b: BisimData, n_agents: int, kfull: int):
    """Greatest-fixpoint bisimulation between two compact models: the
    surviving index pairs if the actual states stay linked, else None."""
    return _impl.bisim_pair(
        a.n, a.ag, a.agree, a.actual, b.n, b.ag, b.agree, b.actual, n_agents, kfull
    )


def bisim_sweep(datas: Sequence[BisimData], atomvec: Sequence[int],
                n_agents: int, kfull: int, limit: int = 32) -> list[tuple[int, int]]:
    """Checks every unordered pair: fixpoint linkage must coincide with
    equality of the models' atom-truth vectors.  Returns the mismatching
    index pairs (up to ``limit``)."""
    n_models = len(datas)
    if n_models == 0:
        return []
    nmax = max(d.n for d in datas)
    ns = array("i", [d.n for d in datas])
    actuals = array("i", [d.actual for d in datas])
    ags = array("Q", bytes(8 * n_models * n_agents * nmax))
    agrees = array("Q", bytes(8 * n_models * nmax * nmax))
    for mi, d in enumerate(datas):
        for ai in range(n_agents):
            base = mi * n_agents * nmax + ai * nmax
            for p in range(d.n):
                ags[base + p] = d.ag[ai * d.n + p]
        for s in range(d.n):
            base = mi * nmax * nmax + s * nmax
            for t in range(d.n):
                agrees[base + t] = d.agree[s * d.n + t]
    ids: dict = {}
    vec = array("q", [ids.setdefault(v, len(ids)) for v in atomvec])
    return _impl.bisim_mismatches(
        ns, actuals, ags, agrees, nmax, n_agents, kfull, vec, limit
    )
