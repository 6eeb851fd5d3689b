"""Shared harness for the validity / bisimulation sweeps and oracles."""

from __future__ import annotations

import itertools

from knowval import kernel
from knowval.bisim import atom_truth_vector
from knowval.semantics import enumerate_models, pointed_models
from knowval.syntax import (
    And,
    Formula,
    Inspect,
    Kv,
    Not,
    TOP,
    all_formulas,
    diamond,
    implication,
)

BOUNDS = (3, 2, 2, 2)  # max states, constants, domain values, agents
POOL_DEPTH = 2


def axiom_instances(consts, agents):
    """Instances for one stratum: formulas that must be valid (LEARN, NF,
    seriality, RIR with the side condition) and pairs that must agree at
    every point (DET, COMM)."""
    consts = list(consts)
    agents = list(agents)
    pool = all_formulas(consts, agents, POOL_DEPTH)
    valid: list[Formula] = []
    for i in agents:
        for c in consts:
            valid.append(Inspect(c, Kv(i, c)))  # LEARN
            for d in consts:
                valid.append(implication(Kv(i, c), Inspect(d, Kv(i, c))))  # NF
    for c in consts:
        valid.append(diamond(c, TOP))  # seriality
    for i in agents:
        pool_i = all_formulas(consts, [i], POOL_DEPTH)
        for c in consts:
            for phi in pool_i:  # RIR: phi mentions no agent besides i
                valid.append(implication(Kv(i, c), implication(Inspect(c, phi), phi)))
    pairs: list[tuple[Formula, Formula]] = []
    for c in consts:
        for phi in pool:
            pairs.append((diamond(c, phi), Inspect(c, phi)))  # DET
    for ci in range(len(consts)):
        for cj in range(ci + 1, len(consts)):
            c, d = consts[ci], consts[cj]
            for phi in pool:
                pairs.append(
                    (Inspect(c, Inspect(d, phi)), Inspect(d, Inspect(c, phi)))
                )  # COMM
    return valid, pairs


def run_axiom_sweep(bounds=BOUNDS):
    """Evaluates every instance on every enumerated model; returns
    (models_checked, instances_checked) or raises AssertionError with the
    first failing instance."""
    cache: dict = {}
    models = instances = 0
    for m in enumerate_models(*bounds):
        key = (m.constants, m.agents)
        if key not in cache:
            valid, pairs = axiom_instances(m.constants, m.agents)
            flat = valid + [f for pair in pairs for f in pair]
            cache[key] = (
                valid,
                pairs,
                kernel.encode_formulas(flat, m.constants, m.agents),
            )
        valid, pairs, code = cache[key]
        data = kernel.eval_data(m)
        full = (1 << data.n) - 1
        masks = kernel.eval_codes(data, code)
        for i, f in enumerate(valid):
            assert masks[i] == full, f"axiom instance fails: {f} on {m}"
        base = len(valid)
        for j, (f1, f2) in enumerate(pairs):
            assert masks[base + 2 * j] == masks[base + 2 * j + 1], (
                f"pair disagrees: {f1} vs {f2} on {m}"
            )
        models += 1
        instances += (len(valid) + len(pairs)) * data.n
    return models, instances


def find_ir_countermodel(bounds=BOUNDS):
    """First 2-agent model/point falsifying Kv_1(c1) -> ([c1]Kv_2(c2) -> Kv_2(c2))."""
    target = implication(
        Kv("1", "c1"),
        implication(Inspect("c1", Kv("2", "c2")), Kv("2", "c2")),
    )
    for m in enumerate_models(bounds[0], bounds[1], bounds[2], 2):
        if len(m.agents) != 2 or len(m.constants) < 2:
            continue
        data = kernel.eval_data(m)
        code = kernel.encode_formulas([target], m.constants, m.agents)
        (mask,) = kernel.eval_codes(data, code)
        full = (1 << data.n) - 1
        if mask != full:
            point = next(s for i, s in enumerate(m.states) if not mask >> i & 1)
            return m, point
    return None


def check_ir_single(bounds=BOUNDS):
    """IR instances (pool formulas, reserved agent) over all enumerated
    single-agent models; returns the instance count checked."""
    cache: dict = {}
    checked = 0
    for m in enumerate_models(bounds[0], bounds[1], bounds[2], 1, mode="single"):
        key = m.constants
        if key not in cache:
            pool = all_formulas(m.constants, m.agents, POOL_DEPTH)
            inst = [
                implication(Kv(m.agents[0], c), implication(Inspect(c, phi), phi))
                for c in m.constants
                for phi in pool
            ]
            cache[key] = (inst, kernel.encode_formulas(inst, m.constants, m.agents))
        inst, code = cache[key]
        data = kernel.eval_data(m)
        full = (1 << data.n) - 1
        for f, mask in zip(inst, kernel.eval_codes(data, code)):
            assert mask == full, f"IR fails on single-agent model: {f} on {m}"
        checked += len(inst) * data.n
    return checked


def pointed_pool(bounds, n_agents, mode="multi"):
    """All pointed models from the strata with exactly n_agents agents."""
    pool = []
    for m in enumerate_models(bounds[0], bounds[1], bounds[2], n_agents, mode=mode):
        if len(m.agents) != n_agents:
            continue
        pool.extend(pointed_models(m))
    return pool


def bisim_logeq_mismatches(pool, limit=8):
    """Kernel sweep over all unordered pairs: greatest-fixpoint bisimilarity
    must match logical equivalence (equal atom-truth vectors).  The atom
    vectors come from the reference evaluator, so the two routes stay
    independent."""
    if not pool:
        return [], 0
    union = sorted({c for pm in pool for c in pm.model.constants})
    agents = sorted(pool[0].model.agents)
    datas = [kernel.bisim_data(pm, union, agents) for pm in pool]
    vecs = [atom_truth_vector(pm, union, agents) for pm in pool]
    mismatches = kernel.bisim_sweep(
        datas, vecs, len(agents), (1 << len(union)) - 1, limit=limit
    )
    n_pairs = len(pool) * (len(pool) + 1) // 2
    return mismatches, n_pairs


def rename_consts(f: Formula, mapping: dict) -> Formula:
    if isinstance(f, Kv):
        return Kv(f.agent, mapping[f.const])
    if isinstance(f, Not):
        return Not(rename_consts(f.sub, mapping))
    if isinstance(f, And):
        return And(rename_consts(f.left, mapping), rename_consts(f.right, mapping))
    if isinstance(f, Inspect):
        return Inspect(mapping[f.const], rename_consts(f.sub, mapping))
    return f


def binary_oracle_tables(n_consts=3):
    """Brute-force semantic tables over every pointed model whose state set
    is a subset of the binary valuations on n_consts constants.

    Returns (n_points, colbits) where colbits[cmask][d] is a big-integer
    column with bit p set iff Kv(C, {d}) holds at pointed model p.  These
    are computed straight from the truth condition (for all surviving
    states, d agrees), independent of any closure computation.
    """
    n_vals = 1 << n_consts
    vals = list(itertools.product((0, 1), repeat=n_consts))
    points = []
    for r in range(1, n_vals + 1):
        for subset in itertools.combinations(range(n_vals), r):
            for actual in subset:
                points.append((subset, actual))
    colbits = [[0] * n_consts for _ in range(n_vals)]
    for p, (subset, actual) in enumerate(points):
        for cmask in range(n_vals):
            cset = [c for c in range(n_consts) if cmask >> c & 1]
            survivors = [
                t for t in subset if all(vals[t][c] == vals[actual][c] for c in cset)
            ]
            for d in range(n_consts):
                if all(vals[t][d] == vals[actual][d] for t in survivors):
                    colbits[cmask][d] |= 1 << p
    return len(points), colbits


def oracle_fd_mask(colbits, n_points, lhs_mask, rhs_mask, n_consts=3):
    """Bit p set iff the dependency lhs -> rhs holds at pointed model p."""
    mask = (1 << n_points) - 1
    for d in range(n_consts):
        if rhs_mask >> d & 1:
            mask &= colbits[lhs_mask][d]
    return mask
