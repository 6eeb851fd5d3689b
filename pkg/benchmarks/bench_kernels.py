"""Benchmark: compiled kernel vs pure-Python fallback.

Times the two hot kernels behind the test sweeps (bulk formula evaluation
and pairwise bisimulation fixpoints) on identical workloads, verifies both
backends produce identical results, and prints the speedup.

    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import sys
import time

from knowval import _pykernel, kernel
from knowval.bisim import atom_truth_vector
from knowval.semantics import enumerate_models, pointed_models
from knowval.syntax import Inspect, Kv, all_formulas, diamond, implication

try:
    from knowval import _ckernel
except ImportError:
    _ckernel = None


def eval_workload(quick):
    """Per-model validity instances, as in the axiom sweep."""
    n_models = 60 if quick else 300
    models = [m for m in enumerate_models(3, 2, 2, 2)
              if len(m.constants) == 2 and len(m.agents) == 2][:n_models]
    consts, agents = models[0].constants, models[0].agents
    pool = all_formulas(consts, agents, 2)
    formulas = []
    for c in consts:
        for phi in pool:
            formulas.append(diamond(c, phi))
            formulas.append(Inspect(c, phi))
    for i in agents:
        for c in consts:
            formulas.append(Inspect(c, Kv(i, c)))
            for d in consts:
                formulas.append(implication(Kv(i, c), Inspect(d, Kv(i, c))))
    code = kernel.encode_formulas(formulas, consts, agents)
    datas = [kernel.eval_data(m) for m in models]
    return datas, code, len(formulas)


def run_eval(impl, datas, code):
    out = []
    for d in datas:
        out.append(impl.eval_codes(d.n, d.eq, d.ag, code.nodes, code.aux, code.roots))
    return out


def bisim_workload(quick):
    n_pointed = 250 if quick else 800
    pool = []
    for m in enumerate_models(3, 2, 2, 2):
        if len(m.agents) != 2:
            continue
        pool.extend(pointed_models(m))
        if len(pool) >= n_pointed:
            break
    pool = pool[:n_pointed]
    union = sorted({c for pm in pool for c in pm.model.constants})
    agents = sorted(pool[0].model.agents)
    datas = [kernel.bisim_data(pm, union, agents) for pm in pool]
    vecs = [atom_truth_vector(pm, union, agents) for pm in pool]
    return datas, vecs, len(agents), (1 << len(union)) - 1


def run_bisim(impl, datas, vecs, n_agents, kfull):
    verdicts = []
    for i in range(len(datas)):
        a = datas[i]
        for j in range(i, len(datas)):
            b = datas[j]
            linked = impl.bisim_pair(
                a.n, a.ag, a.agree, a.actual, b.n, b.ag, b.agree, b.actual,
                n_agents, kfull,
            )
            verdicts.append(linked is not None)
    return verdicts


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args(argv)

    rows = []

    datas, code, n_formulas = eval_workload(args.quick)
    n_evals = sum(d.n for d in datas) * n_formulas
    pure_out, pure_t = timed(run_eval, _pykernel, datas, code)
    if _ckernel is not None:
        comp_out, comp_t = timed(run_eval, _ckernel, datas, code)
        assert comp_out == pure_out, "backend results differ on evaluation"
    else:
        comp_t = None
    rows.append(("formula evaluation", n_evals, pure_t, comp_t))

    datas, vecs, n_agents, kfull = bisim_workload(args.quick)
    n_pairs = len(datas) * (len(datas) + 1) // 2
    pure_out, pure_t = timed(run_bisim, _pykernel, datas, vecs, n_agents, kfull)
    if _ckernel is not None:
        comp_out, comp_t = timed(run_bisim, _ckernel, datas, vecs, n_agents, kfull)
        assert comp_out == pure_out, "backend results differ on bisimulation"
    else:
        comp_t = None
    rows.append(("bisimulation fixpoints", n_pairs, pure_t, comp_t))

    print(f"{'workload':<24}{'items':>12}{'pure':>12}{'compiled':>12}{'speedup':>10}")
    for name, items, pure_t, comp_t in rows:
        if comp_t is None:
            print(f"{name:<24}{items:>12}{pure_t:>11.3f}s{'n/a':>12}{'n/a':>10}")
        else:
            print(f"{name:<24}{items:>12}{pure_t:>11.3f}s{comp_t:>11.3f}s"
                  f"{pure_t / comp_t:>9.1f}x")
    if _ckernel is None:
        print("compiled kernel not built; only the pure fallback was timed",
              file=sys.stderr)
    else:
        print("results identical across backends")
    return 0


if __name__ == "__main__":
    sys.exit(main())
