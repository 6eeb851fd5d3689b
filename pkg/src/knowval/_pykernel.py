"""Pure-Python kernel fallback.

Bit-for-bit the same semantics as the compiled extension, on Python ints.
Functionally complete but roughly two orders of magnitude slower on the
big sweeps; ``benchmarks/bench_kernels.py`` measures the gap.
"""

from __future__ import annotations

OP_TOP, OP_NOT, OP_AND, OP_KV, OP_INSPECT, OP_DEP = range(6)


def eval_codes(n, eq, ag, nodes, aux, roots):
    full = (1 << n) - 1

    def ev(idx, p, smask):
        base = 3 * idx
        op = nodes[base]
        x = nodes[base + 1]
        y = nodes[base + 2]
        if op == OP_KV:
            return (smask & ag[x * n + p] & (full ^ eq[y * n + p])) == 0
        if op == OP_NOT:
            return not ev(x, p, smask)
        if op == OP_AND:
            return ev(x, p, smask) and ev(y, p, smask)
        if op == OP_INSPECT:
            return ev(y, p, smask & eq[x * n + p])
        if op == OP_TOP:
            return True
        # OP_DEP
        t = smask & ag[x * n + p]
        cm = aux[2 * y]
        ci = 0
        while cm:
            if cm & 1:
                t &= eq[ci * n + p]
            cm >>= 1
            ci += 1
        dm = aux[2 * y + 1]
        di = 0
        while dm:
            if dm & 1 and t & (full ^ eq[di * n + p]):
                return False
            dm >>= 1
            di += 1
        return True

    out = []
    for r in roots:
        mask = 0
        for p in range(n):
            if ev(r, p, full):
                mask |= 1 << p
        out.append(mask)
    return out


def _pair_ok(s, sp, Z, na, nb, aga, agreea, agb, agreeb, n_agents, kfull):
    # zig: every difference witness around s must be matched around sp
    for i in range(n_agents):
        tm = aga[i * na + s]
        spm = agb[i * nb + sp]
        for t in range(na):
            if not (tm >> t) & 1:
                continue
            am = agreea[s * na + t]
            dm = kfull & ~am
            if not dm:
                continue
            zrow = Z[t]
            d = 0
            rem = dm
            while rem:
                if rem & 1:
                    found = False
                    for tp in range(nb):
                        if (zrow >> tp) & 1 and (spm >> tp) & 1:
                            amb = agreeb[sp * nb + tp]
                            if (amb & am) == am and not (amb >> d) & 1:
                                found = True
                                break
                    if not found:
                        return False
                rem >>= 1
                d += 1
    # zag: symmetric, with witnesses drawn from the first model
    for i in range(n_agents):
        tpm = agb[i * nb + sp]
        sm = aga[i * na + s]
        for tp in range(nb):
            if not (tpm >> tp) & 1:
                continue
            am = agreeb[sp * nb + tp]
            dm = kfull & ~am
            if not dm:
                continue
            d = 0
            rem = dm
            while rem:
                if rem & 1:
                    found = False
                    for t in range(na):
                        if (Z[t] >> tp) & 1 and (sm >> t) & 1:
                            ama = agreea[s * na + t]
                            if (ama & am) == am and not (ama >> d) & 1:
                                found = True
                                break
                    if not found:
                        return False
                rem >>= 1
                d += 1
    return True


def _fixpoint(na, aga, agreea, nb, agb, agreeb, n_agents, kfull,
              stop_s=-1, stop_sp=-1):
    """Refines the full relation until stable; rows are bitmasks over the
    second model's states.  Optionally stops early once a watched pair is
    deleted (deletion is monotone, so the verdict is already final)."""
    fullb = (1 << nb) - 1
    Z = [fullb] * na
    changed = True
    while changed:
        changed = False
        for s in range(na):
            row = Z[s]
            for sp in range(nb):
                if (row >> sp) & 1 and not _pair_ok(
                    s, sp, Z, na, nb, aga, agreea, agb, agreeb, n_agents, kfull
                ):
                    row &= ~(1 << sp)
                    Z[s] = row
                    changed = True
                    if s == stop_s and sp == stop_sp:
                        return Z
    return Z


def bisim_pair(na, aga, agreea, sa, nb, agb, agreeb, sb, n_agents, kfull):
    Z = _fixpoint(na, aga, agreea, nb, agb, agreeb, n_agents, kfull)
    if not (Z[sa] >> sb) & 1:
        return None
    return [(s, sp) for s in range(na) for sp in range(nb) if (Z[s] >> sp) & 1]


def _linked(na, aga, agreea, sa, nb, agb, agreeb, sb, n_agents, kfull):
    Z = _fixpoint(na, aga, agreea, nb, agb, agreeb, n_agents, kfull, sa, sb)
    return bool((Z[sa] >> sb) & 1)


def bisim_mismatches(ns, actuals, ags, agrees, nmax, n_agents, kfull, atomvec, limit):
    n_models = len(ns)
    out = []
    # unpack per-model slices once; slices are at nmax strides
    ag_rows = []
    agree_rows = []
    for mi in range(n_models):
        n = ns[mi]
        ag = [0] * (n_agents * n)
        for ai in range(n_agents):
            base = mi * n_agents * nmax + ai * nmax
            for p in range(n):
                ag[ai * n + p] = ags[base + p]
        agree = [0] * (n * n)
        for s in range(n):
            base = mi * nmax * nmax + s * nmax
            for t in range(n):
                agree[s * n + t] = agrees[base + t]
        ag_rows.append(ag)
        agree_rows.append(agree)
    for i in range(n_models):
        for j in range(i, n_models):
            linked = _linked(
                ns[i], ag_rows[i], agree_rows[i], actuals[i],
                ns[j], ag_rows[j], agree_rows[j], actuals[j],
                n_agents, kfull,
            )
            if linked != (atomvec[i] == atomvec[j]):
                out.append((i, j))
                if len(out) >= limit:
                    return out
    return out
