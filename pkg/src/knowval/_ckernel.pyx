# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: formula evaluation sweeps and bisimulation fixpoints.

Same integer-bitmask semantics as knowval._pykernel (state sets, agent
classes and signature agreement all live in machine words); see that
module for the readable reference.
"""

OP_TOP, OP_NOT, OP_AND, OP_KV, OP_INSPECT, OP_DEP = range(6)

ctypedef unsigned long long u64


cdef bint _ev(const int *nodes, const long long *aux,
              const u64 *eq, const u64 *ag,
              int n, u64 full, int p, int idx, u64 smask) nogil:
    cdef int op = nodes[3 * idx]
    cdef int x = nodes[3 * idx + 1]
    cdef int y = nodes[3 * idx + 2]
    cdef u64 t, cm, dm
    cdef int ci, di
    if op == 3:  # KV
        return (smask & ag[x * n + p] & (full ^ eq[y * n + p])) == 0
    if op == 1:  # NOT
        return not _ev(nodes, aux, eq, ag, n, full, p, x, smask)
    if op == 2:  # AND
        return (_ev(nodes, aux, eq, ag, n, full, p, x, smask)
                and _ev(nodes, aux, eq, ag, n, full, p, y, smask))
    if op == 4:  # INSPECT
        return _ev(nodes, aux, eq, ag, n, full, p, y, smask & eq[x * n + p])
    if op == 0:  # TOP
        return True
    # DEP
    t = smask & ag[x * n + p]
    cm = <u64> aux[2 * y]
    ci = 0
    while cm:
        if cm & 1:
            t &= eq[ci * n + p]
        cm >>= 1
        ci += 1
    dm = <u64> aux[2 * y + 1]
    di = 0
    while dm:
        if (dm & 1) and (t & (full ^ eq[di * n + p])):
            return False
        dm >>= 1
        di += 1
    return True


def eval_codes(int n, eq, ag, nodes, aux, roots):
    cdef const u64[::1] veq = eq
    cdef const u64[::1] vag = ag
    cdef const int[::1] vnodes = nodes
    cdef const int[::1] vroots = roots
    cdef const long long[::1] vaux
    cdef long long dummy = 0
    cdef const long long *paux
    if len(aux):
        vaux = aux
        paux = &vaux[0]
    else:
        paux = &dummy
    cdef u64 full = ((<u64> 1) << n) - 1
    cdef u64 mask
    cdef int p
    cdef Py_ssize_t r
    out = []
    for r in range(vroots.shape[0]):
        mask = 0
        for p in range(n):
            if _ev(&vnodes[0], paux, &veq[0], &vag[0], n, full, p, vroots[r], full):
                mask |= (<u64> 1) << p
        out.append(mask)
    return out


cdef bint _pair_ok(int s, int sp, const u64 *Z,
                   int na, int nb, int stride_a, int stride_b,
                   const u64 *aga, const u64 *agreea,
                   const u64 *agb, const u64 *agreeb,
                   int n_agents, u64 kfull) nogil:
    cdef int i, t, tp, d
    cdef u64 tm, spm, sm, tpm, am, dm, rem, other, zrow
    cdef bint found
    # zig
    for i in range(n_agents):
        tm = aga[i * stride_a + s]
        spm = agb[i * stride_b + sp]
        for t in range(na):
            if not (tm >> t) & 1:
                continue
            am = agreea[s * stride_a + t]
            dm = kfull & ~am
            if dm == 0:
                continue
            zrow = Z[t]
            d = 0
            rem = dm
            while rem:
                if rem & 1:
                    found = False
                    for tp in range(nb):
                        if ((zrow >> tp) & 1) and ((spm >> tp) & 1):
                            other = agreeb[sp * stride_b + tp]
                            if (other & am) == am and not (other >> d) & 1:
                                found = True
                                break
                    if not found:
                        return False
                rem >>= 1
                d += 1
    # zag
    for i in range(n_agents):
        tpm = agb[i * stride_b + sp]
        sm = aga[i * stride_a + s]
        for tp in range(nb):
            if not (tpm >> tp) & 1:
                continue
            am = agreeb[sp * stride_b + tp]
            dm = kfull & ~am
            if dm == 0:
                continue
            d = 0
            rem = dm
            while rem:
                if rem & 1:
                    found = False
                    for t in range(na):
                        if ((Z[t] >> tp) & 1) and ((sm >> t) & 1):
                            other = agreea[s * stride_a + t]
                            if (other & am) == am and not (other >> d) & 1:
                                found = True
                                break
                    if not found:
                        return False
                rem >>= 1
                d += 1
    return True


cdef int _fixpoint(u64 *Z, int na, int nb, int stride_a, int stride_b,
                   const u64 *aga, const u64 *agreea,
                   const u64 *agb, const u64 *agreeb,
                   int n_agents, u64 kfull, int stop_s, int stop_sp) nogil:
    """Refine to the greatest fixpoint; returns early (-1) once the watched
    pair is deleted, else 0."""
    cdef u64 fullb = ((<u64> 1) << nb) - 1
    cdef bint changed = True
    cdef int s, sp
    for s in range(na):
        Z[s] = fullb
    while changed:
        changed = False
        for s in range(na):
            for sp in range(nb):
                if (Z[s] >> sp) & 1 and not _pair_ok(
                    s, sp, Z, na, nb, stride_a, stride_b,
                    aga, agreea, agb, agreeb, n_agents, kfull
                ):
                    Z[s] &= ~((<u64> 1) << sp)
                    changed = True
                    if s == stop_s and sp == stop_sp:
                        return -1
    return 0


def bisim_pair(int na, aga, agreea, int sa, int nb, agb, agreeb, int sb,
               int n_agents, u64 kfull):
    cdef const u64[::1] va = aga
    cdef const u64[::1] vagr = agreea
    cdef const u64[::1] vb = agb
    cdef const u64[::1] vbgr = agreeb
    cdef u64 Z[64]
    _fixpoint(Z, na, nb, na, nb, &va[0], &vagr[0], &vb[0], &vbgr[0],
              n_agents, kfull, -1, -1)
    if not (Z[sa] >> sb) & 1:
        return None
    out = []
    cdef int s, sp
    for s in range(na):
        for sp in range(nb):
            if (Z[s] >> sp) & 1:
                out.append((s, sp))
    return out


def bisim_mismatches(ns, actuals, ags, agrees, int nmax, int n_agents,
                     u64 kfull, atomvec, int limit):
    cdef const int[::1] vns = ns
    cdef const int[::1] vact = actuals
    cdef const u64[::1] vags = ags
    cdef const u64[::1] vagr = agrees
    cdef const long long[::1] vvec = atomvec
    cdef Py_ssize_t n_models = vns.shape[0]
    cdef Py_ssize_t i, j
    cdef int rc
    cdef bint linked, expected
    cdef u64 Z[64]
    cdef Py_ssize_t astride = n_agents * nmax
    cdef Py_ssize_t gstride = nmax * nmax
    out = []
    for i in range(n_models):
        for j in range(i, n_models):
            rc = _fixpoint(
                Z, vns[i], vns[j], nmax, nmax,
                &vags[i * astride], &vagr[i * gstride],
                &vags[j * astride], &vagr[j * gstride],
                n_agents, kfull, vact[i], vact[j],
            )
            linked = rc == 0 and (Z[vact[i]] >> vact[j]) & 1
            expected = vvec[i] == vvec[j]
            if linked != expected:
                out.append((i, j))
                if len(out) >= limit:
                    return out
    return out
