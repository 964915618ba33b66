# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

Every function here has a line-for-line twin in :mod:`wlpa._pykernels`; the
two must perform the same floating-point operations in the same order so
single-threaded results are bit-identical across backends.
"""

import numpy as np

from cython.parallel cimport prange, threadid

ctypedef Py_ssize_t idx_t

cdef extern from *:
    void __builtin_prefetch(const void* addr) nogil
# 32-bit neighbor and edge ids (Graph.nbr / Graph.eid), half the cache traffic
ctypedef int nid_t


cdef struct NodeState:
    double sigma
    double delta
    idx_t dist


cdef void _accumulate_source(
    idx_t s,
    idx_t depth,
    const idx_t* indptr,
    const nid_t* nbr,
    const unsigned char* active,
    NodeState* st,
    nid_t* queue,
    nid_t* arc_v,
    idx_t* arc_k,
    double* score,
) noexcept nogil:
    # per-node state is interleaved so a visit costs one cache line
    cdef idx_t head = 0, tail = 0, narcs = 0, v, w, k, dv, i
    cdef double coeff, c

    st[s].dist = 0
    st[s].sigma = 1.0
    queue[tail] = s
    tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        dv = st[v].dist
        if dv >= depth:
            continue
        if head + 1 < tail:
            __builtin_prefetch(&indptr[queue[head + 1]])
        for k in range(indptr[v], indptr[v + 1]):
            if k + 4 < indptr[v + 1]:
                __builtin_prefetch(&st[nbr[k + 4]])
            if not active[k]:
                continue
            w = nbr[k]
            if st[w].dist < 0:
                st[w].dist = dv + 1
                queue[tail] = w
                tail += 1
            if st[w].dist == dv + 1:
                st[w].sigma += st[v].sigma
                arc_v[narcs] = v
                arc_k[narcs] = k
                narcs += 1

    # arcs out of w were recorded after the arc into w, so reversed
    # order sees every delta[w] complete
    i = narcs - 1
    while i >= 0:
        v = arc_v[i]
        k = arc_k[i]
        w = nbr[k]
        coeff = (1.0 + st[w].delta) / st[w].sigma
        c = st[v].sigma * coeff
        score[k] += c
        st[v].delta += c
        i -= 1

    for i in range(tail):
        v = queue[i]
        st[v].dist = -1
        st[v].sigma = 0.0
        st[v].delta = 0.0


def slot_betweenness(
    const idx_t[::1] indptr,
    const nid_t[::1] nbr,
    const unsigned char[::1] active,
    idx_t depth,
    int nthreads=1,
):
    """Depth-truncated Brandes accumulation over all sources.

    Credit is kept per adjacency slot (the slot of the endpoint nearer the
    source), which keeps writes within the row just scanned. Returns one
    value per slot over ordered pairs; the caller folds slots into edges.
    """
    cdef idx_t n = indptr.shape[0] - 1
    cdef idx_t slots = nbr.shape[0]
    cdef int t
    cdef idx_t s
    if nthreads < 1:
        nthreads = 1
    partial = np.zeros((nthreads, max(slots, 1)), dtype=np.float64)
    if n == 0 or slots == 0:
        return np.zeros(slots, dtype=np.float64)
    cdef idx_t words = (sizeof(NodeState) + 7) // 8
    state_a = np.zeros((nthreads, n * words), dtype=np.float64)
    queue_a = np.zeros((nthreads, n), dtype=np.intc)
    # a BFS DAG uses each edge at most once
    arcv_a = np.zeros((nthreads, slots // 2 + 1), dtype=np.intc)
    arck_a = np.zeros((nthreads, slots // 2 + 1), dtype=np.intp)
    cdef double[:, ::1] part = partial
    cdef double[:, ::1] state = state_a
    cdef nid_t[:, ::1] queue = queue_a
    cdef nid_t[:, ::1] arcv = arcv_a
    cdef idx_t[:, ::1] arck = arck_a
    cdef NodeState* st
    for t in range(nthreads):
        st = <NodeState*>&state[t, 0]
        for s in range(n):
            st[s].dist = -1

    if nthreads == 1:
        with nogil:
            for s in range(n):
                _accumulate_source(
                    s, depth, &indptr[0], &nbr[0], &active[0],
                    <NodeState*>&state[0, 0], &queue[0, 0],
                    &arcv[0, 0], &arck[0, 0], &part[0, 0],
                )
        return partial[0]

    with nogil:
        for s in prange(n, num_threads=nthreads, schedule="static", chunksize=16):
            t = threadid()
            _accumulate_source(
                s, depth, &indptr[0], &nbr[0], &active[0],
                <NodeState*>&state[t, 0], &queue[t, 0],
                &arcv[t, 0], &arck[t, 0], &part[t, 0],
            )
    total = partial[0].copy()
    for t in range(1, nthreads):
        total += partial[t]
    return total


cdef idx_t _update_node(
    idx_t i,
    double u,
    const idx_t* indptr,
    const nid_t* nbr,
    const double* wts,
    const idx_t* limit,
    idx_t* labels,
    bint weighted,
    double* score,
    idx_t* touched,
    idx_t* tied,
) noexcept nogil:
    """Return the label node ``i`` adopts; ``labels[i]`` if it has no candidates."""
    cdef idx_t start = indptr[i]
    cdef idx_t stop = start + limit[i]
    cdef idx_t k, lab, ntouched = 0, ntied = 0, j, pick
    cdef double best = 0.0, sc
    if stop <= start:
        return labels[i]
    for k in range(start, stop):
        lab = labels[nbr[k]]
        if score[lab] == 0.0:
            touched[ntouched] = lab
            ntouched += 1
        if weighted:
            score[lab] += wts[k]
        else:
            score[lab] += 1.0
    for j in range(ntouched):
        sc = score[touched[j]]
        if sc > best:
            best = sc
            ntied = 0
        if sc == best:
            tied[ntied] = touched[j]
            ntied += 1
    for j in range(ntouched):
        score[touched[j]] = 0.0
    if ntied == 1:
        return tied[0]
    # tie lists are short; insertion sort beats qsort's indirect calls
    for j in range(1, ntied):
        lab = tied[j]
        k = j - 1
        while k >= 0 and tied[k] > lab:
            tied[k + 1] = tied[k]
            k -= 1
        tied[k + 1] = lab
    pick = <idx_t>(u * ntied)
    if pick >= ntied:
        pick = ntied - 1
    return tied[pick]


def propagate(
    const idx_t[::1] indptr,
    const nid_t[::1] nbr,
    const double[::1] wts,
    const idx_t[::1] limit,
    const idx_t[::1] order,
    const double[::1] tie_u,
    idx_t[::1] labels,
    bint weighted,
    int nthreads=1,
):
    """One asynchronous label pass in ``order``; returns the number of changed labels.

    Node ``i`` scores the labels on its first ``limit[i]`` incident slots.
    Ties are broken by ``tie_u[p]`` (``p`` = position in ``order``) against the
    ascending list of tied labels.
    """
    cdef idx_t n = labels.shape[0]
    cdef idx_t p, i, new, changed = 0
    cdef int t
    if n == 0:
        return 0
    if nthreads < 1:
        nthreads = 1
    score_a = np.zeros((nthreads, n), dtype=np.float64)
    touched_a = np.zeros((nthreads, n), dtype=np.intp)
    tied_a = np.zeros((nthreads, n), dtype=np.intp)
    cdef double[:, ::1] score = score_a
    cdef idx_t[:, ::1] touched = touched_a
    cdef idx_t[:, ::1] tied = tied_a
    cdef const double* wp = &wts[0] if wts.shape[0] > 0 else NULL
    cdef const nid_t* nbp = &nbr[0] if nbr.shape[0] > 0 else NULL

    if nthreads == 1:
        with nogil:
            for p in range(n):
                # the visit order is random; fetch upcoming rows early
                if p + 8 < n:
                    __builtin_prefetch(&indptr[order[p + 8]])
                    __builtin_prefetch(&limit[order[p + 8]])
                if p + 4 < n and nbp != NULL:
                    __builtin_prefetch(&nbp[indptr[order[p + 4]]])
                i = order[p]
                new = _update_node(
                    i, tie_u[p], &indptr[0], nbp, wp, &limit[0], &labels[0],
                    weighted, &score[0, 0], &touched[0, 0], &tied[0, 0],
                )
                if new != labels[i]:
                    changed += 1
                    labels[i] = new
        return changed

    with nogil:
        for p in prange(n, num_threads=nthreads, schedule="dynamic", chunksize=256):
            t = threadid()
            i = order[p]
            new = _update_node(
                i, tie_u[p], &indptr[0], nbp, wp, &limit[0], &labels[0],
                weighted, &score[t, 0], &touched[t, 0], &tied[t, 0],
            )
            if new != labels[i]:
                changed += 1
                labels[i] = new
    return changed


def count_unsatisfied(
    const idx_t[::1] indptr,
    const nid_t[::1] nbr,
    const double[::1] wts,
    const idx_t[::1] labels,
    bint weighted,
):
    """Nodes whose label does not attain the maximum score over all neighbors."""
    cdef idx_t n = labels.shape[0]
    cdef idx_t i, k, lab, j, ntouched, bad = 0
    cdef double best, own
    if n == 0:
        return 0
    score_a = np.zeros(n, dtype=np.float64)
    touched_a = np.zeros(n, dtype=np.intp)
    cdef double[::1] score = score_a
    cdef idx_t[::1] touched = touched_a
    with nogil:
        for i in range(n):
            if indptr[i + 1] == indptr[i]:
                continue
            ntouched = 0
            for k in range(indptr[i], indptr[i + 1]):
                lab = labels[nbr[k]]
                if score[lab] == 0.0:
                    touched[ntouched] = lab
                    ntouched += 1
                if weighted:
                    score[lab] += wts[k]
                else:
                    score[lab] += 1.0
            best = 0.0
            for j in range(ntouched):
                if score[touched[j]] > best:
                    best = score[touched[j]]
            own = score[labels[i]]
            if own < best:
                bad += 1
            for j in range(ntouched):
                score[touched[j]] = 0.0
    return bad


cdef void _merge_sort_row(idx_t* idx, idx_t* tmp, idx_t n, const double* key) noexcept nogil:
    """Stable bottom-up merge sort of ``idx[0:n]`` by ``key[idx]``."""
    cdef idx_t width = 1, lo, mid, hi, a, b, o
    cdef idx_t* src = idx
    cdef idx_t* dst = tmp
    cdef idx_t* swap
    while width < n:
        lo = 0
        while lo < n:
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            a, b, o = lo, mid, lo
            while a < mid and b < hi:
                if key[src[b]] < key[src[a]]:
                    dst[o] = src[b]
                    b += 1
                else:
                    dst[o] = src[a]
                    a += 1
                o += 1
            while a < mid:
                dst[o] = src[a]
                a += 1
                o += 1
            while b < hi:
                dst[o] = src[b]
                b += 1
                o += 1
            lo = hi
        swap = src
        src = dst
        dst = swap
        width *= 2
    if src != idx:
        for o in range(n):
            idx[o] = src[o]


def sort_rows(const idx_t[::1] indptr, const double[::1] key):
    """Permutation that stably sorts every CSR row by ``key``."""
    cdef idx_t n = indptr.shape[0] - 1
    cdef idx_t total = key.shape[0]
    perm_a = np.arange(total, dtype=np.intp)
    tmp_a = np.empty(max(total, 1), dtype=np.intp)
    cdef idx_t[::1] perm = perm_a
    cdef idx_t[::1] tmp = tmp_a
    cdef idx_t i, lo, hi, j, k, cur
    cdef double kc
    with nogil:
        for i in range(n):
            lo = indptr[i]
            hi = indptr[i + 1]
            if hi - lo > 32:
                _merge_sort_row(&perm[lo], &tmp[lo], hi - lo, &key[0])
                continue
            for j in range(lo + 1, hi):
                cur = perm[j]
                kc = key[cur]
                k = j - 1
                while k >= lo and key[perm[k]] > kc:
                    perm[k + 1] = perm[k]
                    k -= 1
                perm[k + 1] = cur
    return perm_a
