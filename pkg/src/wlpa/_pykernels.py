"""Pure-Python kernels, used when the compiled extension is unavailable.

Mirrors :mod:`wlpa._kernels` operation for operation. ``nthreads`` is accepted
for signature compatibility and ignored: the GIL serializes these loops anyway.
"""

import numpy as np


def slot_betweenness(indptr, nbr, active, depth, nthreads=1):
    n = len(indptr) - 1
    slots = len(nbr)
    if n == 0 or slots == 0:
        return np.zeros(slots, dtype=np.float64)
    indptr = indptr.tolist()
    nbr = nbr.tolist()
    active = active.tolist()
    score = [0.0] * slots
    dist = [-1] * n
    sigma = [0.0] * n
    delta = [0.0] * n

    for s in range(n):
        dist[s] = 0
        sigma[s] = 1.0
        queue = [s]
        arcs = []  # (v, slot) for every shortest-path arc v -> nbr[slot]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            dv = dist[v]
            if dv >= depth:
                continue
            for k in range(indptr[v], indptr[v + 1]):
                if not active[k]:
                    continue
                w = nbr[k]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
                    arcs.append((v, k))

        # arcs out of w were recorded after the arc into w, so reversed
        # order sees every delta[w] complete
        for v, k in reversed(arcs):
            w = nbr[k]
            coeff = (1.0 + delta[w]) / sigma[w]
            c = sigma[v] * coeff
            score[k] += c
            delta[v] += c

        for v in queue:
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0

    return np.asarray(score, dtype=np.float64)


def _update_node(i, u, indptr, nbr, wts, limit, labels, weighted):
    start = indptr[i]
    stop = start + limit[i]
    if stop <= start:
        return labels[i]
    score = {}
    for k in range(start, stop):
        lab = labels[nbr[k]]
        score[lab] = score.get(lab, 0.0) + (wts[k] if weighted else 1.0)
    best = 0.0
    tied = []
    for lab, sc in score.items():
        if sc > best:
            best = sc
            tied = []
        if sc == best:
            tied.append(lab)
    if len(tied) == 1:
        return tied[0]
    tied.sort()
    pick = min(int(u * len(tied)), len(tied) - 1)
    return tied[pick]


def propagate(indptr, nbr, wts, limit, order, tie_u, labels, weighted, nthreads=1):
    n = len(labels)
    if n == 0:
        return 0
    indptr_l = indptr.tolist()
    nbr_l = nbr.tolist()
    wts_l = wts.tolist()
    limit_l = limit.tolist()
    tie_l = tie_u.tolist()
    lab = labels.tolist()
    changed = 0
    for p, i in enumerate(order.tolist()):
        new = _update_node(i, tie_l[p], indptr_l, nbr_l, wts_l, limit_l, lab, weighted)
        if new != lab[i]:
            changed += 1
            lab[i] = new
    labels[:] = lab
    return changed


def count_unsatisfied(indptr, nbr, wts, labels, weighted):
    indptr = indptr.tolist()
    nbr = nbr.tolist()
    wts = wts.tolist()
    labels = labels.tolist()
    bad = 0
    for i in range(len(labels)):
        if indptr[i + 1] == indptr[i]:
            continue
        score = {}
        for k in range(indptr[i], indptr[i + 1]):
            lab = labels[nbr[k]]
            score[lab] = score.get(lab, 0.0) + (wts[k] if weighted else 1.0)
        if score.get(labels[i], 0.0) < max(score.values()):
            bad += 1
    return bad


def sort_rows(indptr, key):
    """Permutation that stably sorts every CSR row by ``key``."""
    key = key.tolist()
    bounds = indptr.tolist()
    perm = []
    for i in range(len(bounds) - 1):
        perm.extend(sorted(range(bounds[i], bounds[i + 1]), key=key.__getitem__))
    return np.asarray(perm, dtype=np.intp)
