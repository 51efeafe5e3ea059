"""Pure-Python generation kernels.

Fallback used when the compiled extension is unavailable.  Each kernel must
consume raw 64-bit draws in exactly the same order as its compiled twin in
``_ckernels.pyx``; any change here must be mirrored there, and
``tests/test_backends.py`` checks the two stay draw-for-draw identical.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from bigen.rng import Uint64Stream

BACKEND_NAME = "python"


def _pick_weighted(stream: Uint64Stream, cum_weights: Sequence[float]) -> int:
    # First index whose cumulative weight exceeds the draw; the last entry
    # is forced to 1.0 by the caller so the scan always terminates.
    u = stream.unit()
    k = 0
    while u >= cum_weights[k]:
        k += 1
    return k


def pgg_kernel(
    seed: int,
    roots: int,
    places: int,
    n_controls: int,
    cum_weights: Sequence[float] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Grow a random forest by preferential attachment.

    Returns (parents, controls) for the `places - roots` created nodes, in
    creation order.  Parents are creation-order place indices: 0..roots-1
    are the roots, roots+j is the j-th node.

    Every place enters a reference list once on creation; a chosen parent is
    appended again (from the second place-creation step onward), so a uniform
    index into the list realizes degree-proportional selection with +1
    smoothing.
    """
    stream = Uint64Stream.from_seed(seed)
    m = places - roots
    refs = list(range(roots))
    parents = np.empty(m, dtype=np.int64)
    controls = np.empty(m, dtype=np.int64)
    for i in range(roots, places):
        r = stream.bounded(len(refs))
        if cum_weights is None:
            k = stream.bounded(n_controls)
        else:
            k = _pick_weighted(stream, cum_weights)
        j = i - roots
        parent = refs[r]
        parents[j] = parent
        controls[j] = k
        refs.append(i)
        if i > 1:
            refs.append(parent)
    return parents, controls


def mppl_kernel(
    seed: int,
    m: int,
    n_links: int,
    outer_threshold: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw `n_links` disjoint node pairs plus a link kind for each.

    Returns (first, second, kinds) with node indices in 0..m-1 and kind 0
    for an outer name, 1 for an edge.  Linked nodes leave the pool, so no
    node appears twice across the returned pairs.
    """
    stream = Uint64Stream.from_seed(seed)
    pool = list(range(m))
    size = m
    first = np.empty(n_links, dtype=np.int64)
    second = np.empty(n_links, dtype=np.int64)
    kinds = np.empty(n_links, dtype=np.int64)
    for c in range(n_links):
        i = stream.bounded(size)
        j = stream.bounded(size)
        while j == i:
            j = stream.bounded(size)
        first[c] = pool[i]
        second[c] = pool[j]
        kinds[c] = 0 if stream.unit() < outer_threshold else 1
        # Swap-remove the higher position first so the lower stays valid.
        hi, lo = (i, j) if i > j else (j, i)
        size -= 1
        pool[hi] = pool[size]
        size -= 1
        pool[lo] = pool[size]
    return first, second, kinds


def mdc_kernel(
    seed: int,
    arities: np.ndarray,
    assortative: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """Wire ports until fewer than four nodes keep a free port.

    Per round, four distinct nodes are drawn uniformly from the working
    queue (redrawing on collision) and ranked by arity (ties: more free
    ports first, then lower node index).  Assortative wiring pairs the two
    highest-ranked and the two lowest-ranked; disassortative pairs highest
    with lowest, then the middle two.  Each pair gets a fresh two-point
    edge; saturated nodes leave the queue.

    Returns the edge endpoint indices (us, vs) in creation order.
    """
    stream = Uint64Stream.from_seed(seed)
    n = len(arities)
    free = [int(a) for a in arities]
    queue = list(range(n))
    pos = list(range(n))
    qsize = n
    max_edges = sum(free) // 2 + 2
    us = np.empty(max_edges, dtype=np.int64)
    vs = np.empty(max_edges, dtype=np.int64)
    count = 0

    while qsize >= 4:
        s0 = stream.bounded(qsize)
        s1 = stream.bounded(qsize)
        while s1 == s0:
            s1 = stream.bounded(qsize)
        s2 = stream.bounded(qsize)
        while s2 == s0 or s2 == s1:
            s2 = stream.bounded(qsize)
        s3 = stream.bounded(qsize)
        while s3 == s0 or s3 == s1 or s3 == s2:
            s3 = stream.bounded(qsize)
        picked = (queue[s0], queue[s1], queue[s2], queue[s3])
        ranked = sorted(picked, key=lambda w: (-arities[w], -free[w], w))
        if assortative:
            pairs = ((ranked[0], ranked[1]), (ranked[2], ranked[3]))
        else:
            pairs = ((ranked[0], ranked[3]), (ranked[1], ranked[2]))
        for u, v in pairs:
            us[count] = u
            vs[count] = v
            count += 1
            free[u] -= 1
            free[v] -= 1
        for w in picked:
            if free[w] == 0:
                p = pos[w]
                qsize -= 1
                moved = queue[qsize]
                queue[p] = moved
                pos[moved] = p
                pos[w] = -1
    return us[:count].copy(), vs[:count].copy()
