# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled generation kernels.

Drop-in replacements for ``bigen._pykernels``: same signatures, same
draw-for-draw consumption of the PCG64 raw stream, so both backends build
bit-identical structures from a seed.  Keep the two files in sync.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.stdint cimport int64_t, uint64_t
from numpy.random cimport bitgen_t

import numpy as np

BACKEND_NAME = "c"

cdef const char* _CAPSULE_NAME = "BitGenerator"

# Matches Uint64Stream.unit(): top 53 bits over 2^53.
cdef double _UNIT_SCALE = 1.0 / 9007199254740992.0


cdef bitgen_t* _bitgen(object bit_generator) except NULL:
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, _CAPSULE_NAME):
        raise ValueError("invalid BitGenerator capsule")
    return <bitgen_t*> PyCapsule_GetPointer(capsule, _CAPSULE_NAME)


cdef inline uint64_t _next64(bitgen_t* rng) noexcept nogil:
    return rng.next_uint64(rng.state)


cdef inline uint64_t _bounded(bitgen_t* rng, uint64_t n) noexcept nogil:
    """Uniform integer in [0, n) by masked rejection; no draw when n <= 1."""
    cdef uint64_t mask, value
    if n <= 1:
        return 0
    mask = n - 1
    mask |= mask >> 1
    mask |= mask >> 2
    mask |= mask >> 4
    mask |= mask >> 8
    mask |= mask >> 16
    mask |= mask >> 32
    while True:
        value = _next64(rng) & mask
        if value < n:
            return value


cdef inline double _unit(bitgen_t* rng) noexcept nogil:
    return <double> (_next64(rng) >> 11) * _UNIT_SCALE


cdef inline Py_ssize_t _pick_weighted(bitgen_t* rng, const double[::1] cum) noexcept nogil:
    cdef double u = _unit(rng)
    cdef Py_ssize_t k = 0
    while u >= cum[k]:
        k += 1
    return k


def pgg_kernel(seed, Py_ssize_t roots, Py_ssize_t places, Py_ssize_t n_controls,
               cum_weights=None):
    """See ``bigen._pykernels.pgg_kernel``."""
    bg = np.random.PCG64(seed)
    cdef bitgen_t* rng = _bitgen(bg)
    cdef Py_ssize_t m = places - roots
    # Each step appends the new place and at most one parent reference.
    refs_arr = np.empty(roots + 2 * m, dtype=np.int64)
    parents_arr = np.empty(m, dtype=np.int64)
    controls_arr = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] refs = refs_arr
    cdef int64_t[::1] parents = parents_arr
    cdef int64_t[::1] controls = controls_arr
    cdef const double[::1] cum = None
    cdef bint weighted = cum_weights is not None
    if weighted:
        cum = np.ascontiguousarray(cum_weights, dtype=np.float64)
    cdef Py_ssize_t i, j, n_refs, k
    cdef int64_t parent

    for i in range(roots):
        refs[i] = i
    n_refs = roots
    for i in range(roots, places):
        parent = refs[<Py_ssize_t> _bounded(rng, <uint64_t> n_refs)]
        if weighted:
            k = _pick_weighted(rng, cum)
        else:
            k = <Py_ssize_t> _bounded(rng, <uint64_t> n_controls)
        j = i - roots
        parents[j] = parent
        controls[j] = <int64_t> k
        refs[n_refs] = i
        n_refs += 1
        if i > 1:
            refs[n_refs] = parent
            n_refs += 1
    return parents_arr, controls_arr


def mppl_kernel(seed, Py_ssize_t m, Py_ssize_t n_links, double outer_threshold):
    """See ``bigen._pykernels.mppl_kernel``."""
    bg = np.random.PCG64(seed)
    cdef bitgen_t* rng = _bitgen(bg)
    pool_arr = np.arange(m, dtype=np.int64)
    first_arr = np.empty(n_links, dtype=np.int64)
    second_arr = np.empty(n_links, dtype=np.int64)
    kinds_arr = np.empty(n_links, dtype=np.int64)
    cdef int64_t[::1] pool = pool_arr
    cdef int64_t[::1] first = first_arr
    cdef int64_t[::1] second = second_arr
    cdef int64_t[::1] kinds = kinds_arr
    cdef Py_ssize_t size = m
    cdef Py_ssize_t c, i, j, hi, lo

    for c in range(n_links):
        i = <Py_ssize_t> _bounded(rng, <uint64_t> size)
        j = <Py_ssize_t> _bounded(rng, <uint64_t> size)
        while j == i:
            j = <Py_ssize_t> _bounded(rng, <uint64_t> size)
        first[c] = pool[i]
        second[c] = pool[j]
        kinds[c] = 0 if _unit(rng) < outer_threshold else 1
        if i > j:
            hi = i
            lo = j
        else:
            hi = j
            lo = i
        size -= 1
        pool[hi] = pool[size]
        size -= 1
        pool[lo] = pool[size]
    return first_arr, second_arr, kinds_arr


def mdc_kernel(seed, arities, bint assortative):
    """See ``bigen._pykernels.mdc_kernel``."""
    bg = np.random.PCG64(seed)
    cdef bitgen_t* rng = _bitgen(bg)
    arity_arr = np.ascontiguousarray(arities, dtype=np.int64)
    cdef const int64_t[::1] arity = arity_arr
    cdef Py_ssize_t n = arity.shape[0]
    free_arr = arity_arr.copy()
    queue_arr = np.arange(n, dtype=np.int64)
    pos_arr = np.arange(n, dtype=np.int64)
    cdef int64_t[::1] free = free_arr
    cdef int64_t[::1] queue = queue_arr
    cdef int64_t[::1] pos = pos_arr
    cdef Py_ssize_t max_edges = <Py_ssize_t> (free_arr.sum() // 2 + 2)
    us_arr = np.empty(max_edges, dtype=np.int64)
    vs_arr = np.empty(max_edges, dtype=np.int64)
    cdef int64_t[::1] us = us_arr
    cdef int64_t[::1] vs = vs_arr
    cdef Py_ssize_t qsize = n
    cdef Py_ssize_t count = 0
    cdef Py_ssize_t s0, s1, s2, s3, a, b, p
    cdef int64_t picked[4]
    cdef int64_t ranked[4]
    cdef int64_t w, moved, u, v
    cdef Py_ssize_t pair_a0, pair_a1, pair_b0, pair_b1, t

    while qsize >= 4:
        s0 = <Py_ssize_t> _bounded(rng, <uint64_t> qsize)
        s1 = <Py_ssize_t> _bounded(rng, <uint64_t> qsize)
        while s1 == s0:
            s1 = <Py_ssize_t> _bounded(rng, <uint64_t> qsize)
        s2 = <Py_ssize_t> _bounded(rng, <uint64_t> qsize)
        while s2 == s0 or s2 == s1:
            s2 = <Py_ssize_t> _bounded(rng, <uint64_t> qsize)
        s3 = <Py_ssize_t> _bounded(rng, <uint64_t> qsize)
        while s3 == s0 or s3 == s1 or s3 == s2:
            s3 = <Py_ssize_t> _bounded(rng, <uint64_t> qsize)
        picked[0] = queue[s0]
        picked[1] = queue[s1]
        picked[2] = queue[s2]
        picked[3] = queue[s3]

        # Insertion sort of four items: arity desc, free desc, index asc.
        for a in range(4):
            ranked[a] = picked[a]
        for a in range(1, 4):
            w = ranked[a]
            b = a
            while b > 0 and _ranks_before(w, ranked[b - 1], arity, free):
                ranked[b] = ranked[b - 1]
                b -= 1
            ranked[b] = w

        if assortative:
            pair_a0 = 0; pair_a1 = 1; pair_b0 = 2; pair_b1 = 3
        else:
            pair_a0 = 0; pair_a1 = 3; pair_b0 = 1; pair_b1 = 2
        u = ranked[pair_a0]; v = ranked[pair_a1]
        us[count] = u; vs[count] = v
        count += 1
        free[u] -= 1; free[v] -= 1
        u = ranked[pair_b0]; v = ranked[pair_b1]
        us[count] = u; vs[count] = v
        count += 1
        free[u] -= 1; free[v] -= 1

        for t in range(4):
            w = picked[t]
            if free[w] == 0:
                p = <Py_ssize_t> pos[w]
                qsize -= 1
                moved = queue[qsize]
                queue[p] = moved
                pos[moved] = p
                pos[w] = -1
    return us_arr[:count].copy(), vs_arr[:count].copy()


cdef inline bint _ranks_before(int64_t a, int64_t b,
                               const int64_t[::1] arity,
                               const int64_t[::1] free) noexcept nogil:
    if arity[a] != arity[b]:
        return arity[a] > arity[b]
    if free[a] != free[b]:
        return free[a] > free[b]
    return a < b
