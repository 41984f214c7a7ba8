# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bit-row kernels; same contract as ``_kernels_py``."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset

BACKEND = "cython"

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef void _load_rows(object rows, int n, int w, uint64_t *adj, uint64_t *non):
    cdef int v, i
    cdef object r
    cdef object word_mask = (1 << 64) - 1
    for v in range(n):
        r = rows[v]
        for i in range(w):
            adj[v * w + i] = <uint64_t>((r >> (64 * i)) & word_mask)
    for v in range(n):
        for i in range(w):
            non[v * w + i] = ~adj[v * w + i]
        non[v * w + v // 64] &= ~((<uint64_t>1) << (v % 64))
        if n % 64:
            non[v * w + w - 1] &= ((<uint64_t>1) << (n % 64)) - 1


cdef struct Matcher:
    int n
    int w
    int k
    uint64_t *adj
    uint64_t *non
    unsigned long long *pat
    uint64_t *cands      # k levels x k slots x w words
    int *mapping


cdef bint _extend(Matcher *m, int i) nogil:
    cdef int w = m.w, k = m.k
    cdef uint64_t *cur = m.cands + (i * k) * w
    cdef uint64_t *nxt = m.cands + ((i + 1) * k) * w
    cdef uint64_t *row
    cdef uint64_t *src
    cdef uint64_t *dst
    cdef uint64_t word, low, any_bits
    cdef int wi, v, t, j
    cdef bint dead
    # slot 0 of level i holds the candidates for pattern vertex i
    for wi in range(w):
        word = cur[wi]
        while word:
            low = word & (~word + 1)
            word ^= low
            v = wi * 64 + __builtin_ctzll(low)
            m.mapping[i] = v
            if i == k - 1:
                return True
            dead = False
            for t in range(i + 1, k):
                src = cur + (t - i) * w
                dst = nxt + (t - i - 1) * w
                if (m.pat[i] >> t) & 1:
                    row = m.adj + v * w
                else:
                    row = m.non + v * w
                for j in range(w):
                    dst[j] = src[j] & row[j]
                dst[wi] &= ~low
                any_bits = 0
                for j in range(w):
                    any_bits |= dst[j]
                if not any_bits:
                    dead = True
                    break
            if not dead and _extend(m, i + 1):
                return True
        # bits before this word are exhausted; later words still pending
    return False


def match_pattern(rows, int n, pat_adj):
    cdef int k = len(pat_adj)
    if k == 0:
        return ()
    if k > n:
        return None
    cdef int w = (n + 63) // 64
    cdef Matcher m
    m.n = n
    m.w = w
    m.k = k
    m.adj = <uint64_t *>malloc(n * w * sizeof(uint64_t))
    m.non = <uint64_t *>malloc(n * w * sizeof(uint64_t))
    m.pat = <unsigned long long *>malloc(k * sizeof(unsigned long long))
    m.cands = <uint64_t *>malloc((k + 1) * k * w * sizeof(uint64_t))
    m.mapping = <int *>malloc(k * sizeof(int))
    cdef int i, t
    cdef bint found
    try:
        _load_rows(rows, n, w, m.adj, m.non)
        for i in range(k):
            m.pat[i] = pat_adj[i]
        memset(m.cands, 0, (k + 1) * k * w * sizeof(uint64_t))
        for t in range(k):
            for i in range(w):
                m.cands[t * w + i] = ~(<uint64_t>0)
            if n % 64:
                m.cands[t * w + w - 1] = ((<uint64_t>1) << (n % 64)) - 1
        with nogil:
            found = _extend(&m, 0)
        if found:
            return tuple(m.mapping[i] for i in range(k))
        return None
    finally:
        free(m.adj)
        free(m.non)
        free(m.pat)
        free(m.cands)
        free(m.mapping)


cdef bint _has_extreme_uniform(uint64_t *rows, uint64_t x, uint64_t *live,
                               int k, uint64_t *nbs) nogil:
    cdef int ia, ib, cnt, s, hi, lo, nonempty = 0
    cdef uint64_t a, b, c, low, outside, nb, t
    cdef bint ok
    for ia in range(k):
        if live[ia]:
            nonempty += 1
    if nonempty == 1:
        return True
    for ia in range(k):
        a = live[ia]
        if not a:
            continue
        outside = x & ~a
        hi = -1
        lo = 65
        cnt = 0
        c = a
        while c:
            low = c & (~c + 1)
            c ^= low
            nb = rows[__builtin_ctzll(low)] & outside
            nbs[cnt] = nb
            cnt += 1
            s = __builtin_popcountll(nb)
            if s > hi:
                hi = s
            if s < lo:
                lo = s
        for s in range(cnt):
            nb = nbs[s]
            if __builtin_popcountll(nb) != hi and __builtin_popcountll(nb) != lo:
                continue
            ok = True
            for ib in range(k):
                b = live[ib]
                if ib == ia or not b:
                    continue
                t = nb & b
                if t and t != b:
                    ok = False
                    break
            if ok:
                return True
    return False


def hev_scan(rows, int n, part_masks):
    if n > 62:
        raise ValueError("hev_scan supports at most 62 vertices")
    parts = [p for p in part_masks if p]
    cdef int k = len(parts)
    cdef uint64_t *crow = <uint64_t *>malloc((n + 1) * sizeof(uint64_t))
    cdef uint64_t *cparts = <uint64_t *>malloc((k + 1) * sizeof(uint64_t))
    cdef uint64_t *live = <uint64_t *>malloc((k + 1) * sizeof(uint64_t))
    cdef uint64_t *nbs = <uint64_t *>malloc((n + 1) * sizeof(uint64_t))
    cdef uint64_t x, top
    cdef long long result = -1
    cdef int i
    try:
        for i in range(n):
            crow[i] = <uint64_t>rows[i]
        for i in range(k):
            cparts[i] = <uint64_t>parts[i]
        top = (<uint64_t>1) << n
        with nogil:
            x = 1
            while x < top:
                for i in range(k):
                    live[i] = cparts[i] & x
                if not _has_extreme_uniform(crow, x, live, k, nbs):
                    result = <long long>x
                    break
                x += 1
        return result
    finally:
        free(crow)
        free(cparts)
        free(live)
        free(nbs)
