# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled search kernels.

Semantics are defined by the pure-Python reference module
``pbflab.kernels.pyref``; the two are kept in lockstep and compared by the
backend-parity tests.
"""

from libc.stdlib cimport free, malloc, qsort

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

UNDEF = 2

cdef unsigned char C_UNDEF = 2
cdef int BIG = 1 << 30
cdef int MAX_N = 20


cdef inline int popcount(unsigned long long x) nogil:
    return __builtin_popcountll(x)


# ---------------------------------------------------------------------------
# cached (weight, value)-ordered nonzero masks per arity

cdef int* _blocks_cache[21]
cdef bint _blocks_ready[21]


cdef int* _get_blocks(int n) except NULL:
    cdef int m, w, b, idx
    if _blocks_ready[n]:
        return _blocks_cache[n]
    m = (1 << n) - 1
    cdef int* arr = <int*> malloc(m * sizeof(int))
    if arr == NULL:
        raise MemoryError()
    idx = 0
    for w in range(1, n + 1):
        for b in range(1, 1 << n):
            if popcount(b) == w:
                arr[idx] = b
                idx += 1
    _blocks_cache[n] = arr
    _blocks_ready[n] = True
    return arr


cdef inline void _check_n(int n) except *:
    if n < 1 or n > MAX_N:
        raise ValueError(f"kernel arity must be in [1, {MAX_N}]")


# ---------------------------------------------------------------------------
# block sensitivity

cdef void _pack_rec(int* cands, int ncands, int cnt, int* best, int* scratch,
                    int cap):
    cdef int j, k, b, nnext
    if cnt > best[0]:
        best[0] = cnt
    if best[0] >= cap or cnt + ncands <= best[0]:
        return
    for j in range(ncands):
        if cnt + ncands - j <= best[0]:
            return
        b = cands[j]
        nnext = 0
        for k in range(j + 1, ncands):
            if not (cands[k] & b):
                scratch[nnext] = cands[k]
                nnext += 1
        _pack_rec(scratch, nnext, cnt + 1, best, scratch + ncands, cap)
        if best[0] >= cap:
            return


cdef int _bs_at_capped(const unsigned char* tab, int n, int x, bint promise,
                       int cap) except -1:
    cdef unsigned char v = tab[x]
    cdef int want, m, j, k, b, nmin, best
    cdef unsigned char t
    cdef bint ok
    if v == C_UNDEF:
        raise ValueError("block sensitivity is defined only on the domain")
    want = 1 - v
    cdef int* blocks = _get_blocks(n)
    m = (1 << n) - 1
    cdef int* minimal = <int*> malloc(m * sizeof(int))
    if minimal == NULL:
        raise MemoryError()
    nmin = 0
    for j in range(m):
        b = blocks[j]
        t = tab[x ^ b]
        if t != want and not (promise and t == C_UNDEF):
            continue
        ok = True
        for k in range(nmin):
            if (minimal[k] & b) == minimal[k]:
                ok = False
                break
        if ok:
            minimal[nmin] = b
            nmin += 1
    cdef int* scratch = <int*> malloc((n + 2) * m * sizeof(int))
    if scratch == NULL:
        free(minimal)
        raise MemoryError()
    best = 0
    _pack_rec(minimal, nmin, 0, &best, scratch, cap)
    free(scratch)
    free(minimal)
    return best


cdef inline int _bs_at(const unsigned char* tab, int n, int x, bint promise) except -1:
    return _bs_at_capped(tab, n, x, promise, BIG)


def bs_at(const unsigned char[::1] table, int n, int x, bint promise):
    _check_n(n)
    return _bs_at(&table[0], n, x, promise)


# ---------------------------------------------------------------------------
# certificate size (minimum hitting set over violating difference masks)

cdef void _hit_rec(int* unc, int nunc, int size, int* best, int* scratch):
    cdef int used = 0, c = 0, k, d, bit, nn
    if nunc == 0:
        if size < best[0]:
            best[0] = size
        return
    for k in range(nunc):
        if not (unc[k] & used):
            c += 1
            used |= unc[k]
    if size + c >= best[0]:
        return
    d = unc[0]
    while d:
        bit = d & (-d)
        nn = 0
        for k in range(nunc):
            if not (unc[k] & bit):
                scratch[nn] = unc[k]
                nn += 1
        _hit_rec(scratch, nn, size + 1, best, scratch + nunc)
        d &= d - 1


cdef int _cert_at(const unsigned char* tab, int n, int x, bint strict) except -1:
    cdef unsigned char v = tab[x]
    cdef int want, m, j, k, b, nmins, best, greedy, i, bit, bestc, nunc, d, nn
    cdef unsigned char t
    cdef bint ok, is_bad
    if v == C_UNDEF:
        raise ValueError("certificates are defined only on the domain")
    want = 1 - v
    cdef int* blocks = _get_blocks(n)
    m = (1 << n) - 1
    cdef int* mins = <int*> malloc(m * sizeof(int))
    if mins == NULL:
        raise MemoryError()
    nmins = 0
    # blocks come (weight, value)-sorted, so inclusion-minimal filtering works
    for j in range(m):
        b = blocks[j]
        t = tab[x ^ b]
        is_bad = t == want or (strict and t == C_UNDEF)
        if not is_bad:
            continue
        ok = True
        for k in range(nmins):
            if (mins[k] & b) == mins[k]:
                ok = False
                break
        if ok:
            mins[nmins] = b
            nmins += 1
    if nmins == 0:
        free(mins)
        return 0
    # greedy cover for the initial incumbent
    cdef int* unc = <int*> malloc(nmins * sizeof(int))
    cdef int* counts = <int*> malloc(n * sizeof(int))
    if unc == NULL or counts == NULL:
        free(mins)
        if unc != NULL:
            free(unc)
        if counts != NULL:
            free(counts)
        raise MemoryError()
    nunc = nmins
    for k in range(nmins):
        unc[k] = mins[k]
    greedy = 0
    while nunc > 0:
        for i in range(n):
            counts[i] = 0
        for k in range(nunc):
            d = unc[k]
            while d:
                i = popcount((d & (-d)) - 1)
                counts[i] += 1
                d &= d - 1
        bestc = 0
        for i in range(1, n):
            if counts[i] > counts[bestc]:
                bestc = i
        bit = 1 << bestc
        nn = 0
        for k in range(nunc):
            if not (unc[k] & bit):
                unc[nn] = unc[k]
                nn += 1
        nunc = nn
        greedy += 1
    free(counts)
    free(unc)
    best = greedy
    cdef int* scratch = <int*> malloc((n + 2) * nmins * sizeof(int))
    if scratch == NULL:
        free(mins)
        raise MemoryError()
    _hit_rec(mins, nmins, 0, &best, scratch)
    free(scratch)
    free(mins)
    return best


def cert_at(const unsigned char[::1] table, int n, int x, bint strict):
    _check_n(n)
    return _cert_at(&table[0], n, x, strict)


# ---------------------------------------------------------------------------
# decision-tree depth

cdef int _dd_census(const unsigned char* tab, int n, int fixed, int vals):
    """Bit 0: label 0 present; bit 1: label 1 present (domain points only)."""
    cdef int full = (1 << n) - 1
    cdef int free_mask = full ^ fixed
    cdef int out = 0, sub = free_mask
    cdef unsigned char t
    while True:
        t = tab[vals | sub]
        if t == 0:
            out |= 1
        elif t == 1:
            out |= 2
        if out == 3 or sub == 0:
            break
        sub = (sub - 1) & free_mask
    return out


cdef int _dd_search(const unsigned char* tab, int n, int fixed, int vals,
                    int beta, dict memo) except -1:
    cdef long long key = ((<long long> fixed) << n) | vals
    cdef int lo = 0, best, i, b, d0, d1, m, census
    cdef bint exact = False
    cdef object entry = memo.get(key)
    if entry is not None:
        lo = <int> (<long long> entry >> 1)
        exact = (<long long> entry) & 1
    if exact:
        return lo if lo < beta else beta
    if lo >= beta:
        return beta
    census = _dd_census(tab, n, fixed, vals)
    if census != 3:
        memo[key] = 1  # lo=0, exact
        return 0
    if beta <= 1:
        if lo < 1:
            memo[key] = 2  # lo=1, not exact
        return beta
    best = beta
    for i in range(n):
        b = 1 << i
        if fixed & b:
            continue
        d0 = _dd_search(tab, n, fixed | b, vals, best - 1, memo)
        if d0 >= best - 1:
            continue
        d1 = _dd_search(tab, n, fixed | b, vals | b, best - 1, memo)
        m = d0 if d0 > d1 else d1
        if m + 1 < best:
            best = m + 1
            if best == 1:
                break
    if best < beta:
        memo[key] = (<long long> best << 1) | 1
    else:
        if beta > lo:
            lo = beta
        memo[key] = <long long> lo << 1
    return best


def decision_depth(const unsigned char[::1] table, int n, int ub):
    _check_n(n)
    cdef const unsigned char* tab = &table[0]
    cdef dict memo = {}
    cdef int d
    if _dd_census(tab, n, 0, 0) != 3:
        return 0
    for d in range(1, ub + 1):
        if _dd_search(tab, n, 0, 0, d + 1, memo) <= d:
            return d
    return ub + 1


# ---------------------------------------------------------------------------
# critical block sensitivity / critical certificate

cdef void _assign(unsigned char* work, int* und, int nund, int bits):
    cdef int j
    for j in range(nund):
        work[und[j]] = <unsigned char> ((bits >> j) & 1)


def cbs_exact(const unsigned char[::1] table, int n):
    """Exhaustive completion enumeration with capped leaf evaluation and a
    move-to-front point order; stops at the bs(f) lower bound."""
    _check_n(n)
    cdef int size = 1 << n
    cdef unsigned char* work = <unsigned char*> malloc(size)
    cdef unsigned char* best_tab = <unsigned char*> malloc(size)
    cdef int* dom = <int*> malloc(size * sizeof(int))
    cdef int* und = <int*> malloc(size * sizeof(int))
    if work == NULL or best_tab == NULL or dom == NULL or und == NULL:
        raise MemoryError()
    cdef int ndom = 0, nund = 0, x, j, b, lb = 0, best = BIG, leaf, idx
    cdef bint dead, found = False
    cdef long long bits, total
    try:
        for x in range(size):
            work[x] = table[x]
            if table[x] == C_UNDEF:
                und[nund] = x
                nund += 1
            else:
                dom[ndom] = x
                ndom += 1
        for j in range(ndom):
            b = _bs_at(work, n, dom[j], False)
            if b > lb:
                lb = b
        total = (<long long> 1) << nund
        bits = 0
        while bits < total:
            _assign(work, und, nund, <int> bits)
            leaf = 0
            dead = False
            for idx in range(ndom):
                b = _bs_at_capped(work, n, dom[idx], False, best)
                if b >= best:
                    x = dom[idx]
                    for j in range(idx, 0, -1):
                        dom[j] = dom[j - 1]
                    dom[0] = x
                    dead = True
                    break
                if b > leaf:
                    leaf = b
            if not dead:
                best = leaf
                found = True
                for x in range(size):
                    best_tab[x] = work[x]
                if best <= lb:
                    break
            bits += 1
        if not found:
            raise RuntimeError("completion enumeration found no leaf")
        return best, bytes(best_tab[:size])
    finally:
        free(work)
        free(best_tab)
        free(dom)
        free(und)


def ccrit_exact(const unsigned char[::1] table, int n, int cbs_value):
    """Minimum over cbs-achieving completions of the maximum domain
    certificate complexity."""
    _check_n(n)
    cdef int size = 1 << n
    cdef unsigned char* work = <unsigned char*> malloc(size)
    cdef unsigned char* best_tab = <unsigned char*> malloc(size)
    cdef int* dom = <int*> malloc(size * sizeof(int))
    cdef int* und = <int*> malloc(size * sizeof(int))
    if work == NULL or best_tab == NULL or dom == NULL or und == NULL:
        raise MemoryError()
    cdef int* cert_order = <int*> malloc(size * sizeof(int))
    if cert_order == NULL:
        free(work)
        free(best_tab)
        free(dom)
        free(und)
        raise MemoryError()
    cdef int ndom = 0, nund = 0, x, j, c, best = BIG, cmax, idx
    cdef bint qualified, dead, found = False
    cdef long long bits, total
    try:
        for x in range(size):
            work[x] = table[x]
            if table[x] == C_UNDEF:
                und[nund] = x
                nund += 1
            else:
                dom[ndom] = x
                ndom += 1
        for j in range(ndom):
            cert_order[j] = dom[j]
        total = (<long long> 1) << nund
        bits = 0
        while bits < total:
            _assign(work, und, nund, <int> bits)
            # cheap rejection first: a leaf whose certificate maximum already
            # reaches the incumbent cannot improve, qualified or not
            cmax = 0
            dead = False
            for idx in range(ndom):
                c = _cert_at(work, n, cert_order[idx], False)
                if c > cmax:
                    cmax = c
                    if cmax >= best:
                        x = cert_order[idx]
                        for j in range(idx, 0, -1):
                            cert_order[j] = cert_order[j - 1]
                        cert_order[0] = x
                        dead = True
                        break
            if not dead:
                qualified = True
                for idx in range(ndom):
                    if _bs_at_capped(work, n, dom[idx], False, cbs_value + 1) > cbs_value:
                        x = dom[idx]
                        for j in range(idx, 0, -1):
                            dom[j] = dom[j - 1]
                        dom[0] = x
                        qualified = False
                        break
                if qualified:
                    best = cmax
                    found = True
                    for x in range(size):
                        best_tab[x] = work[x]
            bits += 1
        if not found:
            raise RuntimeError("no completion achieves the critical block sensitivity")
        return best, bytes(best_tab[:size])
    finally:
        free(work)
        free(best_tab)
        free(dom)
        free(und)
        free(cert_order)


# ---------------------------------------------------------------------------
# certificate selection and subcube census for algorithm replays

def subcube_labels(const unsigned char[::1] table, int n, int fixed, int vals):
    _check_n(n)
    cdef const unsigned char* tab = &table[0]
    cdef int full = (1 << n) - 1
    cdef int free_mask = full ^ fixed
    cdef int out = 0, sub = free_mask
    while True:
        out |= 1 << tab[vals | sub]
        if out == 7 or sub == 0:
            break
        sub = (sub - 1) & free_mask
    return out


cdef long long _binom(int n, int k) noexcept nogil:
    cdef long long out = 1
    cdef int j
    if k < 0 or k > n:
        return 0
    for j in range(k):
        out = out * (n - j) // (j + 1)
    return out


cdef int _cmp_int(const void* a, const void* b) noexcept nogil:
    cdef int x = (<const int*> a)[0]
    cdef int y = (<const int*> b)[0]
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


def lex_min_certificate(const unsigned char[::1] table, int n, int fixed,
                        int vals, int label, bint strict, anchors=None,
                        int size=-1):
    _check_n(n)
    cdef const unsigned char* tab = &table[0]
    cdef const unsigned char[::1] anchor_view
    cdef const unsigned char* anc
    if anchors is None:
        anc = tab
    else:
        anchor_view = anchors
        anc = &anchor_view[0]
    cdef int cube = 1 << n
    cdef int full = cube - 1
    cdef int* pts = <int*> malloc(cube * sizeof(int))
    cdef int* seen = <int*> malloc(cube * sizeof(int))
    if pts == NULL or seen == NULL:
        if pts != NULL:
            free(pts)
        if seen != NULL:
            free(seen)
        raise MemoryError()
    cdef int npts = 0, z, j, S, k, nseen, v, free_mask, sub, idx, lo, hi
    cdef bint ok, is_bad
    cdef unsigned char t
    for z in range(cube):
        if anc[z] == label and (z & fixed) == (vals & fixed):
            pts[npts] = z
            npts += 1
    if npts == 0:
        free(pts)
        free(seen)
        return None
    cdef int* blocks = _get_blocks(n)
    # masks come in (weight, value) order with the weight-0 mask at index 0;
    # a nonnegative `size` restricts the scan to that weight class
    lo = 0
    hi = cube
    if size >= 0:
        lo = 0
        for j in range(size):
            lo += _binom(n, j)
        hi = lo + _binom(n, size)
    try:
        for idx in range(lo, hi):
            S = 0 if idx == 0 else blocks[idx - 1]
            nseen = 0
            for j in range(npts):
                seen[nseen] = pts[j] & S
                nseen += 1
            qsort(seen, nseen, sizeof(int), _cmp_int)
            k = 0
            for j in range(nseen):
                if j == 0 or seen[j] != seen[k - 1]:
                    seen[k] = seen[j]
                    k += 1
            nseen = k
            free_mask = full ^ S
            for j in range(nseen):
                v = seen[j]
                ok = True
                sub = free_mask
                while True:
                    t = tab[v | sub]
                    is_bad = t == (1 - label) or (strict and t == C_UNDEF)
                    if is_bad:
                        ok = False
                        break
                    if sub == 0:
                        break
                    sub = (sub - 1) & free_mask
                if ok:
                    return S, v
        return None
    finally:
        free(pts)
        free(seen)
