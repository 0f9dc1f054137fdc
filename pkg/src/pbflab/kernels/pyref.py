"""Pure-Python reference implementation of the search kernels.

Mirrors the API of the compiled module ``pbflab.kernels._core`` and is
selected at import time when the extension is unavailable (or when
``PBFLAB_PURE=1``).  Tables are bytes-like of length ``2**n`` over
``{0, 1, 2}`` with 2 meaning undefined; points and blocks are integers
under the package-wide bit convention.
"""

from __future__ import annotations

from functools import lru_cache

UNDEF = 2

_BIG = 1 << 30


@lru_cache(maxsize=None)
def _blocks_ascending(n: int) -> tuple[int, ...]:
    """All nonzero masks on n coordinates, sorted by (weight, value)."""
    return tuple(sorted(range(1, 1 << n), key=lambda b: (b.bit_count(), b)))


@lru_cache(maxsize=None)
def _masks_by_weight(n: int) -> tuple[tuple[int, ...], ...]:
    out: list[list[int]] = [[] for _ in range(n + 1)]
    for m in range(1 << n):
        out[m.bit_count()].append(m)
    return tuple(tuple(ms) for ms in out)


def _max_disjoint(blocks: list[int], cap: int = _BIG) -> int:
    """Maximum size of a pairwise-disjoint subfamily, clamped at ``cap``;
    branch and bound in block-size order (blocks come sorted by weight
    ascending)."""
    best = 0

    def rec(cands: list[int], cnt: int) -> None:
        nonlocal best
        if cnt > best:
            best = cnt
        if best >= cap or cnt + len(cands) <= best:
            return
        for j, b in enumerate(cands):
            if cnt + len(cands) - j <= best:
                return
            rec([c for c in cands[j + 1 :] if not c & b], cnt + 1)
            if best >= cap:
                return

    rec(blocks, 0)
    return best


def _bs_at_capped(table, n: int, x: int, promise: bool, cap: int) -> int:
    v = table[x]
    if v == UNDEF:
        raise ValueError("block sensitivity is defined only on the domain")
    want = 1 - v
    minimal: list[int] = []
    for b in _blocks_ascending(n):
        t = table[x ^ b]
        if t != want and not (promise and t == UNDEF):
            continue
        if any(mb & b == mb for mb in minimal):
            continue
        minimal.append(b)
    return _max_disjoint(minimal, cap)


def bs_at(table, n: int, x: int, promise: bool) -> int:
    """Block sensitivity at x: max disjoint family of blocks whose flip lands
    on the opposite label (promise variant also accepts undefined)."""
    return _bs_at_capped(table, n, x, promise, _BIG)


def _disjoint_count(masks: list[int]) -> int:
    used = 0
    c = 0
    for m in masks:
        if not m & used:
            c += 1
            used |= m
    return c


def cert_at(table, n: int, x: int, strict: bool) -> int:
    """Smallest certificate size at x, as a minimum hitting set over the
    difference masks of violating points.

    strict=True: every consistent point must carry the same label (a
    b-certificate); strict=False: undefined points are tolerated (a
    {b,*}-certificate).
    """
    v = table[x]
    if v == UNDEF:
        raise ValueError("certificates are defined only on the domain")
    bad = (1 - v, UNDEF) if strict else (1 - v,)
    diffs = sorted(
        (x ^ y for y in range(1 << n) if table[y] in bad),
        key=lambda d: (d.bit_count(), d),
    )
    if not diffs:
        return 0
    mins: list[int] = []
    for d in diffs:
        if not any(m & d == m for m in mins):
            mins.append(d)

    # greedy cover for the initial incumbent
    uncovered = list(mins)
    greedy = 0
    while uncovered:
        counts = [0] * n
        for d in uncovered:
            dd = d
            while dd:
                i = (dd & -dd).bit_length() - 1
                counts[i] += 1
                dd &= dd - 1
        i = max(range(n), key=lambda j: counts[j])
        bit = 1 << i
        uncovered = [d for d in uncovered if not d & bit]
        greedy += 1
    best = greedy

    def rec(size: int, uncovered: list[int]) -> None:
        nonlocal best
        if not uncovered:
            if size < best:
                best = size
            return
        if size + _disjoint_count(uncovered) >= best:
            return
        d = uncovered[0]
        while d:
            i = (d & -d).bit_length() - 1
            bit = 1 << i
            rec(size + 1, [u for u in uncovered if not u & bit])
            d &= d - 1

    rec(0, mins)
    return best


def decision_depth(table, n: int, ub: int) -> int:
    """Minimum decision-tree depth that labels every defined point correctly
    (off-domain leaves unconstrained); returns ub+1 if the depth exceeds ub.

    Memoized search over restrictions with iterative deepening and
    alpha-beta style pruning against the incumbent.
    """
    full = (1 << n) - 1

    def census(fixed: int, vals: int) -> tuple[bool, bool]:
        free = full ^ fixed
        has0 = has1 = False
        sub = free
        while True:
            t = table[vals | sub]
            if t == 0:
                has0 = True
            elif t == 1:
                has1 = True
            if sub == 0:
                break
            sub = (sub - 1) & free
        return has0, has1

    memo: dict[int, tuple[int, bool]] = {}

    def search(fixed: int, vals: int, beta: int) -> int:
        """Exact depth if < beta, else beta (meaning depth >= beta)."""
        key = (fixed << n) | vals
        lo, exact = memo.get(key, (0, False))
        if exact:
            return lo if lo < beta else beta
        if lo >= beta:
            return beta
        has0, has1 = census(fixed, vals)
        if not (has0 and has1):
            memo[key] = (0, True)
            return 0
        if beta <= 1:
            memo[key] = (max(lo, 1), False)
            return beta
        best = beta
        for i in range(n):
            b = 1 << i
            if fixed & b:
                continue
            d0 = search(fixed | b, vals, best - 1)
            if d0 >= best - 1:
                continue
            d1 = search(fixed | b, vals | b, best - 1)
            m = d0 if d0 > d1 else d1
            if m + 1 < best:
                best = m + 1
                if best == 1:
                    break
        if best < beta:
            memo[key] = (best, True)
        else:
            memo[key] = (max(lo, beta), False)
        return best

    has0, has1 = census(0, 0)
    if not (has0 and has1):
        return 0
    for d in range(1, ub + 1):
        if search(0, 0, d + 1) <= d:
            return d
    return ub + 1


def _assign(work: bytearray, und: list[int], bits: int) -> None:
    for j, z in enumerate(und):
        work[z] = (bits >> j) & 1


def cbs_exact(table, n: int) -> tuple[int, bytes]:
    """Critical block sensitivity by exhaustive completion search.

    Completions are enumerated directly; each leaf is evaluated with the
    incumbent as a cap and bails at the first domain point reaching it
    (points reorder move-to-front, so rejecting a leaf is usually a single
    capped evaluation).  The search stops once the lower bound bs(f) is
    attained.  Returns (value, witness completion table).
    """
    size = 1 << n
    dom = [x for x in range(size) if table[x] != UNDEF]
    und = [x for x in range(size) if table[x] == UNDEF]
    lb = 0
    for x in dom:
        b = bs_at(table, n, x, False)
        if b > lb:
            lb = b
    work = bytearray(table)
    order = list(dom)
    best = _BIG
    best_tab: bytes | None = None
    for bits in range(1 << len(und)):
        _assign(work, und, bits)
        leaf = 0
        dead = False
        for idx, x in enumerate(order):
            b = _bs_at_capped(work, n, x, False, best)
            if b >= best:
                order.insert(0, order.pop(idx))
                dead = True
                break
            if b > leaf:
                leaf = b
        if not dead:
            best = leaf
            best_tab = bytes(work)
            if best <= lb:
                break
    assert best_tab is not None
    return best, best_tab


def ccrit_exact(table, n: int, cbs_value: int) -> tuple[int, bytes]:
    """Critical certificate complexity: over completions whose maximum block
    sensitivity on the original domain equals cbs, minimize the maximum
    certificate complexity on the domain.  Returns (value, witness table)."""
    size = 1 << n
    dom = [x for x in range(size) if table[x] != UNDEF]
    und = [x for x in range(size) if table[x] == UNDEF]
    work = bytearray(table)
    bs_order = list(dom)
    cert_order = list(dom)
    best = _BIG
    best_tab: bytes | None = None
    for bits in range(1 << len(und)):
        _assign(work, und, bits)
        # cheap rejection first: a leaf whose certificate maximum already
        # reaches the incumbent cannot improve, whether or not it qualifies
        cmax = 0
        dead = False
        for idx, x in enumerate(cert_order):
            c = cert_at(work, n, x, False)
            if c > cmax:
                cmax = c
                if cmax >= best:
                    cert_order.insert(0, cert_order.pop(idx))
                    dead = True
                    break
        if dead:
            continue
        qualified = True
        for idx, x in enumerate(bs_order):
            if _bs_at_capped(work, n, x, False, cbs_value + 1) > cbs_value:
                bs_order.insert(0, bs_order.pop(idx))
                qualified = False
                break
        if qualified:
            best = cmax
            best_tab = bytes(work)
    if best_tab is None:  # pragma: no cover - impossible when cbs_value is exact
        raise RuntimeError("no completion achieves the critical block sensitivity")
    return best, best_tab


def subcube_labels(table, n: int, fixed: int, vals: int) -> int:
    """Bitmask of labels present on the subcube consistent with the partial
    assignment: bit 0 for ZERO, bit 1 for ONE, bit 2 for UNDEF."""
    free = ((1 << n) - 1) ^ fixed
    out = 0
    sub = free
    while True:
        out |= 1 << table[vals | sub]
        if out == 7 or sub == 0:
            break
        sub = (sub - 1) & free
    return out


def lex_min_certificate(
    table,
    n: int,
    fixed: int,
    vals: int,
    label: int,
    strict: bool,
    anchors=None,
    size: int = -1,
):
    """Smallest certificate for ``label`` consistent with the queried partial
    assignment, anchored at a point of ``anchors`` (default: ``table``)
    carrying that label.

    Candidates are ordered by (size, support mask, values mask); the first
    valid one is returned as ``(support, values)``, or None when no anchor
    point is consistent with the assignment.  When ``size`` is nonnegative
    only that support weight is searched (callers that know the minimum
    size, e.g. from precomputed per-point certificate sizes, skip the
    fruitless smaller weights).
    """
    anchor_tab = table if anchors is None else anchors
    cube = 1 << n
    pts = [
        z
        for z in range(cube)
        if anchor_tab[z] == label and (z & fixed) == (vals & fixed)
    ]
    if not pts:
        return None
    bad = (1 - label, UNDEF) if strict else (1 - label,)
    full = cube - 1
    by_weight = _masks_by_weight(n)
    weights = by_weight if size < 0 else by_weight[size : size + 1]
    for masks in weights:
        for S in masks:
            seen = sorted({z & S for z in pts})
            free = full ^ S
            for v in seen:
                ok = True
                sub = free
                while True:
                    if table[v | sub] in bad:
                        ok = False
                        break
                    if sub == 0:
                        break
                    sub = (sub - 1) & free
                if ok:
                    return S, v
    return None
