"""Brute-force reference oracles, straight from the definitions.

Deliberately independent of the package search kernels: block sensitivity
enumerates all disjoint families, certificates enumerate all supports,
decision depth recurses without memoization, and the critical measures
enumerate completions outright.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

UNDEF = 2


def bs(table: bytes, n: int, x: int, promise: bool = False) -> int:
    v = table[x]
    want = {1 - v, UNDEF} if promise else {1 - v}

    @lru_cache(maxsize=None)
    def g(avail: int) -> int:
        best = 0
        b = avail
        while b:
            if table[x ^ b] in want:
                cand = 1 + g(avail ^ b)
                if cand > best:
                    best = cand
            b = (b - 1) & avail
        return best

    return g((1 << n) - 1)


def cert(table: bytes, n: int, x: int, strict: bool = False) -> int:
    v = table[x]
    bad = {1 - v, UNDEF} if strict else {1 - v}
    for size in range(n + 1):
        for support in itertools.combinations(range(n), size):
            mask = sum(1 << i for i in support)
            ok = True
            for y in range(1 << n):
                if (y & mask) == (x & mask) and table[y] in bad:
                    ok = False
                    break
            if ok:
                return size
    return n


def depth(table: bytes, n: int) -> int:
    def rec(fixed: int, vals: int) -> int:
        free = ((1 << n) - 1) ^ fixed
        labels = set()
        sub = free
        while True:
            t = table[vals | sub]
            if t != UNDEF:
                labels.add(t)
            if sub == 0:
                break
            sub = (sub - 1) & free
        if len(labels) <= 1:
            return 0
        best = n + 1
        for i in range(n):
            b = 1 << i
            if fixed & b:
                continue
            d = 1 + max(rec(fixed | b, vals), rec(fixed | b, vals | b))
            if d < best:
                best = d
        return best

    return rec(0, 0)


def all_completions(table: bytes, n: int):
    und = [x for x in range(1 << n) if table[x] == UNDEF]
    for bits in range(1 << len(und)):
        t = bytearray(table)
        for j, z in enumerate(und):
            t[z] = (bits >> j) & 1
        yield bytes(t)


def cbs_and_ccrit(table: bytes, n: int) -> tuple[int, int]:
    dom = [x for x in range(1 << n) if table[x] != UNDEF]
    rows = []
    for t in all_completions(table, n):
        m = max((bs(t, n, x) for x in dom), default=0)
        rows.append((m, t))
    best_bs = min(m for m, _ in rows)
    best_cert = min(
        max((cert(t, n, x) for x in dom), default=0)
        for m, t in rows
        if m == best_bs
    )
    return best_bs, best_cert


def completion_minimum(table: bytes, n: int, value) -> int:
    return min(value(t) for t in all_completions(table, n))
