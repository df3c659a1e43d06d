"""Exhaustive census of 3-antiassociative Cayley tables of small order.

Tables are built entry by entry in row-major order; a branch dies as
soon as some triple (a,b,c) has all five needed entries fixed with
(a*b)*c = a*(b*c).  Work splits across processes by first-row prefix,
and the counts are plain sums, so worker count never changes a result.
"""

from __future__ import annotations

import itertools
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass


@dataclass(frozen=True)
class CensusReport:
    n: int
    total_tables: int
    antiassociative_count: int
    literally_deranged_count: int
    elapsed: float
    workers: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "total_tables": self.total_tables,
            "antiassociative_count": self.antiassociative_count,
            "literally_deranged_count": self.literally_deranged_count,
            "elapsed": self.elapsed,
            "workers": self.workers,
        }


def _is_antiassociative(table, n: int) -> bool:
    for a in range(n):
        for b in range(n):
            ab = table[a * n + b]
            for c in range(n):
                if table[ab * n + c] == table[a * n + table[b * n + c]]:
                    return False
    return True


def census_unpruned(n: int) -> int:
    """Reference count by full enumeration; n <= 3 only."""
    if n > 3:
        raise ValueError("unpruned enumeration is for n <= 3")
    count = 0
    for table in itertools.product(range(n), repeat=n * n):
        if _is_antiassociative(table, n):
            count += 1
    return count


def literally_deranged_tables(n: int) -> set[tuple[int, ...]]:
    """Tables of the form x*y = f(x) or x*y = f(y), f fixpoint-free."""
    out = set()
    choices = [[v for v in range(n) if v != i] for i in range(n)]
    for f in itertools.product(*choices):
        out.add(tuple(f[x] for x in range(n) for _ in range(n)))
        out.add(tuple(f[y] for _ in range(n) for y in range(n)))
    return out


def _candidate_triples(n: int):
    """For each entry index, triples worth re-checking after assigning it.

    Entry (x,y) can be any of the four lookups of triple (a,b,c): the
    products (a,b) or (b,c) directly, or one of the value-dependent
    lookups, which have column c == y or row a == x.
    """
    per_entry = [[] for _ in range(n * n)]
    for e in range(n * n):
        x, y = divmod(e, n)
        seen = set()
        for a, b, c in itertools.product(range(n), repeat=3):
            if (a, b) == (x, y) or (b, c) == (x, y) or c == y or a == x:
                if (a, b, c) not in seen:
                    seen.add((a, b, c))
                    per_entry[e].append((a * n + b, b * n + c, a, c))
    return per_entry


def _violated(table, n, triples) -> bool:
    """Any fully-determined triple with (a*b)*c == a*(b*c)?"""
    for ab_idx, bc_idx, a, c in triples:
        ab = table[ab_idx]
        if ab < 0:
            continue
        bc = table[bc_idx]
        if bc < 0:
            continue
        lhs = table[ab * n + c]
        if lhs < 0:
            continue
        rhs = table[a * n + bc]
        if rhs < 0:
            continue
        if lhs == rhs:
            return True
    return False


def _count_subtree(n: int, prefix: tuple[int, ...]) -> int:
    """Antiassociative completions of the given row-major prefix."""
    per_entry = _candidate_triples(n)
    size = n * n
    table = [-1] * size
    for i, v in enumerate(prefix):
        table[i] = v
        if _violated(table, n, per_entry[i]):
            return 0
    count = 0
    start = len(prefix)

    def descend(pos: int):
        nonlocal count
        if pos == size:
            count += 1
            return
        triples = per_entry[pos]
        for v in range(n):
            table[pos] = v
            if not _violated(table, n, triples):
                descend(pos + 1)
        table[pos] = -1

    descend(start)
    return count


def census_pruned(n: int, workers: int = 1, progress=None) -> int:
    """Depth-first count with early pruning, split by first-row prefix."""
    prefixes = list(itertools.product(range(n), repeat=n))
    if workers <= 1:
        total = 0
        for i, prefix in enumerate(prefixes):
            total += _count_subtree(n, prefix)
            if progress:
                progress(i + 1, len(prefixes), total)
        return total
    with ProcessPoolExecutor(max_workers=workers) as pool:
        partials = pool.map(_count_subtree, itertools.repeat(n), prefixes)
        total = 0
        for i, part in enumerate(partials):
            total += part
            if progress:
                progress(i + 1, len(prefixes), total)
    return total


def census(n: int, workers: int = 1, long_run: bool = False, progress=None) -> CensusReport:
    if n not in (2, 3, 4):
        raise ValueError("census supports n in {2, 3, 4}")
    if n == 4 and not long_run:
        raise ValueError("n=4 walks 4^16 tables; pass long_run=True to confirm")
    start = time.monotonic()
    count = census_pruned(n, workers=workers, progress=progress)
    elapsed = time.monotonic() - start
    return CensusReport(
        n=n,
        total_tables=n ** (n * n),
        antiassociative_count=count,
        literally_deranged_count=len(literally_deranged_tables(n)),
        elapsed=elapsed,
        workers=workers,
    )


def stderr_progress(done: int, total: int, count: int):
    print(f"census: {done}/{total} prefixes, {count} so far", file=sys.stderr)
