"""Exhaustive generation and classification of small genetic groupoids.

A genetic table has a forced idempotent diagonal and, for each unordered
element pair {a, b}, an ordered value pair (a*b, b*a) with a*b != b*a.
Generation walks exactly those assignments; nothing is filtered out of
the k^(k*k) space. Classification is up to isomorphism-or-anti-isomorphism,
decided by the exact orbit minimum under all relabelings and the optional
transpose (a complete invariant for this group action, cross-checked
against the pairwise search in the test suite).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations, product as iproduct
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import CapacityError, ValidationError
from .tables import Groupoid, Table, is_associative, serialize_compact3

ENUMERATION_CAP = 4


def pair_slots(order: int) -> list[tuple[int, int]]:
    return list(combinations(range(order), 2))


def genetic_table_count(order: int) -> int:
    """(k^2 - k) ordered value pairs per slot, one slot per element pair."""
    k = order
    return (k * k - k) ** (k * (k - 1) // 2)


def enumerate_genetic(order: int) -> Iterator[Groupoid]:
    """Yield every genetic Cayley table of the given order, lexicographically."""
    if order < 1:
        raise ValidationError("order must be positive")
    if order > ENUMERATION_CAP:
        raise CapacityError(
            f"genetic enumeration is capped at order {ENUMERATION_CAP}; "
            f"order {order} has {genetic_table_count(order)} raw tables"
        )
    k = order
    slots = pair_slots(k)
    choices = [(u, v) for u in range(k) for v in range(k) if u != v]
    for assignment in iproduct(choices, repeat=len(slots)):
        rows = [[a if a == b else -1 for b in range(k)] for a in range(k)]
        for a in range(k):
            rows[a][a] = a
        for (a, b), (u, v) in zip(slots, assignment):
            rows[a][b] = u
            rows[b][a] = v
        yield Groupoid(tuple(tuple(row) for row in rows))


def canonical_key(table: Table, include_transpose: bool = True) -> Table:
    """Lexicographically smallest table in the orbit under relabeling
    (and the transpose, when anti-isomorphism is identified)."""
    k = len(table)
    variants = [table]
    if include_transpose:
        variants.append(tuple(tuple(table[b][a] for b in range(k)) for a in range(k)))
    best: Optional[Table] = None
    for t in variants:
        for p in permutations(range(k)):
            inv = [0] * k
            for i, v in enumerate(p):
                inv[v] = i
            relabeled = tuple(
                tuple(p[t[inv[a]][inv[b]]] for b in range(k)) for a in range(k)
            )
            if best is None or relabeled < best:
                best = relabeled
    assert best is not None
    return best


@dataclass(frozen=True)
class CensusReport:
    """Classes of one order up to isomorphism-or-anti-isomorphism."""

    order: int
    raw_count: int
    classes: tuple[tuple[Groupoid, int], ...]  # (canonical representative, orbit size)
    associative_class_count: int

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def to_json(self, include_tables: bool = True) -> dict:
        out = {
            "order": self.order,
            "raw_count": self.raw_count,
            "class_count": self.class_count,
            "associative_class_count": self.associative_class_count,
        }
        if include_tables:
            entries = []
            for rep, orbit in self.classes:
                entry: dict = {"orbit_size": orbit, "table": [list(r) for r in rep.table]}
                if self.order == 3:
                    entry["compact"] = serialize_compact3(rep)
                entry["associative"] = is_associative(rep)
                entries.append(entry)
            out["classes"] = entries
        return out

    def summary_text(self) -> str:
        lines = [
            f"order {self.order}: {self.raw_count} genetic tables, "
            f"{self.class_count} classes up to isomorphism or anti-isomorphism, "
            f"{self.associative_class_count} associative",
        ]
        if self.order <= 3:
            for rep, orbit in self.classes:
                tag = serialize_compact3(rep) if self.order == 3 else str([list(r) for r in rep.table])
                assoc = " (associative)" if is_associative(rep) else ""
                lines.append(f"  {tag}  orbit={orbit}{assoc}")
        return "\n".join(lines)


def classify(groupoids: Iterable[Groupoid]) -> CensusReport:
    """Partition tables into classes up to isomorphism-or-anti-isomorphism."""
    counts: dict[Table, int] = {}
    order = None
    total = 0
    for g in groupoids:
        if order is None:
            order = g.order
        elif g.order != order:
            raise ValidationError("all tables in one classification must share an order")
        key = canonical_key(g.table)
        counts[key] = counts.get(key, 0) + 1
        total += 1
    if order is None:
        raise ValidationError("nothing to classify")
    classes = tuple((Groupoid(key), counts[key]) for key in sorted(counts))
    assoc = sum(1 for rep, _ in classes if is_associative(rep))
    return CensusReport(order, total, classes, assoc)


def run_census(order: int, jobs: int = 1) -> CensusReport:
    """Enumerate and classify one order; order 4 runs the vectorized path."""
    if order < 1:
        raise ValidationError("order must be positive")
    if order > ENUMERATION_CAP:
        raise CapacityError(f"census is capped at order {ENUMERATION_CAP}")
    if order <= 3:
        return classify(enumerate_genetic(order))
    return _census_order4(jobs)


# ---------------------------------------------------------------------------
# Order 4: 12^6 = 2,985,984 raw tables. Each chunk fixes the value pair of
# the first slot, builds every completion as one ndarray, and reduces each
# table to its orbit-minimum encoding over all 24 relabelings x transpose.

_ORDER4_SLOTS = pair_slots(4)
_ORDER4_CHOICES = [(u, v) for u in range(4) for v in range(4) if u != v]
_POW4 = (4 ** np.arange(15, -1, -1)).astype(np.uint64)


def canonical_keys_order4(tables: np.ndarray) -> np.ndarray:
    """Vectorized orbit-minimum encodings for a batch of order-4 tables.

    The encoding is the base-4 digit string of the flattened table, so
    encoded order equals lexicographic table order and the minimum over
    all 24 relabelings x transpose matches canonical_key exactly.
    """
    count = tables.shape[0]
    best = np.full(count, np.iinfo(np.uint64).max, dtype=np.uint64)
    transposed = tables.transpose(0, 2, 1)
    for variant in (tables, transposed):
        for p in permutations(range(4)):
            p_arr = np.array(p, dtype=np.int8)
            inv = np.argsort(p_arr)
            relabeled = p_arr[variant[:, inv][:, :, inv]]
            enc = relabeled.reshape(count, 16).astype(np.uint64) @ _POW4
            np.minimum(best, enc, out=best)
    return best


def _order4_chunk(first_choice: int) -> tuple[np.ndarray, np.ndarray]:
    """Canonical-key histogram for all tables whose slot-0 pair is fixed."""
    n_rest = len(_ORDER4_SLOTS) - 1
    n_choices = len(_ORDER4_CHOICES)
    count = n_choices**n_rest
    grids = np.meshgrid(*([np.arange(n_choices)] * n_rest), indexing="ij")
    combos = np.stack([g.reshape(-1) for g in grids], axis=1)  # (count, 5)

    tables = np.empty((count, 4, 4), dtype=np.int8)
    for i in range(4):
        tables[:, i, i] = i
    u_vals = np.array([u for u, _ in _ORDER4_CHOICES], dtype=np.int8)
    v_vals = np.array([v for _, v in _ORDER4_CHOICES], dtype=np.int8)
    a0, b0 = _ORDER4_SLOTS[0]
    tables[:, a0, b0] = u_vals[first_choice]
    tables[:, b0, a0] = v_vals[first_choice]
    for j, (a, b) in enumerate(_ORDER4_SLOTS[1:]):
        tables[:, a, b] = u_vals[combos[:, j]]
        tables[:, b, a] = v_vals[combos[:, j]]

    keys, counts = np.unique(canonical_keys_order4(tables), return_counts=True)
    return keys, counts


def _decode_key(key: int, order: int) -> Table:
    digits = []
    for _ in range(order * order):
        digits.append(int(key % order))
        key //= order
    digits.reverse()
    return tuple(
        tuple(digits[r * order : (r + 1) * order]) for r in range(order)
    )


def _census_order4(jobs: int) -> CensusReport:
    chunk_ids = range(len(_ORDER4_CHOICES))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(_ORDER4_CHOICES))) as pool:
            results = list(pool.map(_order4_chunk, chunk_ids))
    else:
        results = [_order4_chunk(i) for i in chunk_ids]
    merged: dict[int, int] = {}
    for keys, counts in results:
        for key, cnt in zip(keys.tolist(), counts.tolist()):
            merged[key] = merged.get(key, 0) + cnt
    total = sum(merged.values())
    classes = tuple(
        (Groupoid(_decode_key(key, 4)), merged[key]) for key in sorted(merged)
    )
    assoc = sum(1 for rep, _ in classes if is_associative(rep))
    return CensusReport(4, total, classes, assoc)
