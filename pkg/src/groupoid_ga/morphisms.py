"""Isomorphism, anti-isomorphism, and automorphism search on n-groupoids.

The decision procedure is exhaustive: full permutation enumeration at
tiny orders, and otherwise backtracking over partial permutations with
forced-assignment propagation. Invariant fingerprints only prune the
search; they never decide a positive or negative answer on their own.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Optional, Sequence

from .constructions import ProductShape
from .errors import CapacityError, ValidationError
from .tables import Groupoid, NGroupoid, Table, is_associative, is_idempotent

Perm = tuple[int, ...]

DEFAULT_SEARCH_CAP = 12


def identity_perm(k: int) -> Perm:
    return tuple(range(k))


def compose(p: Perm, q: Perm) -> Perm:
    """Apply q first, then p."""
    return tuple(p[q[i]] for i in range(len(p)))


def invert(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


@dataclass(frozen=True)
class MorphismWitness:
    """A checked bijection: iso preserves every operation, anti reverses all."""

    kind: str  # "iso" | "anti"
    perm: Perm
    op_match: tuple[int, ...]  # source op i maps onto target op op_match[i]

    def to_json(self) -> dict:
        return {"kind": self.kind, "perm": list(self.perm), "op_match": list(self.op_match)}


@dataclass(frozen=True)
class AutGroup:
    """All operation-preserving permutations of one structure."""

    elements: tuple[Perm, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Sequence[int]) -> bool:
        return tuple(p) in set(self.elements)

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.elements)

    def is_closed(self) -> bool:
        elems = set(self.elements)
        k = len(self.elements[0]) if self.elements else 0
        if identity_perm(k) not in elems:
            return False
        return all(
            compose(p, q) in elems for p in self.elements for q in self.elements
        ) and all(invert(p) in elems for p in self.elements)


def check_witness(a: NGroupoid, b: NGroupoid, witness: MorphismWitness) -> bool:
    """Verify a witness against the defining equations, cell by cell."""
    if a.order != b.order or a.n_ops != b.n_ops:
        return False
    p = witness.perm
    if sorted(p) != list(range(a.order)):
        return False
    if sorted(witness.op_match) != list(range(a.n_ops)):
        return False
    for i in range(a.n_ops):
        src = a.ops[i]
        dst = b.ops[witness.op_match[i]]
        for x in range(a.order):
            for y in range(a.order):
                expect = dst[p[x]][p[y]] if witness.kind == "iso" else dst[p[y]][p[x]]
                if p[src[x][y]] != expect:
                    return False
    return True


def is_automorphism(a: NGroupoid, p: Sequence[int]) -> bool:
    perm = tuple(p)
    if sorted(perm) != list(range(a.order)):
        return False
    for op in a.ops:
        for x in range(a.order):
            for y in range(a.order):
                if perm[op[x][y]] != op[perm[x]][perm[y]]:
                    return False
    return True


def find_isomorphism(
    a: NGroupoid,
    b: NGroupoid,
    *,
    allow_anti: bool = False,
    allow_op_permutation: bool = False,
    cap: int = DEFAULT_SEARCH_CAP,
) -> Optional[MorphismWitness]:
    """Search for an isomorphism (and optionally an anti-isomorphism).

    Anti-isomorphism reverses every operation simultaneously with a
    single permutation, i.e. it is an isomorphism onto the transpose.
    With allow_op_permutation the operation lists may be matched by any
    bijection; otherwise op i must map onto op i.
    """
    if a.order != b.order or a.n_ops != b.n_ops:
        return None
    if a.order > cap:
        raise CapacityError(
            f"carrier order {a.order} exceeds the isomorphism search cap {cap}"
        )
    kinds = ("iso", "anti") if allow_anti else ("iso",)
    for kind in kinds:
        target = b if kind == "iso" else b.transpose()
        for op_match in _op_matchings(a, target, allow_op_permutation):
            pairs = [(a.ops[i], target.ops[op_match[i]]) for i in range(a.n_ops)]
            perm = _perm_search(pairs, a.order)
            if perm is not None:
                return MorphismWitness(kind, perm, op_match)
    return None


def automorphism_group(a: NGroupoid, cap: int = DEFAULT_SEARCH_CAP) -> AutGroup:
    """All permutations preserving every operation, by exhaustive search."""
    if a.order > cap:
        raise CapacityError(
            f"carrier order {a.order} exceeds the isomorphism search cap {cap}"
        )
    pairs = [(op, op) for op in a.ops]
    perms = _perm_search(pairs, a.order, find_all=True)
    return AutGroup(tuple(sorted(perms)))


def lift_automorphism(shape: ProductShape, factor_index: int, phi: Sequence[int]) -> Perm:
    """Extend a factor automorphism to the whole product carrier.

    The lifted permutation acts as phi on the chosen coordinate and as
    the identity on every other coordinate.
    """
    if not 0 <= factor_index < shape.arity:
        raise ValidationError(f"factor index {factor_index} out of range")
    factor = shape.factors[factor_index]
    phi = tuple(phi)
    if not is_automorphism(factor, phi):
        raise ValidationError(
            f"permutation {list(phi)} is not an automorphism of factor {factor_index}"
        )
    images = []
    for r in range(shape.order):
        point = list(shape.unrank(r))
        point[factor_index] = phi[point[factor_index]]
        images.append(shape.rank(point))
    return tuple(images)


def _op_fingerprint(table: Table) -> tuple:
    """Relabeling-invariant summary of one operation table."""
    k = len(table)
    flat = [v for row in table for v in row]
    value_counts = tuple(sorted(Counter(flat).values()))
    row_distinct = tuple(sorted(len(set(row)) for row in table))
    col_distinct = tuple(
        sorted(len({table[a][b] for a in range(k)}) for b in range(k))
    )
    g = Groupoid(table)
    return (value_counts, row_distinct, col_distinct, is_idempotent(g), is_associative(g))


def _op_matchings(
    a: NGroupoid, target: NGroupoid, allow_op_permutation: bool
) -> Iterator[tuple[int, ...]]:
    n = a.n_ops
    if not allow_op_permutation:
        if all(
            _op_fingerprint(a.ops[i]) == _op_fingerprint(target.ops[i]) for i in range(n)
        ):
            yield tuple(range(n))
        return
    src_fp = [_op_fingerprint(op) for op in a.ops]
    dst_fp = [_op_fingerprint(op) for op in target.ops]
    for match in permutations(range(n)):
        if all(src_fp[i] == dst_fp[match[i]] for i in range(n)):
            yield match


def _elem_invariant(tables: Sequence[Table], a: int, k: int) -> tuple:
    """Relabeling-invariant profile of one element across all operations."""
    out = []
    for t in tables:
        row = t[a]
        col = [t[b][a] for b in range(k)]
        out.append(
            (
                t[a][a] == a,
                sum(1 for b in range(k) if row[b] == a),
                sum(1 for b in range(k) if col[b] == a),
                sum(1 for b in range(k) if row[b] == b),
                sum(1 for b in range(k) if col[b] == b),
                len(set(row)),
                len(set(col)),
            )
        )
    return tuple(out)


def _perm_search(pairs: Sequence[tuple[Table, Table]], k: int, find_all: bool = False):
    """Find one (or all) permutations p with p(x op y) = p(x) op' p(y).

    Small orders are decided by brute force over all k! permutations.
    Larger ones run a backtracking search: assigning a -> t forces the
    image of every product cell whose arguments are already mapped, so
    each choice propagates until it completes or contradicts.
    """
    if k <= 4:
        found = []
        for perm in permutations(range(k)):
            if all(
                perm[src[x][y]] == dst[perm[x]][perm[y]]
                for src, dst in pairs
                for x in range(k)
                for y in range(k)
            ):
                if not find_all:
                    return perm
                found.append(perm)
        return found if find_all else None

    src_tables = [src for src, _ in pairs]
    dst_tables = [dst for _, dst in pairs]
    src_inv = [_elem_invariant(src_tables, a, k) for a in range(k)]
    dst_inv = [_elem_invariant(dst_tables, t, k) for t in range(k)]
    cand = [
        tuple(t for t in range(k) if dst_inv[t] == src_inv[a]) for a in range(k)
    ]
    if any(not c for c in cand):
        return [] if find_all else None

    img = [-1] * k
    pre = [-1] * k
    solutions: list[Perm] = []

    def try_assign(a0: int, t0: int, trail: list[int]) -> bool:
        stack = [(a0, t0)]
        while stack:
            a, t = stack.pop()
            if img[a] != -1:
                if img[a] != t:
                    return False
                continue
            if pre[t] != -1 or t not in cand[a]:
                return False
            img[a] = t
            pre[t] = a
            trail.append(a)
            for src, dst in pairs:
                for b in range(k):
                    if img[b] == -1:
                        continue
                    for x, y in ((a, b), (b, a)):
                        c = src[x][y]
                        d = dst[img[x]][img[y]]
                        if img[c] != -1:
                            if img[c] != d:
                                return False
                        elif pre[d] != -1:
                            return False
                        else:
                            stack.append((c, d))
        return True

    def next_unassigned() -> int:
        best_a = -1
        best_n = k + 1
        for a in range(k):
            if img[a] != -1:
                continue
            n = sum(1 for t in cand[a] if pre[t] == -1)
            if n < best_n:
                best_a, best_n = a, n
        return best_a

    def dfs() -> bool:
        a = next_unassigned()
        if a == -1:
            if find_all:
                solutions.append(tuple(img))
                return False  # keep searching
            return True
        for t in cand[a]:
            if pre[t] != -1:
                continue
            trail: list[int] = []
            if try_assign(a, t, trail) and dfs():
                return True
            for x in reversed(trail):
                pre[img[x]] = -1
                img[x] = -1
        return False

    if dfs():
        return tuple(img)
    return solutions if find_all else None
