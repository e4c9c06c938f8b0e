"""Finite groupoids and n-groupoids as dense Cayley tables.

Elements are the indices 0..k-1; a binary operation is a k x k matrix
where row r, column c holds r*c. Nothing here assumes associativity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError, ValidationError

Table = tuple[tuple[int, ...], ...]

_COMPACT3_RE = re.compile(r"^([0-2]{3})/([0-2]{3})$")


def freeze_table(rows: Iterable[Sequence[int]]) -> Table:
    """Validate a square matrix of in-range element indices and freeze it."""
    table = tuple(tuple(int(v) for v in row) for row in rows)
    k = len(table)
    if k == 0:
        raise ValidationError("a Cayley table must have positive order")
    for row in table:
        if len(row) != k:
            raise ValidationError(
                f"Cayley table must be square: got a row of length {len(row)} at order {k}"
            )
        for v in row:
            if not 0 <= v < k:
                raise ValidationError(f"table entry {v} out of range [0, {k})")
    return table


@dataclass(frozen=True)
class Groupoid:
    """A finite carrier {0..k-1} with one total binary operation."""

    table: Table

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", freeze_table(self.table))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        k = self.order
        if not (0 <= a < k and 0 <= b < k):
            raise ValidationError(f"element pair ({a}, {b}) out of range for order {k}")
        return self.table[a][b]

    def transpose(self) -> "Groupoid":
        k = self.order
        return Groupoid(tuple(tuple(self.table[b][a] for b in range(k)) for a in range(k)))

    def relabel(self, perm: Sequence[int]) -> "Groupoid":
        """Conjugate by a permutation: new[p(a)][p(b)] = p(old[a][b])."""
        k = self.order
        _check_perm(perm, k)
        new = [[0] * k for _ in range(k)]
        for a in range(k):
            for b in range(k):
                new[perm[a]][perm[b]] = perm[self.table[a][b]]
        return Groupoid(tuple(tuple(row) for row in new))

    def as_ngroupoid(self) -> "NGroupoid":
        return NGroupoid(self.order, (self.table,))


@dataclass(frozen=True)
class NGroupoid:
    """One carrier with an ordered list of binary operations (possibly none)."""

    order: int
    ops: tuple[Table, ...]

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValidationError("carrier order must be positive")
        frozen = tuple(freeze_table(op) for op in self.ops)
        for op in frozen:
            if len(op) != self.order:
                raise ValidationError(
                    f"operation of order {len(op)} does not match carrier order {self.order}"
                )
        object.__setattr__(self, "ops", frozen)

    @staticmethod
    def bare(size: int) -> "NGroupoid":
        """A carrier of the given size with no operations at all."""
        if size < 1:
            raise ValidationError("carrier size must be positive")
        return NGroupoid(size, ())

    @property
    def n_ops(self) -> int:
        return len(self.ops)

    def op(self, i: int) -> Groupoid:
        return Groupoid(self.ops[i])

    def transpose(self) -> "NGroupoid":
        k = self.order
        return NGroupoid(
            k,
            tuple(
                tuple(tuple(op[b][a] for b in range(k)) for a in range(k))
                for op in self.ops
            ),
        )

    def relabel(self, perm: Sequence[int]) -> "NGroupoid":
        return NGroupoid(
            self.order,
            tuple(Groupoid(op).relabel(perm).table for op in self.ops),
        )


def _check_perm(perm: Sequence[int], k: int) -> None:
    if len(perm) != k or sorted(perm) != list(range(k)):
        raise ValidationError(f"{list(perm)} is not a permutation of 0..{k - 1}")


def is_idempotent(g: Groupoid) -> bool:
    """a*a = a for every element."""
    return all(g.table[a][a] == a for a in range(g.order))


def is_nowhere_commutative(g: Groupoid) -> bool:
    """a*b = b*a forces a = b: all symmetric off-diagonal cell pairs differ."""
    t = g.table
    for a in range(g.order):
        for b in range(a + 1, g.order):
            if t[a][b] == t[b][a]:
                return False
    return True


def is_genetic(g: Groupoid) -> bool:
    """Idempotent and nowhere commutative."""
    return is_idempotent(g) and is_nowhere_commutative(g)


def is_associative(g: Groupoid) -> bool:
    """Exhaustive check of (a*b)*c = a*(b*c) over all k^3 triples."""
    t = g.table
    rng = range(g.order)
    for a in rng:
        ta = t[a]
        for b in rng:
            ab = ta[b]
            tb = t[b]
            for c in rng:
                if t[ab][c] != ta[tb[c]]:
                    return False
    return True


def is_rectangular_band(g: Groupoid) -> bool:
    """Associative and (a*b)*a = a for all a, b."""
    if not is_associative(g):
        return False
    t = g.table
    for a in range(g.order):
        for b in range(g.order):
            if t[t[a][b]][a] != a:
                return False
    return True


def parse_compact3(s: str) -> Groupoid:
    """Decode the six-digit "ijk/xyz" notation for order-3 tables.

    The diagonal is fixed to (0, 1, 2); the upper off-diagonal cells
    (0,1), (0,2), (1,2) take i, j, k and the lower cells (1,0), (2,0),
    (2,1) take x, y, z. The side conditions i != x, j != y, k != z keep
    every symmetric cell pair split, so any decoded table is genetic.
    """
    m = _COMPACT3_RE.match(s.strip())
    if m is None:
        raise ParseError(f"{s!r} does not match the compact form ijk/xyz over digits 0-2")
    i, j, k = (int(c) for c in m.group(1))
    x, y, z = (int(c) for c in m.group(2))
    for name, upper, lower in (("i/x", i, x), ("j/y", j, y), ("k/z", k, z)):
        if upper == lower:
            raise ValidationError(
                f"{s!r}: digits {name} are both {upper}, which would make a symmetric pair commute"
            )
    return Groupoid(((0, i, j), (x, 1, k), (y, z, 2)))


def serialize_compact3(g: Groupoid) -> str:
    """Inverse of parse_compact3; defined only for order-3 idempotent tables."""
    if g.order != 3:
        raise ValidationError(f"compact notation is defined only at order 3, got {g.order}")
    t = g.table
    if (t[0][0], t[1][1], t[2][2]) != (0, 1, 2):
        raise ValidationError("compact notation requires the idempotent diagonal (0, 1, 2)")
    return f"{t[0][1]}{t[0][2]}{t[1][2]}/{t[1][0]}{t[2][0]}{t[2][1]}"


def ngroupoid_to_json(ng: NGroupoid) -> dict:
    """The on-disk form: {"order": k, "ops": [k x k matrices]}."""
    return {"order": ng.order, "ops": [[list(row) for row in op] for op in ng.ops]}


def ngroupoid_from_json(obj: object) -> NGroupoid:
    if not isinstance(obj, dict):
        raise ParseError("groupoid JSON must be an object")
    try:
        order = int(obj["order"])
        ops = obj["ops"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"groupoid JSON needs integer 'order' and list 'ops': {exc}") from exc
    if not isinstance(ops, list):
        raise ParseError("'ops' must be a list of square matrices")
    try:
        return NGroupoid(order, tuple(tuple(tuple(int(v) for v in row) for row in op) for op in ops))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad groupoid JSON: {exc}") from exc
