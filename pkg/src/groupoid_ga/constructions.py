"""Composite groupoids: splicing structures, genetic products, and chains.

Two independent routes build the same product tables. genetic_product
materializes the pairwise case rule directly; ProductShape evaluates the
flattened per-coordinate rule without materializing anything, which is
what the GA engine runs on. Tests hold the two routes together.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce
from itertools import product as iproduct
from math import prod
from typing import Sequence

from .errors import CapacityError, ParseError, ValidationError
from .tables import Groupoid, NGroupoid, parse_compact3

DEFAULT_TABLE_CAP = 4096

# A flat operation either applies factor fi's local op and takes the rest
# of the tuple from the right parent, or splices whole suffixes.
LayoutEntry = tuple[str, int, int]  # ("factor", fi, local_op) | ("splice", fi, 0)

_GA_RE = re.compile(r"^GA\(\s*(\d+)\s*;\s*([\d,\s]+)\)$")
_BAND_RE = re.compile(r"^band:(\d+),(\d+)$")
_BARE_RE = re.compile(r"^bare:(\d+)$")


@dataclass(frozen=True)
class SplicingSpec:
    """n cut-point operations over tuples with per-coordinate ranges 0..d_i."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.dims) < 1:
            raise ValidationError("a splicing spec needs at least one coordinate")
        if any(d < 0 for d in self.dims):
            raise ValidationError(f"coordinate bounds must be >= 0, got {self.dims}")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def n_ops(self) -> int:
        return len(self.dims) - 1

    @property
    def carrier_size(self) -> int:
        return prod(d + 1 for d in self.dims)

    @staticmethod
    def uniform(n: int, d: int) -> "SplicingSpec":
        return SplicingSpec((d,) * (n + 1))


def tuple_carrier(sizes: Sequence[int]) -> list[tuple[int, ...]]:
    """All tuples with coordinate i in range(sizes[i]), in lexicographic order."""
    return list(iproduct(*(range(s) for s in sizes)))


def tuple_rank(point: Sequence[int], sizes: Sequence[int]) -> int:
    r = 0
    for v, s in zip(point, sizes):
        r = r * s + v
    return r


def tuple_unrank(rank: int, sizes: Sequence[int]) -> tuple[int, ...]:
    out = []
    for s in reversed(sizes):
        out.append(rank % s)
        rank //= s
    return tuple(reversed(out))


def splicing_groupoid(spec: SplicingSpec, cap: int = DEFAULT_TABLE_CAP) -> NGroupoid:
    """Materialize the cut-point operations: op i keeps the first i+1
    coordinates of the left parent and the rest of the right parent."""
    size = spec.carrier_size
    if size > cap:
        raise CapacityError(f"carrier size {size} exceeds the table cap {cap}")
    sizes = [d + 1 for d in spec.dims]
    carrier = tuple_carrier(sizes)
    ops = []
    for i in range(spec.n_ops):
        cut = i + 1
        table = tuple(
            tuple(tuple_rank(a[:cut] + b[cut:], sizes) for b in carrier) for a in carrier
        )
        ops.append(table)
    return NGroupoid(size, tuple(ops))


def rectangular_band(n: int, m: int) -> Groupoid:
    """The band on {0..n-1} x {0..m-1} with (x, y) * (a, b) = (x, b)."""
    if n < 1 or m < 1:
        raise ValidationError("band sides must be positive")
    size = n * m
    table = tuple(
        tuple((r // m) * m + (c % m) for c in range(size)) for r in range(size)
    )
    return Groupoid(table)


def band_dimensions(g: Groupoid) -> tuple[int, int]:
    """Recover the n x m shape of a rectangular band from its table.

    Row classes are elements with identical table rows, column classes
    elements with identical columns; a band is their direct grid.
    """
    from .tables import is_rectangular_band

    if not is_rectangular_band(g):
        raise ValidationError("table is not a rectangular band")
    rows = {g.table[a] for a in range(g.order)}
    cols = {tuple(g.table[a][b] for a in range(g.order)) for b in range(g.order)}
    return len(rows), len(cols)


def genetic_product(a: NGroupoid, b: NGroupoid, cap: int = DEFAULT_TABLE_CAP) -> NGroupoid:
    """The (n+m+1)-operation structure on pairs (x, y), x from a, y from b.

    Operation index op (0-based) acts on ((x, y), (z, w)) as:
      op < n          -> (x *_op z, w)
      op = n          -> (x, w)
      op > n          -> (x, y *_(op-n-1) w)
    Pairs are ranked lexicographically with the first factor major.
    """
    size = a.order * b.order
    if size > cap:
        raise CapacityError(f"carrier size {size} exceeds the table cap {cap}")
    n, m = a.n_ops, b.n_ops
    kb = b.order
    ops = []
    for op in range(n + m + 1):
        table = [[0] * size for _ in range(size)]
        for x in range(a.order):
            for y in range(b.order):
                left = x * kb + y
                row = table[left]
                for z in range(a.order):
                    for w in range(b.order):
                        if op < n:
                            val = a.ops[op][x][z] * kb + w
                        elif op == n:
                            val = x * kb + w
                        else:
                            val = x * kb + b.ops[op - n - 1][y][w]
                        row[z * kb + w] = val
        ops.append(tuple(tuple(r) for r in table))
    return NGroupoid(size, tuple(ops))


def genetic_extension(a: NGroupoid, d: int, cap: int = DEFAULT_TABLE_CAP) -> NGroupoid:
    """Product of a with the operation-free carrier {0..d}; adds one op."""
    if d < 0:
        raise ValidationError("extension bound must be >= 0")
    return genetic_product(a, NGroupoid.bare(d + 1), cap)


def product_chain(factors: Sequence[NGroupoid], cap: int = DEFAULT_TABLE_CAP) -> NGroupoid:
    """Left-associated fold of genetic_product over the factors."""
    if not factors:
        raise ValidationError("a product chain needs at least one factor")
    return reduce(lambda acc, f: genetic_product(acc, f, cap), factors)


def direct_product(a: Groupoid, b: Groupoid) -> Groupoid:
    """Component-wise product of two single-operation groupoids."""
    kb = b.order
    size = a.order * kb
    table = tuple(
        tuple(
            a.table[l // kb][r // kb] * kb + b.table[l % kb][r % kb]
            for r in range(size)
        )
        for l in range(size)
    )
    return Groupoid(table)


@dataclass(frozen=True)
class ProductShape:
    """A factored chain evaluated coordinate-wise, never as one big table.

    The flat operation list is: factor 0's ops, a splice after coordinate
    0, factor 1's ops, a splice after coordinate 1, ..., factor t-1's ops.
    A factor op at coordinate j combines the j-th coordinates and takes
    coordinates before j from the left parent, after j from the right; a
    splice after j takes coordinates 0..j from the left, the rest from
    the right.
    """

    factors: tuple[NGroupoid, ...]
    layout: tuple[LayoutEntry, ...] = field(init=False)

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValidationError("a product shape needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))
        layout: list[LayoutEntry] = []
        for fi, factor in enumerate(self.factors):
            if fi > 0:
                layout.append(("splice", fi - 1, 0))
            for local in range(factor.n_ops):
                layout.append(("factor", fi, local))
        object.__setattr__(self, "layout", tuple(layout))

    @property
    def arity(self) -> int:
        return len(self.factors)

    @property
    def factor_orders(self) -> tuple[int, ...]:
        return tuple(f.order for f in self.factors)

    @property
    def order(self) -> int:
        return prod(self.factor_orders)

    @property
    def n_flat_ops(self) -> int:
        return len(self.layout)

    def validate_point(self, point: Sequence[int]) -> tuple[int, ...]:
        if len(point) != self.arity:
            raise ValidationError(
                f"point arity {len(point)} does not match factor count {self.arity}"
            )
        for v, f in zip(point, self.factors):
            if not 0 <= v < f.order:
                raise ValidationError(f"coordinate {v} out of range for factor of order {f.order}")
        return tuple(point)

    def apply(self, op_index: int, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        """One flat operation on two parent tuples."""
        if not 0 <= op_index < self.n_flat_ops:
            raise ValidationError(f"operation index {op_index} out of range [0, {self.n_flat_ops})")
        kind, fi, local = self.layout[op_index]
        a = tuple(a)
        b = tuple(b)
        if kind == "splice":
            return a[: fi + 1] + b[fi + 1 :]
        mid = self.factors[fi].ops[local][a[fi]][b[fi]]
        return a[:fi] + (mid,) + b[fi + 1 :]

    def rank(self, point: Sequence[int]) -> int:
        return tuple_rank(point, self.factor_orders)

    def unrank(self, rank: int) -> tuple[int, ...]:
        return tuple_unrank(rank, self.factor_orders)

    def materialize(self, cap: int = DEFAULT_TABLE_CAP) -> NGroupoid:
        """Build the full tables from the flat rule (for checks and exports)."""
        size = self.order
        if size > cap:
            raise CapacityError(f"carrier size {size} exceeds the table cap {cap}")
        carrier = tuple_carrier(self.factor_orders)
        ops = tuple(
            tuple(
                tuple(self.rank(self.apply(op, a, b)) for b in carrier) for a in carrier
            )
            for op in range(self.n_flat_ops)
        )
        return NGroupoid(size, ops)

    def describe(self) -> dict:
        """Sidecar description of the factor structure."""
        return {
            "factor_orders": list(self.factor_orders),
            "factor_ops": [f.n_ops for f in self.factors],
            "flat_ops": [
                {"kind": kind, "factor": fi} if kind == "splice"
                else {"kind": kind, "factor": fi, "local_op": local}
                for kind, fi, local in self.layout
            ],
        }


def parse_structure_spec(text: str) -> NGroupoid:
    """Parse a structure name: GA(n; d1,...,dn+1), band:n,m, bare:d, or ijk/xyz."""
    text = text.strip()
    m = _GA_RE.match(text)
    if m:
        n = int(m.group(1))
        dims = tuple(int(p) for p in m.group(2).split(","))
        if len(dims) != n + 1:
            raise ParseError(
                f"GA({n}; ...) needs {n + 1} coordinate bounds, got {len(dims)}"
            )
        return splicing_groupoid(SplicingSpec(dims))
    m = _BAND_RE.match(text)
    if m:
        return rectangular_band(int(m.group(1)), int(m.group(2))).as_ngroupoid()
    m = _BARE_RE.match(text)
    if m:
        return NGroupoid.bare(int(m.group(1)) + 1)
    if _looks_like_compact3(text):
        return parse_compact3(text).as_ngroupoid()
    raise ParseError(
        f"{text!r} is not a structure spec (expected GA(n; d1,...), band:n,m, bare:d, or ijk/xyz)"
    )


def _looks_like_compact3(text: str) -> bool:
    return len(text) == 7 and text[3] == "/"
