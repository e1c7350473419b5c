"""Finite carriers, tuples as maps, and bitset-backed relations.

A point of an m-th power is an ordinary Python tuple of element indices;
a tuple of arity m is exactly a unary map m -> carrier, so the builtin
type is the right representation.  Relations store their members as a
bitset over tuple ranks (row-major, position 0 most significant), which
gives O(1) membership and dense enumeration for the closure sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence


class ArityMismatchError(ValueError):
    """Operands disagree on arity (usually a malformed constraint or scheme)."""


class UniverseMismatchError(ValueError):
    """Operands live over different universes; no coercion is attempted."""


@dataclass(frozen=True)
class Universe:
    """A named finite carrier set with elements indexed 0..size-1."""

    name: str
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"universe {self.name!r} must be non-empty")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise ValueError(
                    f"universe {self.name!r}: {len(self.labels)} labels for "
                    f"{self.size} elements"
                )
            if len(set(self.labels)) != self.size:
                raise ValueError(f"universe {self.name!r}: duplicate labels")

    def label(self, index: int) -> str:
        if self.labels is not None:
            return self.labels[index]
        return str(index)

    def __repr__(self) -> str:  # keep reprs short in traces
        return f"Universe({self.name!r}, {self.size})"


def tuple_rank(t: Sequence[int], size: int) -> int:
    """Row-major rank of a tuple; position 0 is most significant."""
    rank = 0
    for value in t:
        if not 0 <= value < size:
            raise ValueError(f"entry {value} out of range for size {size}")
        rank = rank * size + value
    return rank


def tuple_unrank(rank: int, arity: int, size: int) -> tuple[int, ...]:
    """Inverse of tuple_rank."""
    if not 0 <= rank < size**arity:
        raise ValueError(f"rank {rank} out of range for size {size}, arity {arity}")
    out = [0] * arity
    for i in range(arity - 1, -1, -1):
        rank, out[i] = divmod(rank, size)
    return tuple(out)


def compose_tuple(a: Sequence[int], h: Sequence[int]) -> tuple[int, ...]:
    """Concatenation a o h: result(i) = a(h(i))."""
    m = len(a)
    for e in h:
        if not 0 <= e < m:
            raise ValueError(f"map entry {e} out of range for arity {m}")
    return tuple(a[e] for e in h)


def extend_compose(
    a: Sequence[int], sigma: Sequence[int] | Mapping[int, int], h: Sequence[int]
) -> tuple[int, ...]:
    """Concatenation of a piecewise sum with an index map: (a + sigma) o h.

    Entries of h below len(a) address positions of a; entry len(a)+k
    addresses the k-th indeterminate, whose value sigma must supply.
    With no indeterminate entries this coincides with compose_tuple.
    """
    m = len(a)
    out = []
    for e in h:
        if e < m:
            out.append(a[e])
        else:
            try:
                out.append(sigma[e - m])
            except (IndexError, KeyError):
                raise ValueError(f"no binding for indeterminate {e - m}") from None
    return tuple(out)


def iter_bits(bits: int) -> Iterator[int]:
    """Indices of the set bits, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class Relation:
    """An m-ary relation, arity-tagged so empty relations of different
    arities are distinct values."""

    universe: Universe
    arity: int
    bits: int

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError("relation arity must be positive")
        if not 0 <= self.bits < 1 << self.universe.size**self.arity:
            raise ValueError("relation bitset out of range")

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    def __len__(self) -> int:
        return self.bits.bit_count()

    def member_ranks(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def members(self) -> list[tuple[int, ...]]:
        size = self.universe.size
        return [tuple_unrank(r, self.arity, size) for r in iter_bits(self.bits)]

    def contains(self, t: Sequence[int]) -> bool:
        return bool(self.bits >> tuple_rank(t, self.universe.size) & 1)

    def _check(self, other: "Relation") -> None:
        if self.universe is not other.universe:
            raise UniverseMismatchError(
                f"{self.universe.name} vs {other.universe.name}"
            )
        if self.arity != other.arity:
            raise ArityMismatchError(f"arity {self.arity} vs {other.arity}")

    def union(self, other: "Relation") -> "Relation":
        self._check(other)
        return Relation(self.universe, self.arity, self.bits | other.bits)

    def intersect(self, other: "Relation") -> "Relation":
        self._check(other)
        return Relation(self.universe, self.arity, self.bits & other.bits)

    def difference(self, other: "Relation") -> "Relation":
        self._check(other)
        return Relation(self.universe, self.arity, self.bits & ~other.bits)

    def remove(self, t: Sequence[int]) -> "Relation":
        rank = tuple_rank(t, self.universe.size)
        return Relation(self.universe, self.arity, self.bits & ~(1 << rank))

    def is_subset(self, other: "Relation") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __repr__(self) -> str:
        body = ", ".join(str(t) for t in self.members())
        return f"Relation({self.universe.name}, {self.arity}, {{{body}}})"


def relation_from_tuples(
    universe: Universe, arity: int, tuples: Sequence[Sequence[int]]
) -> Relation:
    bits = 0
    for t in tuples:
        if len(t) != arity:
            raise ArityMismatchError(f"tuple {tuple(t)} is not {arity}-ary")
        bits |= 1 << tuple_rank(t, universe.size)
    return Relation(universe, arity, bits)


def empty_relation(universe: Universe, arity: int) -> Relation:
    return Relation(universe, arity, 0)


def full_relation(universe: Universe, arity: int) -> Relation:
    return Relation(universe, arity, (1 << universe.size**arity) - 1)


def equality_relation(universe: Universe) -> Relation:
    bits = 0
    for x in range(universe.size):
        bits |= 1 << tuple_rank((x, x), universe.size)
    return Relation(universe, 2, bits)
