"""Multivalued functions A^n -> P(B) and the function-side closure operators.

Tables map input-tuple ranks to value bitmasks over the codomain.  The
image of a column family is the coordinatewise product of row values,
empty as soon as one row value is empty.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .universe import (
    ArityMismatchError,
    Relation,
    Universe,
    UniverseMismatchError,
    compose_tuple,
    iter_bits,
    tuple_rank,
    tuple_unrank,
)


@dataclass(frozen=True)
class MultiFunction:
    """An n-ary table from domain tuples to subsets of the codomain."""

    domain: Universe
    codomain: Universe
    arity: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError("function arity must be positive")
        if len(self.table) != self.domain.size**self.arity:
            raise ValueError(
                f"table has {len(self.table)} rows, expected "
                f"{self.domain.size ** self.arity}"
            )
        width = 1 << self.codomain.size
        if any(not 0 <= v < width for v in self.table):
            raise ValueError("table entry out of codomain range")

    def value(self, t: Sequence[int]) -> int:
        """Value bitmask at a domain tuple."""
        return self.table[tuple_rank(t, self.domain.size)]

    def value_set(self, t: Sequence[int]) -> frozenset[int]:
        return frozenset(iter_bits(self.value(t)))

    @property
    def is_total(self) -> bool:
        return all(v != 0 for v in self.table)

    @property
    def is_partial(self) -> bool:
        return all(v.bit_count() <= 1 for v in self.table)

    @property
    def is_single_valued(self) -> bool:
        return all(v.bit_count() == 1 for v in self.table)

    @property
    def is_empty_valued(self) -> bool:
        return all(v == 0 for v in self.table)

    def support_ranks(self) -> list[int]:
        return [r for r, v in enumerate(self.table) if v]

    def __repr__(self) -> str:
        rows = ", ".join(
            f"{tuple_unrank(r, self.arity, self.domain.size)}->"
            f"{{{','.join(str(b) for b in iter_bits(v))}}}"
            for r, v in enumerate(self.table)
        )
        return f"MultiFunction({self.arity}; {rows})"


def empty_valued(domain: Universe, codomain: Universe, arity: int) -> MultiFunction:
    """The n-ary function with empty value everywhere."""
    return MultiFunction(domain, codomain, arity, (0,) * domain.size**arity)


def single_valued(
    domain: Universe, codomain: Universe, arity: int, fn: Callable[..., int]
) -> MultiFunction:
    """Build a single-valued table from an ordinary function on indices."""
    table = []
    for r in range(domain.size**arity):
        t = tuple_unrank(r, arity, domain.size)
        table.append(1 << fn(*t))
    return MultiFunction(domain, codomain, arity, tuple(table))


@dataclass(frozen=True)
class FunctionClass:
    """A deduplicated class of multivalued functions with an explicit
    arity cap; every closure below is taken relative to the cap."""

    domain: Universe
    codomain: Universe
    arity_cap: int
    members: frozenset[MultiFunction]

    def __post_init__(self) -> None:
        if self.arity_cap < 1:
            raise ValueError("arity cap must be positive")
        for f in self.members:
            if f.domain is not self.domain or f.codomain is not self.codomain:
                raise UniverseMismatchError(f"member over wrong universes: {f!r}")
            if f.arity > self.arity_cap:
                raise ValueError(f"member arity {f.arity} above cap {self.arity_cap}")

    def of_arity(self, n: int) -> list[MultiFunction]:
        return sorted(
            (f for f in self.members if f.arity == n), key=lambda f: f.table
        )

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, f: MultiFunction) -> bool:
        return f in self.members


def function_class(
    domain: Universe,
    codomain: Universe,
    arity_cap: int,
    members: Iterable[MultiFunction] = (),
) -> FunctionClass:
    return FunctionClass(domain, codomain, arity_cap, frozenset(members))


def image_of_columns(
    f: MultiFunction, columns: Sequence[Sequence[int]]
) -> Relation:
    """Product relation of f's values along the rows of a column family.

    Columns are m-tuples over the domain, one per function argument; the
    result is the m-ary relation whose i-th coordinate ranges over the
    value of f at row i.  Empty as soon as one row value is empty.
    """
    if len(columns) != f.arity:
        raise ArityMismatchError(
            f"{len(columns)} columns for an {f.arity}-ary function"
        )
    m = len(columns[0])
    if any(len(c) != m for c in columns):
        raise ArityMismatchError("columns of unequal arity")
    size_a = f.domain.size
    size_b = f.codomain.size
    masks = []
    for i in range(m):
        row = tuple(c[i] for c in columns)
        v = f.table[tuple_rank(row, size_a)]
        if v == 0:
            return Relation(f.codomain, m, 0)
        masks.append(v)
    ranks = [0]
    for v in masks:
        values = list(iter_bits(v))
        ranks = [r * size_b + b for r in ranks for b in values]
    bits = 0
    for r in ranks:
        bits |= 1 << r
    return Relation(f.codomain, m, bits)


def image_of_relation(f: MultiFunction, rel: Relation) -> Relation:
    """Union of image_of_columns over all column choices from rel.

    Enumerates row assignments over the support of f instead of raw
    column choices when that is cheaper; the two sweeps cover exactly
    the non-empty products.
    """
    if rel.universe is not f.domain:
        raise UniverseMismatchError(
            f"relation over {rel.universe.name}, function domain {f.domain.name}"
        )
    m = rel.arity
    n = f.arity
    if rel.is_empty:
        return Relation(f.codomain, m, 0)
    size_a = f.domain.size
    size_b = f.codomain.size
    supp = f.support_ranks()
    bits = 0
    if len(supp) ** m <= len(rel) ** n:
        rows = [tuple_unrank(r, n, size_a) for r in supp]
        values = [f.table[r] for r in supp]
        for choice in itertools.product(range(len(rows)), repeat=m):
            ok = True
            for t in range(n):
                col = tuple(rows[i][t] for i in choice)
                if not rel.bits >> tuple_rank(col, size_a) & 1:
                    ok = False
                    break
            if not ok:
                continue
            ranks = [0]
            for i in choice:
                vals = list(iter_bits(values[i]))
                ranks = [r * size_b + b for r in ranks for b in vals]
            for r in ranks:
                bits |= 1 << r
    else:
        member_tuples = rel.members()
        for cols in itertools.product(member_tuples, repeat=n):
            bits |= image_of_columns(f, cols).bits
    return Relation(f.codomain, m, bits)


def is_value_restriction(g: MultiFunction, f: MultiFunction) -> bool:
    """Pointwise subset test g(a) <= f(a)."""
    if g.domain is not f.domain or g.codomain is not f.codomain:
        raise UniverseMismatchError("value restriction across universes")
    if g.arity != f.arity:
        raise ArityMismatchError(f"arity {g.arity} vs {f.arity}")
    return all(gv & ~fv == 0 for gv, fv in zip(g.table, f.table))


def _submasks(mask: int) -> list[int]:
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            return out
        sub = (sub - 1) & mask


def substitution_instances(f: MultiFunction, arity: int) -> set[MultiFunction]:
    """All functions obtained from f by an index map plus a value
    restriction: the g of the target arity with g(a) <= f(a o l) for
    some map l."""
    if arity < 1:
        raise ValueError("target arity must be positive")
    size_a = f.domain.size
    points = [tuple_unrank(r, arity, size_a) for r in range(size_a**arity)]
    out: set[MultiFunction] = set()
    for l in itertools.product(range(arity), repeat=f.arity):
        gmax = tuple(
            f.table[tuple_rank(compose_tuple(a, l), size_a)] for a in points
        )
        for table in itertools.product(*[_submasks(v) for v in gmax]):
            out.add(MultiFunction(f.domain, f.codomain, arity, table))
    return out


def substitution_closure(cls: FunctionClass) -> FunctionClass:
    """Smallest class containing cls closed under restrictive variable
    substitution, up to the arity cap.  One sweep suffices because
    substitution instances compose."""
    members = set(cls.members)
    for f in cls.members:
        for m in range(1, cls.arity_cap + 1):
            members |= substitution_instances(f, m)
    return FunctionClass(cls.domain, cls.codomain, cls.arity_cap, frozenset(members))


def total_substitution_closure(cls: FunctionClass) -> FunctionClass:
    """Like substitution_closure but only non-empty-valued instances are
    adjoined (the closure used on classes of total functions)."""
    members = set(cls.members)
    for f in cls.members:
        for m in range(1, cls.arity_cap + 1):
            members |= {g for g in substitution_instances(f, m) if g.is_total}
    return FunctionClass(cls.domain, cls.codomain, cls.arity_cap, frozenset(members))


_KIND_PREDICATES: dict[str, Callable[[MultiFunction], bool]] = {
    "all": lambda f: True,
    "total": lambda f: f.is_total,
    "partial": lambda f: f.is_partial,
    "single": lambda f: f.is_single_valued,
}


def covering_closure(cls: FunctionClass, kind: str = "all") -> FunctionClass:
    """Close under local coverings, then intersect with the requested
    sort of function.

    A candidate f of arity n joins when the class has n-ary members and
    every selection through f's non-empty values is realized pointwise
    inside a single n-ary member.  Over a finite domain it suffices to
    check the selection condition on the support of f; smaller finite
    restriction sets follow by projecting, larger ones hold vacuously.
    """
    try:
        keep = _KIND_PREDICATES[kind]
    except KeyError:
        raise ValueError(f"unknown covering kind {kind!r}") from None
    size_b = cls.codomain.size
    width = 1 << size_b
    members: set[MultiFunction] = set()
    for n in range(1, cls.arity_cap + 1):
        mem_n = cls.of_arity(n)
        if not mem_n:
            continue
        points = cls.domain.size**n
        if width**points > 1 << 22:
            raise ValueError("covering sweep too large for this universe")
        # cover[a][b]: bitmask of members whose value at point a contains b
        cover = [
            [
                sum(1 << i for i, g in enumerate(mem_n) if g.table[a] >> b & 1)
                for b in range(size_b)
            ]
            for a in range(points)
        ]
        for table in itertools.product(range(width), repeat=points):
            supp = [a for a in range(points) if table[a]]
            ok = True
            for selection in itertools.product(
                *[list(iter_bits(table[a])) for a in supp]
            ):
                alive = -1
                for a, b in zip(supp, selection):
                    alive &= cover[a][b]
                    if alive == 0:
                        break
                if alive == 0:
                    ok = False
                    break
            if ok:
                members.add(MultiFunction(cls.domain, cls.codomain, n, table))
    members |= set(cls.members)
    return FunctionClass(
        cls.domain,
        cls.codomain,
        cls.arity_cap,
        frozenset(f for f in members if keep(f)),
    )
