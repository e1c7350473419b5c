"""Bounded exhaustive enumerators and seeded random generators.

Streams are produced in canonical rank order so oracle sweeps and
golden outputs are reproducible; samplers are pure functions of their
seed (uniform over tables, uniform over relation bitsets).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .constraint import Bounds, Constraint, ConstraintSet, Scheme, canonical_scheme
from .multifunction import FunctionClass, MultiFunction
from .universe import Relation, Universe


class BudgetExceededError(RuntimeError):
    """The requested enumeration is larger than the configured budget."""


@dataclass(frozen=True)
class Budget:
    max_tables: int = 1 << 20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_tables < 1:
            raise ValueError("budget must allow at least one table")


def _guard(count: int, budget: Budget, what: str) -> None:
    if count > budget.max_tables:
        raise BudgetExceededError(
            f"{count} {what} exceed the budget of {budget.max_tables}; "
            "use sampling instead"
        )


def all_functions(
    domain: Universe, codomain: Universe, arity: int, budget: Budget = Budget()
) -> Iterator[MultiFunction]:
    points = domain.size**arity
    width = 1 << codomain.size
    _guard(width**points, budget, "function tables")
    for table in itertools.product(range(width), repeat=points):
        yield MultiFunction(domain, codomain, arity, table)


def all_relations(
    universe: Universe, arity: int, budget: Budget = Budget()
) -> Iterator[Relation]:
    count = 1 << universe.size**arity
    _guard(count, budget, "relations")
    for bits in range(count):
        yield Relation(universe, arity, bits)


def all_constraints(
    universe_a: Universe,
    universe_b: Universe,
    arity: int,
    budget: Budget = Budget(),
) -> Iterator[Constraint]:
    count_a = 1 << universe_a.size**arity
    count_b = 1 << universe_b.size**arity
    _guard(count_a * count_b, budget, "constraints")
    for r in range(count_a):
        for s in range(count_b):
            yield Constraint(
                Relation(universe_a, arity, r), Relation(universe_b, arity, s)
            )


def all_schemes(
    bounds: Bounds,
    source_arity_max: int | None = None,
    budget: Budget = Budget(),
) -> Iterator[Scheme]:
    """Canonical list of schemes within the bounds, deduplicated up to
    source order and indeterminate renaming."""
    n_max = source_arity_max if source_arity_max is not None else bounds.n_max
    seen: set[tuple[int, int, tuple[tuple[int, ...], ...]]] = set()
    emitted = 0
    for target in range(1, bounds.m_max + 1):
        for v in range(bounds.v_max + 1):
            entry_range = range(target + v)
            for count in range(1, bounds.j_max + 1):
                arity_choices = itertools.combinations_with_replacement(
                    range(1, n_max + 1), count
                )
                for arities in arity_choices:
                    maps_per_source = [
                        list(itertools.product(entry_range, repeat=n))
                        for n in arities
                    ]
                    for sources in itertools.product(*maps_per_source):
                        scheme = canonical_scheme(Scheme(target, v, tuple(sources)))
                        key = (scheme.target, scheme.indeterminates, scheme.sources)
                        if key in seen:
                            continue
                        seen.add(key)
                        emitted += 1
                        _guard(emitted, budget, "schemes")
                        yield scheme


def sample_function(
    domain: Universe, codomain: Universe, arity: int, seed: int
) -> MultiFunction:
    """Uniform over tables: each value mask drawn uniformly."""
    rng = random.Random(seed)
    return _random_function(domain, codomain, arity, rng)


def _random_function(
    domain: Universe, codomain: Universe, arity: int, rng: random.Random
) -> MultiFunction:
    points = domain.size**arity
    width = 1 << codomain.size
    table = tuple(rng.randrange(width) for _ in range(points))
    return MultiFunction(domain, codomain, arity, table)


def sample_class(
    domain: Universe,
    codomain: Universe,
    arity_cap: int,
    size: int,
    seed: int,
) -> FunctionClass:
    rng = random.Random(seed)
    members = set()
    for _ in range(size):
        arity = rng.randint(1, arity_cap)
        members.add(_random_function(domain, codomain, arity, rng))
    return FunctionClass(domain, codomain, arity_cap, frozenset(members))


def sample_relation(universe: Universe, arity: int, seed: int) -> Relation:
    rng = random.Random(seed)
    return Relation(universe, arity, rng.getrandbits(universe.size**arity))


def sample_constraint_set(
    universe_a: Universe,
    universe_b: Universe,
    m_max: int,
    size: int,
    seed: int,
) -> ConstraintSet:
    rng = random.Random(seed)
    members = set()
    for _ in range(size):
        arity = rng.randint(1, m_max)
        r = rng.getrandbits(universe_a.size**arity)
        s = rng.getrandbits(universe_b.size**arity)
        members.add(
            Constraint(
                Relation(universe_a, arity, r), Relation(universe_b, arity, s)
            )
        )
    return ConstraintSet(universe_a, universe_b, m_max, frozenset(members))
