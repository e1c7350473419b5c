"""Constraints, minor formation schemes, conjunctive minors, and the
bounded constraint-side closures.

The closures are least fixpoints within explicit bounds (family size,
target arity, indeterminate count).  Internally a closed set is kept as
the antichain of its maximal elements under the relaxation order
(shrink antecedent, grow consequent); forming minors from maximal
elements loses nothing because tight minor formation is monotone in
every coordinate of the family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .universe import (
    ArityMismatchError,
    Relation,
    Universe,
    UniverseMismatchError,
    extend_compose,
    tuple_unrank,
)


@dataclass(frozen=True)
class Constraint:
    """An arity-matched antecedent/consequent pair of relations."""

    antecedent: Relation
    consequent: Relation

    def __post_init__(self) -> None:
        if self.antecedent.arity != self.consequent.arity:
            raise ArityMismatchError(
                f"antecedent arity {self.antecedent.arity} vs consequent "
                f"arity {self.consequent.arity}"
            )

    @property
    def arity(self) -> int:
        return self.antecedent.arity

    def __repr__(self) -> str:
        return f"Constraint({self.antecedent!r}, {self.consequent!r})"


@dataclass(frozen=True)
class Scheme:
    """A minor formation scheme: target arity, indeterminate count, and
    one index map per source.

    Map entries below `target` address target positions; entry
    target + k addresses the k-th indeterminate.
    """

    target: int
    indeterminates: int
    sources: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.target < 1:
            raise ValueError("scheme target must be positive")
        if self.indeterminates < 0:
            raise ValueError("indeterminate count must be non-negative")
        if not self.sources:
            raise ValueError("scheme needs a non-empty source family")
        bound = self.target + self.indeterminates
        for h in self.sources:
            if not h:
                raise ValueError("source arity must be positive")
            if any(not 0 <= e < bound for e in h):
                raise ValueError(f"map entry out of range in {h}")

    @property
    def is_simple(self) -> bool:
        return self.indeterminates == 0

    def source_arities(self) -> tuple[int, ...]:
        return tuple(len(h) for h in self.sources)


def identity_scheme(arity: int, sources: int = 1) -> Scheme:
    return Scheme(arity, 0, (tuple(range(arity)),) * sources)


def canonical_scheme(scheme: Scheme) -> Scheme:
    """Canonical form: sources sorted, indeterminates renamed minimally.

    Minimizes over indeterminate permutations, so schemes differing only
    by source order or indeterminate naming collapse together.
    """
    m, v = scheme.target, scheme.indeterminates
    used = sorted({e - m for h in scheme.sources for e in h if e >= m})
    best: tuple[tuple[int, ...], ...] | None = None
    for perm in itertools.permutations(range(len(used))):
        rename = {m + old: m + perm[i] for i, old in enumerate(used)}
        sources = tuple(
            sorted(tuple(rename.get(e, e) for e in h) for h in scheme.sources)
        )
        if best is None or sources < best:
            best = sources
    assert best is not None
    return Scheme(m, len(used), best)


def compose_schemes(outer: Scheme, inner: Sequence[Scheme]) -> Scheme:
    """Scheme of a minor-of-minors: plug one inner scheme into each
    outer source, with the inner indeterminate sets renamed apart."""
    if len(inner) != len(outer.sources):
        raise ArityMismatchError(
            f"{len(inner)} inner schemes for {len(outer.sources)} sources"
        )
    m, v = outer.target, outer.indeterminates
    offsets = []
    total = v
    for j, s in enumerate(inner):
        if s.target != len(outer.sources[j]):
            raise ArityMismatchError(
                f"inner scheme {j} has target {s.target}, source arity is "
                f"{len(outer.sources[j])}"
            )
        offsets.append(total)
        total += s.indeterminates
    sources = []
    for j, s in enumerate(inner):
        hj = outer.sources[j]
        nj = s.target
        for hi in s.sources:
            entries = []
            for e in hi:
                if e < nj:
                    entries.append(hj[e])
                else:
                    entries.append(m + offsets[j] + (e - nj))
            sources.append(tuple(entries))
    return Scheme(m, total, tuple(sources))


def is_relaxation(c: Constraint, c0: Constraint) -> bool:
    """Antecedent shrinks, consequent grows."""
    if c.arity != c0.arity:
        raise ArityMismatchError(f"arity {c.arity} vs {c0.arity}")
    return c.antecedent.is_subset(c0.antecedent) and c0.consequent.is_subset(
        c.consequent
    )


def is_finite_relaxation(c: Constraint, c0: Constraint) -> bool:
    """Over finite universes every relaxation has a finite antecedent, so
    this coincides with is_relaxation; kept as a named operation."""
    return is_relaxation(c, c0)


def _check_family(family: Sequence[Constraint], scheme: Scheme) -> tuple[Universe, Universe]:
    if len(family) != len(scheme.sources):
        raise ArityMismatchError(
            f"family of {len(family)} for {len(scheme.sources)} sources"
        )
    a = family[0].antecedent.universe
    b = family[0].consequent.universe
    for c, h in zip(family, scheme.sources):
        if c.arity != len(h):
            raise ArityMismatchError(
                f"source arity {len(h)} vs constraint arity {c.arity}"
            )
        if c.antecedent.universe is not a or c.consequent.universe is not b:
            raise UniverseMismatchError("family members over different universes")
    return a, b


def _tight_side(
    relations: Sequence[Relation],
    scheme: Scheme,
    universe: Universe,
) -> Relation:
    m, v = scheme.target, scheme.indeterminates
    size = universe.size
    sigmas = [tuple_unrank(r, v, size) for r in range(size**v)] if v else [()]
    bits = 0
    for rank in range(size**m):
        t = tuple_unrank(rank, m, size)
        for sigma in sigmas:
            if all(
                rel.bits >> _rank_compose(t, sigma, h, size) & 1
                for rel, h in zip(relations, scheme.sources)
            ):
                bits |= 1 << rank
                break
    return Relation(universe, m, bits)


def _rank_compose(
    t: tuple[int, ...], sigma: tuple[int, ...], h: tuple[int, ...], size: int
) -> int:
    m = len(t)
    rank = 0
    for e in h:
        rank = rank * size + (t[e] if e < m else sigma[e - m])
    return rank


def tight_conjunctive_minor(family: Sequence[Constraint], scheme: Scheme) -> Constraint:
    """The minor whose antecedent and consequent are exactly the tuples
    admitting a Skolem assignment into every family member.

    Skolem maps are found by exhaustive search over all assignments of
    universe elements to the scheme's indeterminates.
    """
    a, b = _check_family(family, scheme)
    antecedent = _tight_side([c.antecedent for c in family], scheme, a)
    consequent = _tight_side([c.consequent for c in family], scheme, b)
    return Constraint(antecedent, consequent)


def is_conjunctive_minor(
    c: Constraint, family: Sequence[Constraint], scheme: Scheme
) -> bool:
    """c is a conjunctive minor of the family via the scheme exactly when
    it relaxes the tight minor."""
    return is_relaxation(c, tight_conjunctive_minor(family, scheme))


def is_weak_conjunctive_minor(
    c: Constraint, family: Sequence[Constraint], scheme: Scheme
) -> bool:
    if not scheme.is_simple:
        raise ValueError("weak conjunctive minors require a simple scheme")
    return is_conjunctive_minor(c, family, scheme)


@dataclass(frozen=True)
class Bounds:
    """Finitization knobs for the constraint-side closures."""

    m_max: int
    n_max: int
    j_max: int = 2
    v_max: int = 2

    def __post_init__(self) -> None:
        if self.m_max < 1 or self.n_max < 1 or self.j_max < 1 or self.v_max < 0:
            raise ValueError("bounds below their minimal sensible values")


@dataclass(frozen=True)
class ConstraintSet:
    """A deduplicated, arity-capped set of constraints.

    Closure results additionally carry the antichain of maximal members
    (`generators`), a `closed_under` tag, and the bounds used; the tag
    records that the set is a lower approximation of the unbounded
    closure.
    """

    universe_a: Universe
    universe_b: Universe
    m_max: int
    members: frozenset[Constraint]
    generators: tuple[Constraint, ...] | None = field(default=None, compare=False)
    closed_under: str | None = field(default=None, compare=False)
    bounds: Bounds | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for c in self.members:
            if c.arity > self.m_max:
                raise ValueError(f"member arity {c.arity} above cap {self.m_max}")
            if (
                c.antecedent.universe is not self.universe_a
                or c.consequent.universe is not self.universe_b
            ):
                raise UniverseMismatchError("constraint over wrong universes")

    def of_arity(self, m: int) -> list[Constraint]:
        return sorted(
            (c for c in self.members if c.arity == m),
            key=lambda c: (c.antecedent.bits, c.consequent.bits),
        )

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, c: Constraint) -> bool:
        if self.generators is not None:
            return any(
                c.arity == g.arity
                and c.antecedent.bits & ~g.antecedent.bits == 0
                and g.consequent.bits & ~c.consequent.bits == 0
                for g in self.generators
            )
        return c in self.members

    def work_members(self) -> tuple[Constraint, ...]:
        """Generators when present, else all members; enough for any
        sweep that is monotone under relaxation."""
        if self.generators is not None:
            return self.generators
        return tuple(sorted(
            self.members,
            key=lambda c: (c.arity, c.antecedent.bits, c.consequent.bits),
        ))


def constraint_set(
    universe_a: Universe,
    universe_b: Universe,
    m_max: int,
    constraints: Iterable[Constraint] = (),
) -> ConstraintSet:
    return ConstraintSet(universe_a, universe_b, m_max, frozenset(constraints))


def empty_constraint(a: Universe, b: Universe) -> Constraint:
    return Constraint(Relation(a, 1, 0), Relation(b, 1, 0))


def trivial_constraint(a: Universe, b: Universe) -> Constraint:
    return Constraint(
        Relation(a, 1, (1 << a.size) - 1), Relation(b, 1, (1 << b.size) - 1)
    )


def equality_constraint(a: Universe, b: Universe) -> Constraint:
    from .universe import equality_relation

    return Constraint(equality_relation(a), equality_relation(b))


class _Antichain:
    """Maximal elements per arity under the relaxation order."""

    def __init__(self) -> None:
        self.by_arity: dict[int, list[tuple[int, int]]] = {}

    def dominated(self, m: int, r: int, s: int) -> bool:
        for r0, s0 in self.by_arity.get(m, ()):
            if r | r0 == r0 and s & s0 == s0:
                return True
        return False

    def insert(self, m: int, r: int, s: int) -> bool:
        gens = self.by_arity.setdefault(m, [])
        for r0, s0 in gens:
            if r | r0 == r0 and s & s0 == s0:
                return False
        gens[:] = [
            (r0, s0) for r0, s0 in gens if not (r0 | r == r and s0 & s == s)
        ]
        gens.append((r, s))
        return True


def _sub_masks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _closure_engine(
    seeds: Iterable[Constraint],
    a: Universe,
    b: Universe,
    bounds: Bounds,
    v: int,
) -> _Antichain:
    size_a, size_b = a.size, b.size
    sigmas_a = [tuple_unrank(r, v, size_a) for r in range(size_a**v)] if v else [()]
    sigmas_b = [tuple_unrank(r, v, size_b) for r in range(size_b**v)] if v else [()]
    chain = _Antichain()
    frontier: set[tuple[int, int, int]] = set()
    for c in seeds:
        key = (c.arity, c.antecedent.bits, c.consequent.bits)
        if chain.insert(*key):
            frontier.add(key)
    tuples_a = {
        m: [tuple_unrank(r, m, size_a) for r in range(size_a**m)]
        for m in range(1, bounds.m_max + 1)
    }
    tuples_b = {
        m: [tuple_unrank(r, m, size_b) for r in range(size_b**m)]
        for m in range(1, bounds.m_max + 1)
    }
    rounds = 0
    while frontier:
        rounds += 1
        if rounds > 256:  # fixpoints at desk scale converge in a few rounds
            raise RuntimeError("closure did not converge")
        next_frontier: set[tuple[int, int, int]] = set()
        for m in range(1, bounds.m_max + 1):
            pts_a, pts_b = tuples_a[m], tuples_b[m]
            # one evaluated pair per (index map, generator), deduplicated
            # by its sigma-mask vectors
            pair_info: dict[tuple, bool] = {}
            for gm, gens in sorted(chain.by_arity.items()):
                for gr, gs in list(gens):
                    gen_new = (gm, gr, gs) in frontier
                    for h in itertools.product(range(m + v), repeat=gm):
                        vec_r = tuple(
                            sum(
                                1 << k
                                for k, sg in enumerate(sigmas_a)
                                if gr >> _rank_compose(t, sg, h, size_a) & 1
                            )
                            for t in pts_a
                        )
                        vec_s = tuple(
                            sum(
                                1 << k
                                for k, sg in enumerate(sigmas_b)
                                if gs >> _rank_compose(t, sg, h, size_b) & 1
                            )
                            for t in pts_b
                        )
                        key = (vec_r, vec_s)
                        pair_info[key] = pair_info.get(key, False) or gen_new
            pairs = list(pair_info.items())
            empty_known = chain.dominated(m, 0, 0)
            for count in range(1, bounds.j_max + 1):
                for combo in itertools.combinations(range(len(pairs)), count):
                    if not any(pairs[i][1] for i in combo):
                        continue  # no fresh generator in this family
                    r_bits = 0
                    for idx, t in enumerate(pts_a):
                        mask = -1
                        for i in combo:
                            mask &= pairs[i][0][0][idx]
                            if mask == 0:
                                break
                        if mask:
                            r_bits |= 1 << idx
                    if r_bits == 0 and empty_known:
                        continue
                    s_bits = 0
                    for idx in range(len(pts_b)):
                        mask = -1
                        for i in combo:
                            mask &= pairs[i][0][1][idx]
                            if mask == 0:
                                break
                        if mask:
                            s_bits |= 1 << idx
                    if chain.insert(m, r_bits, s_bits):
                        next_frontier.add((m, r_bits, s_bits))
        frontier = next_frontier
    return chain


def _materialize(
    chain: _Antichain, a: Universe, b: Universe, m_max: int
) -> frozenset[Constraint]:
    total = 0
    members: set[Constraint] = set()
    for m in range(1, m_max + 1):
        width_b = (1 << b.size**m) - 1
        seen: set[tuple[int, int]] = set()
        for r0, s0 in chain.by_arity.get(m, ()):
            grow = width_b & ~s0
            for r in _sub_masks(r0):
                for extra in _sub_masks(grow):
                    seen.add((r, s0 | extra))
        total += len(seen)
        if total > 1 << 22:
            raise ValueError(
                "closure too large to materialize; lower m_max or universe sizes"
            )
        for r, s in seen:
            members.add(Constraint(Relation(a, m, r), Relation(b, m, s)))
    return frozenset(members)


def _closure(T: ConstraintSet, bounds: Bounds, v: int, tag: str) -> ConstraintSet:
    if bounds.m_max < T.m_max:
        raise ValueError("closure bounds below the input set's arity cap")
    chain = _closure_engine(
        T.work_members(), T.universe_a, T.universe_b, bounds, v
    )
    members = _materialize(chain, T.universe_a, T.universe_b, bounds.m_max)
    generators = tuple(
        Constraint(
            Relation(T.universe_a, m, r), Relation(T.universe_b, m, s)
        )
        for m in sorted(chain.by_arity)
        for r, s in sorted(chain.by_arity[m])
    )
    return ConstraintSet(
        T.universe_a,
        T.universe_b,
        bounds.m_max,
        members,
        generators=generators,
        closed_under=tag,
        bounds=bounds,
    )


def weak_minor_closure(T: ConstraintSet, bounds: Bounds) -> ConstraintSet:
    """Bounded fixpoint under weak conjunctive minor formation plus
    relaxations.  A lower approximation of the unbounded closure; the
    result records the bounds used."""
    return _closure(T, bounds, 0, "wcm")


def minor_closure(T: ConstraintSet, bounds: Bounds) -> ConstraintSet:
    """Bounded fixpoint under general conjunctive minor formation (with
    up to v_max indeterminates) plus relaxations."""
    return _closure(T, bounds, bounds.v_max, "cm")


def local_closure(T: ConstraintSet) -> ConstraintSet:
    """Identity over finite universes: every constraint is a finite
    relaxation of itself, so each set already contains every constraint
    all of whose finite relaxations it contains."""
    return T
