"""Satisfaction, the four Galois connections, constructive separating
objects, and the factorization verifiers.

The constraint side of each connection is represented intensionally by
minimal consequents: for a class M and an antecedent R, the union of the
images gR over members g is the smallest consequent making (R, .) hold
for all of M, so membership of (R, S) is a superset test.

Separators follow the constructive proofs: a violated-product constraint
for a function outside a covering/substitution-closed class, and a
support-restricted witness function for a constraint outside a bounded
minor closure.  Bounded closures can under-approximate, so a witness
that fails replay yields an inconclusive verdict, never a certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .constraint import (
    Bounds,
    Constraint,
    ConstraintSet,
    Scheme,
    constraint_set,
    empty_constraint,
    equality_constraint,
    minor_closure,
    trivial_constraint,
    weak_minor_closure,
)
from .enumerators import Budget, all_functions
from .multifunction import (
    FunctionClass,
    MultiFunction,
    covering_closure,
    empty_valued,
    image_of_columns,
    image_of_relation,
    substitution_closure,
    total_substitution_closure,
)
from .universe import (
    Relation,
    Universe,
    UniverseMismatchError,
    iter_bits,
    tuple_rank,
    tuple_unrank,
)

_KIND_PREDICATES: dict[str, Callable[[MultiFunction], bool]] = {
    "all": lambda f: True,
    "total": lambda f: f.is_total,
    "partial": lambda f: f.is_partial,
    "single": lambda f: f.is_single_valued,
}


@lru_cache(maxsize=1 << 18)
def _image_bits(f: MultiFunction, rel: Relation) -> int:
    # images of the same function along the same small antecedent recur
    # across every sweep in the verifiers; both arguments hash cheaply
    return image_of_relation(f, rel).bits


def satisfies(f: MultiFunction, c: Constraint) -> bool:
    """fR is contained in S."""
    if c.antecedent.universe is not f.domain:
        raise UniverseMismatchError("constraint antecedent not over f's domain")
    if c.consequent.universe is not f.codomain:
        raise UniverseMismatchError("constraint consequent not over f's codomain")
    return _image_bits(f, c.antecedent) & ~c.consequent.bits == 0


def satisfies_all(f: MultiFunction, T: ConstraintSet) -> bool:
    """Satisfaction against a set; maximal members suffice because
    satisfaction is preserved under relaxation."""
    return all(satisfies(f, c) for c in T.work_members())


class SatisfactionTable:
    """Minimal consequents of the constraints satisfied by a whole class.

    Exact tables are kept for antecedents up to a size limit; larger
    antecedents decompose into their bounded subsets (an n-ary member
    only ever samples n columns of an antecedent at a time), with the
    results cached.
    """

    def __init__(
        self,
        cls: FunctionClass,
        m_max: int,
        antecedent_limit: int | None = None,
    ):
        self.cls = cls
        self.m_max = m_max
        limit = antecedent_limit if antecedent_limit is not None else 1
        arities = [f.arity for f in cls.members]
        if arities:
            limit = max(limit, max(arities))
        self.limit = limit
        self._small: dict[tuple[int, int], int] = {}
        self._cache: dict[tuple[int, int], int] = {}
        a = cls.domain
        members = sorted(cls.members, key=lambda f: (f.arity, f.table))
        for m in range(1, m_max + 1):
            count = a.size**m
            for size in range(1, min(self.limit, count) + 1):
                for combo in itertools.combinations(range(count), size):
                    bits = 0
                    for r in combo:
                        bits |= 1 << r
                    rel = Relation(a, m, bits)
                    s = 0
                    for f in members:
                        s |= _image_bits(f, rel)
                    self._small[(m, bits)] = s

    def minimal_consequent(self, antecedent: Relation) -> Relation:
        b = self.cls.codomain
        m = antecedent.arity
        if m > self.m_max:
            raise ValueError(f"arity {m} above table cap {self.m_max}")
        bits = antecedent.bits
        if bits == 0:
            return Relation(b, m, 0)
        if bits.bit_count() <= self.limit:
            return Relation(b, m, self._small[(m, bits)])
        key = (m, bits)
        if key not in self._cache:
            ranks = list(iter_bits(bits))
            s = 0
            for size in range(1, self.limit + 1):
                for combo in itertools.combinations(ranks, size):
                    sub = 0
                    for r in combo:
                        sub |= 1 << r
                    s |= self._small[(m, sub)]
            self._cache[key] = s
        return Relation(b, m, self._cache[key])

    def contains(self, c: Constraint) -> bool:
        s_min = self.minimal_consequent(c.antecedent)
        return s_min.bits & ~c.consequent.bits == 0

    def satisfied_by(self, f: MultiFunction) -> bool:
        """Does f satisfy every constraint of arity up to the cap that
        the class satisfies?  Antecedents larger than f's arity are
        implied by their subsets, so the small tables decide this."""
        if f.arity > self.limit:
            raise ValueError(
                f"table antecedent limit {self.limit} below arity {f.arity}"
            )
        a = self.cls.domain
        for (m, bits), s in self._small.items():
            if bits.bit_count() > f.arity:
                continue
            rel = Relation(a, m, bits)
            if _image_bits(f, rel) & ~s:
                return False
        return True


def satisfied_constraints(
    cls: FunctionClass, m_max: int, antecedent_limit: int | None = None
) -> SatisfactionTable:
    """Intensional form of the set of constraints satisfied by every
    member of the class."""
    return SatisfactionTable(cls, m_max, antecedent_limit)


def satisfying_predicate(
    T: ConstraintSet | Iterable[Constraint], kind: str = "all"
) -> Callable[[MultiFunction], bool]:
    """Lazy membership test, usable when enumeration is over budget."""
    keep = _KIND_PREDICATES[kind]
    if isinstance(T, ConstraintSet):
        members: Sequence[Constraint] = T.work_members()
    else:
        members = tuple(T)
    return lambda f: keep(f) and all(satisfies(f, c) for c in members)


def satisfying_functions(
    T: ConstraintSet,
    n_max: int,
    budget: Budget = Budget(),
    kind: str = "all",
) -> FunctionClass:
    """All functions up to the arity cap satisfying every constraint,
    filtered to the requested sort.  Raises BudgetExceededError on
    over-budget enumerations; fall back to satisfying_predicate then."""
    pred = satisfying_predicate(T, kind)
    members = []
    for n in range(1, n_max + 1):
        for f in all_functions(T.universe_a, T.universe_b, n, budget):
            if pred(f):
                members.append(f)
    return FunctionClass(T.universe_a, T.universe_b, n_max, frozenset(members))


@dataclass(frozen=True)
class SeparationReport:
    """Outcome of a separation attempt.

    `outside` carries a replay-checked witness; `inconclusive` means the
    bounded closure could not certify a choice point and records which
    bound should grow.  A bounded run never converts uncertainty into a
    verdict.
    """

    verdict: str
    witness: MultiFunction | None
    trace: dict
    bounds: Bounds | None = None

    def __post_init__(self) -> None:
        if self.verdict not in ("inside", "outside", "inconclusive"):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if (self.witness is not None) != (self.verdict == "outside"):
            raise ValueError("witness present iff verdict is outside")


def function_side_closure(cls: FunctionClass, kind: str = "all") -> FunctionClass:
    """Substitution closure then covering closure, seeded with the unary
    empty-valued function (or the total-only closures for the total and
    single-valued sorts)."""
    if kind in ("all", "partial"):
        e1 = empty_valued(cls.domain, cls.codomain, 1)
        seeded = FunctionClass(
            cls.domain, cls.codomain, cls.arity_cap, cls.members | {e1}
        )
        return covering_closure(substitution_closure(seeded), kind)
    if kind in ("total", "single"):
        return covering_closure(total_substitution_closure(cls), kind)
    raise ValueError(f"unknown kind {kind!r}")


def definability_closure(cls: FunctionClass) -> FunctionClass:
    """Alternate the substitution and covering closures to a joint
    fixpoint, seeded with the unary empty-valued function.

    One covering pass after a substitution pass need not be
    substitution-stable: a value-fat member can be locally covered while
    a substitution instance of it escapes the covering condition.  The
    separating-constraint construction assumes a class closed under both
    operators, which over a finite universe is this fixpoint.
    """
    e1 = empty_valued(cls.domain, cls.codomain, 1)
    current = FunctionClass(
        cls.domain, cls.codomain, cls.arity_cap, cls.members | {e1}
    )
    while True:
        stepped = covering_closure(substitution_closure(current))
        if stepped.members == current.members:
            return stepped
        current = stepped


def separating_constraint(cls: FunctionClass, f: MultiFunction) -> Constraint:
    """A constraint satisfied by every member of the class (and of its
    joint substitution/covering closure) but violated by f.

    The antecedent lists the columns of f's support in ascending rank
    order; the consequent is the union of the closure's same-arity
    images along those columns.  Raises when f lies inside the closure,
    where the construction has no foothold.
    """
    if f.domain is not cls.domain or f.codomain is not cls.codomain:
        raise UniverseMismatchError("function over wrong universes")
    if f.arity > cls.arity_cap:
        raise ValueError(f"function arity {f.arity} above cap {cls.arity_cap}")
    closure = definability_closure(cls)
    if f in closure.members:
        raise ValueError("function lies inside the closure; no separator exists")
    n = f.arity
    size_a = cls.domain.size
    supp = f.support_ranks()
    points = [tuple_unrank(r, n, size_a) for r in supp]
    m = len(points)
    columns = [tuple(p[t] for p in points) for t in range(n)]
    r_bits = 0
    for col in columns:
        r_bits |= 1 << tuple_rank(col, size_a)
    antecedent = Relation(cls.domain, m, r_bits)
    s_bits = 0
    for g in closure.of_arity(n):
        s_bits |= image_of_columns(g, columns).bits
    consequent = Relation(cls.codomain, m, s_bits)
    return Constraint(antecedent, consequent)


def _require_closed(
    T: ConstraintSet, tags: tuple[str, ...], needed: list[Constraint]
) -> None:
    if T.closed_under not in tags:
        raise ValueError(
            f"constraint set must be closed under {'/'.join(tags)}, "
            f"got {T.closed_under!r}"
        )
    for c in needed:
        if c not in T:
            raise ValueError("required base constraint missing from the set")


def _witness_from_rows(
    a: Universe,
    b: Universe,
    n: int,
    rows: Sequence[tuple[int, ...]],
    s: Sequence[int],
) -> MultiFunction:
    table = [0] * a.size**n
    for j, row in enumerate(rows):
        table[tuple_rank(row, a.size)] |= 1 << s[j]
    return MultiFunction(a, b, n, tuple(table))


def separating_function(
    T: ConstraintSet, c: Constraint, bounds: Bounds
) -> SeparationReport:
    """A function satisfying every member of a weak-minor-closed set and
    violating c.

    Built from c's antecedent and the rank-minimal tuple outside its
    consequent whose punctured-consequent constraint also avoids the
    set; the witness takes the excluded tuple's entries as values along
    the antecedent's rows and is empty-valued elsewhere.
    """
    a, b = T.universe_a, T.universe_b
    _require_closed(
        T, ("wcm", "cm"), [empty_constraint(a, b), trivial_constraint(a, b)]
    )
    if c in T:
        raise ValueError("constraint already inside the set; nothing to separate")
    m = c.arity
    F = c.antecedent
    s0 = c.consequent
    full_b = (1 << b.size**m) - 1
    if F.is_empty or s0.bits == full_b:
        raise ValueError(
            "set is not closed: empty-antecedent and full-consequent "
            "constraints must already belong to it"
        )
    chosen = None
    for s_rank in range(b.size**m):
        if s0.bits >> s_rank & 1:
            continue
        punctured = Constraint(F, Relation(b, m, full_b & ~(1 << s_rank)))
        if punctured not in T:
            chosen = s_rank
            break
    if chosen is None:
        return SeparationReport(
            "inconclusive",
            None,
            {
                "reason": "every punctured consequent lies inside; raise j_max",
                "constraint": c,
            },
            bounds,
        )
    s = tuple_unrank(chosen, m, b.size)
    points = F.members()
    n = len(points)
    rows = [tuple(p[t] for p in points) for t in range(m)]
    g = _witness_from_rows(a, b, n, rows, s)
    trace = {"antecedent": F, "excluded": s, "rows": rows, "columns": points}
    if satisfies_all(g, T) and not satisfies(g, c):
        return SeparationReport("outside", g, trace, bounds)
    return SeparationReport(
        "inconclusive",
        None,
        {
            "reason": "witness failed replay; raise bounds",
            "constraint": c,
            "attempt": g,
        },
        bounds,
    )


def separating_partial_function(
    T: ConstraintSet, c: Constraint, bounds: Bounds
) -> SeparationReport:
    """Same construction over a set containing the equality constraint;
    equal antecedent rows then force equal excluded-tuple entries, so
    the witness is partial."""
    a, b = T.universe_a, T.universe_b
    _require_closed(T, ("wcm", "cm"), [equality_constraint(a, b)])
    report = separating_function(T, c, bounds)
    if report.verdict == "outside" and not report.witness.is_partial:
        raise RuntimeError(
            "witness is not partial: the closure misses an equality minor, "
            "raise bounds"
        )
    return report


class TotalSeparationContext:
    """Reusable machinery for separating constraints with a fixed
    antecedent from a minor-closed set by a total function.

    The antecedent's rows are extended by every other domain tuple, so
    any witness has a value everywhere.  The punctured extended
    constraints exceed the arity cap by design and are never
    materialized: a candidate excluded tuple is ruled out exactly when
    some single maximal member pulls back onto the extended columns and
    misses it, which is the only pattern a member violation of the
    eventual witness can produce.  Weaker filtering would not hurt
    soundness (witnesses are replay-checked) but this filter makes the
    replay provably succeed, so inconclusive verdicts arise only when
    every candidate is ruled out.
    """

    def __init__(self, T: ConstraintSet, bounds: Bounds, antecedent: Relation):
        a, b = T.universe_a, T.universe_b
        self.T = T
        self.bounds = bounds
        self.antecedent = antecedent
        size_a, size_b = a.size, b.size
        points = antecedent.members()
        if not points:
            raise ValueError("antecedent must be non-empty")
        self.n = n = len(points)
        m = antecedent.arity
        rows = [tuple(p[t] for p in points) for t in range(m)]
        present = set(rows)
        missing = [
            t
            for r in range(size_a**n)
            if (t := tuple_unrank(r, n, size_a)) not in present
        ]
        self.rows_ext = rows_ext = rows + missing
        self.mu = mu = len(rows_ext)
        self.columns = columns = [
            tuple(row[t] for row in rows_ext) for t in range(n)
        ]
        # free_bits: candidates over B^mu not excluded by any single
        # maximal member pulled back along some index map
        total = size_b**mu
        free = (1 << total) - 1
        pos = _position_masks(mu, size_b)
        seen: set[tuple[tuple[int, ...], frozenset[int]]] = set()
        for gen in T.work_members():
            gm = gen.arity
            gr = gen.antecedent.bits
            gs = gen.consequent.bits
            if gr == 0:
                continue  # pullback antecedent empty, never covers the columns
            if gs == (1 << size_b**gm) - 1:
                continue  # pullback consequent full, never excludes
            for h in itertools.product(range(mu), repeat=gm):
                ok = True
                for col in columns:
                    rank = 0
                    for e in h:
                        rank = rank * size_a + col[e]
                    if not gr >> rank & 1:
                        ok = False
                        break
                if not ok:
                    continue
                positions = tuple(sorted(set(h)))
                allowed = frozenset(
                    vals
                    for vals in itertools.product(range(size_b), repeat=len(positions))
                    if gs
                    >> tuple_rank(
                        tuple(vals[positions.index(e)] for e in h), size_b
                    )
                    & 1
                )
                key = (positions, allowed)
                if key in seen:
                    continue
                seen.add(key)
                cylinder = 0
                for vals in allowed:
                    block = -1
                    for p, v in zip(positions, vals):
                        block &= pos[p][v]
                    cylinder |= block
                free &= cylinder
                if free == 0:
                    break
            if free == 0:
                break
        self.free_bits = free

    def separate(
        self, c: Constraint, require_partial: bool = False
    ) -> SeparationReport:
        T, bounds = self.T, self.bounds
        a, b = T.universe_a, T.universe_b
        size_b = b.size
        if c.antecedent != self.antecedent:
            raise ValueError("context built for a different antecedent")
        if c in T:
            raise ValueError(
                "constraint already inside the set; nothing to separate"
            )
        m = c.arity
        s0 = c.consequent
        if s0.bits == (1 << size_b**m) - 1:
            raise ValueError(
                "set is not closed: full-consequent constraints must "
                "already belong to it"
            )
        suffix = size_b ** (self.mu - m)
        block = (1 << suffix) - 1
        valid = 0
        for p_rank in range(size_b**m):
            if not s0.bits >> p_rank & 1:
                valid |= block << p_rank * suffix
        candidates = self.free_bits & valid
        if candidates == 0:
            return SeparationReport(
                "inconclusive",
                None,
                {
                    "reason": "every extended punctured candidate is "
                    "recognized inside; raise m_max or the universe is "
                    "too constrained",
                    "constraint": c,
                },
                bounds,
            )
        low = (candidates & -candidates).bit_length() - 1
        chosen = tuple_unrank(low, self.mu, size_b)
        g = _witness_from_rows(a, b, self.n, self.rows_ext, chosen)
        trace = {
            "antecedent": self.antecedent,
            "excluded": chosen,
            "rows": self.rows_ext,
            "columns": self.columns,
            "extension_arity": self.mu,
            "lift_scheme": Scheme(self.mu, 0, (tuple(range(m)),)),
        }
        if require_partial and not g.is_partial:
            raise RuntimeError(
                "witness is not partial: the closure misses an equality "
                "minor, raise bounds"
            )
        if satisfies_all(g, T) and not satisfies(g, c):
            return SeparationReport("outside", g, trace, bounds)
        return SeparationReport(
            "inconclusive",
            None,
            {
                "reason": "witness failed replay; raise bounds",
                "constraint": c,
                "attempt": g,
            },
            bounds,
        )


def _position_masks(mu: int, size: int) -> list[list[int]]:
    """pos[i][v]: bitset over ranks of the size**mu tuples whose entry at
    position i is v (bit index equals tuple rank)."""
    total = size**mu
    out = []
    for i in range(mu):
        block_len = size ** (mu - 1 - i)
        period = size ** (mu - i)
        unit = (1 << block_len) - 1
        masks = []
        for v in range(size):
            base = unit << v * block_len
            pattern = base
            width = period
            while width < total:
                pattern |= pattern << width
                width *= 2
            masks.append(pattern & (1 << total) - 1)
        out.append(masks)
    return out


def separating_total_function(
    T: ConstraintSet,
    c: Constraint,
    bounds: Bounds,
    require_partial: bool = False,
) -> SeparationReport:
    """A total function separating c from a minor-closed set; see
    TotalSeparationContext for the construction."""
    a, b = T.universe_a, T.universe_b
    _require_closed(T, ("cm",), [empty_constraint(a, b), trivial_constraint(a, b)])
    if require_partial and equality_constraint(a, b) not in T:
        raise ValueError("single-valued separation requires the equality constraint")
    if c in T:
        raise ValueError("constraint already inside the set; nothing to separate")
    if c.antecedent.is_empty or c.consequent.bits == (1 << b.size**c.arity) - 1:
        raise ValueError(
            "set is not closed: empty-antecedent and full-consequent "
            "constraints must already belong to it"
        )
    context = TotalSeparationContext(T, bounds, c.antecedent)
    return context.separate(c, require_partial)


_CONSTRAINT_SIDE = {
    "all": (weak_minor_closure, separating_function, ("empty", "trivial")),
    "partial": (
        weak_minor_closure,
        separating_partial_function,
        ("empty", "trivial", "equality"),
    ),
    "total": (minor_closure, separating_total_function, ("empty", "trivial")),
    "single": (minor_closure, None, ("empty", "equality")),
}


def base_constraints(a: Universe, b: Universe, names: Sequence[str]) -> list[Constraint]:
    built = {
        "empty": empty_constraint,
        "trivial": trivial_constraint,
        "equality": equality_constraint,
    }
    return [built[name](a, b) for name in names]


@dataclass(frozen=True)
class FunctionFactorizationReport:
    """Comparison of a definability closure computed two ways: through
    constraint satisfaction, and through the substitution and covering
    closures."""

    kind: str
    equal: bool
    lhs_sizes: tuple[tuple[int, int], ...]
    rhs_sizes: tuple[tuple[int, int], ...]
    counterexample: MultiFunction | None
    side: str | None


def verify_function_factorization(
    cls: FunctionClass, bounds: Bounds, kind: str = "all"
) -> FunctionFactorizationReport:
    """Compare the satisfaction-closed class against the composition of
    the substitution and covering closures, arity by arity.

    Refuses to run when the constraint arity cap cannot reach the
    witness arity of a separating constraint (the support of a function
    of the capped arity), rather than report a spurious inequality.
    """
    a, b = cls.domain, cls.codomain
    if kind not in _KIND_PREDICATES:
        raise ValueError(f"unknown kind {kind!r}")
    needed = a.size**bounds.n_max
    if bounds.m_max < needed:
        raise ValueError(
            f"m_max {bounds.m_max} below witness arity {needed}; "
            "separating constraints would not fit, raise m_max"
        )
    if kind == "partial" and not all(f.is_partial for f in cls.members):
        raise ValueError("kind 'partial' needs a class of partial functions")
    if kind == "total" and not all(f.is_total for f in cls.members):
        raise ValueError("kind 'total' needs a class of total functions")
    if kind == "single" and not all(f.is_single_valued for f in cls.members):
        raise ValueError("kind 'single' needs a class of single-valued functions")
    if cls.arity_cap < bounds.n_max:
        cls = FunctionClass(a, b, bounds.n_max, cls.members)
    rhs = function_side_closure(cls, kind)
    table = satisfied_constraints(cls, bounds.m_max, antecedent_limit=bounds.n_max)
    keep = _KIND_PREDICATES[kind]
    lhs_sizes = []
    rhs_sizes = []
    counterexample = None
    side = None
    for n in range(1, bounds.n_max + 1):
        lhs_n = 0
        rhs_n = len(rhs.of_arity(n))
        for f in all_functions(a, b, n):
            in_lhs = keep(f) and table.satisfied_by(f)
            if in_lhs:
                lhs_n += 1
            if counterexample is None:
                in_rhs = f in rhs.members
                if in_lhs and not in_rhs:
                    counterexample, side = f, "satisfaction-only"
                elif in_rhs and not in_lhs:
                    counterexample, side = f, "closure-only"
        lhs_sizes.append((n, lhs_n))
        rhs_sizes.append((n, rhs_n))
    return FunctionFactorizationReport(
        kind,
        counterexample is None,
        tuple(lhs_sizes),
        tuple(rhs_sizes),
        counterexample,
        side,
    )


@dataclass(frozen=True)
class ConstraintFactorizationReport:
    """Per-constraint comparison of a bounded minor closure against the
    satisfaction-side closure decided by proof-extracted separators."""

    kind: str
    closure: ConstraintSet
    inside_count: int
    outside: tuple[tuple[Constraint, SeparationReport], ...]
    inconclusive: tuple[tuple[Constraint, str], ...]

    @property
    def agreement(self) -> bool:
        return not self.inconclusive


def verify_constraint_factorization(
    T: ConstraintSet, bounds: Bounds, kind: str = "all"
) -> ConstraintFactorizationReport:
    """Close T (with the base constraints of the requested sort) under
    bounded minors, then decide every capped-arity constraint: members
    are satisfied by every conforming function via minor preservation;
    for non-members the proof-extracted separator is run and its witness
    replay-checked.  Inconclusive entries name the bound to raise."""
    a, b = T.universe_a, T.universe_b
    close, separate, names = _CONSTRAINT_SIDE[kind]
    if "equality" in names and bounds.m_max < 2:
        raise ValueError(
            f"kind {kind!r} seeds the binary equality constraint; m_max "
            "must be at least 2"
        )
    seeded = constraint_set(
        a, b, bounds.m_max, set(T.members) | set(base_constraints(a, b, names))
    )
    closure = close(seeded, bounds)
    from .constraint import local_closure

    closure = local_closure(closure)
    total_kind = kind in ("total", "single")
    contexts: dict[tuple[int, int], TotalSeparationContext] = {}
    inside = 0
    outside = []
    inconclusive = []
    for m in range(1, bounds.m_max + 1):
        for r in range(1 << a.size**m):
            for s in range(1 << b.size**m):
                c = Constraint(Relation(a, m, r), Relation(b, m, s))
                if c in closure:
                    inside += 1
                    continue
                if total_kind:
                    key = (m, r)
                    if key not in contexts:
                        contexts[key] = TotalSeparationContext(
                            closure, bounds, c.antecedent
                        )
                    report = contexts[key].separate(
                        c, require_partial=kind == "single"
                    )
                else:
                    report = separate(closure, c, bounds)
                if report.verdict == "outside":
                    outside.append((c, report))
                else:
                    inconclusive.append((c, report.trace.get("reason", "")))
    return ConstraintFactorizationReport(
        kind, closure, inside, tuple(outside), tuple(inconclusive)
    )
