"""Batch front end: parse problem documents, run engine commands, emit
canonical reports.

The document format is line oriented with explicit section headers;
fixtures are hand-writable and goldens diff cleanly.  Empty value sets
are written "{}" and the m-ary empty relation has its own literal
"empty^m", so arity-tagged empties survive round trips.  Output is
sorted before emission and carries no iteration-order artifacts; the
MVCON_WORKERS environment variable is accepted for interface
compatibility and can only affect speed, never output.

Exit codes: 0 computed, 1 property violated or verdict outside (witness
printed), 2 input error, 3 inconclusive at the given bounds.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field

from .constraint import (
    Bounds,
    Constraint,
    ConstraintSet,
    constraint_set,
    empty_constraint,
    equality_constraint,
    local_closure,
    minor_closure,
    trivial_constraint,
    weak_minor_closure,
)
from .enumerators import (
    Budget,
    BudgetExceededError,
    all_constraints,
    all_functions,
    all_relations,
    all_schemes,
)
from .galois import (
    base_constraints,
    satisfied_constraints,
    satisfies,
    satisfying_functions,
    separating_constraint,
    separating_function,
    separating_partial_function,
    separating_total_function,
    verify_constraint_factorization,
    verify_function_factorization,
)
from .multifunction import (
    FunctionClass,
    MultiFunction,
    covering_closure,
    image_of_relation,
    substitution_closure,
    total_substitution_closure,
)
from .universe import (
    Relation,
    Universe,
    equality_relation,
    full_relation,
    iter_bits,
    tuple_rank,
    tuple_unrank,
)

SECTIONS = ("universes", "functions", "relations", "classes", "constraints", "bounds")
NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
DEFAULT_BOUNDS = Bounds(m_max=2, n_max=2, j_max=2, v_max=2)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass
class ProblemDocument:
    universes: dict[str, Universe] = field(default_factory=dict)
    functions: dict[str, MultiFunction] = field(default_factory=dict)
    relations: dict[str, Relation] = field(default_factory=dict)
    classes: dict[str, tuple[str, ...]] = field(default_factory=dict)
    constraints: dict[str, Constraint] = field(default_factory=dict)
    constraint_refs: dict[str, tuple[str, str]] = field(default_factory=dict)
    bounds: Bounds = DEFAULT_BOUNDS
    budget: Budget = Budget()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProblemDocument):
            return NotImplemented
        return (
            self.universes == other.universes
            and self.functions == other.functions
            and self.relations == other.relations
            and self.classes == other.classes
            and self.constraint_refs == other.constraint_refs
            and self.bounds == other.bounds
            and self.budget == other.budget
        )

    def function_class_for(self, names: tuple[str, ...], arity_cap: int) -> FunctionClass:
        members = [self.functions[n] for n in names]
        domain = members[0].domain
        codomain = members[0].codomain
        cap = max(arity_cap, max(f.arity for f in members))
        return FunctionClass(domain, codomain, cap, frozenset(members))


def _tuple_token(token: str, line: int, col: int) -> tuple[int, ...]:
    token = token.strip()
    if not (token.startswith("(") and token.endswith(")")):
        raise ParseError(f"expected a tuple, got {token!r}", line, col)
    body = token[1:-1].strip()
    if not body:
        raise ParseError("tuples have positive arity", line, col)
    try:
        return tuple(int(p.strip()) for p in body.split(","))
    except ValueError:
        raise ParseError(f"bad tuple {token!r}", line, col) from None


def _value_set(token: str, line: int, col: int) -> int:
    token = token.strip()
    if not (token.startswith("{") and token.endswith("}")):
        raise ParseError(f"expected a value set, got {token!r}", line, col)
    body = token[1:-1].strip()
    if not body:
        return 0
    mask = 0
    for part in body.split(","):
        try:
            mask |= 1 << int(part.strip())
        except ValueError:
            raise ParseError(f"bad value set {token!r}", line, col) from None
    return mask


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.doc = ProblemDocument()
        self.bounds_raw: dict[str, int] = {}

    def parse(self) -> ProblemDocument:
        section = None
        i = 0
        while i < len(self.lines):
            raw = self.lines[i]
            line_no = i + 1
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                i += 1
                continue
            stripped = line.strip()
            if stripped.startswith("[") and stripped.endswith("]"):
                name = stripped[1:-1].strip()
                if name not in SECTIONS:
                    raise ParseError(f"unknown section {name!r}", line_no)
                section = name
                i += 1
                continue
            if section is None:
                raise ParseError("content before any section header", line_no)
            i = getattr(self, f"_parse_{section}")(i)
        self._finish_bounds()
        return self.doc

    def _fields(self, i: int) -> tuple[list[str], int]:
        line = self.lines[i].split("#", 1)[0].strip()
        return line.split(), i + 1

    def _check_name(self, name: str, line_no: int) -> str:
        if not NAME_RE.match(name):
            raise ParseError(f"bad identifier {name!r}", line_no)
        return name

    def _parse_universes(self, i: int) -> int:
        fields, nxt = self._fields(i)
        line_no = i + 1
        if len(fields) < 2:
            raise ParseError("universe lines read: name size [labels...]", line_no)
        name = self._check_name(fields[0], line_no)
        if name in self.doc.universes:
            raise ParseError(f"duplicate universe {name!r}", line_no)
        try:
            size = int(fields[1])
        except ValueError:
            raise ParseError(f"bad size {fields[1]!r}", line_no) from None
        labels = tuple(fields[2:]) or None
        try:
            self.doc.universes[name] = Universe(name, size, labels)
        except ValueError as exc:
            raise ParseError(str(exc), line_no) from None
        return nxt

    def _parse_functions(self, i: int) -> int:
        fields, nxt = self._fields(i)
        line_no = i + 1
        if len(fields) != 4:
            raise ParseError(
                "function headers read: name domain codomain arity", line_no
            )
        name = self._check_name(fields[0], line_no)
        if name in self.doc.functions:
            raise ParseError(f"duplicate function {name!r}", line_no)
        for u in (fields[1], fields[2]):
            if u not in self.doc.universes:
                raise ParseError(f"unknown universe {u!r}", line_no)
        domain = self.doc.universes[fields[1]]
        codomain = self.doc.universes[fields[2]]
        try:
            arity = int(fields[3])
        except ValueError:
            raise ParseError(f"bad arity {fields[3]!r}", line_no) from None
        if arity < 1:
            raise ParseError("function arity must be positive", line_no)
        table: dict[int, int] = {}
        j = nxt
        while j < len(self.lines):
            body = self.lines[j].split("#", 1)[0].strip()
            if not body:
                j += 1
                continue
            if not body.startswith("("):
                break
            row_no = j + 1
            if "->" not in body:
                raise ParseError("table rows read: (tuple) -> {values}", row_no)
            left, right = body.split("->", 1)
            t = _tuple_token(left, row_no, 1)
            if len(t) != arity:
                raise ParseError(
                    f"tuple {t} is not {arity}-ary", row_no
                )
            try:
                rank = tuple_rank(t, domain.size)
            except ValueError as exc:
                raise ParseError(str(exc), row_no) from None
            if rank in table:
                raise ParseError(f"duplicate table row for {t}", row_no)
            mask = _value_set(right, row_no, len(left) + 3)
            if mask >> codomain.size:
                raise ParseError(
                    f"value out of range for {codomain.name}", row_no
                )
            table[rank] = mask
            j += 1
        points = domain.size**arity
        if len(table) != points:
            missing = next(r for r in range(points) if r not in table)
            raise ParseError(
                f"function {name!r} is missing a row for "
                f"{tuple_unrank(missing, arity, domain.size)}",
                line_no,
            )
        self.doc.functions[name] = MultiFunction(
            domain, codomain, arity, tuple(table[r] for r in range(points))
        )
        return j

    def _parse_relations(self, i: int) -> int:
        fields, nxt = self._fields(i)
        line_no = i + 1
        if len(fields) != 3:
            raise ParseError("relation headers read: name universe arity", line_no)
        name = self._check_name(fields[0], line_no)
        if name in self.doc.relations:
            raise ParseError(f"duplicate relation {name!r}", line_no)
        if fields[1] not in self.doc.universes:
            raise ParseError(f"unknown universe {fields[1]!r}", line_no)
        universe = self.doc.universes[fields[1]]
        try:
            arity = int(fields[2])
        except ValueError:
            raise ParseError(f"bad arity {fields[2]!r}", line_no) from None
        if arity < 1:
            raise ParseError("relation arity must be positive", line_no)
        bits = 0
        j = nxt
        while j < len(self.lines):
            body = self.lines[j].split("#", 1)[0].strip()
            if not body:
                j += 1
                continue
            row_no = j + 1
            if body.startswith("("):
                t = _tuple_token(body, row_no, 1)
                if len(t) != arity:
                    raise ParseError(f"tuple {t} is not {arity}-ary", row_no)
                try:
                    bits |= 1 << tuple_rank(t, universe.size)
                except ValueError as exc:
                    raise ParseError(str(exc), row_no) from None
            elif body.startswith("empty^"):
                if body != f"empty^{arity}":
                    raise ParseError(
                        f"{body!r} disagrees with declared arity {arity}", row_no
                    )
            elif body.startswith("full^"):
                if body != f"full^{arity}":
                    raise ParseError(
                        f"{body!r} disagrees with declared arity {arity}", row_no
                    )
                bits |= full_relation(universe, arity).bits
            elif body == "eq":
                if arity != 2:
                    raise ParseError("eq denotes a binary relation", row_no)
                bits |= equality_relation(universe).bits
            else:
                break
            j += 1
        self.doc.relations[name] = Relation(universe, arity, bits)
        return j

    def _parse_classes(self, i: int) -> int:
        fields, nxt = self._fields(i)
        line_no = i + 1
        if len(fields) < 2:
            raise ParseError("class lines read: name function...", line_no)
        name = self._check_name(fields[0], line_no)
        if name in self.doc.classes:
            raise ParseError(f"duplicate class {name!r}", line_no)
        members = []
        for ref in fields[1:]:
            if ref not in self.doc.functions:
                raise ParseError(f"unknown function {ref!r}", line_no)
            members.append(ref)
        first = self.doc.functions[members[0]]
        for ref in members[1:]:
            f = self.doc.functions[ref]
            if f.domain is not first.domain or f.codomain is not first.codomain:
                raise ParseError(
                    f"class {name!r} mixes universes", line_no
                )
        self.doc.classes[name] = tuple(members)
        return nxt

    def _parse_constraints(self, i: int) -> int:
        fields, nxt = self._fields(i)
        line_no = i + 1
        if len(fields) != 3:
            raise ParseError(
                "constraint lines read: name antecedent consequent", line_no
            )
        name = self._check_name(fields[0], line_no)
        if name in self.doc.constraints:
            raise ParseError(f"duplicate constraint {name!r}", line_no)
        for ref in fields[1:]:
            if ref not in self.doc.relations:
                raise ParseError(f"unknown relation {ref!r}", line_no)
        ante = self.doc.relations[fields[1]]
        cons = self.doc.relations[fields[2]]
        if ante.arity != cons.arity:
            raise ParseError(
                f"constraint {name!r} pairs arity {ante.arity} with "
                f"arity {cons.arity}",
                line_no,
            )
        self.doc.constraints[name] = Constraint(ante, cons)
        self.doc.constraint_refs[name] = (fields[1], fields[2])
        return nxt

    def _parse_bounds(self, i: int) -> int:
        fields, nxt = self._fields(i)
        line_no = i + 1
        if len(fields) != 2:
            raise ParseError("bounds lines read: key value", line_no)
        key = fields[0]
        if key not in ("n_max", "m_max", "j_max", "v_max", "budget", "seed"):
            raise ParseError(f"unknown bound {key!r}", line_no)
        if key in self.bounds_raw:
            raise ParseError(f"duplicate bound {key!r}", line_no)
        try:
            self.bounds_raw[key] = int(fields[1])
        except ValueError:
            raise ParseError(f"bad value {fields[1]!r}", line_no) from None
        return nxt

    def _finish_bounds(self) -> None:
        raw = self.bounds_raw
        self.doc.bounds = Bounds(
            m_max=raw.get("m_max", DEFAULT_BOUNDS.m_max),
            n_max=raw.get("n_max", DEFAULT_BOUNDS.n_max),
            j_max=raw.get("j_max", DEFAULT_BOUNDS.j_max),
            v_max=raw.get("v_max", DEFAULT_BOUNDS.v_max),
        )
        self.doc.budget = Budget(
            max_tables=raw.get("budget", Budget().max_tables),
            seed=raw.get("seed", 0),
        )


def parse_document(text: str) -> ProblemDocument:
    return _Parser(text).parse()


def _format_tuple(t: tuple[int, ...]) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


def _format_values(mask: int) -> str:
    return "{" + ",".join(str(b) for b in iter_bits(mask)) + "}"


def serialize_document(doc: ProblemDocument) -> str:
    out = []
    out.append("[universes]")
    for name in sorted(doc.universes):
        u = doc.universes[name]
        labels = " " + " ".join(u.labels) if u.labels else ""
        out.append(f"{name} {u.size}{labels}")
    out.append("")
    out.append("[functions]")
    for name in sorted(doc.functions):
        f = doc.functions[name]
        out.append(f"{name} {f.domain.name} {f.codomain.name} {f.arity}")
        for rank, mask in enumerate(f.table):
            t = tuple_unrank(rank, f.arity, f.domain.size)
            out.append(f"{_format_tuple(t)} -> {_format_values(mask)}")
    out.append("")
    out.append("[relations]")
    for name in sorted(doc.relations):
        r = doc.relations[name]
        out.append(f"{name} {r.universe.name} {r.arity}")
        if r.is_empty:
            out.append(f"empty^{r.arity}")
        else:
            for t in r.members():
                out.append(_format_tuple(t))
    out.append("")
    if doc.classes:
        out.append("[classes]")
        for name in sorted(doc.classes):
            out.append(f"{name} {' '.join(doc.classes[name])}")
        out.append("")
    if doc.constraint_refs:
        out.append("[constraints]")
        for name in sorted(doc.constraint_refs):
            ante, cons = doc.constraint_refs[name]
            out.append(f"{name} {ante} {cons}")
        out.append("")
    out.append("[bounds]")
    b = doc.bounds
    out.append(f"m_max {b.m_max}")
    out.append(f"n_max {b.n_max}")
    out.append(f"j_max {b.j_max}")
    out.append(f"v_max {b.v_max}")
    out.append(f"budget {doc.budget.max_tables}")
    out.append(f"seed {doc.budget.seed}")
    out.append("")
    return "\n".join(out)


def document_to_machine(doc: ProblemDocument) -> dict:
    return {
        "universes": {
            n: {"size": u.size, "labels": list(u.labels) if u.labels else None}
            for n, u in sorted(doc.universes.items())
        },
        "functions": {
            n: {
                "domain": f.domain.name,
                "codomain": f.codomain.name,
                "arity": f.arity,
                "table": list(f.table),
            }
            for n, f in sorted(doc.functions.items())
        },
        "relations": {
            n: {
                "universe": r.universe.name,
                "arity": r.arity,
                "members": [list(t) for t in r.members()],
            }
            for n, r in sorted(doc.relations.items())
        },
        "classes": {n: list(v) for n, v in sorted(doc.classes.items())},
        "constraints": {
            n: list(v) for n, v in sorted(doc.constraint_refs.items())
        },
        "bounds": {
            "m_max": doc.bounds.m_max,
            "n_max": doc.bounds.n_max,
            "j_max": doc.bounds.j_max,
            "v_max": doc.bounds.v_max,
            "budget": doc.budget.max_tables,
            "seed": doc.budget.seed,
        },
    }


# --- command execution ---


class CommandError(ValueError):
    """Bad command input; maps to exit code 2."""


@dataclass
class RunResult:
    code: int
    lines: list[str]
    machine: dict


def _function_lines(f: MultiFunction, name: str = "") -> list[str]:
    head = f"function {name}" if name else "function"
    out = [f"{head} arity {f.arity} [{f.domain.name} -> {f.codomain.name}]"]
    for rank, mask in enumerate(f.table):
        t = tuple_unrank(rank, f.arity, f.domain.size)
        out.append(f"  {_format_tuple(t)} -> {_format_values(mask)}")
    return out


def _function_machine(f: MultiFunction) -> dict:
    return {
        "arity": f.arity,
        "domain": f.domain.name,
        "codomain": f.codomain.name,
        "table": list(f.table),
    }


def _relation_lines(r: Relation) -> str:
    if r.is_empty:
        return f"empty^{r.arity}"
    return " ".join(_format_tuple(t) for t in r.members())


def _constraint_line(c: Constraint) -> str:
    return (
        f"({_relation_lines(c.antecedent)} ; {_relation_lines(c.consequent)})"
        f" arity {c.arity}"
    )


def _constraint_machine(c: Constraint) -> dict:
    return {
        "arity": c.arity,
        "antecedent": [list(t) for t in c.antecedent.members()],
        "consequent": [list(t) for t in c.consequent.members()],
    }


def _resolve_constraints(doc: ProblemDocument, names: list[str]) -> list[Constraint]:
    out = []
    for n in names:
        if n not in doc.constraints:
            raise CommandError(f"unknown constraint {n!r}")
        out.append(doc.constraints[n])
    if not out:
        raise CommandError("no constraints given")
    a = out[0].antecedent.universe
    b = out[0].consequent.universe
    for c in out:
        if c.antecedent.universe is not a or c.consequent.universe is not b:
            raise CommandError("constraints span different universe pairs")
    return out


def _resolve_class(doc: ProblemDocument, name: str, cap: int) -> FunctionClass:
    if name in doc.classes:
        return doc.function_class_for(doc.classes[name], cap)
    if name in doc.functions:
        return doc.function_class_for((name,), cap)
    raise CommandError(f"unknown class or function {name!r}")


def _class_members_output(cls: FunctionClass) -> tuple[list[str], dict]:
    lines = []
    machine = []
    for n in range(1, cls.arity_cap + 1):
        slice_n = cls.of_arity(n)
        if slice_n:
            lines.append(f"arity {n}: {len(slice_n)} functions")
        for f in slice_n:
            lines.append(
                "  " + " ".join(_format_values(mask) for mask in f.table)
            )
            machine.append(_function_machine(f))
    lines.append(f"total {len(cls)}")
    return lines, machine


def _set_members_output(T: ConstraintSet) -> tuple[list[str], dict]:
    lines = []
    machine = []
    for m in range(1, T.m_max + 1):
        slice_m = T.of_arity(m)
        lines.append(f"arity {m}: {len(slice_m)} constraints")
    if T.generators is not None:
        lines.append(f"generators ({len(T.generators)} maximal members):")
        for g in T.generators:
            lines.append("  " + _constraint_line(g))
            machine.append(_constraint_machine(g))
    else:
        for c in T.work_members():
            lines.append("  " + _constraint_line(c))
            machine.append(_constraint_machine(c))
    lines.append(f"total {len(T)}")
    return lines, machine


def run_command(doc: ProblemDocument, args: argparse.Namespace) -> RunResult:
    handler = _HANDLERS[args.command]
    return handler(doc, args)


def _cmd_check_sat(doc: ProblemDocument, args) -> RunResult:
    if args.function not in doc.functions:
        raise CommandError(f"unknown function {args.function!r}")
    if args.constraint not in doc.constraints:
        raise CommandError(f"unknown constraint {args.constraint!r}")
    f = doc.functions[args.function]
    c = doc.constraints[args.constraint]
    image = image_of_relation(f, c.antecedent)
    extra = image.bits & ~c.consequent.bits
    if extra == 0:
        return RunResult(0, ["satisfied"], {"verdict": "satisfied"})
    bad = Relation(image.universe, image.arity, extra)
    lines = [
        "violated",
        f"image: {_relation_lines(image)}",
        f"outside consequent: {_relation_lines(bad)}",
    ]
    return RunResult(
        1,
        lines,
        {
            "verdict": "violated",
            "image": [list(t) for t in image.members()],
            "witness": [list(t) for t in bad.members()],
        },
    )


def _cmd_image(doc: ProblemDocument, args) -> RunResult:
    if args.function not in doc.functions:
        raise CommandError(f"unknown function {args.function!r}")
    if args.relation not in doc.relations:
        raise CommandError(f"unknown relation {args.relation!r}")
    image = image_of_relation(doc.functions[args.function], doc.relations[args.relation])
    return RunResult(
        0,
        [f"image: {_relation_lines(image)}"],
        {"image": [list(t) for t in image.members()]},
    )


def _cmd_close_rvs(doc: ProblemDocument, args) -> RunResult:
    cls = _resolve_class(doc, args.name, doc.bounds.n_max)
    closed = (
        total_substitution_closure(cls) if args.total else substitution_closure(cls)
    )
    lines, machine = _class_members_output(closed)
    return RunResult(0, lines, {"members": machine})


def _cmd_close_lc(doc: ProblemDocument, args) -> RunResult:
    cls = _resolve_class(doc, args.name, doc.bounds.n_max)
    closed = covering_closure(cls, args.kind)
    lines, machine = _class_members_output(closed)
    return RunResult(0, lines, {"members": machine})


def _close_constraints(doc, names, close) -> ConstraintSet:
    members = _resolve_constraints(doc, names)
    a = members[0].antecedent.universe
    b = members[0].consequent.universe
    T = constraint_set(a, b, doc.bounds.m_max, members)
    return close(T, doc.bounds)


def _cmd_close_wcm(doc: ProblemDocument, args) -> RunResult:
    T = _close_constraints(doc, args.names, weak_minor_closure)
    lines, machine = _set_members_output(T)
    lines.insert(0, f"bounded closure at {doc.bounds}")
    return RunResult(0, lines, {"members": machine, "total": len(T)})


def _cmd_close_cm(doc: ProblemDocument, args) -> RunResult:
    T = _close_constraints(doc, args.names, minor_closure)
    lines, machine = _set_members_output(T)
    lines.insert(0, f"bounded closure at {doc.bounds}")
    return RunResult(0, lines, {"members": machine, "total": len(T)})


def _cmd_close_lo(doc: ProblemDocument, args) -> RunResult:
    members = _resolve_constraints(doc, args.names)
    a = members[0].antecedent.universe
    b = members[0].consequent.universe
    T = local_closure(constraint_set(a, b, doc.bounds.m_max, members))
    lines, machine = _set_members_output(T)
    lines.insert(0, "locally closed already (finite universes)")
    return RunResult(0, lines, {"members": machine, "total": len(T)})


def _cmd_csf(doc: ProblemDocument, args) -> RunResult:
    cls = _resolve_class(doc, args.name, doc.bounds.n_max)
    table = satisfied_constraints(cls, doc.bounds.m_max)
    lines = []
    machine = []
    a = cls.domain
    for m in range(1, doc.bounds.m_max + 1):
        for bits in range(1 << a.size**m):
            rel = Relation(a, m, bits)
            s_min = table.minimal_consequent(rel)
            lines.append(
                f"{_relation_lines(rel)} => {_relation_lines(s_min)}"
            )
            machine.append(
                {
                    "arity": m,
                    "antecedent": [list(t) for t in rel.members()],
                    "minimal_consequent": [list(t) for t in s_min.members()],
                }
            )
    return RunResult(0, lines, {"minimal_consequents": machine})


def _cmd_fsc(doc: ProblemDocument, args) -> RunResult:
    kind = {"mfsc": "all", "tfsc": "total", "pfsc": "partial", "sfsc": "single"}[
        args.command
    ]
    members = _resolve_constraints(doc, args.names)
    a = members[0].antecedent.universe
    b = members[0].consequent.universe
    T = constraint_set(a, b, doc.bounds.m_max, members)
    try:
        cls = satisfying_functions(T, doc.bounds.n_max, doc.budget, kind)
    except BudgetExceededError as exc:
        raise CommandError(str(exc)) from None
    lines, machine = _class_members_output(cls)
    return RunResult(0, lines, {"members": machine})


def _cmd_separate_constraint(doc: ProblemDocument, args) -> RunResult:
    cls = _resolve_class(doc, args.klass, doc.bounds.n_max)
    if args.function not in doc.functions:
        raise CommandError(f"unknown function {args.function!r}")
    f = doc.functions[args.function]
    try:
        witness = separating_constraint(cls, f)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    lines = [
        "verdict: outside",
        f"witness constraint: {_constraint_line(witness)}",
    ]
    image = image_of_relation(f, witness.antecedent)
    bad = Relation(image.universe, image.arity, image.bits & ~witness.consequent.bits)
    lines.append(f"violating tuples: {_relation_lines(bad)}")
    return RunResult(
        1,
        lines,
        {
            "verdict": "outside",
            "witness": _constraint_machine(witness),
            "violating": [list(t) for t in bad.members()],
        },
    )


def _cmd_separate_function(doc: ProblemDocument, args) -> RunResult:
    if args.target not in doc.constraints:
        raise CommandError(f"unknown constraint {args.target!r}")
    target = doc.constraints[args.target]
    members = _resolve_constraints(doc, args.names)
    a = members[0].antecedent.universe
    b = members[0].consequent.universe
    if args.partial and args.total:
        raise CommandError("choose at most one of --partial/--total")
    if args.partial:
        seeds = base_constraints(a, b, ("empty", "trivial", "equality"))
        close, separate = weak_minor_closure, separating_partial_function
    elif args.total:
        seeds = base_constraints(a, b, ("empty", "trivial"))
        close, separate = minor_closure, separating_total_function
    else:
        seeds = base_constraints(a, b, ("empty", "trivial"))
        close, separate = weak_minor_closure, separating_function
    T = close(
        constraint_set(a, b, doc.bounds.m_max, set(members) | set(seeds)),
        doc.bounds,
    )
    if target in T:
        return RunResult(
            0,
            ["verdict: inside", "the target lies in the bounded closure"],
            {"verdict": "inside"},
        )
    report = separate(T, target, doc.bounds)
    machine = {"verdict": report.verdict}
    lines = [f"verdict: {report.verdict}"]
    if report.verdict == "outside":
        lines += _function_lines(report.witness, "witness")
        lines.append(f"excluded tuple: {_format_tuple(report.trace['excluded'])}")
        machine["witness"] = _function_machine(report.witness)
        machine["excluded"] = list(report.trace["excluded"])
        return RunResult(1, lines, machine)
    if report.verdict == "inside":
        lines.append(str(report.trace.get("reason", "")))
        return RunResult(0, lines, machine)
    lines.append(str(report.trace.get("reason", "")))
    return RunResult(3, lines, machine)


_VARIANTS = {"i": "all", "ii": "partial", "iii": "total", "iv": "single"}


def _cmd_verify_prop2(doc: ProblemDocument, args) -> RunResult:
    cls = _resolve_class(doc, args.klass, doc.bounds.n_max)
    kind = _VARIANTS[args.variant]
    try:
        report = verify_function_factorization(cls, doc.bounds, kind)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    lines = [
        f"variant {args.variant} ({kind}): "
        + ("equality holds" if report.equal else "sides differ"),
        f"satisfaction side sizes: {dict(report.lhs_sizes)}",
        f"closure side sizes: {dict(report.rhs_sizes)}",
    ]
    machine = {
        "equal": report.equal,
        "lhs_sizes": dict(report.lhs_sizes),
        "rhs_sizes": dict(report.rhs_sizes),
    }
    if report.counterexample is not None:
        lines += _function_lines(report.counterexample, f"counterexample ({report.side})")
        machine["counterexample"] = _function_machine(report.counterexample)
        machine["side"] = report.side
        return RunResult(1, lines, machine)
    return RunResult(0, lines, machine)


def _cmd_verify_prop4(doc: ProblemDocument, args) -> RunResult:
    members = _resolve_constraints(doc, args.names) if args.names else []
    kind = _VARIANTS[args.variant]
    if members:
        a = members[0].antecedent.universe
        b = members[0].consequent.universe
    else:
        if len(doc.universes) != 2:
            raise CommandError("give constraints or declare exactly two universes")
        a, b = (doc.universes[n] for n in sorted(doc.universes))
    T = constraint_set(a, b, doc.bounds.m_max, members)
    report = verify_constraint_factorization(T, doc.bounds, kind)
    lines = [
        f"variant {args.variant} ({kind}):",
        f"inside the bounded closure: {report.inside_count}",
        f"separated outside with witnesses: {len(report.outside)}",
        f"inconclusive: {len(report.inconclusive)}",
    ]
    machine = {
        "inside": report.inside_count,
        "outside": len(report.outside),
        "inconclusive": [
            {"constraint": _constraint_machine(c), "hint": hint}
            for c, hint in report.inconclusive
        ],
    }
    if report.inconclusive:
        for c, hint in report.inconclusive:
            lines.append(f"  inconclusive {_constraint_line(c)}: {hint}")
        return RunResult(3, lines, machine)
    return RunResult(0, lines, machine)


def _cmd_enumerate(doc: ProblemDocument, args) -> RunResult:
    kind = args.kind
    budget = doc.budget
    try:
        if kind == "functions":
            domain = doc.universes[args.args[0]]
            codomain = doc.universes[args.args[1]]
            arity = int(args.args[2])
            items = list(all_functions(domain, codomain, arity, budget))
            lines = [f"{len(items)} functions"]
            machine = {"count": len(items)}
        elif kind == "relations":
            universe = doc.universes[args.args[0]]
            arity = int(args.args[1])
            items = list(all_relations(universe, arity, budget))
            lines = [f"{len(items)} relations"]
            machine = {"count": len(items)}
        elif kind == "constraints":
            a = doc.universes[args.args[0]]
            b = doc.universes[args.args[1]]
            arity = int(args.args[2])
            items = list(all_constraints(a, b, arity, budget))
            lines = [f"{len(items)} constraints"]
            machine = {"count": len(items)}
        elif kind == "schemes":
            items = list(all_schemes(doc.bounds, budget=budget))
            lines = [f"{len(items)} schemes"]
            for s in items:
                lines.append(
                    f"  target {s.target} indeterminates {s.indeterminates} "
                    f"sources {list(s.sources)}"
                )
            machine = {
                "count": len(items),
                "schemes": [
                    {
                        "target": s.target,
                        "indeterminates": s.indeterminates,
                        "sources": [list(h) for h in s.sources],
                    }
                    for s in items
                ],
            }
        else:
            raise CommandError(f"unknown enumeration kind {kind!r}")
    except (KeyError, IndexError):
        raise CommandError("missing or unknown enumerate arguments") from None
    except BudgetExceededError as exc:
        raise CommandError(str(exc)) from None
    return RunResult(0, lines, machine)


_HANDLERS = {
    "check-sat": _cmd_check_sat,
    "image": _cmd_image,
    "close-rvs": _cmd_close_rvs,
    "close-lc": _cmd_close_lc,
    "close-wcm": _cmd_close_wcm,
    "close-cm": _cmd_close_cm,
    "close-lo": _cmd_close_lo,
    "csf": _cmd_csf,
    "mfsc": _cmd_fsc,
    "tfsc": _cmd_fsc,
    "pfsc": _cmd_fsc,
    "sfsc": _cmd_fsc,
    "separate-constraint": _cmd_separate_constraint,
    "separate-function": _cmd_separate_function,
    "verify-prop2": _cmd_verify_prop2,
    "verify-prop4": _cmd_verify_prop4,
    "enumerate": _cmd_enumerate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvcon",
        description="finite-universe engine for multivalued functions and "
        "relational constraints",
    )
    parser.add_argument("file", help="problem document")
    parser.add_argument(
        "--format", choices=("text", "machine"), default="text", dest="fmt"
    )
    parser.add_argument(
        "--bounds", default=None, help="override bounds, e.g. m_max=2,v_max=1"
    )
    parser.add_argument("--budget", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-sat")
    p.add_argument("function")
    p.add_argument("constraint")
    p = sub.add_parser("image")
    p.add_argument("function")
    p.add_argument("relation")
    p = sub.add_parser("close-rvs")
    p.add_argument("name")
    p.add_argument("--total", action="store_true")
    p = sub.add_parser("close-lc")
    p.add_argument("name")
    p.add_argument(
        "--kind", choices=("all", "total", "partial", "single"), default="all"
    )
    for cmd in ("close-wcm", "close-cm", "close-lo"):
        p = sub.add_parser(cmd)
        p.add_argument("names", nargs="+")
    p = sub.add_parser("csf")
    p.add_argument("name")
    for cmd in ("mfsc", "tfsc", "pfsc", "sfsc"):
        p = sub.add_parser(cmd)
        p.add_argument("names", nargs="+")
    p = sub.add_parser("separate-constraint")
    p.add_argument("klass")
    p.add_argument("function")
    p = sub.add_parser("separate-function")
    p.add_argument("target")
    p.add_argument("names", nargs="*")
    p.add_argument("--partial", action="store_true")
    p.add_argument("--total", action="store_true")
    p = sub.add_parser("verify-prop2")
    p.add_argument("variant", choices=tuple(_VARIANTS))
    p.add_argument("klass")
    p = sub.add_parser("verify-prop4")
    p.add_argument("variant", choices=tuple(_VARIANTS))
    p.add_argument("names", nargs="*")
    p = sub.add_parser("enumerate")
    p.add_argument("kind", choices=("functions", "relations", "constraints", "schemes"))
    p.add_argument("args", nargs="*")
    return parser


def _apply_overrides(doc: ProblemDocument, args) -> None:
    if args.bounds:
        raw = {}
        for part in args.bounds.split(","):
            if "=" not in part:
                raise CommandError(f"bad bounds override {part!r}")
            key, value = part.split("=", 1)
            key = key.strip()
            if key not in ("m_max", "n_max", "j_max", "v_max"):
                raise CommandError(f"unknown bound {key!r}")
            try:
                raw[key] = int(value)
            except ValueError:
                raise CommandError(f"bad bound value {value!r}") from None
        doc.bounds = Bounds(
            m_max=raw.get("m_max", doc.bounds.m_max),
            n_max=raw.get("n_max", doc.bounds.n_max),
            j_max=raw.get("j_max", doc.bounds.j_max),
            v_max=raw.get("v_max", doc.bounds.v_max),
        )
    if args.budget is not None or args.seed is not None:
        doc.budget = Budget(
            max_tables=args.budget
            if args.budget is not None
            else doc.budget.max_tables,
            seed=args.seed if args.seed is not None else doc.budget.seed,
        )


def main(argv: list[str] | None = None) -> int:
    workers = os.environ.get("MVCON_WORKERS")
    if workers is not None:
        try:
            if int(workers) < 1:
                raise ValueError
        except ValueError:
            print("MVCON_WORKERS must be a positive integer", file=sys.stderr)
            return 2
        # evaluation is sequential; the knob can only affect speed
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"cannot read {args.file}: {exc}", file=sys.stderr)
        return 2
    try:
        doc = parse_document(text)
        _apply_overrides(doc, args)
        result = run_command(doc, args)
    except (ParseError, CommandError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.fmt == "machine":
        payload = {"command": args.command, "code": result.code, **result.machine}
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in result.lines:
            print(line)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
