"""Structural conformance, witness checking, and the relations graph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .core import (
    ANY,
    Apply,
    Atom,
    Exists,
    Function,
    Product,
    Record,
    TypeExpr,
    Var,
    Witness,
    _subst,
    substitute,
)
from .errors import BoundViolated, MissingMember, NotAnInterface, PytsError
from .frontend import ClassInfo
from .mro import full_registry, object_instance_of, subclass_of
from .prelude import SELF, TypeEnv
from .render import render_type, type_to_json
from .subtyping import Derivation, subtype


@dataclass(frozen=True)
class MemberCheck:
    """One required member: what the target expects vs what the subject has."""

    name: str
    expected: TypeExpr
    actual: TypeExpr | None
    compatible: bool
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "expected": type_to_json(self.expected),
            "expected_text": render_type(self.expected),
            "actual": None if self.actual is None else type_to_json(self.actual),
            "actual_text": None if self.actual is None else render_type(self.actual),
            "compatible": self.compatible,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class ConformanceReport:
    subject: str
    target: str
    verdict: bool
    members: tuple[MemberCheck, ...]

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "target": self.target,
            "verdict": self.verdict,
            "members": [m.to_json() for m in self.members],
        }


def effective_fields(env: TypeEnv, et_name: str) -> dict[str, TypeExpr]:
    """Record fields of a named ET, following its bound chain.

    All self variables are rewritten to the shared `Self`; type parameters
    without arguments are instantiated with Any.
    """
    fields: dict[str, TypeExpr] = {}
    seen: set[str] = set()
    current: tuple[str, tuple[TypeExpr, ...]] | None = (et_name, ())
    while current is not None:
        name, args = current
        if name in seen:
            break
        seen.add(name)
        d = env.lookup(name)
        mapping: dict[str, TypeExpr] = {d.self_var: Var(SELF)}
        mapping.update(dict(zip(d.params, args)))
        for p in d.params[len(args):]:
            mapping[p] = ANY
        if isinstance(d.signature, Record):
            for fname, ftype in d.signature.fields:
                fields.setdefault(fname, _subst(ftype, mapping))
        bound = d.bound
        current = None
        if bound is not None:
            bound = _subst(bound, mapping)
            if isinstance(bound, Atom):
                current = (bound.name, ())
            elif isinstance(bound, Apply) and not bound.variadic:
                current = (bound.constructor, bound.args)
    return fields


def type_instance_of(subject: str, target: str, env: TypeEnv) -> ConformanceReport:
    """Does `subject` satisfy the structural contract named `target`?

    Both signatures are rewritten onto one shared self variable, then every
    listed target member is checked against the subject's member of the same
    name with the subtype relation.
    """
    target_def = env.lookup(target)
    if not isinstance(target_def.signature, Record):
        raise NotAnInterface(f"{target} has no record signature")
    mapping: dict[str, TypeExpr] = {target_def.self_var: Var(SELF)}
    mapping.update({p: ANY for p in target_def.params})
    subject_fields = effective_fields(env, subject)
    checks: list[MemberCheck] = []
    for name, raw_expected in target_def.signature.fields:
        expected = _subst(raw_expected, mapping)
        actual = subject_fields.get(name)
        if actual is None:
            checks.append(
                MemberCheck(name, expected, None, False, "missing member")
            )
            continue
        derivation = subtype(actual, expected, env)
        reason = "" if derivation.verdict else _failure_reason(derivation)
        checks.append(MemberCheck(name, expected, actual, derivation.verdict, reason))
    return ConformanceReport(
        subject=subject,
        target=target,
        verdict=all(c.compatible for c in checks),
        members=tuple(checks),
    )


def _failure_reason(d: Derivation) -> str:
    """Name the failing position: parameter index or return."""
    if d.rule == "function":
        reasons = []
        dom, cod = d.premises
        if not dom.verdict:
            if dom.rule == "product":
                for i, p in enumerate(dom.premises):
                    if not p.verdict:
                        reasons.append(
                            f"parameter {i}: {render_type(p.lhs)} is not a subtype of "
                            f"{render_type(p.rhs)}"
                        )
            else:
                reasons.append(
                    f"parameter 0: {render_type(dom.lhs)} is not a subtype of "
                    f"{render_type(dom.rhs)}"
                )
        if not cod.verdict:
            reasons.append(
                f"return: {render_type(cod.lhs)} is not a subtype of {render_type(cod.rhs)}"
            )
        if reasons:
            return "; ".join(reasons)
    return f"member type incompatible: {render_type(d.lhs)} vs {render_type(d.rhs)}"


def check_witness(w: Witness, target: TypeExpr, env: TypeEnv) -> Derivation:
    """Does (representation, bindings) inhabit the existential `target`?"""
    if not isinstance(target, Exists):
        raise NotAnInterface("witness target must be an existential type")
    if not isinstance(target.body, Record):
        raise NotAnInterface("witness target must carry a record signature")
    rep = Atom(w.representation)
    premises: list[Derivation] = []
    if target.bound is not None:
        bound = substitute(target.bound, target.var, rep)
        bound_check = subtype(rep, bound, env)
        if not bound_check.verdict:
            raise BoundViolated(
                f"{w.representation} is not a subtype of the bound {render_type(bound)}"
            )
        premises.append(bound_check)
    ok = True
    for name, field_type in target.body.fields:
        binding = w.bindings.get(name)
        if binding is None:
            raise MissingMember(name)
        expected = substitute(field_type, target.var, rep)
        p = subtype(binding.type, expected, env)
        premises.append(Derivation(p.verdict, "witness-member", binding.type, expected, (p,), note=name))
        ok = ok and p.verdict
    return Derivation(ok, "witness", rep, target, tuple(premises))


# --- relations graph -------------------------------------------------------------


@dataclass(frozen=True)
class RelationEdge:
    """One arrow of the class/type relations graph (class-level names)."""

    src: str
    dst: str
    kind: str  # subclass-of | object-instance-of | type-instance-of

    def to_json(self) -> dict:
        return {"from": self.src, "to": self.dst, "kind": self.kind}


def relations_graph(
    corpus: list[ClassInfo],
    env: TypeEnv,
    virtual_table: Iterable[tuple[str, str]] = (),
    on_error: Callable[[str, PytsError], None] | None = None,
) -> list[RelationEdge]:
    """subclass-of to each direct base, object-instance-of to the metaclass,
    type-instance-of for conformant interface pairs not already related
    nominally. Per-class failures are reported and skipped."""
    registry = full_registry(corpus)
    table = list(virtual_table)
    edges: list[RelationEdge] = []
    targets = [c for c in corpus if c.kind in ("protocol", "abc")]
    for cls in corpus:
        base_names = [b.name for b in cls.bases] or ["object"]
        for base in base_names:
            edges.append(RelationEdge(cls.name, base, "subclass-of"))
        edges.append(RelationEdge(cls.name, object_instance_of(cls), "object-instance-of"))
        for target in targets:
            if target.name == cls.name:
                continue
            try:
                report = type_instance_of(f"{cls.name}ET", f"{target.name}ET", env)
                if report.verdict and not subclass_of(
                    cls.name, target.name, registry, table
                ):
                    edges.append(RelationEdge(cls.name, target.name, "type-instance-of"))
            except PytsError as exc:
                if on_error is not None:
                    on_error(cls.name, exc)
    return edges


_EDGE_STYLES = {
    "subclass-of": "solid",
    "object-instance-of": "dashed",
    "type-instance-of": "dotted",
}


def to_dot(edges: list[RelationEdge], corpus: list[ClassInfo]) -> str:
    """Graphviz rendering: solid subclass-of, dashed object-instance-of,
    dotted type-instance-of; interface-like classes drawn as ovals."""
    kinds = {c.name: c.kind for c in corpus}
    nodes = sorted({e.src for e in edges} | {e.dst for e in edges})
    lines = ["digraph relations {", "  rankdir=BT;", "  node [shape=box];"]
    for n in nodes:
        shape = " [shape=oval]" if kinds.get(n) in ("protocol", "abc") else ""
        lines.append(f'  "{n}"{shape};')
    for e in sorted(edges, key=lambda e: (e.src, e.dst, e.kind)):
        lines.append(f'  "{e.src}" -> "{e.dst}" [style={_EDGE_STYLES[e.kind]}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
