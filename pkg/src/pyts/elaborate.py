"""Elaboration of parsed classes and functions into named existential types.

A class becomes ∀(params).∃Self<:Bound.{members, ...}: protocols are
bounded by ProtocolET_n, other classes by their first base (ObjectET when
there is none). A bare generic first base is generalized with fresh type
parameters, which is what makes a `list` subclass generic. Members of the
remaining bases are merged into the record in C3 order, first definition
wins; the first base's members stay reachable through the bound instead.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field

from .core import (
    ANY,
    Apply,
    Atom,
    Function,
    Product,
    Record,
    Sum,
    TypeExpr,
    Var,
    _subst,
    normalize,
)
from .errors import UnknownBase
from .frontend import (
    ClassInfo,
    MemberSig,
    ParsedModule,
    ParseWarning,
    literal_type,
    parse_source,
)
from .mro import c3_linearize, full_registry
from .prelude import SELF, Definition, TypeEnv

_MARKERS = ("Protocol", "Generic")
_NEVER_MERGED = {"object", "Protocol", "Generic", "ABC"}


def member_field(sig: MemberSig) -> TypeExpr:
    """The record-field type of one member."""
    if sig.params is None:
        return sig.return_type  # data attribute
    returns = Var(SELF) if sig.name == "__init__" else sig.return_type
    factors = [t for _, t in sig.params]
    if not factors:
        return Function(Atom("NoneTypeET"), returns)
    if len(factors) == 1:
        return Function(factors[0], returns)
    return Function(Product(tuple(factors)), returns)


def elaborate_function(fn: MemberSig, env: TypeEnv) -> TypeExpr:
    """Function(Product(params...) | single | NoneTypeET, return)."""
    return member_field(fn)


def elaborate_class(
    cls: ClassInfo, env: TypeEnv, registry: dict[str, ClassInfo]
) -> Definition:
    """Add `<name>ET` to env and return its definition."""
    params = list(cls.type_params)
    bound = _bound_for(cls, env, registry, params)
    fields = _resolve_members(cls, env, registry)
    record = Record(tuple(fields.items()), open=True)
    definition = Definition(
        params=tuple(params),
        bound=bound,
        signature=record,
        class_name=cls.name,
        self_var=SELF,
    )
    env.check_wf(record)
    if bound is not None:
        env.check_wf(bound)
    env.define(f"{cls.name}ET", definition)
    return definition


def _bound_for(
    cls: ClassInfo,
    env: TypeEnv,
    registry: dict[str, ClassInfo],
    params: list[str],
) -> TypeExpr:
    if cls.kind == "protocol":
        n = len(params)
        if n == 0:
            return Atom("ProtocolET0")
        return Apply(f"ProtocolET{n}", tuple(Var(p) for p in params))
    real = [b for b in cls.bases if b.name not in _MARKERS]
    if not real:
        if params:  # Generic[...] marker without a concrete base
            return Apply(f"GenericET{len(params)}", tuple(Var(p) for p in params))
        return Atom("ObjectET")
    first = real[0]
    et_name = _resolve_base(first.name, env, registry)
    if et_name is None:
        raise UnknownBase(f"base class {first.name!r} resolves nowhere")
    d = env.lookup(et_name)
    if first.args:
        return Apply(et_name, first.args)
    arity = len(d.params)
    if arity == 0 and not d.family_arity:
        return Atom(et_name)
    if d.family_arity:
        arity = 1  # a bare `tuple` base generalizes over one element type
    fresh = _fresh_params(arity, params)
    params.extend(fresh)
    return Apply(et_name, tuple(Var(p) for p in fresh))


def _resolve_base(
    name: str, env: TypeEnv, registry: dict[str, ClassInfo]
) -> str | None:
    if name in registry and env.contains(f"{name}ET"):
        return f"{name}ET"
    resolved = env.resolve_class(name)
    if resolved is not None:
        return resolved
    if env.contains(f"{name}ET"):
        return f"{name}ET"
    return None


def _fresh_params(arity: int, taken: list[str]) -> list[str]:
    if arity == 1 and "T" not in taken:
        return ["T"]
    out = []
    i = 1
    while len(out) < arity:
        cand = f"T{i}"
        if cand not in taken and cand not in out:
            out.append(cand)
        i += 1
    return out


def _resolve_members(
    cls: ClassInfo, env: TypeEnv, registry: dict[str, ClassInfo]
) -> dict[str, TypeExpr]:
    """Record fields by MRO resolution: the first definition along the MRO
    wins; names first defined inside the first base's own MRO are omitted
    (the bound provides them), as are the marker classes and object."""
    reg = full_registry(registry.values())
    reg[cls.name] = cls
    order = c3_linearize(cls, reg)
    omitted: set[str] = set(_NEVER_MERGED)
    if cls.kind != "protocol":
        real = [b for b in cls.bases if b.name not in _MARKERS]
        if real and real[0].name in reg:
            omitted |= set(c3_linearize(reg[real[0].name], reg))
    direct_args = {b.name: b.args for b in cls.bases}
    fields: dict[str, TypeExpr] = {}
    assigned: set[str] = set()
    for source in order:
        merged = source == cls.name or source not in omitted
        for name, ftype in _members_of(
            cls, source, direct_args.get(source, ()), env, registry
        ).items():
            if name in assigned:
                continue
            assigned.add(name)
            if merged:
                fields[name] = ftype
    return fields


def _members_of(
    cls: ClassInfo,
    source: str,
    args: tuple[TypeExpr, ...],
    env: TypeEnv,
    registry: dict[str, ClassInfo],
) -> dict[str, TypeExpr]:
    if source == cls.name:
        info: ClassInfo | None = cls
    else:
        info = registry.get(source)
    if info is not None and info.members:
        if info is cls:
            mapping: dict[str, TypeExpr] = {}  # own params stay quantified
        else:
            mapping = dict(zip(info.type_params, args))
            for p in info.type_params[len(args):]:
                mapping[p] = ANY
        return {
            name: _subst(member_field(sig), mapping)
            for name, sig in info.members.items()
        }
    if info is cls:
        return {}
    et_name = env.resolve_class(source)
    if et_name is None:
        return {}
    d = env.lookup(et_name)
    mapping = {d.self_var: Var(SELF)}
    mapping.update(dict(zip(d.params, args)))
    for p in d.params[len(args):]:
        mapping[p] = ANY
    if not isinstance(d.signature, Record):
        return {}
    return {name: _subst(t, mapping) for name, t in d.signature.fields}


# --- module-level value typing -------------------------------------------------


def infer_value_type(
    node: ast.expr,
    env: TypeEnv,
    registry: dict[str, ClassInfo],
    bindings: dict[str, TypeExpr],
) -> TypeExpr:
    """Best-effort type of a module-level expression; Any when unknown."""
    if isinstance(node, ast.Constant):
        return literal_type(node.value)
    if isinstance(node, ast.List):
        return Apply("ListET", (_join(node.elts, env, registry, bindings),))
    if isinstance(node, ast.Set):
        return Apply("SetET", (_join(node.elts, env, registry, bindings),))
    if isinstance(node, ast.Tuple):
        return Apply(
            "TupleET",
            tuple(infer_value_type(e, env, registry, bindings) for e in node.elts),
        )
    if isinstance(node, ast.Dict):
        keys = [k for k in node.keys if k is not None]
        return Apply(
            "DictET",
            (_join(keys, env, registry, bindings), _join(node.values, env, registry, bindings)),
        )
    if isinstance(node, ast.Name):
        if node.id in bindings:
            return bindings[node.id]
        if _class_et(node.id, env, registry) is not None:
            return Atom("TypeET")  # a class used as a value
        return ANY
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        fname = node.func.id
        if fname == "TypeVar":
            return Atom("TypeVarET")
        if fname == "type" and len(node.args) == 1:
            return Atom("TypeET")
        et_name = _class_et(fname, env, registry)
        if et_name is not None:
            return _constructor_call(et_name, node, env, registry, bindings)
    return ANY


def _class_et(name: str, env: TypeEnv, registry: dict[str, ClassInfo]) -> str | None:
    if name in registry and env.contains(f"{name}ET"):
        return f"{name}ET"
    return env.resolve_class(name)


def _join(
    nodes: list[ast.expr],
    env: TypeEnv,
    registry: dict[str, ClassInfo],
    bindings: dict[str, TypeExpr],
) -> TypeExpr:
    types = [infer_value_type(n, env, registry, bindings) for n in nodes]
    if not types:
        return ANY
    if len(types) == 1:
        return types[0]
    return normalize(Sum(tuple(types)))


def _constructor_call(
    et_name: str,
    node: ast.Call,
    env: TypeEnv,
    registry: dict[str, ClassInfo],
    bindings: dict[str, TypeExpr],
) -> TypeExpr:
    d = env.lookup(et_name)
    if not d.params:
        return Atom(et_name)
    solved: dict[str, TypeExpr] = {}
    if d.bound is not None and len(node.args) == 1:
        arg_type = infer_value_type(node.args[0], env, registry, bindings)
        _match(d.bound, arg_type, solved)
    return Apply(et_name, tuple(solved.get(p, ANY) for p in d.params))


def _match(pattern: TypeExpr, value: TypeExpr, out: dict[str, TypeExpr]) -> None:
    if isinstance(pattern, Var):
        out.setdefault(pattern.name, value)
        return
    if (
        isinstance(pattern, Apply)
        and isinstance(value, Apply)
        and pattern.constructor == value.constructor
        and len(pattern.args) == len(value.args)
    ):
        for p, v in zip(pattern.args, value.args):
            _match(p, v, out)


# --- whole-module driver ---------------------------------------------------------


@dataclass
class ModuleElaboration:
    """Everything one module contributes, in source order."""

    definitions: dict[str, Definition] = field(default_factory=dict)
    functions: dict[str, TypeExpr] = field(default_factory=dict)
    bindings: dict[str, TypeExpr] = field(default_factory=dict)
    warnings: list[ParseWarning] = field(default_factory=list)


def elaborate_source(
    source: str,
    env: TypeEnv,
    registry: dict[str, ClassInfo] | None = None,
) -> ModuleElaboration:
    """Parse and elaborate one module into env (and the shared registry)."""
    parsed = parse_source(source, env)
    return elaborate_parsed(parsed, env, registry)


def elaborate_parsed(
    parsed: ParsedModule,
    env: TypeEnv,
    registry: dict[str, ClassInfo] | None = None,
) -> ModuleElaboration:
    registry = registry if registry is not None else {}
    for cls in parsed.classes:
        registry[cls.name] = cls
    out = ModuleElaboration(warnings=list(parsed.warnings))
    for cls in parsed.classes:
        out.definitions[f"{cls.name}ET"] = elaborate_class(cls, env, registry)
    for fn in parsed.functions:
        out.functions[fn.name] = elaborate_function(fn, env)
    for name, node in parsed.assignments:
        out.bindings[name] = infer_value_type(node, env, registry, out.bindings)
    for tv in sorted(parsed.typevars):
        out.bindings.setdefault(tv, Atom("TypeVarET"))
    return out
