"""Surface parsing: a defined subset of Python class/function source.

Supported: class statements with simple or subscripted bases and a
`metaclass=` keyword; def statements with optional annotations;
lambda-valued class attributes; TypeVar assignments; `Name = type(...)`
with all-literal arguments; @runtime_checkable and @abstractmethod.
Anything else is skipped with a non-fatal warning. No code is executed.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field

from .core import ANY, Apply, Atom, Sum, TypeExpr, Var, normalize
from .errors import MisusedTypeVar, UnknownAnnotation
from .prelude import BUILTIN_CLASS_BASES, KWARGS, SELF, VARARGS, TypeEnv, prelude_env

_MARKER_BASES = ("Protocol", "Generic")


@dataclass(frozen=True)
class BaseRef:
    """A base-class reference: name plus optional type arguments."""

    name: str
    args: tuple[TypeExpr, ...] = ()


@dataclass(frozen=True)
class MemberSig:
    """A callable member or data attribute.

    params is None for a data attribute, whose type sits in return_type;
    methods carry the self placeholder Var("Self") as their first parameter.
    """

    name: str
    params: tuple[tuple[str, TypeExpr], ...] | None
    return_type: TypeExpr
    is_method: bool = False


@dataclass(frozen=True)
class ClassInfo:
    """Surface model of one parsed class."""

    name: str
    bases: tuple[BaseRef, ...]
    type_params: tuple[str, ...]
    members: dict[str, MemberSig]
    kind: str = "plain"  # plain | protocol | abc
    metaclass: str | None = None
    runtime_checkable: bool = False
    source_span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class ParseWarning:
    message: str
    line: int

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass
class ParsedModule:
    """Full parse result; `parse_module` exposes the (classes, functions) pair."""

    classes: list[ClassInfo] = field(default_factory=list)
    functions: list[MemberSig] = field(default_factory=list)
    assignments: list[tuple[str, ast.expr]] = field(default_factory=list)
    typevars: set[str] = field(default_factory=set)
    warnings: list[ParseWarning] = field(default_factory=list)


def parse_module(source: str) -> tuple[list[ClassInfo], list[MemberSig]]:
    parsed = parse_source(source)
    return parsed.classes, parsed.functions


def builtin_registry() -> dict[str, ClassInfo]:
    """ClassInfo stubs for the builtin classes every hierarchy bottoms out in."""
    out = {}
    for name, bases in BUILTIN_CLASS_BASES.items():
        out[name] = ClassInfo(
            name=name,
            bases=tuple(BaseRef(b) for b in bases),
            type_params=(),
            members={},
        )
    return out


# --- annotations -------------------------------------------------------------

_ATOM_ANNOTATIONS = {
    "int": "IntET",
    "str": "StrET",
    "float": "FloatET",
    "bool": "BoolET",
    "bytes": "BytesET",
    "complex": "ComplexET",
    "object": "ObjectET",
}

_BARE_CONTAINERS = {
    "list": ("ListET", 1),
    "set": ("SetET", 1),
    "frozenset": ("FrozensetET", 1),
    "dict": ("DictET", 2),
}


def annotation_to_type(
    annotation: ast.expr | str,
    env: TypeEnv,
    scope: tuple[str, ...] = (),
    *,
    known_typevars: frozenset[str] | set[str] = frozenset(),
    local_classes: frozenset[str] | set[str] = frozenset(),
    registry: dict[str, ClassInfo] | None = None,
) -> TypeExpr:
    """Map a supported annotation to its type expression.

    `scope` holds the type variables usable here; `known_typevars` the ones
    declared in the module (used only to produce MisusedTypeVar instead of
    UnknownAnnotation); `local_classes` the same-module class names.
    """
    if isinstance(annotation, str):
        try:
            annotation = ast.parse(annotation, mode="eval").body
        except SyntaxError as exc:
            raise UnknownAnnotation(f"unparsable annotation {annotation!r}") from exc
    node = annotation
    recurse = lambda n: annotation_to_type(
        n, env, scope, known_typevars=known_typevars,
        local_classes=local_classes, registry=registry,
    )

    if isinstance(node, ast.Constant):
        if node.value is None:
            return Atom("NoneTypeET")
        if isinstance(node.value, str):  # forward reference
            return recurse(node.value)
        raise UnknownAnnotation(f"unsupported literal annotation {node.value!r}")

    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.BitOr):
        return normalize(Sum((recurse(node.left), recurse(node.right))))

    name = _plain_name(node)
    if name is not None:
        if name in scope:
            return Var(name)
        if name in known_typevars:
            raise MisusedTypeVar(f"type variable {name!r} is not in scope here")
        if name == "Any":
            return ANY
        if name == "Never":
            return Atom("BottomET")
        if name == "None":
            return Atom("NoneTypeET")
        if name in _ATOM_ANNOTATIONS:
            return Atom(_ATOM_ANNOTATIONS[name])
        if name in _BARE_CONTAINERS:
            ctor, arity = _BARE_CONTAINERS[name]
            return Apply(ctor, (ANY,) * arity)
        if name == "tuple":
            return Apply("TupleET", (ANY,), variadic=True)
        if name == "type":
            return Atom("TypeET")
        if name in local_classes:
            return Atom(f"{name}ET")
        resolved = env.resolve_class(name)
        if resolved is not None:
            return Atom(resolved)
        if env.contains(name):
            return Atom(name)
        raise UnknownAnnotation(f"unknown annotation name {name!r}")

    if isinstance(node, ast.Subscript):
        head = _plain_name(node.value)
        if head is None:
            raise UnknownAnnotation("unsupported subscripted annotation")
        args = node.slice.elts if isinstance(node.slice, ast.Tuple) else [node.slice]
        if head == "Optional":
            if len(args) != 1:
                raise UnknownAnnotation("Optional takes exactly one argument")
            return normalize(Sum((recurse(args[0]), Atom("NoneTypeET"))))
        if head == "Union":
            if len(args) < 1:
                raise UnknownAnnotation("Union needs arguments")
            if len(args) == 1:
                return recurse(args[0])
            return normalize(Sum(tuple(recurse(a) for a in args)))
        if head == "Callable":
            return _callable(args, recurse)
        if head == "tuple" or head == "Tuple":
            return _tuple(args, recurse)
        if head in _BARE_CONTAINERS:
            ctor, arity = _BARE_CONTAINERS[head]
            if len(args) != arity:
                raise UnknownAnnotation(f"{head}[...] expects {arity} argument(s)")
            return Apply(ctor, tuple(recurse(a) for a in args))
        ctor = _class_constructor(head, env, local_classes, registry)
        if ctor is not None:
            et_name, arity = ctor
            if arity is not None and len(args) != arity:
                raise UnknownAnnotation(
                    f"{head}[...] expects {arity} argument(s), got {len(args)}"
                )
            return Apply(et_name, tuple(recurse(a) for a in args))
        raise UnknownAnnotation(f"unknown generic annotation {head!r}")

    raise UnknownAnnotation(f"unsupported annotation construct {ast.dump(node)[:60]}")


def _plain_name(node: ast.expr) -> str | None:
    if isinstance(node, ast.Name):
        return node.id
    if (
        isinstance(node, ast.Attribute)
        and isinstance(node.value, ast.Name)
        and node.value.id == "typing"
    ):
        return node.attr
    return None


def _callable(args: list[ast.expr], recurse) -> TypeExpr:
    from .core import Function, Product

    if len(args) != 2 or not isinstance(args[0], ast.List):
        raise UnknownAnnotation("Callable expects [[params], return]")
    params = [recurse(p) for p in args[0].elts]
    ret = recurse(args[1])
    if not params:
        return Function(Atom("NoneTypeET"), ret)
    if len(params) == 1:
        return Function(params[0], ret)
    return Function(Product(tuple(params)), ret)


def _tuple(args: list[ast.expr], recurse) -> TypeExpr:
    if len(args) == 2 and isinstance(args[1], ast.Constant) and args[1].value is Ellipsis:
        return Apply("TupleET", (recurse(args[0]),), variadic=True)
    return Apply("TupleET", tuple(recurse(a) for a in args))


def _class_constructor(
    name: str,
    env: TypeEnv,
    local_classes: frozenset[str] | set[str],
    registry: dict[str, ClassInfo] | None,
) -> tuple[str, int | None] | None:
    if registry and name in registry:
        return f"{name}ET", len(registry[name].type_params) or None
    if name in local_classes:
        return f"{name}ET", None
    resolved = env.resolve_class(name)
    if resolved is not None:
        d = env.lookup(resolved)
        return resolved, None if d.family_arity else len(d.params)
    if env.contains(name):
        d = env.lookup(name)
        return name, None if d.family_arity else len(d.params)
    return None


# --- module parsing -----------------------------------------------------------

_LITERAL_ETS = (
    (bool, "BoolET"),
    (int, "IntET"),
    (float, "FloatET"),
    (complex, "ComplexET"),
    (str, "StrET"),
    (bytes, "BytesET"),
)


def literal_type(value: object) -> TypeExpr:
    if value is None:
        return Atom("NoneTypeET")
    for pytype, et in _LITERAL_ETS:
        if isinstance(value, pytype):
            return Atom(et)
    return ANY


class _ModuleParser:
    def __init__(self, source: str, env: TypeEnv):
        self.tree = ast.parse(source)
        self.env = env
        self.out = ParsedModule()
        self.local_classes: set[str] = set()
        self.by_name: dict[str, ClassInfo] = {}

    def run(self) -> ParsedModule:
        for stmt in self.tree.body:
            if isinstance(stmt, ast.ClassDef):
                self.local_classes.add(stmt.name)
            elif (cls := self._type_call_target(stmt)) is not None:
                self.local_classes.add(cls)
            elif (tv := self._typevar_target(stmt)) is not None:
                self.out.typevars.add(tv)
        for stmt in self.tree.body:
            self._statement(stmt)
        return self.out

    def _type_call_target(self, stmt: ast.stmt) -> str | None:
        if (
            isinstance(stmt, ast.Assign)
            and len(stmt.targets) == 1
            and isinstance(stmt.targets[0], ast.Name)
            and isinstance(stmt.value, ast.Call)
            and isinstance(stmt.value.func, ast.Name)
            and stmt.value.func.id == "type"
            and len(stmt.value.args) == 3
        ):
            return stmt.targets[0].id
        return None

    def _typevar_target(self, stmt: ast.stmt) -> str | None:
        if (
            isinstance(stmt, ast.Assign)
            and len(stmt.targets) == 1
            and isinstance(stmt.targets[0], ast.Name)
            and isinstance(stmt.value, ast.Call)
            and isinstance(stmt.value.func, ast.Name)
            and stmt.value.func.id == "TypeVar"
        ):
            return stmt.targets[0].id
        return None

    def warn(self, message: str, node: ast.AST) -> None:
        self.out.warnings.append(ParseWarning(message, getattr(node, "lineno", 0)))

    def _statement(self, stmt: ast.stmt) -> None:
        if isinstance(stmt, ast.ClassDef):
            info = self._class(stmt)
            self.out.classes.append(info)
            self.by_name[info.name] = info
            return
        if isinstance(stmt, ast.FunctionDef):
            if stmt.decorator_list:
                self.warn(f"decorated top-level function {stmt.name!r} skipped", stmt)
                return
            self.out.functions.append(self._function(stmt, in_class=False))
            return
        if isinstance(stmt, (ast.Import, ast.ImportFrom)):
            return  # imports carry no model content; same-run names only
        if isinstance(stmt, ast.Expr) and isinstance(stmt.value, ast.Constant):
            return  # docstring
        if self._typevar_target(stmt) is not None:
            return  # recorded in the prepass
        if (name := self._type_call_target(stmt)) is not None:
            info = self._type_call_class(name, stmt)
            if info is not None:
                self.out.classes.append(info)
                self.by_name[info.name] = info
            return
        if (
            isinstance(stmt, ast.Assign)
            and len(stmt.targets) == 1
            and isinstance(stmt.targets[0], ast.Name)
        ):
            self.out.assignments.append((stmt.targets[0].id, stmt.value))
            return
        self.warn(f"unsupported construct {type(stmt).__name__} skipped", stmt)

    # -- classes -------------------------------------------------------------

    def _class(self, node: ast.ClassDef) -> ClassInfo:
        type_params = self._marker_params(node)
        scope = tuple(type_params)
        bases: list[BaseRef] = []
        for b in node.bases:
            ref = self._base_ref(b, scope)
            if ref is not None:
                bases.append(ref)
        metaclass = None
        for kw in node.keywords:
            if kw.arg == "metaclass" and isinstance(kw.value, ast.Name):
                metaclass = kw.value.id
            else:
                self.warn(f"class keyword {kw.arg!r} ignored", node)
        runtime_checkable = False
        for dec in node.decorator_list:
            if self._decorator_name(dec) == "runtime_checkable":
                runtime_checkable = True
            else:
                self.warn(f"decorator on class {node.name!r} ignored", dec)
        kind = self._kind(bases, metaclass)
        members = self._members(node, scope)
        return ClassInfo(
            name=node.name,
            bases=tuple(bases),
            type_params=tuple(type_params),
            members=members,
            kind=kind,
            metaclass=metaclass,
            runtime_checkable=runtime_checkable,
            source_span=(node.lineno, node.end_lineno or node.lineno),
        )

    def _marker_params(self, node: ast.ClassDef) -> list[str]:
        """Type variables named in Generic[...]/Protocol[...] bases, in order."""
        params: list[str] = []
        for b in node.bases:
            if (
                isinstance(b, ast.Subscript)
                and isinstance(b.value, ast.Name)
                and b.value.id in _MARKER_BASES
            ):
                elts = b.slice.elts if isinstance(b.slice, ast.Tuple) else [b.slice]
                for e in elts:
                    if isinstance(e, ast.Name) and e.id not in params:
                        params.append(e.id)
        return params

    def _base_ref(self, node: ast.expr, scope: tuple[str, ...]) -> BaseRef | None:
        if isinstance(node, ast.Name):
            return BaseRef(node.id)
        if isinstance(node, ast.Subscript) and isinstance(node.value, ast.Name):
            elts = node.slice.elts if isinstance(node.slice, ast.Tuple) else [node.slice]
            args = tuple(self._annotation(e, scope) for e in elts)
            return BaseRef(node.value.id, args)
        self.warn("unsupported base expression skipped", node)
        return None

    def _kind(self, bases: list[BaseRef], metaclass: str | None) -> str:
        for b in bases:
            if b.name == "Protocol":
                return "protocol"
            prior = self.by_name.get(b.name)
            if prior is not None and prior.kind == "protocol":
                return "protocol"
        if metaclass == "ABCMeta":
            return "abc"
        for b in bases:
            if b.name == "ABC":
                return "abc"
            prior = self.by_name.get(b.name)
            if prior is not None and prior.kind == "abc":
                return "abc"
        return "plain"

    def _members(self, node: ast.ClassDef, scope: tuple[str, ...]) -> dict[str, MemberSig]:
        members: dict[str, MemberSig] = {}
        init_node: ast.FunctionDef | None = None
        for stmt in node.body:
            if isinstance(stmt, ast.FunctionDef):
                skip = False
                for dec in stmt.decorator_list:
                    if self._decorator_name(dec) != "abstractmethod":
                        self.warn(
                            f"decorated member {node.name}.{stmt.name} skipped", stmt
                        )
                        skip = True
                        break
                if skip:
                    continue
                sig = self._function(stmt, in_class=True, scope=scope)
                members[sig.name] = sig
                if stmt.name == "__init__":
                    init_node = stmt
            elif (
                isinstance(stmt, ast.Assign)
                and len(stmt.targets) == 1
                and isinstance(stmt.targets[0], ast.Name)
            ):
                name = stmt.targets[0].id
                if isinstance(stmt.value, ast.Lambda):
                    members[name] = self._lambda_member(name, stmt.value)
                else:
                    self.warn(f"class attribute {node.name}.{name} skipped", stmt)
            elif isinstance(stmt, (ast.Expr, ast.Pass)):
                continue
            else:
                self.warn(
                    f"unsupported construct in class {node.name!r} skipped", stmt
                )
        if init_node is not None:
            self._init_attributes(init_node, members)
        return members

    def _decorator_name(self, dec: ast.expr) -> str | None:
        if isinstance(dec, ast.Name):
            return dec.id
        if isinstance(dec, ast.Attribute):
            return dec.attr
        return None

    def _function(
        self, node: ast.FunctionDef, in_class: bool, scope: tuple[str, ...] = ()
    ) -> MemberSig:
        a = node.args
        positional = list(a.posonlyargs) + list(a.args)
        params: list[tuple[str, TypeExpr]] = []
        is_method = bool(in_class and positional and positional[0].arg == "self")
        for i, arg in enumerate(positional):
            if is_method and i == 0:
                params.append(("self", Var(SELF)))
            else:
                params.append((arg.arg, self._maybe_annotation(arg.annotation, scope)))
        if a.vararg is not None:
            params.append((f"*{a.vararg.arg}", VARARGS))
        for arg in a.kwonlyargs:
            params.append((arg.arg, self._maybe_annotation(arg.annotation, scope)))
        if a.kwarg is not None:
            params.append((f"**{a.kwarg.arg}", KWARGS))
        returns = self._maybe_annotation(node.returns, scope)
        return MemberSig(
            name=node.name,
            params=tuple(params),
            return_type=returns,
            is_method=is_method,
        )

    def _lambda_member(self, name: str, node: ast.Lambda) -> MemberSig:
        a = node.args
        positional = list(a.posonlyargs) + list(a.args)
        is_method = bool(positional and positional[0].arg == "self")
        params: list[tuple[str, TypeExpr]] = []
        for i, arg in enumerate(positional):
            if is_method and i == 0:
                params.append(("self", Var(SELF)))
            else:
                params.append((arg.arg, ANY))
        if isinstance(node.body, ast.Constant):
            returns = literal_type(node.body.value)
        else:
            returns = ANY
        return MemberSig(name=name, params=tuple(params), return_type=returns, is_method=is_method)

    def _init_attributes(self, init: ast.FunctionDef, members: dict[str, MemberSig]) -> None:
        """`self.name = expr` in __init__ becomes a data attribute."""
        sig = members.get("__init__")
        param_types = dict(sig.params) if sig and sig.params else {}
        for stmt in init.body:
            if not (
                isinstance(stmt, ast.Assign)
                and len(stmt.targets) == 1
                and isinstance(stmt.targets[0], ast.Attribute)
                and isinstance(stmt.targets[0].value, ast.Name)
                and stmt.targets[0].value.id == "self"
            ):
                continue
            attr = stmt.targets[0].attr
            if attr in members:
                continue
            if isinstance(stmt.value, ast.Name) and stmt.value.id in param_types:
                attr_type = param_types[stmt.value.id]
            else:
                attr_type = ANY
            members[attr] = MemberSig(name=attr, params=None, return_type=attr_type)

    def _type_call_class(self, name: str, stmt: ast.Assign) -> ClassInfo | None:
        call = stmt.value
        name_arg, bases_arg, dict_arg = call.args
        if not (
            isinstance(name_arg, ast.Constant)
            and isinstance(name_arg.value, str)
            and isinstance(bases_arg, ast.Tuple)
            and isinstance(dict_arg, ast.Dict)
        ):
            self.warn("dynamic type(...) call skipped (arguments must be literals)", stmt)
            return None
        bases: list[BaseRef] = []
        for b in bases_arg.elts:
            if isinstance(b, ast.Name):
                bases.append(BaseRef(b.id))
            else:
                self.warn("dynamic base in type(...) call skipped", b)
        members: dict[str, MemberSig] = {}
        for key, value in zip(dict_arg.keys, dict_arg.values):
            if not (isinstance(key, ast.Constant) and isinstance(key.value, str)):
                self.warn("dynamic key in type(...) namespace skipped", stmt)
                continue
            if isinstance(value, ast.Lambda):
                members[key.value] = self._lambda_member(key.value, value)
            elif isinstance(value, ast.Constant):
                members[key.value] = MemberSig(
                    name=key.value, params=None, return_type=literal_type(value.value)
                )
            else:
                members[key.value] = MemberSig(name=key.value, params=None, return_type=ANY)
        return ClassInfo(
            name=name,
            bases=tuple(bases),
            type_params=(),
            members=members,
            source_span=(stmt.lineno, stmt.end_lineno or stmt.lineno),
        )

    # -- annotations -----------------------------------------------------------

    def _maybe_annotation(self, node: ast.expr | None, scope: tuple[str, ...]) -> TypeExpr:
        if node is None:
            return ANY
        return self._annotation(node, scope)

    def _annotation(self, node: ast.expr, scope: tuple[str, ...]) -> TypeExpr:
        return annotation_to_type(
            node,
            self.env,
            scope,
            known_typevars=frozenset(self.out.typevars),
            local_classes=frozenset(self.local_classes),
            registry=self.by_name,
        )


def parse_source(source: str, env: TypeEnv | None = None) -> ParsedModule:
    """Parse a module of the supported subset; never executes anything."""
    return _ModuleParser(source, env or prelude_env()).run()
