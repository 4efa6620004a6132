"""Built-in type environment: atomic and container existential types, the
TypeVar/Generic/Protocol machinery and the metaclass layer.

Signatures contain only the members the built-in displays spell out, plus
__len__ on the containers; every record is open, so omissions stay sound.
Mutually recursive signatures (IntET's __repr__ returns StrET, StrET's
__len__ returns IntET) work because members reference other types by name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .core import (
    Apply,
    Atom,
    Exists,
    Forall,
    Function,
    Product,
    Record,
    TypeExpr,
    Var,
)
from .errors import ArityMismatch, InvalidArity, NameClash, UnknownName

SELF = "Self"

_OBJECT = Atom("ObjectET")
_BOTTOM = Atom("BottomET")
_NONE = Atom("NoneTypeET")
_BOOL = Atom("BoolET")
_INT = Atom("IntET")
_STR = Atom("StrET")

# TupleET[ObjectET, ...] x DictET[StrET, ObjectET]: the arbitrary *args/**kwargs pair.
VARARGS = Apply("TupleET", (_OBJECT,), variadic=True)
KWARGS = Apply("DictET", (_STR, _OBJECT))

# The metaclass type's canonical witness and its known subtypes.
CANONICAL_META_WITNESSES = ("type", "ABCMeta", "_ProtocolMeta")

# Base-class facts for the implicit class registry (name -> direct bases).
BUILTIN_CLASS_BASES: dict[str, tuple[str, ...]] = {
    "object": (),
    "type": ("object",),
    "int": ("object",),
    "bool": ("int",),
    "float": ("object",),
    "complex": ("object",),
    "str": ("object",),
    "bytes": ("object",),
    "bytearray": ("object",),
    "list": ("object",),
    "tuple": ("object",),
    "set": ("object",),
    "frozenset": ("object",),
    "dict": ("object",),
    "NoneType": ("object",),
    "TypeVar": ("object",),
    "Generic": ("object",),
    "Protocol": ("Generic",),
    "ABC": ("object",),
    "ABCMeta": ("type",),
}


class Family(Enum):
    GENERIC = "Generic"
    PROTOCOL = "Protocol"
    TUPLE = "Tuple"


@dataclass(frozen=True)
class FamilyIndex:
    """An arity-indexed built-in family member, e.g. (Protocol, 2)."""

    family: Family
    arity: int

    def __post_init__(self) -> None:
        if self.family is Family.GENERIC and self.arity < 1:
            raise InvalidArity("generic family starts at arity 1")
        if self.arity < 0:
            raise InvalidArity("arity must be non-negative")


@dataclass(frozen=True)
class Definition:
    """A named ET: type parameters, optional bound, record signature.

    `family_arity=True` marks constructors applicable at any arity
    (TupleET); `is_meta` marks the metaclass layer (TypeET).
    """

    params: tuple[str, ...]
    bound: TypeExpr | None
    signature: TypeExpr
    is_meta: bool = False
    class_name: str | None = None
    self_var: str = SELF
    family_arity: bool = False


def def_type(d: Definition) -> TypeExpr:
    """The full quantified type of a definition."""
    body = Exists(d.self_var, d.bound, d.signature)
    return Forall(d.params, body) if d.params else body


_FAMILY_NAME = re.compile(r"^(GenericET|ProtocolET)(\d+)$")


class TypeEnv:
    """Named, mutually recursive ET definitions.

    The prelude is frozen after construction; user elaborations go into a
    `child()` layer, so the prelude itself is never mutated.
    """

    def __init__(self, parent: TypeEnv | None = None, numeric_tower: bool = True):
        self._parent = parent
        self._defs: dict[str, Definition] = {}
        self._by_class: dict[str, str] = {}
        self._virtual: list[tuple[str, str]] = []
        self._frozen = False
        self.numeric_tower = parent.numeric_tower if parent else numeric_tower

    def freeze(self) -> None:
        self._frozen = True

    def child(self) -> TypeEnv:
        return TypeEnv(parent=self)

    def define(self, name: str, definition: Definition) -> None:
        if self._frozen:
            raise NameClash("environment is frozen; extend a child instead")
        if self.contains(name):
            raise NameClash(f"{name} is already defined")
        self._defs[name] = definition
        if definition.class_name:
            self._by_class[definition.class_name] = name

    def contains(self, name: str) -> bool:
        env: TypeEnv | None = self
        while env is not None:
            if name in env._defs:
                return True
            env = env._parent
        return _FAMILY_NAME.match(name) is not None

    def lookup(self, name: str) -> Definition:
        env: TypeEnv | None = self
        while env is not None:
            if name in env._defs:
                return env._defs[name]
            env = env._parent
        m = _FAMILY_NAME.match(name)
        if m:
            n = int(m.group(2))
            if m.group(1) == "GenericET":
                return _generic_definition(n)
            return _protocol_definition(n)
        raise UnknownName(f"unknown ET-name: {name}")

    def resolve_class(self, class_name: str) -> str | None:
        """ET-name for a Python class name, if one is defined."""
        env: TypeEnv | None = self
        while env is not None:
            if class_name in env._by_class:
                return env._by_class[class_name]
            env = env._parent
        return None

    def names(self) -> list[str]:
        out: set[str] = set()
        env: TypeEnv | None = self
        while env is not None:
            out.update(env._defs)
            env = env._parent
        return sorted(out)

    # -- nominal edges -------------------------------------------------------

    def add_virtual_pairs(self, pairs: list[tuple[str, str]]) -> None:
        if self._frozen:
            raise NameClash("environment is frozen; extend a child instead")
        self._virtual.extend(pairs)

    def virtual_pairs(self) -> list[tuple[str, str]]:
        out: list[tuple[str, str]] = []
        env: TypeEnv | None = self
        while env is not None:
            out.extend(env._virtual)
            env = env._parent
        return out

    def atom_parents(self, name: str) -> set[str]:
        """Direct nominal supertypes of an atom: tower and virtual edges."""
        parents: set[str] = set()
        if self.numeric_tower:
            tower = ("BoolET", "IntET", "FloatET", "ComplexET")
            if name in tower[:-1]:
                parents.add(tower[tower.index(name) + 1])
        for sub, sup in self.virtual_pairs():
            if self._edge_name(sub) == name:
                target = self._edge_name(sup)
                if target is not None and self.contains(target):
                    parents.add(target)
        return parents

    def _edge_name(self, raw: str) -> str | None:
        resolved = self.resolve_class(raw)
        if resolved is not None:
            return resolved
        return raw if self.contains(raw) else None

    def check_wf(self, expr: TypeExpr) -> None:
        """Every referenced name resolves and applications match arity."""
        match expr:
            case Atom(name):
                self.lookup(name)
            case Apply(ctor, args, variadic):
                d = self.lookup(ctor)
                if not d.family_arity and not variadic and len(args) != len(d.params):
                    raise ArityMismatch(
                        f"{ctor} expects {len(d.params)} argument(s), got {len(args)}"
                    )
                for a in args:
                    self.check_wf(a)
            case Record(fields, _):
                for _, t in fields:
                    self.check_wf(t)
            case Product(factors):
                for f in factors:
                    self.check_wf(f)
            case Function(dom, cod):
                self.check_wf(dom)
                self.check_wf(cod)
            case Forall(_, body):
                self.check_wf(body)
            case Exists(_, bound, body):
                if bound is not None:
                    self.check_wf(bound)
                self.check_wf(body)
            case _:
                pass


def _method(*domain: TypeExpr, returns: TypeExpr) -> TypeExpr:
    dom = domain[0] if len(domain) == 1 else Product(tuple(domain))
    return Function(dom, returns)


def _generic_definition(n: int) -> Definition:
    if n < 1:
        raise InvalidArity("GenericET requires at least one type parameter")
    params = tuple(f"T{i}" for i in range(1, n + 1))
    sig = Record(
        ((
            "__parameters__",
            Function(_NONE, Apply("TupleET", (Atom("TypeVarET"),) * n)),
        ),),
        open=True,
    )
    return Definition(params=params, bound=_OBJECT, signature=sig)


def _protocol_definition(n: int) -> Definition:
    if n < 0:
        raise InvalidArity("ProtocolET arity must be non-negative")
    params = tuple(f"T{i}" for i in range(1, n + 1))
    bound = Apply(f"GenericET{n + 1}", (Var(SELF),) + tuple(Var(p) for p in params))
    sig = Record(
        (
            ("__new__", _method(Var(SELF), VARARGS, KWARGS, returns=_BOTTOM)),
            ("_is_protocol", Function(_NONE, _BOOL)),
            ("_is_runtime_protocol", Function(_NONE, _BOOL)),
        ),
        open=True,
    )
    return Definition(params=params, bound=bound, signature=sig)


def _tuple_definition(n: int) -> Definition:
    params = tuple(f"E{i}" for i in range(1, n + 1))
    sig = Record((("__len__", Function(Var(SELF), _INT)),), open=True)
    return Definition(params=params, bound=None, signature=sig)


def family_type(index: FamilyIndex) -> TypeExpr:
    """The quantified type of a family member, exactly as displayed."""
    if index.family is Family.GENERIC:
        return def_type(_generic_definition(index.arity))
    if index.family is Family.PROTOCOL:
        return def_type(_protocol_definition(index.arity))
    return def_type(_tuple_definition(index.arity))


def object_et() -> TypeExpr:
    """The top type: ∃O with __new__/__init__ over *args/**kwargs."""
    return def_type(_object_definition())


def type_et() -> TypeExpr:
    """The metaclass layer: classes-as-values built from (name, bases, dict, kwargs)."""
    return def_type(_type_definition())


def _object_definition() -> Definition:
    sig = Record(
        (
            ("__new__", _method(VARARGS, KWARGS, returns=Var(SELF))),
            ("__init__", _method(Var(SELF), VARARGS, KWARGS, returns=Var(SELF))),
        ),
        open=True,
    )
    return Definition(params=(), bound=None, signature=sig, class_name="object")


def _type_definition() -> Definition:
    new = _method(
        _STR,
        Apply("TupleET", (Atom("TypeET"),), variadic=True),
        KWARGS,
        KWARGS,
        returns=Var(SELF),
    )
    sig = Record((("__new__", new),), open=True)
    return Definition(
        params=(), bound=_OBJECT, signature=sig, is_meta=True, class_name="type"
    )


def _empty(class_name: str) -> Definition:
    return Definition(params=(), bound=None, signature=Record((), open=True), class_name=class_name)


def _sized_container(class_name: str, params: tuple[str, ...], family: bool = False) -> Definition:
    sig = Record((("__len__", Function(Var(SELF), _INT)),), open=True)
    return Definition(
        params=params, bound=None, signature=sig, class_name=class_name, family_arity=family
    )


def prelude_env(numeric_tower: bool = True) -> TypeEnv:
    """A frozen environment holding every built-in existential type."""
    env = TypeEnv(numeric_tower=numeric_tower)
    env.define("ObjectET", _object_definition())
    # BottomET has no runtime class; typing.Never plays its annotation role.
    env.define("BottomET", Definition((), None, Record((), open=True)))
    env.define("NoneTypeET", _empty("NoneType"))
    env.define("BoolET", _empty("bool"))
    env.define(
        "IntET",
        Definition(
            params=(),
            bound=None,
            signature=Record((("__repr__", Function(Var(SELF), _STR)),), open=True),
            class_name="int",
        ),
    )
    env.define("FloatET", _empty("float"))
    env.define("ComplexET", _empty("complex"))
    env.define(
        "StrET",
        Definition(
            params=(),
            bound=None,
            signature=Record((("__len__", Function(Var(SELF), _INT)),), open=True),
            class_name="str",
        ),
    )
    env.define("BytesET", _empty("bytes"))
    env.define("ListET", _sized_container("list", ("T",)))
    env.define("TupleET", _sized_container("tuple", (), family=True))
    # bytearray is not user-parameterizable; fixed to byte (IntET) elements.
    env.define("BytearrayET", _sized_container("bytearray", ()))
    env.define("SetET", _sized_container("set", ("T",)))
    env.define("FrozensetET", _sized_container("frozenset", ("T",)))
    env.define("DictET", _sized_container("dict", ("K", "V")))
    env.define(
        "TypeVarET",
        Definition(
            params=(),
            bound=_OBJECT,
            signature=Record((("__name__", Function(_NONE, _STR)),), open=True),
            class_name="TypeVar",
        ),
    )
    env.define("TypeET", _type_definition())
    env.freeze()
    return env


def load_virtual_table(text: str) -> list[tuple[str, str]]:
    """Parse `Sub Base` pairs, one per line; '#' starts a comment."""
    pairs: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"virtual table line {lineno}: expected 'Sub Base', got {raw!r}")
        pairs.append((parts[0], parts[1]))
    return pairs
