"""Type-expression tree and the pure syntactic operations on it.

Expressions are immutable; every operation returns a new tree. Binders are
named, substitution is capture-avoiding, and `Exists` scopes its variable
over both the bound and the body so F-bounded signatures (a bound that
mentions the hidden variable) are representable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ArityMismatch, NotGeneric

# Distinguished atom names the engine gives special subtyping rules to.
OBJECT_ET = "ObjectET"
BOTTOM_ET = "BottomET"


@dataclass(frozen=True)
class TypeExpr:
    """Base class of all type-expression variants."""

    def __str__(self) -> str:
        from .render import render_type

        return render_type(self)


@dataclass(frozen=True)
class Atom(TypeExpr):
    """A named existential type, e.g. IntET, ObjectET."""

    name: str


@dataclass(frozen=True)
class Var(TypeExpr):
    """A type variable, bound by an enclosing Forall/Exists or free."""

    name: str


@dataclass(frozen=True)
class Apply(TypeExpr):
    """Generic application Name[A, B]; variadic=True models Name[A, ...]."""

    constructor: str
    args: tuple[TypeExpr, ...]
    variadic: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if self.variadic and len(self.args) != 1:
            raise ValueError("variadic application takes exactly one element type")


@dataclass(frozen=True)
class Record(TypeExpr):
    """Member-name -> type mapping; open records admit unlisted members.

    Fields are kept name-sorted (canonical order), so dataclass equality is
    order-insensitive and rendering is deterministic.
    """

    fields: tuple[tuple[str, TypeExpr], ...]
    open: bool = True

    def __post_init__(self) -> None:
        items = tuple(sorted(self.fields, key=lambda kv: kv[0]))
        names = [n for n, _ in items]
        if len(set(names)) != len(names):
            raise ValueError("record member names must be unique")
        object.__setattr__(self, "fields", items)

    def get(self, name: str) -> TypeExpr | None:
        for n, t in self.fields:
            if n == name:
                return t
        return None

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.fields)


@dataclass(frozen=True)
class Product(TypeExpr):
    """Ordered cartesian product, arity >= 2."""

    factors: tuple[TypeExpr, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))
        if len(self.factors) < 2:
            raise ValueError("product needs at least two factors")


@dataclass(frozen=True)
class Sum(TypeExpr):
    """Union of alternatives, arity >= 2 (normalize collapses singletons)."""

    alternatives: tuple[TypeExpr, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        if len(self.alternatives) < 2:
            raise ValueError("sum needs at least two alternatives")


@dataclass(frozen=True)
class Function(TypeExpr):
    """A -> B."""

    domain: TypeExpr
    codomain: TypeExpr


@dataclass(frozen=True)
class Forall(TypeExpr):
    """Universal head binding one or more variables in a single prefix."""

    vars: tuple[str, ...]
    body: TypeExpr

    def __post_init__(self) -> None:
        object.__setattr__(self, "vars", tuple(self.vars))
        if not self.vars:
            raise ValueError("forall binds at least one variable")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("forall variables must be distinct")


@dataclass(frozen=True)
class Exists(TypeExpr):
    """Existential binding one hidden variable, optionally bounded.

    The variable is in scope in `bound` as well as `body` (F-bounded
    quantification); bound=None means unbounded (top).
    """

    var: str
    bound: TypeExpr | None
    body: TypeExpr


@dataclass(frozen=True)
class AnyType(TypeExpr):
    """The gradual-typing wildcard, compatible in both directions."""


ANY = AnyType()


def free_vars(expr: TypeExpr) -> set[str]:
    """Identifiers occurring free in `expr`."""
    match expr:
        case Var(name):
            return {name}
        case Atom() | AnyType():
            return set()
        case Apply(_, args, _):
            out: set[str] = set()
            for a in args:
                out |= free_vars(a)
            return out
        case Record(fields, _):
            out = set()
            for _, t in fields:
                out |= free_vars(t)
            return out
        case Product(factors):
            out = set()
            for f in factors:
                out |= free_vars(f)
            return out
        case Sum(alts):
            out = set()
            for a in alts:
                out |= free_vars(a)
            return out
        case Function(dom, cod):
            return free_vars(dom) | free_vars(cod)
        case Forall(vars_, body):
            return free_vars(body) - set(vars_)
        case Exists(var, bound, body):
            out = free_vars(body)
            if bound is not None:
                out |= free_vars(bound)
            return out - {var}
    raise TypeError(f"not a type expression: {expr!r}")


def fresh_name(base: str, avoid: set[str]) -> str:
    """A name not in `avoid`, derived from `base`."""
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def _subst(expr: TypeExpr, mapping: dict[str, TypeExpr]) -> TypeExpr:
    """Simultaneous capture-avoiding substitution."""
    if not mapping:
        return expr
    match expr:
        case Var(name):
            return mapping.get(name, expr)
        case Atom() | AnyType():
            return expr
        case Apply(ctor, args, variadic):
            return Apply(ctor, tuple(_subst(a, mapping) for a in args), variadic)
        case Record(fields, open_):
            return Record(tuple((n, _subst(t, mapping)) for n, t in fields), open_)
        case Product(factors):
            return Product(tuple(_subst(f, mapping) for f in factors))
        case Sum(alts):
            return Sum(tuple(_subst(a, mapping) for a in alts))
        case Function(dom, cod):
            return Function(_subst(dom, mapping), _subst(cod, mapping))
        case Forall(vars_, body):
            inner = {k: v for k, v in mapping.items() if k not in vars_}
            if not inner:
                return expr
            clash = set(vars_) & _replacement_frees(inner)
            if clash:
                avoid = (
                    free_vars(body)
                    | _replacement_frees(inner)
                    | set(inner)
                    | set(vars_)
                )
                renamed = []
                rename: dict[str, TypeExpr] = {}
                for v in vars_:
                    if v in clash:
                        nv = fresh_name(v, avoid)
                        avoid.add(nv)
                        rename[v] = Var(nv)
                        renamed.append(nv)
                    else:
                        renamed.append(v)
                body = _subst(body, rename)
                vars_ = tuple(renamed)
            return Forall(vars_, _subst(body, inner))
        case Exists(var, bound, body):
            inner = {k: v for k, v in mapping.items() if k != var}
            if not inner:
                return expr
            if var in _replacement_frees(inner):
                avoid = free_vars(body) | _replacement_frees(inner) | set(inner) | {var}
                if bound is not None:
                    avoid |= free_vars(bound)
                nv = fresh_name(var, avoid)
                rename = {var: Var(nv)}
                body = _subst(body, rename)
                bound = None if bound is None else _subst(bound, rename)
                var = nv
            return Exists(
                var,
                None if bound is None else _subst(bound, inner),
                _subst(body, inner),
            )
    raise TypeError(f"not a type expression: {expr!r}")


def _replacement_frees(mapping: dict[str, TypeExpr]) -> set[str]:
    out: set[str] = set()
    for v in mapping.values():
        out |= free_vars(v)
    return out


def substitute(expr: TypeExpr, var: str, replacement: TypeExpr) -> TypeExpr:
    """Replace free occurrences of `var`, renaming binders to avoid capture."""
    return _subst(expr, {var: replacement})


def alpha_eq(a: TypeExpr, b: TypeExpr) -> bool:
    """Equality up to renaming of bound variables.

    Record field order is irrelevant (fields are canonically sorted);
    Product, Sum and Function positions are significant.
    """
    return _alpha(a, b, {}, {}, 0)


def _alpha(
    a: TypeExpr, b: TypeExpr, env_a: dict[str, int], env_b: dict[str, int], depth: int
) -> bool:
    if type(a) is not type(b):
        return False
    match a, b:
        case Var(na), Var(nb):
            da, db = env_a.get(na), env_b.get(nb)
            if da is None and db is None:
                return na == nb
            return da == db
        case Atom(na), Atom(nb):
            return na == nb
        case AnyType(), AnyType():
            return True
        case Apply(ca, aa, va), Apply(cb, ab, vb):
            return (
                ca == cb
                and va == vb
                and len(aa) == len(ab)
                and all(_alpha(x, y, env_a, env_b, depth) for x, y in zip(aa, ab))
            )
        case Record(fa, oa), Record(fb, ob):
            if oa != ob or [n for n, _ in fa] != [n for n, _ in fb]:
                return False
            return all(
                _alpha(ta, tb, env_a, env_b, depth)
                for (_, ta), (_, tb) in zip(fa, fb)
            )
        case Product(xa), Product(xb):
            return len(xa) == len(xb) and all(
                _alpha(x, y, env_a, env_b, depth) for x, y in zip(xa, xb)
            )
        case Sum(xa), Sum(xb):
            return len(xa) == len(xb) and all(
                _alpha(x, y, env_a, env_b, depth) for x, y in zip(xa, xb)
            )
        case Function(da, ca), Function(db, cb):
            return _alpha(da, db, env_a, env_b, depth) and _alpha(
                ca, cb, env_a, env_b, depth
            )
        case Forall(va, ba), Forall(vb, bb):
            if len(va) != len(vb):
                return False
            na, nb = dict(env_a), dict(env_b)
            for i, (x, y) in enumerate(zip(va, vb)):
                na[x] = depth + i
                nb[y] = depth + i
            return _alpha(ba, bb, na, nb, depth + len(va))
        case Exists(va, ta, ba), Exists(vb, tb, bb):
            if (ta is None) != (tb is None):
                return False
            na, nb = dict(env_a), dict(env_b)
            na[va] = depth
            nb[vb] = depth
            if ta is not None and not _alpha(ta, tb, na, nb, depth + 1):
                return False
            return _alpha(ba, bb, na, nb, depth + 1)
    return False


def instantiate(generic: TypeExpr, args: list[TypeExpr] | tuple[TypeExpr, ...]) -> TypeExpr:
    """Apply a Forall head to type arguments (simultaneous substitution)."""
    if not isinstance(generic, Forall):
        raise NotGeneric(f"not a generic type: {generic}")
    if len(args) != len(generic.vars):
        raise ArityMismatch(
            f"expected {len(generic.vars)} argument(s), got {len(args)}"
        )
    return _subst(generic.body, dict(zip(generic.vars, args)))


def canonical_key(expr: TypeExpr) -> str:
    """Alpha-invariant sort key: the rendering with binders numbered."""
    return _key(expr, {}, 0)


def _key(e: TypeExpr, env: dict[str, int], depth: int) -> str:
    match e:
        case Var(n):
            return f"${env[n]}" if n in env else f"?{n}"
        case Atom(n):
            return n
        case AnyType():
            return "Any"
        case Apply(c, args, v):
            inner = ",".join(_key(a, env, depth) for a in args)
            return f"{c}[{inner}{',...' if v else ''}]"
        case Record(fields, o):
            inner = ",".join(f"{n}:{_key(t, env, depth)}" for n, t in fields)
            return "{" + inner + (",..." if o else "") + "}"
        case Product(fs):
            return "(" + "x".join(_key(f, env, depth) for f in fs) + ")"
        case Sum(alts):
            return "(" + "+".join(_key(a, env, depth) for a in alts) + ")"
        case Function(d, c):
            return f"({_key(d, env, depth)}->{_key(c, env, depth)})"
        case Forall(vs, body):
            inner = dict(env)
            for i, v in enumerate(vs):
                inner[v] = depth + i
            return f"∀{len(vs)}.{_key(body, inner, depth + len(vs))}"
        case Exists(v, bound, body):
            inner = dict(env)
            inner[v] = depth
            b = "" if bound is None else f"<:{_key(bound, inner, depth + 1)}"
            return f"∃{b}.{_key(body, inner, depth + 1)}"
    raise TypeError(f"not a type expression: {e!r}")


def normalize(expr: TypeExpr) -> TypeExpr:
    """Canonical form: flat, deduplicated, stably ordered sums; idempotent."""
    match expr:
        case Atom() | Var() | AnyType():
            return expr
        case Apply(c, args, v):
            return Apply(c, tuple(normalize(a) for a in args), v)
        case Record(fields, o):
            return Record(tuple((n, normalize(t)) for n, t in fields), o)
        case Product(fs):
            return Product(tuple(normalize(f) for f in fs))
        case Function(d, c):
            return Function(normalize(d), normalize(c))
        case Forall(vs, body):
            return Forall(vs, normalize(body))
        case Exists(v, bound, body):
            return Exists(v, None if bound is None else normalize(bound), normalize(body))
        case Sum(alts):
            flat: list[TypeExpr] = []
            for a in alts:
                na = normalize(a)
                flat.extend(na.alternatives if isinstance(na, Sum) else [na])
            uniq: list[TypeExpr] = []
            for a in flat:
                if not any(alpha_eq(a, u) for u in uniq):
                    uniq.append(a)
            if len(uniq) == 1:
                return uniq[0]
            uniq.sort(key=canonical_key)
            return Sum(tuple(uniq))
    raise TypeError(f"not a type expression: {expr!r}")


@dataclass(frozen=True)
class WitnessBinding:
    """A member implementation reference together with its type."""

    ref: str
    type: TypeExpr


@dataclass(frozen=True)
class Witness:
    """A pair (representation ET-name, member bindings) inhabiting an existential."""

    representation: str
    bindings: dict[str, WitnessBinding] = field(default_factory=dict)
