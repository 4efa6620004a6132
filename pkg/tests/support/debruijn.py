"""Independent reference for capture-avoiding substitution.

Converts type expressions to a nameless De Bruijn form where bound
variables are indices and free variables stay names. Substitution on that
form cannot capture by construction, so it serves as a brute-force oracle
for `pyts.core.substitute` — it shares no code with it.

Terms are plain nested tuples so structural equality is alpha-equality.
"""

from __future__ import annotations

from pyts.core import (
    AnyType,
    Apply,
    Atom,
    Exists,
    Forall,
    Function,
    Product,
    Record,
    Sum,
    TypeExpr,
    Var,
)


def to_db(expr: TypeExpr, env: tuple[str, ...] = ()) -> tuple:
    """env lists enclosing binder names, innermost first."""
    if isinstance(expr, Var):
        if expr.name in env:
            return ("var", env.index(expr.name))
        return ("free", expr.name)
    if isinstance(expr, Atom):
        return ("atom", expr.name)
    if isinstance(expr, AnyType):
        return ("any",)
    if isinstance(expr, Apply):
        return ("apply", expr.constructor, tuple(to_db(a, env) for a in expr.args), expr.variadic)
    if isinstance(expr, Record):
        return ("record", tuple((n, to_db(t, env)) for n, t in expr.fields), expr.open)
    if isinstance(expr, Product):
        return ("product", tuple(to_db(f, env) for f in expr.factors))
    if isinstance(expr, Sum):
        return ("sum", tuple(to_db(a, env) for a in expr.alternatives))
    if isinstance(expr, Function):
        return ("function", to_db(expr.domain, env), to_db(expr.codomain, env))
    if isinstance(expr, Forall):
        inner = tuple(reversed(expr.vars)) + env
        return ("forall", len(expr.vars), to_db(expr.body, inner))
    if isinstance(expr, Exists):
        inner = (expr.var,) + env
        bound = None if expr.bound is None else to_db(expr.bound, inner)
        return ("exists", bound, to_db(expr.body, inner))
    raise TypeError(f"not a type expression: {expr!r}")


def subst_db(term: tuple, name: str, replacement: tuple) -> tuple:
    """Replace every free occurrence of `name`.

    The replacement was converted with an empty env, so its indices are all
    internal and its free variables are names; inserting it under binders
    therefore needs no shifting and cannot capture.
    """
    tag = term[0]
    if tag == "free":
        return replacement if term[1] == name else term
    if tag in ("var", "atom", "any"):
        return term
    if tag == "apply":
        return ("apply", term[1], tuple(subst_db(a, name, replacement) for a in term[2]), term[3])
    if tag == "record":
        return ("record", tuple((n, subst_db(t, name, replacement)) for n, t in term[1]), term[2])
    if tag == "product":
        return ("product", tuple(subst_db(f, name, replacement) for f in term[1]))
    if tag == "sum":
        return ("sum", tuple(subst_db(a, name, replacement) for a in term[1]))
    if tag == "function":
        return ("function", subst_db(term[1], name, replacement), subst_db(term[2], name, replacement))
    if tag == "forall":
        return ("forall", term[1], subst_db(term[2], name, replacement))
    if tag == "exists":
        bound = None if term[1] is None else subst_db(term[1], name, replacement)
        return ("exists", bound, subst_db(term[2], name, replacement))
    raise ValueError(f"unknown De Bruijn tag: {tag!r}")
