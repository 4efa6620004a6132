"""Canonical text form and JSON tree encoding for type expressions.

Text grammar (also accepted back by `parse_type`):
  atoms verbatim; `∀T1,T2.` and `∃X<:Bound.` prefixes; records
  `{name: type, ...}` with a trailing `...` when open; right-associative
  `A -> B`; products `A x B`; sums `A + B`; application `Name[A, B]`,
  variadic `Name[A, ...]`.
"""

from __future__ import annotations

from .core import (
    ANY,
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

_ARROW, _SUM, _PROD, _POSTFIX = 1, 2, 3, 4


def render_type(expr: TypeExpr) -> str:
    """Deterministic canonical rendering."""
    return _render(expr, _ARROW)


def _render(e: TypeExpr, min_prec: int) -> str:
    match e:
        case Atom(name) | Var(name):
            return name
        case AnyType():
            return "Any"
        case Apply(ctor, args, variadic):
            inner = ", ".join(_render(a, _ARROW) for a in args)
            if variadic:
                inner += ", ..."
            return f"{ctor}[{inner}]"
        case Record(fields, open_):
            parts = [f"{n}: {_render(t, _ARROW)}" for n, t in fields]
            if open_:
                parts.append("...")
            return "{" + ", ".join(parts) + "}"
        case Product(factors):
            text = " x ".join(_render(f, _POSTFIX) for f in factors)
            return _wrap(text, _PROD, min_prec)
        case Sum(alts):
            text = " + ".join(_render(a, _PROD) for a in alts)
            return _wrap(text, _SUM, min_prec)
        case Function(dom, cod):
            text = f"{_render(dom, _SUM)} -> {_render(cod, _ARROW)}"
            return _wrap(text, _ARROW, min_prec)
        case Forall(vars_, body):
            text = f"∀{','.join(vars_)}.{_render(body, _ARROW)}"
            return _wrap(text, _ARROW, min_prec)
        case Exists(var, bound, body):
            prefix = f"∃{var}"
            if bound is not None:
                prefix += f"<:{_render(bound, _POSTFIX)}"
            return _wrap(f"{prefix}.{_render(body, _ARROW)}", _ARROW, min_prec)
    raise TypeError(f"not a type expression: {e!r}")


def _wrap(text: str, prec: int, min_prec: int) -> str:
    return f"({text})" if prec < min_prec else text


def type_to_json(expr: TypeExpr) -> dict:
    """Variant-tagged tree encoding for machine consumption."""
    match expr:
        case Atom(name):
            return {"kind": "atom", "name": name}
        case Var(name):
            return {"kind": "var", "name": name}
        case AnyType():
            return {"kind": "any"}
        case Apply(ctor, args, variadic):
            return {
                "kind": "apply",
                "constructor": ctor,
                "args": [type_to_json(a) for a in args],
                "variadic": variadic,
            }
        case Record(fields, open_):
            return {
                "kind": "record",
                "fields": [{"name": n, "type": type_to_json(t)} for n, t in fields],
                "open": open_,
            }
        case Product(factors):
            return {"kind": "product", "factors": [type_to_json(f) for f in factors]}
        case Sum(alts):
            return {"kind": "sum", "alternatives": [type_to_json(a) for a in alts]}
        case Function(dom, cod):
            return {
                "kind": "function",
                "domain": type_to_json(dom),
                "codomain": type_to_json(cod),
            }
        case Forall(vars_, body):
            return {"kind": "forall", "vars": list(vars_), "body": type_to_json(body)}
        case Exists(var, bound, body):
            return {
                "kind": "exists",
                "var": var,
                "bound": None if bound is None else type_to_json(bound),
                "body": type_to_json(body),
            }
    raise TypeError(f"not a type expression: {expr!r}")


def type_from_json(data: dict) -> TypeExpr:
    """Inverse of `type_to_json`."""
    kind = data["kind"]
    if kind == "atom":
        return Atom(data["name"])
    if kind == "var":
        return Var(data["name"])
    if kind == "any":
        return ANY
    if kind == "apply":
        return Apply(
            data["constructor"],
            tuple(type_from_json(a) for a in data["args"]),
            data.get("variadic", False),
        )
    if kind == "record":
        return Record(
            tuple((f["name"], type_from_json(f["type"])) for f in data["fields"]),
            data.get("open", True),
        )
    if kind == "product":
        return Product(tuple(type_from_json(f) for f in data["factors"]))
    if kind == "sum":
        return Sum(tuple(type_from_json(a) for a in data["alternatives"]))
    if kind == "function":
        return Function(type_from_json(data["domain"]), type_from_json(data["codomain"]))
    if kind == "forall":
        return Forall(tuple(data["vars"]), type_from_json(data["body"]))
    if kind == "exists":
        bound = data.get("bound")
        return Exists(
            data["var"],
            None if bound is None else type_from_json(bound),
            type_from_json(data["body"]),
        )
    raise ValueError(f"unknown type-expression kind: {kind!r}")


# --- parser for the canonical text form ------------------------------------

_PUNCT = ("<:", "->", "...", "∀", "∃", ".", ",", ":", "+", "[", "]", "{", "}", "(", ")")


def _tokenize(text: str) -> list[str]:
    text = text.replace("…", "...")
    tokens: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(p)
                i += len(p)
                break
        else:
            if ch.isalnum() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                tokens.append(text[i:j])
                i = j
            else:
                raise ValueError(f"unexpected character {ch!r} in type text")
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.pos = 0
        self.bound: list[str] = []

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of type text")
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise ValueError(f"expected {tok!r}, got {got!r}")

    def type_(self) -> TypeExpr:
        tok = self.peek()
        if tok == "∀":
            self.next()
            names = [self.name()]
            while self.peek() == ",":
                self.next()
                names.append(self.name())
            self.expect(".")
            self.bound.extend(names)
            body = self.type_()
            del self.bound[-len(names) :]
            return Forall(tuple(names), body)
        if tok == "∃":
            self.next()
            var = self.name()
            self.bound.append(var)
            bound_expr = None
            if self.peek() == "<:":
                self.next()
                bound_expr = self.postfix()
            self.expect(".")
            body = self.type_()
            self.bound.pop()
            return Exists(var, bound_expr, body)
        return self.arrow()

    def arrow(self) -> TypeExpr:
        left = self.sum_()
        if self.peek() == "->":
            self.next()
            return Function(left, self.type_())
        return left

    def sum_(self) -> TypeExpr:
        parts = [self.product()]
        while self.peek() == "+":
            self.next()
            parts.append(self.product())
        return parts[0] if len(parts) == 1 else Sum(tuple(parts))

    def product(self) -> TypeExpr:
        parts = [self.postfix()]
        while self.peek() == "x":
            self.next()
            parts.append(self.postfix())
        return parts[0] if len(parts) == 1 else Product(tuple(parts))

    def postfix(self) -> TypeExpr:
        prim = self.primary()
        if self.peek() == "[":
            if not isinstance(prim, (Atom, Var)):
                raise ValueError("only a name can be applied to type arguments")
            self.next()
            args: list[TypeExpr] = []
            variadic = False
            while True:
                if self.peek() == "...":
                    self.next()
                    variadic = True
                    self.expect("]")
                    break
                args.append(self.type_())
                if self.peek() == ",":
                    self.next()
                    continue
                self.expect("]")
                break
            return Apply(prim.name, tuple(args), variadic)
        return prim

    def primary(self) -> TypeExpr:
        tok = self.next()
        if tok == "(":
            inner = self.type_()
            self.expect(")")
            return inner
        if tok == "{":
            return self.record()
        if tok == "Any":
            return ANY
        if tok in _PUNCT or tok == "x":
            raise ValueError(f"unexpected token {tok!r}")
        return Var(tok) if tok in self.bound else Atom(tok)

    def record(self) -> TypeExpr:
        fields: list[tuple[str, TypeExpr]] = []
        open_ = False
        if self.peek() == "}":
            self.next()
            return Record((), False)
        while True:
            if self.peek() == "...":
                self.next()
                open_ = True
                self.expect("}")
                break
            name = self.name()
            self.expect(":")
            fields.append((name, self.type_()))
            if self.peek() == ",":
                self.next()
                continue
            self.expect("}")
            break
        return Record(tuple(fields), open_)

    def name(self) -> str:
        tok = self.next()
        if tok in _PUNCT:
            raise ValueError(f"expected a name, got {tok!r}")
        return tok


def parse_type(text: str) -> TypeExpr:
    """Parse the canonical text form back into a type expression.

    Names bound by an enclosing quantifier become variables, all other
    names become atoms.
    """
    parser = _Parser(_tokenize(text))
    expr = parser.type_()
    if parser.peek() is not None:
        raise ValueError(f"trailing tokens after type: {parser.toks[parser.pos:]}")
    return expr
