"""Subtyping over type expressions, with derivations as evidence.

Rules, in order of attempt: reflexivity up to alpha-equivalence; BottomET
below everything; everything below ObjectET; Any in both directions;
assumption-bounded variables; unions (every left alternative, some right
alternative); records by width and depth; functions contra/covariantly;
products pointwise; invariant generic application, with fixed-arity tuples
below variadic ones; existentials by bound and body under a shared hidden
variable; universals by arity and renamed bodies. Named types meeting
structural ones are expanded through the environment; a goal that recurses
into itself is accepted coinductively, so mutually recursive definitions
terminate. Nominal atom edges come from the numeric tower, the virtual
table and declared bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    ANY,
    BOTTOM_ET,
    OBJECT_ET,
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
    _subst,
    alpha_eq,
    canonical_key,
    free_vars,
    fresh_name,
)
from .prelude import Definition, TypeEnv, def_type
from .render import render_type, type_to_json

Assumptions = frozenset[tuple[str, TypeExpr]]


@dataclass(frozen=True)
class Derivation:
    """Evidence tree for a subtype verdict; leaves carry no premises."""

    verdict: bool
    rule: str
    lhs: TypeExpr
    rhs: TypeExpr
    premises: tuple[Derivation, ...] = ()
    note: str = ""

    def to_json(self) -> dict:
        data = {
            "verdict": self.verdict,
            "rule": self.rule,
            "lhs": render_type(self.lhs),
            "rhs": render_type(self.rhs),
            "premises": [p.to_json() for p in self.premises],
        }
        if self.note:
            data["note"] = self.note
        return data

    def to_json_trees(self) -> dict:
        data = self.to_json()
        data["lhs_tree"] = type_to_json(self.lhs)
        data["rhs_tree"] = type_to_json(self.rhs)
        return data


def subtype(
    a: TypeExpr,
    b: TypeExpr,
    env: TypeEnv,
    assumptions: Assumptions = frozenset(),
) -> Derivation:
    """Decide a <: b in `env` under bounded-variable assumptions."""
    return _Checker(env).sub(a, b, assumptions)


class _Checker:
    def __init__(self, env: TypeEnv):
        self.env = env
        self.pending: set[tuple[str, str]] = set()

    def sub(self, a: TypeExpr, b: TypeExpr, asm: Assumptions) -> Derivation:
        if alpha_eq(a, b):
            return Derivation(True, "refl", a, b)
        if isinstance(a, Atom) and a.name == BOTTOM_ET:
            return Derivation(True, "bottom", a, b)
        if isinstance(b, Atom) and b.name == OBJECT_ET:
            return Derivation(True, "top", a, b)
        if isinstance(a, AnyType) or isinstance(b, AnyType):
            return Derivation(True, "any", a, b)
        if isinstance(a, Var):
            return self._var_left(a, b, asm)
        if isinstance(a, Sum):
            prems = tuple(self.sub(alt, b, asm) for alt in a.alternatives)
            return Derivation(all(p.verdict for p in prems), "sum-left", a, b, prems)
        if isinstance(b, Sum):
            tried = []
            for alt in b.alternatives:
                p = self.sub(a, alt, asm)
                if p.verdict:
                    return Derivation(True, "sum-right", a, b, (p,))
                tried.append(p)
            return Derivation(False, "sum-right", a, b, tuple(tried))
        if isinstance(a, Record) and isinstance(b, Record):
            return self._record(a, b, asm)
        if isinstance(a, Function) and isinstance(b, Function):
            prems = (
                self.sub(b.domain, a.domain, asm),
                self.sub(a.codomain, b.codomain, asm),
            )
            return Derivation(all(p.verdict for p in prems), "function", a, b, prems)
        if isinstance(a, Product) and isinstance(b, Product):
            if len(a.factors) != len(b.factors):
                return Derivation(False, "product", a, b, note="arity differs")
            prems = tuple(self.sub(x, y, asm) for x, y in zip(a.factors, b.factors))
            return Derivation(all(p.verdict for p in prems), "product", a, b, prems)
        if isinstance(a, Exists) and isinstance(b, Exists):
            return self._exists(a, b, asm)
        if isinstance(a, Forall) and isinstance(b, Forall):
            return self._forall(a, b, asm)
        if isinstance(a, Apply) and isinstance(b, Apply) and a.constructor == b.constructor:
            return self._apply(a, b, asm)
        named_a = isinstance(a, (Atom, Apply))
        named_b = isinstance(b, (Atom, Apply))
        if named_a and named_b:
            return self._climb(a, b, asm)
        if named_a:
            return self._expand(a, b, asm, left=True)
        if named_b:
            return self._expand(a, b, asm, left=False)
        return Derivation(False, "mismatch", a, b)

    def _var_left(self, a: Var, b: TypeExpr, asm: Assumptions) -> Derivation:
        for name, bound in sorted(asm, key=lambda nb: nb[0]):
            if name == a.name:
                p = self.sub(bound, b, asm)
                if p.verdict:
                    return Derivation(True, "var-bound", a, b, (p,))
        return Derivation(False, "var-bound", a, b, note=f"no usable bound for {a.name}")

    def _record(self, a: Record, b: Record, asm: Assumptions) -> Derivation:
        if not b.open:
            if a.open:
                return Derivation(
                    False, "record", a, b, note="open record vs closed requirement"
                )
            if a.names() != b.names():
                return Derivation(False, "record", a, b, note="field sets differ")
        prems = []
        ok = True
        for name, tb in b.fields:
            ta = a.get(name)
            if ta is None:
                prems.append(
                    Derivation(False, "field-missing", a, b, note=name)
                )
                ok = False
                continue
            p = self.sub(ta, tb, asm)
            prems.append(
                Derivation(p.verdict, "field", ta, tb, (p,), note=name)
            )
            ok = ok and p.verdict
        return Derivation(ok, "record", a, b, tuple(prems))

    def _apply(self, a: Apply, b: Apply, asm: Assumptions) -> Derivation:
        if not a.variadic and b.variadic:
            elem = b.args[0]
            prems = tuple(self.sub(arg, elem, asm) for arg in a.args)
            return Derivation(
                all(p.verdict for p in prems), "apply-variadic", a, b, prems
            )
        if a.variadic != b.variadic or len(a.args) != len(b.args):
            return Derivation(False, "apply", a, b, note="shape differs")
        ok = all(alpha_eq(x, y) for x, y in zip(a.args, b.args))
        note = "" if ok else "type arguments are invariant"
        return Derivation(ok, "apply", a, b, note=note)

    def _exists(self, a: Exists, b: Exists, asm: Assumptions) -> Derivation:
        avoid = free_vars(a) | free_vars(b) | {n for n, _ in asm} | {a.var, b.var}
        x = fresh_name("X", avoid)
        ta = self._rebind(a, x)
        tb = self._rebind(b, x)
        inner = asm | {(x, ta[0])}
        p_bound = self.sub(ta[0], tb[0], inner)
        p_body = self.sub(ta[1], tb[1], inner)
        return Derivation(
            p_bound.verdict and p_body.verdict, "exists", a, b, (p_bound, p_body)
        )

    def _rebind(self, e: Exists, name: str) -> tuple[TypeExpr, TypeExpr]:
        ren = {e.var: Var(name)}
        bound = Atom(OBJECT_ET) if e.bound is None else _subst(e.bound, ren)
        return bound, _subst(e.body, ren)

    def _forall(self, a: Forall, b: Forall, asm: Assumptions) -> Derivation:
        if len(a.vars) != len(b.vars):
            return Derivation(False, "forall", a, b, note="arity differs")
        avoid = free_vars(a) | free_vars(b) | {n for n, _ in asm}
        shared = []
        for i in range(len(a.vars)):
            v = fresh_name(f"V{i}", avoid)
            avoid.add(v)
            shared.append(Var(v))
        body_a = _subst(a.body, dict(zip(a.vars, shared)))
        body_b = _subst(b.body, dict(zip(b.vars, shared)))
        p = self.sub(body_a, body_b, asm)
        return Derivation(p.verdict, "forall", a, b, (p,))

    # -- named types ---------------------------------------------------------

    def _parents(self, e: Atom | Apply) -> list[TypeExpr]:
        """Immediate declared supertypes: nominal edges, then the bound."""
        out: list[TypeExpr] = []
        if isinstance(e, Atom):
            out.extend(Atom(p) for p in sorted(self.env.atom_parents(e.name)))
        d = self.env.lookup(e.name if isinstance(e, Atom) else e.constructor)
        if d.bound is not None:
            mapping: dict[str, TypeExpr] = {d.self_var: e}
            if isinstance(e, Apply) and not e.variadic and len(e.args) == len(d.params):
                mapping.update(zip(d.params, e.args))
            else:
                mapping.update({p: ANY for p in d.params})
            out.append(_subst(d.bound, mapping))
        return out

    def _climb(self, a: Atom | Apply, b: TypeExpr, asm: Assumptions) -> Derivation:
        key = (canonical_key(a), canonical_key(b))
        if key in self.pending:
            return Derivation(True, "assume", a, b, note="pending goal accepted")
        self.pending.add(key)
        try:
            tried = []
            for parent in self._parents(a):
                p = self.sub(parent, b, asm)
                if p.verdict:
                    return Derivation(True, "bound", a, b, (p,))
                tried.append(p)
            return Derivation(False, "bound", a, b, tuple(tried), note="no nominal path")
        finally:
            self.pending.discard(key)

    def _definition_type(self, e: Atom | Apply) -> TypeExpr:
        name = e.name if isinstance(e, Atom) else e.constructor
        d: Definition = self.env.lookup(name)
        full = def_type(d)
        if isinstance(e, Apply) and isinstance(full, Forall):
            if e.variadic or d.family_arity:
                args: list[TypeExpr] = [ANY] * len(full.vars)
            else:
                args = list(e.args)
            if len(args) == len(full.vars):
                return _subst(full.body, dict(zip(full.vars, args)))
            return _subst(full.body, {v: ANY for v in full.vars})
        if isinstance(full, Forall):
            # unapplied generic name: gradual instantiation
            return _subst(full.body, {v: ANY for v in full.vars})
        return full

    def _expand(
        self, a: TypeExpr, b: TypeExpr, asm: Assumptions, left: bool
    ) -> Derivation:
        key = (canonical_key(a), canonical_key(b))
        if key in self.pending:
            return Derivation(True, "assume", a, b, note="pending goal accepted")
        self.pending.add(key)
        try:
            if left:
                p = self.sub(self._definition_type(a), b, asm)
                return Derivation(p.verdict, "expand-left", a, b, (p,))
            p = self.sub(a, self._definition_type(b), asm)
            return Derivation(p.verdict, "expand-right", a, b, (p,))
        finally:
            self.pending.discard(key)
