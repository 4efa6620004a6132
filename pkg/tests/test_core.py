"""Syntactic operations: substitution, free variables, alpha-equivalence,
instantiation, normalization."""

from __future__ import annotations

import random

import pytest

from pyts.core import (
    ANY,
    Apply,
    Atom,
    Exists,
    Forall,
    Function,
    Product,
    Record,
    Sum,
    Var,
    alpha_eq,
    free_vars,
    instantiate,
    normalize,
    substitute,
)
from pyts.errors import ArityMismatch, NotGeneric
from support.debruijn import subst_db, to_db
from support.gen import gen_type, rename_bound

INT = Atom("IntET")
STR = Atom("StrET")
FLOAT = Atom("FloatET")
DUCK = Atom("DuckET")


def test_substitute_member_signature():
    # { quack: Q -> StrET }[Duck/Q] = { quack: Duck -> StrET }
    tau = Record((("quack", Function(Var("Q"), STR)),), open=False)
    out = substitute(tau, "Q", DUCK)
    assert out == Record((("quack", Function(DUCK, STR)),), open=False)


def test_substitute_identity_is_alpha_equal():
    tau = Exists("X", None, Record((("f", Function(Var("X"), Var("Y"))),)))
    assert alpha_eq(substitute(tau, "X", Var("X")), tau)


def test_substitute_avoids_capture():
    # (∃X.{f: X -> Y})[ListET[X]/Y] must rename the binder, not capture X.
    tau = Exists("X", None, Record((("f", Function(Var("X"), Var("Y"))),)))
    out = substitute(tau, "Y", Apply("ListET", (Var("X"),)))
    assert isinstance(out, Exists)
    assert out.var != "X"
    body_field = out.body.get("f")
    assert body_field == Function(Var(out.var), Apply("ListET", (Var("X"),)))
    # and it agrees with the nameless reference implementation
    assert to_db(out) == subst_db(to_db(tau), "Y", to_db(Apply("ListET", (Var("X"),))))


def test_substitute_matches_debruijn_reference_on_random_exprs():
    rng = random.Random(4711)
    for _ in range(400):
        scope = ("A", "B")
        expr = gen_type(rng, depth=3, scope=scope)
        target = rng.choice(scope)
        replacement = gen_type(rng, depth=2, scope=("A",))
        got = substitute(expr, target, replacement)
        want = subst_db(to_db(expr), target, to_db(replacement))
        assert to_db(got) == want


def test_free_vars_examples():
    assert free_vars(Exists("X", None, Record((("abs", Function(Var("X"), Var("Y"))),)))) == {"Y"}
    assert free_vars(INT) == set()
    assert (
        free_vars(Forall(("Y",), Exists("X", None, Record((("f", Function(Var("X"), Var("Y"))),)))))
        == set()
    )


def test_free_vars_exists_bound_counts():
    # F-bounded existential: the hidden variable is not free, others are.
    e = Exists("P", Apply("GenericET1", (Var("P"),)), Record((("f", Var("Q")),)))
    assert free_vars(e) == {"Q"}


def test_alpha_eq_binder_rename():
    a = Exists("X", None, Record((("f", Function(Var("X"), INT)),)))
    b = Exists("Z", None, Record((("f", Function(Var("Z"), INT)),)))
    assert alpha_eq(a, b)


def test_alpha_eq_product_order_significant():
    assert not alpha_eq(Product((INT, STR)), Product((STR, INT)))


def test_alpha_eq_record_order_irrelevant():
    a = Record((("a", INT), ("b", STR)))
    b = Record((("b", STR), ("a", INT)))
    assert alpha_eq(a, b)


def test_alpha_eq_distinguishes_free_names_from_bound():
    assert not alpha_eq(Exists("X", None, Var("X")), Exists("X", None, Var("Y")))
    assert alpha_eq(Var("Y"), Var("Y"))
    assert not alpha_eq(Var("Y"), Var("Z"))


def test_alpha_eq_is_equivalence_on_generated_exprs():
    rng = random.Random(99)
    for i in range(200):
        e = gen_type(rng, depth=3)
        e2 = rename_bound(rng, e, f"r{i}")
        e3 = rename_bound(rng, e2, f"s{i}")
        assert alpha_eq(e, e)  # reflexive
        assert alpha_eq(e, e2) and alpha_eq(e2, e)  # symmetric
        assert alpha_eq(e2, e3) and alpha_eq(e, e3)  # transitive


def test_instantiate_supports_abs_shape():
    # ∀Y.∃X.{__abs__: X -> Y} at FloatET
    generic = Forall(
        ("Y",), Exists("X", None, Record((("__abs__", Function(Var("X"), Var("Y"))),)))
    )
    got = instantiate(generic, [FLOAT])
    want = Exists("X", None, Record((("__abs__", Function(Var("X"), FLOAT)),)))
    assert alpha_eq(got, want)


def test_instantiate_identity_generic():
    assert instantiate(Forall(("Y",), Var("Y")), [INT]) == INT


def test_instantiate_errors():
    with pytest.raises(ArityMismatch):
        instantiate(Forall(("Y",), Var("Y")), [INT, STR])
    with pytest.raises(NotGeneric):
        instantiate(INT, [STR])


def test_instantiate_is_simultaneous():
    # ∀A,B.{f: A -> B} with A:=B-var must not chain substitutions.
    generic = Forall(("A", "B"), Function(Var("A"), Var("B")))
    got = instantiate(generic, [Var("B"), INT])
    assert alpha_eq(got, Function(Var("B"), INT))


def test_normalize_flattens_and_dedups_sums():
    assert normalize(Sum((INT, Sum((INT, STR))))) == normalize(Sum((INT, STR)))
    assert set(normalize(Sum((INT, Sum((INT, STR))))).alternatives) == {INT, STR}


def test_normalize_collapses_singleton_sum():
    assert normalize(Sum((INT, INT))) == INT


def test_normalize_canonical_sum_order_is_fixed():
    a = normalize(Sum((Atom("NoneTypeET"), INT)))
    b = normalize(Sum((INT, Atom("NoneTypeET"))))
    assert a == b


def test_normalize_idempotent_on_random_exprs():
    rng = random.Random(2024)
    for _ in range(300):
        e = gen_type(rng, depth=4)
        once = normalize(e)
        assert normalize(once) == once


def test_normalize_preserves_alpha_classes():
    rng = random.Random(7)
    for i in range(200):
        e = gen_type(rng, depth=3)
        e2 = rename_bound(rng, e, f"n{i}")
        assert alpha_eq(e, e2)
        assert alpha_eq(normalize(e), normalize(e2))


def test_substitution_lemma():
    # e[A/X][B/Y] = e[B/Y][A[B/Y]/X] when X not free in B and X != Y
    rng = random.Random(31337)
    checked = 0
    while checked < 150:
        e = gen_type(rng, depth=3, scope=("X", "Y"))
        a = gen_type(rng, depth=2, scope=("Y",))
        b = gen_type(rng, depth=2)
        if "X" in free_vars(b):
            continue
        lhs = substitute(substitute(e, "X", a), "Y", b)
        rhs = substitute(substitute(e, "Y", b), "X", substitute(a, "Y", b))
        assert alpha_eq(lhs, rhs)
        checked += 1


def test_free_vars_of_substitution_is_bounded():
    rng = random.Random(5150)
    for _ in range(200):
        e = gen_type(rng, depth=3, scope=("X", "Z"))
        r = gen_type(rng, depth=2, scope=("W",))
        got = free_vars(substitute(e, "X", r))
        assert got <= (free_vars(e) - {"X"}) | free_vars(r)


def test_record_field_names_unique():
    with pytest.raises(ValueError):
        Record((("a", INT), ("a", STR)))


def test_product_and_sum_arity_validated():
    with pytest.raises(ValueError):
        Product((INT,))
    with pytest.raises(ValueError):
        Sum((INT,))
    with pytest.raises(ValueError):
        Forall((), INT)


def test_any_is_shared_wildcard():
    assert alpha_eq(ANY, ANY)
    assert not alpha_eq(ANY, Atom("AnyET"))
