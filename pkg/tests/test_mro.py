"""C3 linearization, subclass queries, metaclass relation."""

from __future__ import annotations

from pathlib import Path

import pytest

from pyts.errors import CyclicHierarchy, InconsistentHierarchy, UnknownBase
from pyts.frontend import BaseRef, ClassInfo, parse_source
from pyts.mro import c3_linearize, full_registry, object_instance_of, subclass_of
from pyts.prelude import prelude_env

DATA = Path(__file__).parent / "data" / "corpus"


def make(name: str, *bases: str, metaclass: str | None = None) -> ClassInfo:
    return ClassInfo(
        name=name,
        bases=tuple(BaseRef(b) for b in bases),
        type_params=(),
        members={},
        metaclass=metaclass,
    )


def registry_of(*classes: ClassInfo) -> dict[str, ClassInfo]:
    return full_registry(classes)


def test_simple_diamond_head():
    reg = registry_of(make("A"), make("B"), make("C", "A", "B"))
    assert c3_linearize(reg["C"], reg) == ["C", "A", "B", "object"]


def test_no_bases_gets_implicit_object():
    reg = registry_of(make("C"))
    assert c3_linearize(reg["C"], reg) == ["C", "object"]


def test_inconsistent_diamond_rejected():
    reg = registry_of(
        make("X"), make("Y"), make("A", "X", "Y"), make("B", "Y", "X"), make("C", "A", "B")
    )
    with pytest.raises(InconsistentHierarchy):
        c3_linearize(reg["C"], reg)


def test_base_before_subclass_rejected():
    # class C(X, A) where A(X): X precedes its own subclass in the bases
    reg = registry_of(make("X"), make("A", "X"), make("C", "X", "A"))
    with pytest.raises(InconsistentHierarchy):
        c3_linearize(reg["C"], reg)


def test_larger_hierarchy_matches_runtime_order():
    # order verified against CPython's __mro__ for the same classes
    reg = registry_of(
        make("O"),
        make("A", "O"),
        make("B", "O"),
        make("C", "O"),
        make("D", "O"),
        make("E", "O"),
        make("K1", "A", "B", "C"),
        make("K2", "D", "B", "E"),
        make("K3", "D", "A"),
        make("Z", "K1", "K2", "K3"),
    )
    assert c3_linearize(reg["Z"], reg) == [
        "Z", "K1", "K2", "K3", "D", "A", "B", "C", "E", "O", "object",
    ]


def test_cycle_detected():
    reg = registry_of(make("A", "B"), make("B", "A"))
    with pytest.raises(CyclicHierarchy):
        c3_linearize(reg["A"], reg)


def test_unknown_base():
    reg = registry_of(make("A", "Ghost"))
    with pytest.raises(UnknownBase):
        c3_linearize(reg["A"], reg)


def test_protocol_chain_linearizes_through_stubs():
    env = prelude_env()
    parsed = parse_source((DATA / "protocol_corpus.py").read_text(), env)
    reg = full_registry(parsed.classes)
    assert c3_linearize(reg["MyProtocol"], reg) == [
        "MyProtocol", "Protocol", "Generic", "object",
    ]


def test_subclass_of_basics():
    reg = registry_of(make("A"), make("B", "A"))
    assert subclass_of("B", "A", reg)
    assert subclass_of("B", "object", reg)
    assert subclass_of("A", "A", reg)  # reflexive via MRO head
    assert not subclass_of("A", "B", reg)
    assert subclass_of("type", "object", reg)


def test_subclass_of_virtual_edges_transitive():
    reg = registry_of(make("Base"), make("MyABC", "Base"), make("Sub2"))
    table = [("Sub2", "MyABC")]
    assert subclass_of("Sub2", "MyABC", reg, table)
    # virtual edge then MRO edge
    assert subclass_of("Sub2", "Base", reg, table)
    assert not subclass_of("Sub2", "MyABC", reg, [])
    # names known only to the table still chain
    assert subclass_of("list", "Collection", reg, [("list", "Collection")])


def test_object_instance_of():
    assert object_instance_of(make("C")) == "type"
    assert object_instance_of(make("MyABC", metaclass="ABCMeta")) == "ABCMeta"
    assert object_instance_of(make("type")) == "type"
    assert object_instance_of(make("int")) == "type"


@pytest.mark.parametrize(
    "corpus_name,oracle_name",
    [
        ("protocol_corpus.py", "protocol_oracle.json"),
        ("abc_corpus.py", "abc_oracle.json"),
    ],
)
def test_engine_mro_matches_recorded_runtime(corpus_name, oracle_name):
    import json

    env = prelude_env()
    parsed = parse_source((DATA / corpus_name).read_text(), env)
    reg = full_registry(parsed.classes)
    oracle = json.loads(
        (DATA.parent / "oracle" / oracle_name).read_text()
    )
    recorded = {c["name"]: c["mro"] for c in oracle["classes"]}
    for cls in parsed.classes:
        assert c3_linearize(reg[cls.name], reg) == recorded[cls.name], cls.name
