"""C3 linearization and the class-level relations built on it."""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from .errors import CyclicHierarchy, InconsistentHierarchy, UnknownBase
from .frontend import ClassInfo, builtin_registry


def c3_linearize(cls: ClassInfo, registry: Mapping[str, ClassInfo]) -> list[str]:
    """L(C) = C + merge(L(B1),...,L(Bn), [B1...Bn]); implicit base `object`."""
    memo: dict[str, list[str]] = {}
    busy: set[str] = set()

    def lin(name: str) -> list[str]:
        if name in memo:
            return memo[name]
        if name in busy:
            raise CyclicHierarchy(f"inheritance cycle through {name!r}")
        busy.add(name)
        try:
            info = registry.get(name)
            if info is None:
                raise UnknownBase(f"unknown base class {name!r}")
            bases = [b.name for b in info.bases]
            if not bases and name != "object":
                bases = ["object"]
            seqs = [lin(b)[:] for b in bases] + ([list(bases)] if bases else [])
            memo[name] = [name] + _merge(seqs, name)
            return memo[name]
        finally:
            busy.discard(name)

    if cls.name not in registry:
        registry = {**registry, cls.name: cls}
    return lin(cls.name)


def _merge(seqs: list[list[str]], context: str) -> list[str]:
    result: list[str] = []
    seqs = [s for s in seqs if s]
    while seqs:
        for seq in seqs:
            head = seq[0]
            if not any(head in other[1:] for other in seqs):
                break
        else:
            raise InconsistentHierarchy(
                f"cannot create a consistent method resolution order for {context!r}"
            )
        result.append(head)
        seqs = [[x for x in s if x != head] for s in seqs]
        seqs = [s for s in seqs if s]
    return result


def subclass_of(
    a: str,
    b: str,
    registry: Mapping[str, ClassInfo],
    virtual_table: Iterable[tuple[str, str]] = (),
) -> bool:
    """True iff b is on a's MRO or reachable through virtual registrations."""
    table = list(virtual_table)
    seen: set[str] = set()
    frontier = [a]
    while frontier:
        name = frontier.pop()
        if name in seen:
            continue
        seen.add(name)
        if name in registry:
            chain = c3_linearize(registry[name], registry)
        else:
            chain = [name]  # known only through the virtual table
        if b in chain:
            return True
        for link in chain:
            frontier.extend(sup for sub, sup in table if sub == link)
    return False


def object_instance_of(cls: ClassInfo) -> str:
    """The declared metaclass, defaulting to `type` (type included)."""
    return cls.metaclass or "type"


def full_registry(classes: Iterable[ClassInfo]) -> dict[str, ClassInfo]:
    """Corpus classes over the builtin stubs; corpus names win."""
    registry = builtin_registry()
    for cls in classes:
        registry[cls.name] = cls
    return registry
