"""Command-line entry point.

Commands: elaborate, check, mro, relations, oracle-diff, dump-prelude.
Exit codes: 0 ok/conformant, 1 nonconformant or unexpected divergence,
2 usage error, 3 parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .conformance import relations_graph, to_dot, type_instance_of
from .core import TypeExpr
from .elaborate import ModuleElaboration, elaborate_parsed
from .errors import PytsError
from .frontend import ClassInfo, parse_source
from .mro import c3_linearize, full_registry, subclass_of
from .prelude import Definition, TypeEnv, def_type, load_virtual_table, prelude_env
from .render import render_type, type_to_json

VIRTUAL_TABLE_ENV_VAR = "PYTS_VIRTUAL_TABLE"

_FAMILY_DUMP = ("GenericET1", "GenericET2", "GenericET3", "ProtocolET0", "ProtocolET1", "ProtocolET2")


@dataclass
class Workspace:
    """Everything loaded for one invocation."""

    env: TypeEnv
    registry: dict[str, ClassInfo] = field(default_factory=dict)
    classes: list[ClassInfo] = field(default_factory=list)
    modules: list[tuple[str, ModuleElaboration]] = field(default_factory=list)
    virtual_table: list[tuple[str, str]] = field(default_factory=list)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pyts",
        description="Existential-type engine for Python classes and protocols.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, files: bool = True) -> None:
        p.add_argument("--virtual-table", help="path to a 'Sub Base' pair file")
        p.add_argument(
            "--no-numeric-tower",
            action="store_true",
            help="disable the BoolET <: IntET <: FloatET <: ComplexET edges",
        )
        if files:
            p.add_argument("files", nargs="+", help="source files of the supported subset")

    p = sub.add_parser("elaborate", help="print the types a module defines")
    common(p)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("check", help="structural conformance of subject against target")
    common(p)
    p.add_argument("--subject", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("mro", help="print C3 linearizations")
    common(p)
    p.add_argument("--subject")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("relations", help="emit the class/type relations graph")
    common(p)
    p.add_argument("--format", choices=("dot", "json"), default="dot")

    p = sub.add_parser("oracle-diff", help="diff static verdicts against a runtime oracle")
    common(p)
    p.add_argument("--oracle", required=True, help="oracle JSON file")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("dump-prelude", help="print the built-in type environment")
    common(p, files=False)
    p.add_argument("--format", choices=("text", "json"), default="text")

    return parser


def _load(args: argparse.Namespace, with_files: bool = True) -> Workspace:
    env = prelude_env(numeric_tower=not args.no_numeric_tower).child()
    ws = Workspace(env=env)
    table_path = args.virtual_table or os.environ.get(VIRTUAL_TABLE_ENV_VAR)
    if table_path:
        ws.virtual_table = load_virtual_table(Path(table_path).read_text())
        env.add_virtual_pairs(ws.virtual_table)
    if not with_files:
        return ws
    for path in args.files:
        source = Path(path).read_text(encoding="utf-8")
        parsed = parse_source(source, env)
        for warning in parsed.warnings:
            print(f"{path}:{warning}", file=sys.stderr)
        module = elaborate_parsed(parsed, env, ws.registry)
        ws.classes.extend(parsed.classes)
        ws.modules.append((path, module))
    return ws


def _resolve_name(name: str, ws: Workspace) -> str:
    resolved = ws.env.resolve_class(name)
    if resolved is not None:
        return resolved
    if ws.env.contains(name):
        return name
    raise PytsError(f"unknown class or ET-name: {name}")


def _definition_json(name: str, d: Definition) -> dict:
    return {
        "name": name,
        "params": list(d.params),
        "self_var": d.self_var,
        "bound": None if d.bound is None else type_to_json(d.bound),
        "signature": type_to_json(d.signature),
        "is_meta": d.is_meta,
        "class_name": d.class_name,
        "text": render_type(def_type(d)),
    }


def _typed_json(name: str, t: TypeExpr) -> dict:
    return {"name": name, "type": type_to_json(t), "text": render_type(t)}


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _json_dump(data: object) -> None:
    _emit(json.dumps(data, indent=2))


# --- commands ------------------------------------------------------------------


def _cmd_elaborate(args: argparse.Namespace) -> int:
    ws = _load(args)
    if args.format == "json":
        _json_dump(
            {
                "modules": [
                    {
                        "path": path,
                        "definitions": [
                            _definition_json(n, d) for n, d in module.definitions.items()
                        ],
                        "functions": [
                            _typed_json(n, t) for n, t in module.functions.items()
                        ],
                        "bindings": [
                            _typed_json(n, t) for n, t in module.bindings.items()
                        ],
                    }
                    for path, module in ws.modules
                ]
            }
        )
        return 0
    lines = []
    for path, module in ws.modules:
        lines.append(f"# {path}")
        for name, d in module.definitions.items():
            lines.append(f"{name} = {render_type(def_type(d))}")
        for name, t in module.functions.items():
            lines.append(f"{name}: {render_type(t)}")
        for name, t in module.bindings.items():
            lines.append(f"{name}: {render_type(t)}")
    _emit("\n".join(lines))
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    ws = _load(args)
    subject = _resolve_name(args.subject, ws)
    target = _resolve_name(args.target, ws)
    report = type_instance_of(subject, target, ws.env)
    if args.format == "json":
        _json_dump(report.to_json())
    else:
        relation = "a type-instance-of" if report.verdict else "not a type-instance-of"
        lines = [f"{args.subject} is {relation} {args.target}"]
        for m in report.members:
            status = "ok" if m.compatible else "incompatible"
            lines.append(f"  {m.name}: {status}")
            lines.append(f"    expected: {render_type(m.expected)}")
            actual = "<missing>" if m.actual is None else render_type(m.actual)
            lines.append(f"    actual:   {actual}")
            if m.reason:
                lines.append(f"    reason:   {m.reason}")
        _emit("\n".join(lines))
    return 0 if report.verdict else 1


def _cmd_mro(args: argparse.Namespace) -> int:
    ws = _load(args)
    registry = full_registry(ws.classes)
    if args.subject:
        names = [args.subject]
    else:
        names = [c.name for c in ws.classes]
    orders = [(n, c3_linearize(registry[n], registry)) for n in names]
    if args.format == "json":
        _json_dump({"mros": [{"class": n, "mro": order} for n, order in orders]})
    else:
        _emit("\n".join(" -> ".join(order) for _, order in orders))
    return 0


def _cmd_relations(args: argparse.Namespace) -> int:
    ws = _load(args)
    problems: list[str] = []
    edges = relations_graph(
        ws.classes,
        ws.env,
        ws.virtual_table,
        on_error=lambda name, exc: problems.append(f"{name}: {exc}"),
    )
    for problem in problems:
        print(f"warning: {problem}", file=sys.stderr)
    if args.format == "json":
        _json_dump({"edges": [e.to_json() for e in sorted(edges, key=lambda e: (e.src, e.dst, e.kind))]})
    else:
        _emit(to_dot(edges, ws.classes))
    return 0


def _cmd_oracle_diff(args: argparse.Namespace) -> int:
    ws = _load(args)
    oracle = json.loads(Path(args.oracle).read_text())
    registry = full_registry(ws.classes)
    kinds = {c.name: c.kind for c in ws.classes}
    divergences = []
    checked = skipped = 0
    for entry in oracle.get("subclass_checks", []):
        sub, sup, result = entry["sub"], entry["sup"], entry["result"]
        if sub not in kinds or sup not in kinds:
            continue
        if not isinstance(result, bool):
            skipped += 1  # runtime check raised; nothing to compare
            continue
        checked += 1
        static = subclass_of(sub, sup, registry, ws.virtual_table)
        if not static and kinds[sup] == "protocol":
            static = type_instance_of(f"{sub}ET", f"{sup}ET", ws.env).verdict
        if static == result:
            continue
        expected = result and not static and kinds[sup] in ("protocol", "abc")
        reason = (
            "runtime protocol/ABC checks look only at member presence or registrations"
            if expected
            else "disagreement outside the documented runtime-check class"
        )
        divergences.append(
            {
                "sub": sub,
                "target": sup,
                "runtime": result,
                "static": static,
                "expected": expected,
                "reason": reason,
            }
        )
    unexpected = [d for d in divergences if not d["expected"]]
    if args.format == "json":
        _json_dump(
            {"checked": checked, "skipped": skipped, "divergences": divergences}
        )
    else:
        lines = [f"pairs checked: {checked} (skipped: {skipped})"]
        for d in divergences:
            label = "expected" if d["expected"] else "UNEXPECTED"
            lines.append(
                f"{label} divergence: {d['sub']} -> {d['target']} "
                f"(runtime={str(d['runtime']).lower()}, static={str(d['static']).lower()})"
            )
        lines.append(
            "no unexpected divergences"
            if not unexpected
            else f"{len(unexpected)} unexpected divergence(s)"
        )
        _emit("\n".join(lines))
    return 1 if unexpected else 0


def _cmd_dump_prelude(args: argparse.Namespace) -> int:
    ws = _load(args, with_files=False)
    names = ws.env.names() + [n for n in _FAMILY_DUMP if n not in ws.env.names()]
    entries = [(n, ws.env.lookup(n)) for n in sorted(names)]
    if args.format == "json":
        _json_dump({"definitions": [_definition_json(n, d) for n, d in entries]})
    else:
        lines = []
        for n, d in entries:
            suffix = " [meta]" if d.is_meta else ""
            lines.append(f"{n} = {render_type(def_type(d))}{suffix}")
        _emit("\n".join(lines))
    return 0


_COMMANDS = {
    "elaborate": _cmd_elaborate,
    "check": _cmd_check,
    "mro": _cmd_mro,
    "relations": _cmd_relations,
    "oracle-diff": _cmd_oracle_diff,
    "dump-prelude": _cmd_dump_prelude,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (PytsError, SyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
