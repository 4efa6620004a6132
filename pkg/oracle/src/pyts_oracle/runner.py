"""Execute corpus files under the real interpreter and record ground truth.

Each file runs in an isolated namespace, so corpus modules cannot pollute
each other. For every ordered pair of collected classes the runner records
issubclass; per class it records the metaclass and the __mro__ name
sequence. Protocol checks without @runtime_checkable raise at runtime, so
results are tri-state: true, false, or "error:<ExceptionName>".

`# check-instance: EXPR ; Target` comment directives drive isinstance
checks, evaluated in the defining file's namespace.
"""

from __future__ import annotations

import io
import re
from contextlib import redirect_stdout
from pathlib import Path

_INSTANCE_DIRECTIVE = re.compile(r"^\s*#\s*check-instance:\s*(.+?)\s*;\s*(\w+)\s*$")


def _tri_state(fn):
    try:
        return bool(fn())
    except Exception as exc:  # captured in-band, whatever the corpus raises
        return f"error:{type(exc).__name__}"


def run_oracle(paths: list[str | Path]) -> dict:
    """OracleRecord for the given corpus files (see the JSON schema)."""
    files = []
    classes: list[type] = []
    class_names: set[str] = set()
    namespaces: list[tuple[str, dict]] = []
    for index, raw_path in enumerate(paths):
        path = Path(raw_path)
        source = path.read_text(encoding="utf-8")
        module_name = f"_oracle_corpus_{index}"
        namespace = {"__name__": module_name, "__file__": str(path)}
        error = None
        try:
            code = compile(source, str(path), "exec")
            with redirect_stdout(io.StringIO()):
                exec(code, namespace)
        except Exception as exc:
            error = f"error:{type(exc).__name__}"
        files.append({"path": path.name, "ok": error is None, "error": error})
        if error is not None:
            continue
        namespaces.append((source, namespace))
        for value in namespace.values():
            if not isinstance(value, type):
                continue
            if getattr(value, "__module__", None) != module_name:
                continue
            if value in classes:
                continue
            if value.__name__ in class_names:
                raise ValueError(
                    f"duplicate class name {value.__name__!r} across corpus files"
                )
            class_names.add(value.__name__)
            classes.append(value)

    record_classes = [
        {
            "name": cls.__name__,
            "mro": [k.__name__ for k in cls.__mro__],
            "metaclass": type(cls).__name__,
        }
        for cls in classes
    ]
    subclass_checks = sorted(
        (
            {
                "sub": sub.__name__,
                "sup": sup.__name__,
                "result": _tri_state(lambda: issubclass(sub, sup)),
            }
            for sub in classes
            for sup in classes
        ),
        key=lambda c: (c["sub"], c["sup"]),
    )
    instance_checks = []
    for source, namespace in namespaces:
        for line in source.splitlines():
            m = _INSTANCE_DIRECTIVE.match(line)
            if m is None:
                continue
            expr, target = m.group(1), m.group(2)
            instance_checks.append(
                {
                    "value_expr": expr,
                    "target": target,
                    "result": _tri_state(
                        lambda: isinstance(
                            eval(expr, namespace), namespace[target]  # noqa: S307
                        )
                    ),
                }
            )
    instance_checks.sort(key=lambda c: (c["value_expr"], c["target"]))
    return {
        "files": files,
        "classes": record_classes,
        "subclass_checks": subclass_checks,
        "instance_checks": instance_checks,
    }
