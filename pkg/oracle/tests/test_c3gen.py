"""Hierarchy generator: determinism, bounds, rejection coverage."""

from __future__ import annotations

import ast

from pyts_oracle.c3gen import generate_corpus
from pyts_oracle.runner import run_oracle


def test_deterministic_for_fixed_seed(tmp_path):
    a = generate_corpus(tmp_path / "a", count=20, seed=7)
    b = generate_corpus(tmp_path / "b", count=20, seed=7)
    assert [p.name for p in a] == [p.name for p in b]
    for pa, pb in zip(a, b):
        assert pa.read_text() == pb.read_text()
    c = generate_corpus(tmp_path / "c", count=20, seed=8)
    assert any(pa.read_text() != pc.read_text() for pa, pc in zip(a, c))


def test_counts_and_shape_bounds(tmp_path):
    paths = generate_corpus(tmp_path, count=60, seed=20240)
    assert len(paths) == 60
    for path in paths:
        tree = ast.parse(path.read_text())
        classes = [s for s in tree.body if isinstance(s, ast.ClassDef)]
        assert classes, path.name
        assert len(classes) <= 16  # depth <= 4, width <= 4
        for cls in classes:
            assert len(cls.bases) <= 3


def test_forced_rejections_fail_under_interpreter(tmp_path):
    paths = generate_corpus(tmp_path, count=15, seed=99, inconsistent_every=5)
    record = run_oracle(paths)
    status = {f["path"]: f for f in record["files"]}
    for i in (4, 9, 14):  # every 5th module carries the rejected pattern
        entry = status[f"h_{i:03d}.py"]
        assert not entry["ok"]
        assert entry["error"] == "error:TypeError"
    assert any(f["ok"] for f in record["files"])


def test_committed_corpus_matches_generator():
    """The committed hierarchy corpus is exactly seed 20240, count 60."""
    import tempfile
    from pathlib import Path

    committed = Path(__file__).parent.parent.parent / "tests" / "data" / "c3"
    with tempfile.TemporaryDirectory() as tmp:
        regenerated = generate_corpus(tmp, count=60, seed=20240)
        for path in regenerated:
            assert (committed / path.name).read_text() == path.read_text(), path.name
