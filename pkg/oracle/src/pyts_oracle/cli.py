"""Oracle command line: `pyts-oracle <files...> > oracle.json`."""

from __future__ import annotations

import argparse
import json
import sys

from .runner import run_oracle


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pyts-oracle",
        description="Run corpus files under the interpreter and emit ground-truth JSON.",
    )
    parser.add_argument("files", nargs="+", help="corpus source files")
    parser.add_argument("--indent", type=int, default=2)
    args = parser.parse_args(argv)
    record = run_oracle(args.files)
    json.dump(record, sys.stdout, indent=args.indent)
    sys.stdout.write("\n")
    # nonzero only when a corpus file failed to import
    return 1 if any(not f["ok"] for f in record["files"]) else 0


if __name__ == "__main__":
    sys.exit(main())
