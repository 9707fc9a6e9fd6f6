"""
The command line in one sitting
===============================

Every capability is reachable as `redblue <command>`; payloads are JSON
files (or "-" for stdin).  This script drives the same entry point
in-process so the output below is exactly what the shell would show.
"""

import json
import tempfile
from pathlib import Path

from redblue.cli import main

tmp = Path(tempfile.mkdtemp())

matrix = tmp / "m_s.json"
matrix.write_text(json.dumps({"entries": [["0", "*"], ["*", "1"]]}))

hard = tmp / "k3.json"
hard.write_text(json.dumps({"entries": [["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]]}))

instance = tmp / "two_blue.json"
instance.write_text(json.dumps({"n": 2, "blue": [[0, 1]], "red": []}))

sandwich = tmp / "c4.json"
sandwich.write_text(json.dumps({
    "n": 4,
    "mandatory": [[0, 1], [1, 2], [2, 3], [0, 3]],
    "allowed": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]],
}))

fullhom = tmp / "p4.json"
fullhom.write_text(json.dumps({"n": 4, "edges": [[0, 1], [1, 2], [2, 3]]}))

for argv in (
    ["classify", str(matrix), "--format", "text"],
    ["classify", str(hard), "--format", "text"],
    ["solve", str(matrix), str(instance)],
    ["sandwich", str(matrix), str(sandwich), "--format", "text"],
    ["fullhom", str(fullhom), "--format", "text"],
    ["certify", str(hard), "--format", "text"],
    ["core", str(matrix), "--format", "text"],
    ["decompose", str(matrix), "--format", "text"],
    ["audit", "--max-n", "2", "--format", "text"],
):
    print(f"\n$ redblue {' '.join(argv)}")
    try:
        main(argv)
    except SystemExit as e:
        if e.code:
            print(f"(exit {e.code})")
