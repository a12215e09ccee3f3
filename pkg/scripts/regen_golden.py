"""Regenerate the CLI golden files in tests/golden/.

Each golden file holds the argv on its first line ("$ torsionlab ...") followed
by the exit code and captured stdout.  Run after an intentional output change:

    python3 scripts/regen_golden.py
"""

import contextlib
import io
import shlex
import sys
from pathlib import Path

from torsionlab.cli import main

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"

CASES = {
    "torsion_acyclic_5": "torsion jobs/acyclic_5.tl",
    "torsion_acyclic_5_json": "torsion jobs/acyclic_5.tl --json",
    "torsion_not_acyclic_hbases": "torsion jobs/not_acyclic.tl --h-bases",
    "taulist_shape_121": "taulist jobs/shape_121.tl",
    "taulist_degenerate_121": "taulist jobs/degenerate_121.tl",
    "mt_circle": "mt jobs/circle.tl",
    "mt_circle_flip": "mt jobs/circle.tl --flip-orientation",
    "mt_circle_shift_edge": "mt jobs/circle.tl --shift-euler e g",
    "mt_circle_two_vertices": "mt jobs/circle_two_vertices.tl",
    "mt_torus_cell": "mt jobs/torus_cell.tl",
    "scan_circle": "scan jobs/circle.tl",
    "scan_klein_cell": "scan jobs/klein_cell.tl",
    "scan_klein_maptorus": "scan jobs/klein_maptorus.tl",
    "maptorus_torus": "maptorus jobs/torus_maptorus.tl",
    "maptorus_klein": "maptorus jobs/klein_maptorus.tl",
    "maptorus_klein_json": "maptorus jobs/klein_maptorus.tl --json",
    "fusion_split": "fusion jobs/split_sequence.tl",
    "fusion_snake": "fusion jobs/snake_sequence.tl",
    "arg_circle_gaussian": "arg jobs/circle_gaussian.tl",
}


def run(argv: str) -> str:
    buf = io.StringIO()
    args = [str(ROOT / a) if a.startswith("jobs/") else a for a in shlex.split(argv)]
    with contextlib.redirect_stdout(buf):
        code = main(args)
    return f"$ torsionlab {argv}\nexit {code}\n{buf.getvalue()}"


def main_() -> int:
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        (GOLDEN / f"{name}.txt").write_text(run(argv))
        print(f"wrote {name}.txt")
    return 0


if __name__ == "__main__":
    sys.exit(main_())
