"""Rewrite tests/data/bounds_table.txt from the current `bounds table` output.

Only run this after checking the new numbers by hand: the golden file is what
the CLI test compares against.
"""

from pathlib import Path

from padic_zeros import bounds

if __name__ == "__main__":
    path = Path(__file__).resolve().parent.parent / "tests" / "data" / "bounds_table.txt"
    path.write_text(bounds.format_table(bounds.bound_table()) + "\n")
    print(f"wrote {path}")
