#!/usr/bin/env python3
"""
Run every lab command twice into two scratch directories and check the report
trees are byte-identical.

Usage:
  python scripts/reproduce.py
"""
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from app import main as run_command  # noqa: E402  (loads .env and logging)
from reports.report_io import sha256_file  # noqa: E402

COMMANDS = [
    ["probe", "--scenario", "exm1", "--radii-levels", "12"],
    ["probe", "--scenario", "prop1"],
    ["verify"],
    ["rank", "--n-vars", "2", "--degrees", "2,3", "--dims", "8..20:4"],
    ["rank", "--n-vars", "3", "--degrees", "1,1", "--dims", "3..6"],
    ["export", "--operator", "toeplitz", "--dim", "4"],
    ["export", "--operator", "model", "--dim", "4"],
    ["export", "--operator", "defect", "--dim", "4"],
    ["selftest"],
]


def run_all(out: Path) -> list:
    return [run_command(command + ["--out", str(out)]) for command in COMMANDS]


def tree_digest(root: Path) -> dict:
    return {p.relative_to(root).as_posix(): sha256_file(p) for p in sorted(root.rglob("*")) if p.is_file()}


def main():
    print("=" * 60)
    print("Determinism check")
    print("=" * 60)
    with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
        codes_first = run_all(Path(first))
        codes_second = run_all(Path(second))
        digest_first = tree_digest(Path(first))
        digest_second = tree_digest(Path(second))

    for command, code in zip(COMMANDS, codes_first):
        print(f"  exit {code}  {' '.join(command)}")

    ok = True
    if codes_first != codes_second:
        print(f"❌ exit codes differ: {codes_first} vs {codes_second}")
        ok = False
    if set(digest_first) != set(digest_second):
        print(f"❌ file sets differ: {sorted(set(digest_first) ^ set(digest_second))}")
        ok = False
    changed = [name for name in digest_first if digest_second.get(name) not in (None, digest_first[name])]
    for name in changed:
        print(f"❌ {name} differs between runs")
    ok = ok and not changed

    if ok:
        print(f"✅ {len(digest_first)} report files byte-identical across two runs")
    return ok


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
