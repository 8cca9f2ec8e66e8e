"""Rewrite tests/golden from the current CLI. Run only after an intended output change."""
from pathlib import Path

from kochgasket.cli import run

from cli_cases import CASES

GOLDEN = Path(__file__).parent / "golden"

if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        code = run(argv + ["--out", str(GOLDEN / name)])
        print(f"{code} {name}")
