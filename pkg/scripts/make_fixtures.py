"""Regenerate tests/fixtures/derived.json from the oracles.

Run from the repository root:  python scripts/make_fixtures.py
"""
import pathlib
import sys
import time

from orthrange.harness import fixtures

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "derived.json"


def main():
    OUT.parent.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    data = fixtures.write(OUT)
    print(f"wrote {len(data)} fixtures to {OUT} in {time.perf_counter() - t0:.1f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
