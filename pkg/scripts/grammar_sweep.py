#!/usr/bin/env python3
"""Exhaustive parser-vs-oracle agreement sweep with timing breakdown.

Walks every string up to LENGTH over the reduced alphabet and compares the
parser's verdict with membership in the oracle-generated language. Useful
when touching the grammar: run before and after, diff the counts.

    python scripts/grammar_sweep.py [max_length]
"""

import sys
import time
from itertools import product
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from grammar_oracle import build_language  # noqa: E402

from classmarks.notation import ParseError, parse  # noqa: E402

ALPHABET = ["0", "1", "9", ".", "+", ":", "/", "(", ")", "=", "[", "]", '"']


def main() -> int:
    max_len = int(sys.argv[1]) if len(sys.argv) > 1 else 6

    started = time.perf_counter()
    language = build_language(ALPHABET, max_len)
    build_seconds = time.perf_counter() - started
    print(f"oracle language: {len(language)} strings <= {max_len} chars "
          f"({build_seconds:.1f} s to generate)")

    started = time.perf_counter()
    swept = accepted = mismatched = 0
    for n in range(0, max_len + 1):
        for combo in product(ALPHABET, repeat=n):
            text = "".join(combo)
            swept += 1
            try:
                parse(text)
                ok = True
            except ParseError:
                ok = False
            accepted += ok
            if ok != (text in language):
                mismatched += 1
                if mismatched <= 20:
                    print(f"MISMATCH {text!r}: parser={'accept' if ok else 'reject'}")
    sweep_seconds = time.perf_counter() - started

    print(f"swept {swept} strings in {sweep_seconds:.1f} s; "
          f"parser accepted {accepted}; mismatches {mismatched}")
    return 1 if mismatched else 0


if __name__ == "__main__":
    sys.exit(main())
