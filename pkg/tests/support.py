"""Shared test helpers: sample-data loading and a seeded classmark corpus
generator covering the whole grammar (letters, every auxiliary kind, star
suffixes, quoted time spans with embedded spaces)."""

from __future__ import annotations

import random
from pathlib import Path

from classmarks.store import Snapshot, load_snapshot

SAMPLE_DIR = Path(__file__).resolve().parent.parent / "sample"
BASE_URI = "https://udcdata.info"


def sample_texts() -> tuple[str, str, str]:
    return (
        (SAMPLE_DIR / "records.jsonl").read_text(encoding="utf-8"),
        (SAMPLE_DIR / "redirects.jsonl").read_text(encoding="utf-8"),
        (SAMPLE_DIR / "alignments.jsonl").read_text(encoding="utf-8"),
    )


def sample_snapshot() -> Snapshot:
    return load_snapshot(*sample_texts())


# -- classmark corpus ---------------------------------------------------------

_DIGITS = "0123456789"


def _digit_run(rng: random.Random) -> str:
    groups = [_group(rng, 3) for _ in range(rng.randint(0, 2))]
    groups.append(_group(rng, rng.randint(1, 3)))
    return ".".join(groups)


def _group(rng: random.Random, size: int) -> str:
    return "".join(rng.choice(_DIGITS) for _ in range(size))


def _zero_run(rng: random.Random) -> str:
    run = _digit_run(rng)
    return "0" + run[1:]


def _nonzero_run(rng: random.Random) -> str:
    run = _digit_run(rng)
    return rng.choice("123456789") + run[1:]


def _common_aux(rng: random.Random) -> str:
    kind = rng.randrange(6)
    if kind == 0:
        return "=" + _digit_run(rng)
    if kind == 1:
        return "(=" + _digit_run(rng) + ")"
    if kind == 2:
        return "(" + _zero_run(rng) + ")"
    if kind == 3:
        return "(" + _nonzero_run(rng) + ")"
    if kind == 4:
        chars = _DIGITS + "./:- " + "ABCDEFGhij"
        body = "".join(rng.choice(chars) for _ in range(rng.randint(1, 6)))
        return f'"{body}"'
    return "-" + _zero_run(rng)


def _special_aux(rng: random.Random) -> str:
    kind = rng.randrange(3)
    if kind == 0:
        return "-" + _nonzero_run(rng)
    if kind == 1:
        return "." + _zero_run(rng)
    return "'" + _digit_run(rng)


def _main(rng: random.Random) -> str:
    out = _digit_run(rng)
    if rng.random() < 0.12:
        out += rng.choice("ABCDEFGHIJKLMNOPQRSTUVWXYZ")
        out += "".join(rng.choice("ABCdefGHI") for _ in range(rng.randint(0, 4)))
    if rng.random() < 0.08:
        out += "*" + "".join(rng.choice("ABCxyz0123456789.")
                             for _ in range(rng.randint(1, 5)))
    return out


def _unit(rng: random.Random, depth: int) -> str:
    roll = rng.random()
    if roll < 0.60 or depth >= 3:
        base = _main(rng)
    elif roll < 0.85:
        base = _common_aux(rng)
    else:
        base = "[" + _expression(rng, depth + 1) + "]"
    for _ in range(rng.choice((0, 0, 0, 1, 1, 2))):
        base += _special_aux(rng) if rng.random() < 0.3 else _common_aux(rng)
    return base


def _expression(rng: random.Random, depth: int = 0) -> str:
    parts = [_unit(rng, depth)]
    for _ in range(rng.choice((0, 0, 0, 1, 1, 2))):
        connector = rng.choice(("+", ":", "::", "/"))
        parts.append(connector)
        parts.append(_unit(rng, depth))
    return "".join(parts)


def random_classmark(rng: random.Random) -> str:
    text = _expression(rng)
    if rng.random() < 0.15:  # whitespace noise outside quotes, normalized away
        pos = rng.randrange(len(text) + 1)
        if text[:pos].count('"') % 2 == 0:
            text = text[:pos] + " " + text[pos:]
    return text


def corpus(size: int, seed: int = 20260808) -> list[str]:
    rng = random.Random(seed)
    return [random_classmark(rng) for _ in range(size)]
