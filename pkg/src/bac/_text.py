"""String helpers shared by the matchers."""

from __future__ import annotations

import re

SMART_QUOTES = str.maketrans({"“": '"', "”": '"', "„": '"', "‟": '"', "″": '"'})

_QUOTED = re.compile(r'"([^"]*)"')


def normalize(text: str) -> str:
    """Collapse whitespace runs and strip."""
    return " ".join(text.split())


def fold(text: str) -> str:
    return normalize(text).casefold()


def same_text(a: str | None, b: str | None) -> bool:
    if a is None or b is None:
        return False
    return fold(a) == fold(b)


def split_quoted(text: str) -> tuple[list[str], list[str]]:
    """Split *text* into literal chunks and double-quoted arguments.

    There is always one more literal chunk than arguments. Raises ValueError
    on an odd number of quote characters.
    """
    if text.count('"') % 2:
        raise ValueError("unterminated quote")
    literals: list[str] = []
    args: list[str] = []
    pos = 0
    for m in _QUOTED.finditer(text):
        literals.append(text[pos:m.start()])
        args.append(m.group(1))
        pos = m.end()
    literals.append(text[pos:])
    return literals, args


def edit_distance(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def near_name(a: str, b: str, max_distance: int = 2) -> bool:
    """True when two names differ only by small edits or by word order.

    Identical names (after folding) are not "near"; they are equal.
    """
    fa, fb = fold(a), fold(b)
    if fa == fb:
        return False
    if set(fa.split()) == set(fb.split()):
        return True
    return edit_distance(fa, fb) <= max_distance
