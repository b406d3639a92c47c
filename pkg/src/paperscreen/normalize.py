"""Text normalization shared by every phrase-level detector.

Printed papers mangle phrases in predictable ways: casing, ligatures,
soft hyphens, end-of-line hyphenation, runs of whitespace.  normalize()
flattens all of that and keeps an offset map so a hit in the normalized
stream can be reported as a span in the original text.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

SOFT_HYPHEN = "­"
_LINE_BREAKS = "\r\n"


@dataclass(frozen=True)
class NormalizedText:
    text: str
    # per normalized char: [start, end) range of the original chars it covers
    starts: tuple[int, ...]
    ends: tuple[int, ...]

    def to_original(self, start: int, end: int) -> tuple[int, int]:
        """Map a normalized [start, end) span back to original offsets."""
        if not 0 <= start < end <= len(self.text):
            raise IndexError(f"span ({start}, {end}) out of range")
        return self.starts[start], self.ends[end - 1]


def normalize(text: str) -> NormalizedText:
    """Lowercase, NFKC-fold, de-hyphenate and collapse whitespace.

    Total function: any input, including empty, is accepted.  Ligatures
    expand via NFKC; soft hyphens vanish; a hyphen at end of line joins
    the word across the break; every whitespace run becomes one space.
    """
    out: list[str] = []
    starts: list[int] = []
    ends: list[int] = []

    def emit(ch: str, start: int, end: int) -> None:
        if ch == " " and out and out[-1] == " ":
            ends[-1] = max(ends[-1], end)  # merge adjacent spaces
            return
        out.append(ch)
        starts.append(start)
        ends.append(end)

    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == SOFT_HYPHEN:
            i += 1
            continue
        if ch == "-" and i + 1 < n and text[i + 1] in _LINE_BREAKS:
            # end-of-line hyphenation: drop hyphen and the whole break
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            i = j
            continue
        if ch.isspace():
            j = i
            while j < n and text[j].isspace():
                j += 1
            emit(" ", i, j)
            i = j
            continue
        folded = unicodedata.normalize("NFKC", ch).lower()
        for sub in folded:
            emit(" " if sub.isspace() else sub, i, i + 1)
        i += 1
    return NormalizedText(text="".join(out), starts=tuple(starts), ends=tuple(ends))


def normalize_phrase(phrase: str) -> str:
    """Normalize a dictionary phrase, trimming edge whitespace."""
    return normalize(phrase).text.strip()
