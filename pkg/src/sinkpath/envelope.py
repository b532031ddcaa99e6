"""Upper envelopes of lines with monotone slopes.

Built by a single stack scan (the dual of a monotone convex hull) and queried
by binary search over breakpoints.  Only the query domain x >= 0 matters to
callers, so lines that never win there are dropped.
"""

from __future__ import annotations

from array import array
from bisect import bisect_right
from dataclasses import dataclass


@dataclass(frozen=True)
class Line:
    slope: float
    intercept: float
    tag: int


class Envelope:
    """Immutable upper envelope.  ``query(x)`` returns a maximizing line."""

    __slots__ = ("slopes", "intercepts", "tags", "breaks", "n_input")

    def __init__(self, slopes, intercepts, tags, breaks, n_input):
        self.slopes = array("d", slopes)
        self.intercepts = array("d", intercepts)
        self.tags = array("l", tags)
        self.breaks = array("d", breaks)
        self.n_input = n_input

    def __len__(self):
        return len(self.slopes)

    def query(self, x: float):
        """(tag, value) of a maximizing line at x; breakpoint ties go to the
        smaller tag."""
        j = bisect_right(self.breaks, x)
        value = self.slopes[j] * x + self.intercepts[j]
        if j > 0 and self.breaks[j - 1] == x and self.tags[j - 1] < self.tags[j]:
            return self.tags[j - 1], value
        return self.tags[j], value


def build_upper_envelope(lines) -> Envelope:
    """Build the upper envelope of ``lines`` (slope-sorted either direction).

    Duplicate slopes keep the larger intercept; full duplicates keep the
    smaller tag.  Pops are non-strict so equal-value lines never create
    zero-width pieces.
    """
    raw = [(l.slope, l.intercept, l.tag) for l in lines]
    if not raw:
        raise ValueError("at least one line required")
    if len(raw) > 1 and raw[0][0] > raw[-1][0]:
        raw.reverse()
    if __debug__:
        for a, b in zip(raw, raw[1:]):
            assert a[0] <= b[0], "lines must be sorted by slope"
    return _envelope_from_sorted(raw, len(raw))


def _envelope_from_sorted(raw, n_input) -> Envelope:
    """Hull scan over (slope, intercept, tag) triples with ascending slopes."""
    sl: list = []
    ic: list = []
    tg: list = []
    br: list = []
    for a, b, t in raw:
        if sl and sl[-1] == a:
            # duplicate slope: keep larger intercept, then smaller tag
            if b < ic[-1] or (b == ic[-1] and t > tg[-1]):
                continue
            sl.pop(); ic.pop(); tg.pop()
            if br:
                br.pop()
        while sl:
            # intersection of the new line with the current top
            x = (ic[-1] - b) / (a - sl[-1])
            if len(sl) > 1 and x <= br[-1]:
                sl.pop(); ic.pop(); tg.pop(); br.pop()
                continue
            if len(sl) == 1 and x <= 0.0:
                # the old line never wins on x >= 0
                sl.pop(); ic.pop(); tg.pop()
                continue
            br.append(x)
            break
        sl.append(a); ic.append(b); tg.append(t)
    return Envelope(sl, ic, tg, br, n_input)


def query_envelope(env: Envelope, x: float):
    return env.query(x)
