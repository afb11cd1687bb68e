"""Timed pulse schedules: conversion from sign matrices, JSON, ASCII and SVG."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .compiler import SignMatrix
from .errors import InvalidInputError

TIME_DIGITS = 12


@dataclass(frozen=True, order=True)
class Pulse:
    boundary: int
    parity: bool = False


@dataclass(frozen=True)
class PulseSchedule:
    """Instantaneous 180-degree pulses placed on interval boundaries.

    ``pulses[i]`` lists spin ``i``'s pulses sorted by boundary index; boundary
    ``k`` sits at time ``k * total_time / intervals``. A pulse on boundary
    ``intervals`` (the end of the sequence) does not change any interval's
    sign; parity pulses live there.
    """

    total_time: float
    intervals: int
    names: tuple[str, ...]
    pulses: tuple[tuple[Pulse, ...], ...]

    def __post_init__(self):
        if not self.total_time > 0:
            raise InvalidInputError(f"total_time must be positive, got {self.total_time}")
        if self.intervals < 1:
            raise InvalidInputError(f"interval count must be >= 1, got {self.intervals}")
        if len(self.names) != len(self.pulses):
            raise InvalidInputError("one pulse list per spin name required")
        norm = []
        for name, plist in zip(self.names, self.pulses):
            plist = tuple(sorted(plist))
            bounds = [p.boundary for p in plist]
            if len(set(bounds)) != len(bounds):
                raise InvalidInputError(f"spin {name!r} has two pulses on the same boundary")
            for p in plist:
                if not 1 <= p.boundary <= self.intervals:
                    raise InvalidInputError(f"spin {name!r} pulse on boundary {p.boundary} outside 1..{self.intervals}")
                if p.parity and p.boundary != self.intervals:
                    raise InvalidInputError(f"spin {name!r} parity pulse must sit at the end of the sequence")
            norm.append(plist)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "pulses", tuple(norm))

    def time(self, boundary: int) -> float:
        return boundary * self.total_time / self.intervals

    def to_sign_matrix(self) -> SignMatrix:
        out = np.ones((len(self.names), self.intervals), dtype=np.int8)
        for i, plist in enumerate(self.pulses):
            for p in plist:
                if p.boundary < self.intervals:
                    out[i, p.boundary:] *= -1
        return SignMatrix(out)

    def final_flips(self) -> list[int]:
        """Spins whose total pulse count is odd (net bit flip left over)."""
        return [i for i, plist in enumerate(self.pulses) if len(plist) % 2]

    def simultaneity(self) -> int:
        counts: dict[int, int] = {}
        for plist in self.pulses:
            for p in plist:
                counts[p.boundary] = counts.get(p.boundary, 0) + 1
        return max(counts.values(), default=0)


def schedule_from_sign_matrix(
    m: SignMatrix,
    total_time: float = 1.0,
    omit_final: bool = False,
    names: Sequence[str] | None = None,
) -> PulseSchedule:
    names = tuple(names) if names is not None else tuple(str(i) for i in range(m.rows))
    if len(names) != m.rows:
        raise InvalidInputError(f"{len(names)} names for {m.rows} rows")
    flips = m.flips()
    pulses = []
    for i in range(m.rows):
        plist = [Pulse(int(k) + 1) for k in np.flatnonzero(flips[i])]
        if len(plist) % 2 and not omit_final:
            plist.append(Pulse(m.cols, parity=True))
        pulses.append(tuple(plist))
    return PulseSchedule(float(total_time), m.cols, names, tuple(pulses))


def pulse_count(s: PulseSchedule, include_final: bool = True) -> int:
    return sum(1 for plist in s.pulses for p in plist if include_final or not p.parity)


def _round_time(t: float) -> float:
    return float(f"{t:.{TIME_DIGITS}g}")


def schedule_to_dict(s: PulseSchedule) -> dict:
    return {
        "total_time": s.total_time,
        "intervals": s.intervals,
        "spins": [
            {
                "name": name,
                "pulses": [
                    {"boundary": p.boundary, "time": _round_time(s.time(p.boundary)), "parity": p.parity}
                    for p in plist
                ],
            }
            for name, plist in zip(s.names, s.pulses)
        ],
    }


def to_json(s: PulseSchedule, indent: int | None = 2) -> str:
    return json.dumps(schedule_to_dict(s), indent=indent)


def schedule_from_dict(doc: dict) -> PulseSchedule:
    try:
        total_time = float(doc["total_time"])
        intervals = doc["intervals"]
        spins = doc["spins"]
        if not isinstance(intervals, int) or isinstance(intervals, bool):
            raise InvalidInputError('"intervals" must be an integer')
        names = []
        pulses = []
        for entry in spins:
            names.append(str(entry["name"]))
            plist = []
            for p in entry["pulses"]:
                b = p["boundary"]
                if not isinstance(b, int) or isinstance(b, bool):
                    raise InvalidInputError(f"pulse boundary must be an integer, got {b!r}")
                plist.append(Pulse(b, bool(p.get("parity", False))))
            pulses.append(tuple(plist))
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed schedule document: {exc!r}") from None
    return PulseSchedule(total_time, intervals, tuple(names), tuple(pulses))


def from_json(text: str) -> PulseSchedule:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"malformed schedule JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidInputError("schedule JSON must be an object")
    return schedule_from_dict(doc)


def _timeline_width(intervals: int, width: int | None) -> int:
    return width if width is not None else max(4 * intervals, 24)


def box_columns(s: PulseSchedule, width: int | None = None) -> list[list[int]]:
    """Character column of each pulse box centre, per spin."""
    w = _timeline_width(s.intervals, width)
    return [[round(p.boundary * w / s.intervals) for p in plist] for plist in s.pulses]


def render_ascii(s: PulseSchedule, labels: Sequence[str] | None = None, width: int | None = None) -> str:
    """One line per spin, spin 0 on top; ``[#]`` pulse, ``[.]`` parity pulse."""
    labels = list(labels) if labels is not None else list(s.names)
    w = _timeline_width(s.intervals, width)
    pad = max(len(x) for x in labels)
    centres = box_columns(s, w)
    lines = []
    for label, plist, cols in zip(labels, s.pulses, centres):
        row = ["-"] * (w + 1) + [" ", " "]
        for p, c in zip(plist, cols):
            row[c - 1 : c + 2] = list("[.]" if p.parity else "[#]")
        lines.append(f"{label.rjust(pad)} " + "".join(row).rstrip())
    return "\n".join(lines)


def render_svg(s: PulseSchedule, labels: Sequence[str] | None = None, width: int = 600) -> str:
    labels = list(labels) if labels is not None else list(s.names)
    left, pitch, box_w, box_h = 40, 30, 6, 14
    height = pitch * (len(labels) + 1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{left + width + 20}" height="{height}">'
    ]
    for i, (label, plist) in enumerate(zip(labels, s.pulses)):
        y = pitch * (i + 1)
        parts.append(f'<text x="4" y="{y + 4}" font-size="12">{label}</text>')
        parts.append(f'<line x1="{left}" y1="{y}" x2="{left + width}" y2="{y}" stroke="black"/>')
        for p in plist:
            x = left + p.boundary * width / s.intervals - box_w / 2
            dash = ' stroke-dasharray="2,2"' if p.parity else ""
            parts.append(
                f'<rect x="{x:g}" y="{y - box_h}" width="{box_w}" height="{box_h}" '
                f'fill="none" stroke="black"{dash}/>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
