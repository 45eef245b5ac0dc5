"""Reference Hecke eigensystems over Q(sqrt 2), parallel weight 3, Siegel parahoric.

Levels are keyed by the generator label used in ``PrimeIdeal.label`` (``"1"``
for level one).  Columns follow ``OPERATORS``.  A value ``"a+bw40"`` means
a + b*omega_40, where omega_D is sqrt(D/4) if 4 | D and (1 + sqrt D)/2 otherwise.
Only the newform systems over Q or a quadratic field are recorded.
"""
from __future__ import annotations

import re

__all__ = ["OPERATORS", "PRIMES", "LEVELS", "parse_value", "reference_systems"]

PRIMES = ("2+sqrt2", "3+sqrt2", "3-sqrt2", "3")
OPERATORS = tuple(f"T{i}({p})" for p in PRIMES for i in (1, 2))

# label -> (norm, dim M, dim S, rows)
LEVELS = {
    "1": (1, 2, 1, [
        "4 -3 48 -16 48 -16 116 340",
    ]),
    "3+sqrt2": (7, 6, 5, [
        "10 15 -7 0 60 80 80 -20",
        "-4 1 7 0 32 80 -60 148",
    ]),
    "3": (9, 12, 11, [
        "-6 7 -22 64 -22 64 -9 0",
        "4 5 -16 16 -16 16 9 0",
    ]),
    "5+2*sqrt2": (17, 23, 22, [
        "-2 3 6 32 -36 80 8 28",
        "4-w40 -3-3w40 38-4w40 -96-32w40 58+6w40 64+48w40 66+4w40 -160+40w40",
    ]),
    "5+sqrt2": (23, 32, 31, [
        "-8 10 -46 119 -54 145 -54 153",
        "10 15 72 176 56 48 124 420",
    ]),
    "5": (25, 48, 47, [
        "2 -9 62 96 62 96 40 -420",
        "-4-2w12 5+2w12 -15+7w12 56-8w12 -15+7w12 56-8w12 44-18w12 132-52w12",
        "8 9 44-10w24 -48-80w24 44+10w24 -48+80w24 76 -60",
    ]),
    "7+3*sqrt2": (31, 65, 64, [
        "-4 4 -60 174 -20 -2 -60 130",
        "-4 5 20 16 -8 48 8 28",
        "-6 7 44-2w204 112-8w204 -4w204 48 -32-2w204 108+4w204",
        "2 -9 72-2w204 176-16w204 56-4w204 48-32w204 76-2w204 -60-20w204",
    ]),
}

_VALUE = re.compile(r"^(?:(-?\d+)(?=[+-]|$))?(?:([+-]?)(\d*)w(\d+))?$")


def parse_value(s: str) -> tuple[int, int, int | None]:
    """'a+bwD' -> (a, b, D); rational values give (a, 0, None)."""
    m = _VALUE.match(s)
    if not m or s == "":
        raise ValueError(f"bad table value {s!r}")
    a, sign, b, D = m.groups()
    x = int(a) if a else 0
    if D is None:
        return x, 0, None
    y = int(b) if b else 1
    return x, -y if sign == "-" else y, int(D)


def reference_systems(level: str) -> list[tuple[int | None, dict]]:
    """[(discriminant or None, {operator: (x, y)})] for one level."""
    out = []
    for row in LEVELS[level][3]:
        vals = [parse_value(v) for v in row.split()]
        discs = {D for _, _, D in vals if D is not None}
        if len(discs) > 1:
            raise ValueError("mixed eigenvalue fields in one row")
        out.append((discs.pop() if discs else None, {op: (x, y) for op, (x, y, _) in zip(OPERATORS, vals)}))
    return out
