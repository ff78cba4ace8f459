"""Kalman codes and the canonical form of controllable systems.

The Kalman code of a completely controllable system records which of
the columns ``A^i B_j`` introduce a new direction when the columns are
scanned in lexicographic order of ``(i, j)``.  It is an ``n x m`` box
diagram with exactly ``n`` black boxes, top-justified in every column,
and it only depends on the base-change orbit of the system.

Conventions: box rows (powers ``i``) are 0-based, box columns (inputs
``j``) are 1-based; multi-indices are 1-based throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .errors import InvalidMultiIndex, NotControllable
from .linalg import Matrix, inverse
from .system import LinearSystem, act


@dataclass(frozen=True)
class MultiIndex:
    """Strictly increasing 1-based index tuple, optionally bounded."""

    values: tuple[int, ...]
    ambient: int | None = None

    def __post_init__(self) -> None:
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if any(v < 1 for v in vals):
            raise ValueError("multi-index entries are 1-based positive integers")
        if any(a >= b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"multi-index must be strictly increasing: {vals}")
        if self.ambient is not None and vals and vals[-1] > self.ambient:
            raise ValueError(f"entry {vals[-1]} exceeds ambient size {self.ambient}")

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, v: int) -> bool:
        return v in self.values

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self.values) + "}"


@dataclass(frozen=True)
class KalmanCode:
    """Box diagram with ``n`` black boxes, top-justified per column."""

    m: int
    n: int
    black: frozenset  # of (power i, column j) with 0 <= i < n, 1 <= j <= m

    def __post_init__(self) -> None:
        black = frozenset((int(i), int(j)) for i, j in self.black)
        object.__setattr__(self, "black", black)
        if len(black) != self.n:
            raise ValueError(f"need exactly n={self.n} black boxes, got {len(black)}")
        for i, j in black:
            if not (0 <= i < max(self.n, 1)) or not (1 <= j <= self.m):
                raise ValueError(f"box {(i, j)} out of the {self.n}x{self.m} array")
            if i > 0 and (i - 1, j) not in black:
                raise ValueError(f"column {j} is not top-justified at row {i}")

    @property
    def occupied_columns(self) -> tuple[int, ...]:
        """Columns holding at least one black box, increasing (1-based)."""
        return tuple(sorted({j for _, j in self.black}))

    @property
    def column_heights(self) -> tuple[int, ...]:
        """Black-box count of each occupied column, in column order."""
        counts: dict[int, int] = {}
        for _, j in self.black:
            counts[j] = counts.get(j, 0) + 1
        return tuple(counts[j] for j in self.occupied_columns)

    @property
    def height_prefixes(self) -> tuple[int, ...]:
        """Running totals of the column heights, starting at 0, ending at n."""
        out = [0]
        for h in self.column_heights:
            out.append(out[-1] + h)
        return tuple(out)

    @property
    def k(self) -> int:
        return len(self.occupied_columns)

    def boxes_in_order(self) -> list[tuple[int, int]]:
        """Black boxes grouped by column, then by increasing power."""
        return [
            (i, j)
            for j, h in zip(self.occupied_columns, self.column_heights)
            for i in range(h)
        ]

    def ascii_art(self) -> str:
        """One text row per power, '#' for black boxes, '.' otherwise."""
        if self.n == 0 or self.m == 0:
            return "(empty)"
        return "\n".join(
            "".join("#" if (i, j) in self.black else "." for j in range(1, self.m + 1))
            for i in range(self.n)
        )

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "occupied_columns": list(self.occupied_columns),
            "column_heights": list(self.column_heights),
        }

    @staticmethod
    def from_json(obj: dict) -> "KalmanCode":
        cols = [int(j) for j in obj["occupied_columns"]]
        heights = [int(h) for h in obj["column_heights"]]
        if len(cols) != len(heights):
            raise ValueError("occupied_columns and column_heights differ in length")
        black = frozenset((i, j) for j, h in zip(cols, heights) for i in range(h))
        return KalmanCode(int(obj["m"]), int(obj["n"]), black)


def _new_direction_walk(system: LinearSystem):
    """Scan columns ``A^i B_j`` in lexicographic (i, j) order.

    Returns the black box set and the original column vectors of the
    black boxes, keyed by box.  Raises if fewer than ``n`` independent
    columns show up (the system is not completely controllable).
    """
    f = system.field
    n, m = system.n, system.m
    black: set[tuple[int, int]] = set()
    vectors: dict[tuple[int, int], list] = {}
    basis: list[list] = []  # forward-eliminated copies, leading entries known

    def try_add(vec: list) -> bool:
        v = list(vec)
        for b in basis:
            lead = next(i for i, x in enumerate(b) if x != 0)
            if v[lead] != 0:
                factor = f.div(v[lead], b[lead])
                v = [f.sub(x, f.mul(factor, y)) for x, y in zip(v, b)]
        if all(x == 0 for x in v):
            return False
        basis.append(v)
        return True

    block = system.B
    for i in range(n):
        for j in range(1, m + 1):
            col = block.col_list(j - 1)
            if try_add(col):
                black.add((i, j))
                vectors[(i, j)] = col
                if len(black) == n:
                    return black, vectors
        if i + 1 < n:
            block = system.A @ block
    if len(black) < n:
        raise NotControllable(
            f"controllability rank is {len(black)} < n = {n}"
        )
    return black, vectors


def kalman_code(system: LinearSystem) -> KalmanCode:
    """Kalman code of a completely controllable system.

    Box ``(i, j)`` is black when column ``A^i B_j`` is independent of
    every column that precedes it lexicographically.  Invariant under
    base change.
    """
    black, _ = _new_direction_walk(system)
    return KalmanCode(system.m, system.n, frozenset(black))


def canonical_form(system: LinearSystem) -> tuple[Matrix, LinearSystem]:
    """The unique base change ``g`` putting a cc system in canonical form.

    ``g`` is the inverse of the matrix whose columns are the black-box
    vectors ``A^i B_j``, grouped by occupied column and ordered by
    increasing power inside each group.  In the resulting system,
    ``B'`` holds standard basis vectors at the occupied columns and the
    non-terminal columns of ``A'`` are the shifted basis vectors; the
    remaining columns carry the orbit moduli.

    Returns ``(g, act(g, system))``.  Constant on orbits: equivalent
    systems produce the identical canonical system.
    """
    black, vectors = _new_direction_walk(system)
    code = KalmanCode(system.m, system.n, frozenset(black))
    ordered = []
    heights = dict(zip(code.occupied_columns, code.column_heights))
    for j in code.occupied_columns:
        for i in range(heights[j]):
            ordered.append(vectors[(i, j)])
    if system.n == 0:
        g = Matrix.identity(system.field, 0)
    else:
        g = inverse(Matrix.from_cols(system.field, ordered, rows=system.n))
    return g, act(g, system)


def multiindex_from_code(code: KalmanCode) -> MultiIndex:
    """The size-``n`` multi-index inside ``{1..m+n-1}`` attached to a code.

    Occupied columns contribute their own positions; the complement of
    the height prefix sums within ``{1..n}`` contributes positions
    shifted by ``m``.
    """
    prefix = set(code.height_prefixes[1:])
    complement = [c for c in range(1, code.n + 1) if c not in prefix]
    values = list(code.occupied_columns) + [code.m + c for c in complement]
    return MultiIndex(tuple(values), ambient=max(code.m + code.n - 1, 0))


def code_from_multiindex(index: MultiIndex, m: int, n: int) -> KalmanCode:
    """Inverse of :func:`multiindex_from_code`.

    Splits the index at ``m``: small entries become the occupied
    columns, large entries (minus ``m``) determine the height prefixes
    through their complement in ``{1..n}``.
    """
    values = tuple(index)
    if len(values) != n:
        raise InvalidMultiIndex(f"need {n} entries, got {len(values)}")
    if any(v < 1 or v > m + n - 1 for v in values):
        raise InvalidMultiIndex(f"entries of {values} must lie in 1..{m + n - 1}")
    cols = [v for v in values if v <= m]
    cs = [v - m for v in values if v > m]
    if any(c < 1 or c >= n for c in cs):
        raise InvalidMultiIndex(f"shifted entries {cs} must lie in 1..{n - 1}")
    ends = [e for e in range(1, n + 1) if e not in set(cs)]
    if len(ends) != len(cols):
        raise InvalidMultiIndex(
            f"{len(cols)} small entries cannot carry {len(ends)} column heights"
        )
    black = set()
    prev = 0
    for j, e in zip(cols, ends):
        for i in range(e - prev):
            black.add((i, j))
        prev = e
    return KalmanCode(m, n, frozenset(black))


def all_codes(m: int, n: int) -> Iterator[KalmanCode]:
    """Every Kalman code of an (m, n) box array."""
    if n == 0:
        yield KalmanCode(m, 0, frozenset())
        return
    for k in range(1, min(m, n) + 1):
        for cols in itertools.combinations(range(1, m + 1), k):
            for cuts in itertools.combinations(range(1, n), k - 1):
                bounds = (0,) + cuts + (n,)
                heights = [bounds[t + 1] - bounds[t] for t in range(k)]
                black = frozenset(
                    (i, j) for j, h in zip(cols, heights) for i in range(h)
                )
                yield KalmanCode(m, n, black)
