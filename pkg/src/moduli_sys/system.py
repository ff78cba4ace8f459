"""Linear control systems ``(A, B, C)`` and their basic invariants.

A system of type ``(m, n, p)`` has an ``n x n`` state map ``A``, an
``n x m`` input map ``B`` and a ``p x n`` output map ``C``.  Base change
by ``g`` in ``GL_n`` sends it to ``(g A g^-1, g B, C g^-1)``; everything
of interest here is a function of that orbit.

Degenerate shapes are allowed on purpose: ``n = 0`` is the empty system
(canonical by convention), ``p = 0`` means no outputs, and ``m = 0`` is
admitted so that dualizing a ``p = 0`` system stays total.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Iterator

from .errors import SingularBaseChange, SingularMatrix
from .linalg import Field, Matrix, hstack, inverse, rank, vstack


@dataclass(frozen=True)
class LinearSystem:
    field: Field
    m: int
    n: int
    p: int
    A: Matrix
    B: Matrix
    C: Matrix

    def __post_init__(self) -> None:
        if min(self.m, self.n, self.p) < 0:
            raise ValueError("negative system dimension")
        for mat, shape, name in (
            (self.A, (self.n, self.n), "A"),
            (self.B, (self.n, self.m), "B"),
            (self.C, (self.p, self.n), "C"),
        ):
            if (mat.rows, mat.cols) != shape:
                raise ValueError(f"{name} must be {shape[0]}x{shape[1]}, got {mat.rows}x{mat.cols}")
            if mat.field != self.field:
                raise ValueError(f"{name} is over {mat.field}, system is over {self.field}")

    @classmethod
    def from_matrices(cls, A: Matrix, B: Matrix, C: Matrix) -> "LinearSystem":
        return cls(A.field, B.cols, A.rows, C.rows, A, B, C)

    def shape(self) -> tuple[int, int, int]:
        return (self.m, self.n, self.p)


@dataclass(frozen=True)
class SystemClass:
    """Outcome of the two rank tests."""

    cc: bool
    co: bool
    canonical: bool
    rank_c: int
    rank_o: int


def controllability_matrix(system: LinearSystem) -> Matrix:
    """``[B, AB, ..., A^(n-1) B]`` as an ``n x (n m)`` matrix."""
    n = system.n
    if n == 0:
        return Matrix.zeros(system.field, 0, 0)
    blocks = [system.B]
    cur = system.B
    for _ in range(1, n):
        cur = system.A @ cur
        blocks.append(cur)
    return hstack(blocks)


def observability_matrix(system: LinearSystem) -> Matrix:
    """``[C; CA; ...; C A^(n-1)]`` as a ``(p n) x n`` matrix."""
    n = system.n
    if n == 0:
        return Matrix.zeros(system.field, 0, 0)
    blocks = [system.C]
    cur = system.C
    for _ in range(1, n):
        cur = cur @ system.A
        blocks.append(cur)
    return vstack(blocks)


def classify(system: LinearSystem) -> SystemClass:
    """Controllability / observability via the two rank tests.

    For ``n = 0`` both ranks are trivially maximal, so the empty system
    is canonical.
    """
    rank_c = rank(controllability_matrix(system))
    rank_o = rank(observability_matrix(system))
    cc = rank_c == system.n
    co = rank_o == system.n
    return SystemClass(cc=cc, co=co, canonical=cc and co, rank_c=rank_c, rank_o=rank_o)


def act(g: Matrix, system: LinearSystem) -> LinearSystem:
    """Base change: ``(A, B, C) -> (g A g^-1, g B, C g^-1)``."""
    if g.rows != system.n or g.cols != system.n or g.field != system.field:
        raise ValueError(f"base change must be {system.n}x{system.n} over {system.field}")
    try:
        g_inv = inverse(g)
    except SingularMatrix as exc:
        raise SingularBaseChange("base-change matrix is singular") from exc
    return LinearSystem(
        system.field, system.m, system.n, system.p,
        A=g @ system.A @ g_inv,
        B=g @ system.B,
        C=system.C @ g_inv,
    )


def dualize(system: LinearSystem) -> LinearSystem:
    """``(A, B, C) -> (A^T, C^T, B^T)`` of type ``(p, n, m)``.

    An involution that swaps controllability and observability.
    """
    return LinearSystem(
        system.field, system.p, system.n, system.m,
        A=system.A.transpose(),
        B=system.C.transpose(),
        C=system.B.transpose(),
    )


def markov_parameters(system: LinearSystem, count: int) -> list[Matrix]:
    """The ``p x m`` blocks ``C A^(j-1) B`` for ``j = 1..count``."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    out = []
    cur = system.C
    for _ in range(count):
        out.append(cur @ system.B)
        cur = cur @ system.A
    return out


# -- JSON interchange ----------------------------------------------------


def system_to_json(system: LinearSystem) -> dict:
    """JSON form: field, dimensions, and row-major entry arrays.

    Rationals are emitted as strings (``"a/b"`` or ``"a"``), prime-field
    elements as integers.
    """
    enc = system.field.scalar_to_json
    return {
        "field": system.field.to_json(),
        "m": system.m,
        "n": system.n,
        "p": system.p,
        "A": [enc(x) for x in system.A.entries],
        "B": [enc(x) for x in system.B.entries],
        "C": [enc(x) for x in system.C.entries],
    }


def system_from_json(obj: dict) -> LinearSystem:
    field = Field.from_json(obj["field"])
    m, n, p = int(obj["m"]), int(obj["n"]), int(obj["p"])

    def grid(key: str, rows: int, cols: int) -> Matrix:
        raw = obj[key]
        if len(raw) != rows * cols:
            raise ValueError(f"{key} must have {rows * cols} entries, got {len(raw)}")
        return Matrix(field, rows, cols, tuple(field.coerce(x) for x in raw))

    return LinearSystem(field, m, n, p, grid("A", n, n), grid("B", n, m), grid("C", p, n))


# -- generation helpers ---------------------------------------------------


def all_systems(field: Field, m: int, n: int, p: int) -> Iterator[LinearSystem]:
    """Every system of type (m, n, p) over a prime field, one by one."""
    if field.q is None:
        raise ValueError("exhaustive enumeration needs a finite field")
    q = field.q
    na, nb, nc = n * n, n * m, p * n
    for digits in itertools.product(range(q), repeat=na + nb + nc):
        A = Matrix(field, n, n, digits[:na])
        B = Matrix(field, n, m, digits[na:na + nb])
        C = Matrix(field, p, n, digits[na + nb:])
        yield LinearSystem(field, m, n, p, A, B, C)


def random_system(
    field: Field,
    m: int,
    n: int,
    p: int,
    rng: Random,
    require: str = "any",
    bound: int = 3,
) -> LinearSystem:
    """Random system; optionally resample until cc or canonical.

    Rational entries are integers in ``[-bound, bound]``.  Deterministic
    for a fixed ``rng`` state.
    """
    if require not in ("any", "cc", "canonical"):
        raise ValueError(f"unknown requirement {require!r}")
    if require in ("cc", "canonical") and n > 0 and m == 0:
        raise ValueError("no controllable systems with m = 0 and n > 0")
    if require == "canonical" and n > 0 and p == 0:
        raise ValueError("no canonical systems with p = 0 and n > 0")

    def entry():
        if field.q is None:
            return Fraction(rng.randint(-bound, bound))
        return rng.randrange(field.q)

    for _ in range(100000):
        A = Matrix(field, n, n, tuple(entry() for _ in range(n * n)))
        B = Matrix(field, n, m, tuple(entry() for _ in range(n * m)))
        C = Matrix(field, p, n, tuple(entry() for _ in range(p * n)))
        sys_ = LinearSystem(field, m, n, p, A, B, C)
        if require == "any":
            return sys_
        cls = classify(sys_)
        if require == "cc" and cls.cc:
            return sys_
        if require == "canonical" and cls.canonical:
            return sys_
    raise RuntimeError("gave up sampling a system with the requested property")
