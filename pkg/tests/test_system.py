"""Linear systems: classification, group action, duality, Markov data."""

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from moduli_sys.errors import SingularBaseChange
from moduli_sys.linalg import Field, Matrix, det, rank
from moduli_sys.system import (
    LinearSystem,
    act,
    all_systems,
    classify,
    controllability_matrix,
    dualize,
    markov_parameters,
    observability_matrix,
    random_system,
    system_from_json,
    system_to_json,
)

from helpers import unimodular

QQ = Field.rationals()
F2 = Field.prime(2)
F3 = Field.prime(3)
F5 = Field.prime(5)


def sys1x1(field, a, b, c):
    return LinearSystem(
        field, 1, 1, 1,
        Matrix.from_rows(field, [[a]]),
        Matrix.from_rows(field, [[b]]),
        Matrix.from_rows(field, [[c]]),
    )


def test_shape_validation():
    with pytest.raises(ValueError):
        LinearSystem(QQ, 1, 1, 1,
                     Matrix.zeros(QQ, 1, 2),
                     Matrix.zeros(QQ, 1, 1),
                     Matrix.zeros(QQ, 1, 1))
    with pytest.raises(ValueError):
        LinearSystem(QQ, 1, 1, 1,
                     Matrix.zeros(QQ, 1, 1),
                     Matrix.zeros(F2, 1, 1),
                     Matrix.zeros(QQ, 1, 1))


def test_controllability_matrix_examples():
    # A = 0, B = identity: [I | 0]
    s = LinearSystem(QQ, 2, 2, 0,
                     Matrix.zeros(QQ, 2, 2),
                     Matrix.identity(QQ, 2),
                     Matrix.zeros(QQ, 0, 2))
    c = controllability_matrix(s)
    assert c.to_rows() == [[1, 0, 0, 0], [0, 1, 0, 0]]

    # nilpotent Jordan block, B = e2: columns [e2, e1], rank 2
    a = Matrix.from_rows(QQ, [[0, 1], [0, 0]])
    b = Matrix.from_rows(QQ, [[0], [1]])
    s = LinearSystem(QQ, 1, 2, 0, a, b, Matrix.zeros(QQ, 0, 2))
    c = controllability_matrix(s)
    assert c.to_rows() == [[0, 1], [1, 0]]
    assert rank(c) == 2

    # n = 1: just B
    s = LinearSystem(QQ, 3, 1, 0,
                     Matrix.from_rows(QQ, [[7]]),
                     Matrix.from_rows(QQ, [[1, 2, 3]]),
                     Matrix.zeros(QQ, 0, 1))
    assert controllability_matrix(s) == s.B


def test_observability_matrix_examples():
    rng = random.Random(0)
    a = Matrix.from_rows(QQ, [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)])
    s = LinearSystem(QQ, 1, 2, 2, a, Matrix.zeros(QQ, 2, 1), Matrix.identity(QQ, 2))
    assert rank(observability_matrix(s)) == 2

    s0 = LinearSystem(QQ, 1, 2, 1, a, Matrix.zeros(QQ, 2, 1), Matrix.zeros(QQ, 1, 2))
    assert rank(observability_matrix(s0)) == 0
    assert not classify(s0).co

    for _ in range(10):
        m, n, p = rng.randint(1, 2), rng.randint(0, 3), rng.randint(0, 2)
        s = random_system(QQ, m, n, p, rng)
        assert observability_matrix(dualize(s)) == controllability_matrix(s).transpose()


def test_classify_examples():
    assert classify(sys1x1(QQ, 2, 1, 3)) == classify(sys1x1(QQ, 2, 1, 3))
    cls = classify(sys1x1(QQ, 2, 1, 3))
    assert cls.cc and cls.co and cls.canonical

    cls = classify(sys1x1(QQ, 2, 0, 3))
    assert not cls.cc and cls.co and not cls.canonical

    # census over F_2 of all 1x1x1 systems: cc iff b != 0
    systems = list(all_systems(F2, 1, 1, 1))
    assert len(systems) == 8
    assert sum(classify(s).cc for s in systems) == 4
    for s in systems:
        assert classify(s).cc == (s.B.entry(0, 0) != 0)


def test_empty_system_is_canonical():
    s = LinearSystem(QQ, 2, 0, 1,
                     Matrix.zeros(QQ, 0, 0),
                     Matrix.zeros(QQ, 0, 2),
                     Matrix.zeros(QQ, 1, 0))
    cls = classify(s)
    assert cls.cc and cls.co and cls.canonical
    assert cls.rank_c == cls.rank_o == 0


def test_act_identity_and_errors():
    s = sys1x1(QQ, 2, 1, 3)
    assert act(Matrix.identity(QQ, 1), s) == s
    with pytest.raises(SingularBaseChange):
        act(Matrix.zeros(QQ, 1, 1), s)
    with pytest.raises(ValueError):
        act(Matrix.identity(QQ, 2), s)


@given(st.integers(0, 2 ** 30), st.integers(0, 2 ** 30), st.integers(0, 2 ** 30))
def test_act_composition_f3(seed_g, seed_h, seed_s):
    rng = random.Random(seed_s)
    s = random_system(F3, 2, 2, 1, rng)
    g = unimodular(F3, 2, random.Random(seed_g))
    h = unimodular(F3, 2, random.Random(seed_h))
    assert act(g @ h, s) == act(g, act(h, s))


@given(st.integers(0, 2 ** 30))
def test_act_preserves_class_and_markov(seed):
    rng = random.Random(seed)
    n = rng.randint(0, 3)
    s = random_system(QQ, 2, n, 1, rng)
    g = unimodular(QQ, n, rng)
    moved = act(g, s)
    assert classify(moved) == classify(s)
    assert markov_parameters(moved, 2 * n + 1) == markov_parameters(s, 2 * n + 1)


def test_dualize():
    rng = random.Random(1)
    s = random_system(QQ, 2, 1, 1, rng)
    d = dualize(s)
    assert (d.m, d.n, d.p) == (1, 1, 2)
    assert dualize(d) == s


def test_dualize_swaps_cc_co_exhaustively(f2_sweep):
    for s, cls in f2_sweep:
        dual_cls = classify(dualize(s))
        assert dual_cls.cc == cls.co
        assert dual_cls.co == cls.cc


def test_markov_examples():
    ones = markov_parameters(sys1x1(QQ, 1, 1, 1), 5)
    assert [blk.entry(0, 0) for blk in ones] == [1] * 5

    doubling = markov_parameters(sys1x1(QQ, 2, 1, 1), 5)
    assert [blk.entry(0, 0) for blk in doubling] == [1, 2, 4, 8, 16]


def test_single_input_cc_iff_det(f2_sweep):
    for s, cls in f2_sweep:
        if s.m == 1 and s.n > 0:
            c = controllability_matrix(s)
            assert cls.cc == (det(c) != 0)


def test_json_roundtrip():
    rng = random.Random(9)
    for field in (QQ, F5):
        shape = (rng.randint(1, 2), rng.randint(0, 3), rng.randint(0, 2))
        s = random_system(field, *shape, rng)
        doc = system_to_json(s)
        text = json.dumps(doc)
        assert system_from_json(json.loads(text)) == s
    # rationals serialize as strings, prime field as ints
    s_q = random_system(QQ, 1, 1, 1, rng)
    assert all(isinstance(x, str) for x in system_to_json(s_q)["A"])
    s_5 = random_system(F5, 1, 1, 1, rng)
    assert all(isinstance(x, int) for x in system_to_json(s_5)["A"])


def test_json_accepts_fraction_strings():
    doc = {
        "field": "Q", "m": 1, "n": 1, "p": 1,
        "A": ["1/2"], "B": [2], "C": ["-3"],
    }
    s = system_from_json(doc)
    assert s.A.entry(0, 0) == Fraction(1, 2)
    assert s.C.entry(0, 0) == -3


def test_random_system_reproducible_and_constrained():
    a = random_system(F5, 2, 3, 1, random.Random(42))
    b = random_system(F5, 2, 3, 1, random.Random(42))
    assert a == b
    cc = random_system(F2, 1, 2, 0, random.Random(0), require="cc")
    assert classify(cc).cc
    canon = random_system(QQ, 2, 3, 2, random.Random(0), require="canonical")
    assert classify(canon).canonical
    with pytest.raises(ValueError):
        random_system(QQ, 0, 1, 1, random.Random(0), require="cc")
    with pytest.raises(ValueError):
        random_system(QQ, 1, 1, 0, random.Random(0), require="canonical")
