import numpy as np
import pytest

from a2boundary.shift import (
    Word2D,
    block_structure_ok,
    complete_word,
    decorating_set,
    enumerate_words,
    line_sums,
    n_adjacency_characterization,
    verify_H1,
    verify_H2,
    verify_H3,
    word_count_crosscheck,
)


def test_alphabet_sizes(alphabets):
    A, L = alphabets
    assert len(A) == 96 and A.block_sizes() == [32, 32, 32]
    assert len(L) == 24 and L.block_sizes() == [8, 8, 8]
    # blocks partition the alphabet
    assert sorted(i for b in range(3) for i in A.block_indices(b)) == list(range(96))
    assert all(key[0] == "" for key in A.keys)


@pytest.mark.parametrize("k", [0, 1])
def test_line_sums_and_blocks(alphabets, matrices, k):
    A, L = alphabets
    M, N = matrices
    for X, alph in ((M[k], A), (N[k], L)):
        r, c = line_sums(X)
        assert set(r) == {4} and set(c) == {4}
        assert set(np.unique(X)) <= {0, 1}
        assert block_structure_ok(X, alph.blocks, k + 1)
        assert not block_structure_ok(X, alph.blocks, k + 2)
    assert M[k].sum() == 384


def test_h1_q2(matrices):
    (M1, M2), _ = matrices
    assert verify_H1(M1, M2).passed


def test_h1_controls():
    I = np.eye(3, dtype=np.int8)
    assert verify_H1(I, I).passed
    J = np.ones((2, 2), dtype=np.int8)
    rep = verify_H1(J, np.eye(2, dtype=np.int8))
    assert rep.passed  # J @ I = J, still 0/1
    rep = verify_H1(J, J)
    assert not rep.passed and not rep.details["zero_one"]


def test_h2_q2(matrices):
    (M1, M2), _ = matrices
    rep = verify_H2(M1, M2)
    assert rep.passed and rep.details["cube_positive"]


def test_h2_controls():
    one = np.ones((1, 1), dtype=np.int8)
    assert verify_H2(one, one).passed
    B = np.kron(np.eye(2, dtype=np.int8), np.ones((2, 2), dtype=np.int8))
    rep = verify_H2(B, B)
    assert not rep.passed and rep.details["strong_components"] == 2
    assert "unreachable" in rep.details


def test_h3_q2(matrices):
    (M1, M2), _ = matrices
    rep = verify_H3(M1, M2, window=2)
    assert rep.status == "pass"
    assert len(rep.details["witnesses"]) == 24
    for (p1, p2), (w, (i, j)) in rep.details["witnesses"].items():
        assert w.is_valid(M1, M2)
        assert w[i, j] != w[i + p1, j + p2]


def test_h3_periodic_control_is_inconclusive():
    one = np.ones((1, 1), dtype=np.int8)
    rep = verify_H3(one, one, window=1, cap=3, tries=5)
    assert rep.status == "inconclusive"
    assert len(rep.details["missing"]) == 8


def test_complete_word_unique(matrices):
    (M1, M2), _ = matrices
    a = 0
    b = int(np.flatnonzero(M1[:, a])[0])
    d = int(np.flatnonzero(M2[:, b])[0])
    w = complete_word(M1, M2, [a, b], [b, d])
    assert isinstance(w, Word2D) and w.is_valid(M1, M2)
    assert w.shape == (1, 1)


def test_enumerate_words_11(matrices):
    (M1, M2), _ = matrices
    assert sum(1 for _ in enumerate_words(M1, M2, 1, 1)) == 96 * 16


@pytest.mark.parametrize("shape", [(0, 0), (1, 0), (0, 1)])
def test_word_count_crosscheck(ball, alphabets, matrices, shape):
    (M1, M2), _ = matrices
    rep = word_count_crosscheck(shape, ball, alphabets[0], M1, M2)
    assert rep.passed, rep.details


@pytest.mark.parametrize("j", [1, 2])
def test_n_characterization(ball, alphabets, matrices, j):
    _, L = alphabets
    _, N = matrices
    assert n_adjacency_characterization(ball, L, N[j - 1], j).passed


def test_decorations(ball, alphabets):
    D, rep = decorating_set(ball, alphabets[0])
    assert rep.passed
    assert len(D) == 21 and rep.details["total"] == 672
