import numpy as np
import pytest

from a2boundary import io as exports
from a2boundary.building import build_chamber_ball
from a2boundary.shift import Alphabet, build_transition_M


def test_alphabet_roundtrip(tmp_path, group, alphabets):
    for A in alphabets:
        p = exports.write_alphabet(tmp_path / f"{A.kind}.txt", group, A)
        B = exports.read_alphabet(p, group)
        assert B.keys == A.keys and B.blocks == A.blocks and B.kind == A.kind and B.q == A.q


def test_matrix_roundtrip(tmp_path, alphabets, matrices):
    A, L = alphabets
    (M1, M2), (N1, _) = matrices
    for name, X, alph in (("M1", M1, A), ("M2", M2, A), ("N1", N1, L)):
        p = exports.write_matrix(tmp_path / f"{name}.txt", alph, X, name)
        got_name, Y = exports.read_matrix(p)
        assert got_name == name and np.array_equal(X, Y)
    body = [l for l in (tmp_path / "M1.txt").read_text().splitlines() if not l.startswith("#")]
    assert len(body) == 384


def test_empty_alphabet_is_header_only(tmp_path):
    A = Alphabet("tile", [], [], 2)
    text = exports.matrix_text(A, np.zeros((0, 0), dtype=np.int8), "M1")
    assert all(line.startswith("#") for line in text.splitlines())
    p = tmp_path / "e.txt"
    p.write_text(text)
    name, X = exports.read_matrix(p)
    assert X.shape == (0, 0)


def test_checksum_detects_tampering(tmp_path, alphabets, matrices):
    A, _ = alphabets
    p = exports.write_matrix(tmp_path / "M1.txt", A, matrices[0][0], "M1")
    text = p.read_text().replace("\n0 ", "\n1 ", 1)
    p.write_text(text)
    with pytest.raises(exports.ExportError, match="checksum"):
        exports.read_matrix(p)


def test_ball_cache_roundtrip(tmp_path, group):
    b = build_chamber_ball(group, 4)
    exports.save_ball(tmp_path, b)
    c = exports.load_ball(tmp_path, group, 4)
    assert c is not None
    assert c.words == b.words
    assert np.array_equal(c.adj, b.adj) and np.array_equal(c.dist, b.dist)
    assert exports.load_ball(tmp_path, group, 5) is None


def test_matrices_from_cached_ball_identical(tmp_path, group, ball, alphabets, matrices):
    exports.save_ball(tmp_path, ball)
    again = exports.load_ball(tmp_path, group, ball.radius)
    M1 = build_transition_M(1, again, alphabets[0])
    assert np.array_equal(M1, matrices[0][0])
