import io

import numpy as np
import pytest

from antitri.textio import MatrixFormatError, format_matrix, parse_matrix, read_matrix, write_matrix
from support import random_skew


def test_round_trip_real(rng):
    A = random_skew(rng, 7) * 10.0 ** rng.integers(-300, 300, size=(7, 7))
    text = format_matrix(A)
    B = parse_matrix(text)
    assert np.array_equal(A, B) and B.dtype == np.float64
    assert format_matrix(B) == text


def test_round_trip_complex(rng):
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    A[0, 0] = -0.0 + 0j
    text = format_matrix(A)
    B = parse_matrix(text)
    assert np.array_equal(A, B) and np.iscomplexobj(B)
    assert format_matrix(B) == text


def test_comments_and_blank_lines():
    text = "# header\n\n2\n# mid\n0 1.5\n-1.5 0\n"
    assert np.array_equal(parse_matrix(text), [[0, 1.5], [-1.5, 0]])


def test_complex_tokens():
    A = parse_matrix("2\n0+1i 2-3.5i\n1e-3-1e+2i 4\n")
    assert A[0, 0] == 1j and A[0, 1] == 2 - 3.5j and A[1, 0] == 1e-3 - 100j and A[1, 1] == 4


@pytest.mark.parametrize(
    "text",
    ["", "# only\n", "x\n", "0\n", "2\n1 2\n", "2\n1 2 3\n4 5\n", "2\n1 a\n3 4\n", "1\nnan\n", "1\ni\n"],
)
def test_malformed(text):
    with pytest.raises(MatrixFormatError):
        parse_matrix(text)


def test_comment_written(tmp_path):
    p = tmp_path / "m.txt"
    write_matrix(np.eye(2), p, comment="hello\nworld")
    lines = p.read_text().splitlines()
    assert lines[:3] == ["# hello", "# world", "2"]
    A, digest = read_matrix(p)
    assert np.array_equal(A, np.eye(2)) and len(digest) == 64


def test_write_stream():
    buf = io.StringIO()
    write_matrix(np.array([[0.1]]), buf)
    assert buf.getvalue() == "1\n0.10000000000000001\n"
