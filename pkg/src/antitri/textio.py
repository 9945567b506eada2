"""Plain-text matrix format.

::

    # comment lines start with '#'; blank lines are ignored
    3
    0 1.5 -2
    -1.5 0 0.25
    2 -0.25 0

The first data line holds the order ``n``; ``n`` rows of ``n``
whitespace-separated numbers follow.  Complex entries are written as
``re+imi`` (``1.5-2i``, ``0+1i``).  Values are written with 17 significant
digits, so ``write(read(text))`` reproduces canonical text exactly and
every float survives a round trip bit for bit.
"""

from __future__ import annotations

import hashlib
import io
import sys
from pathlib import Path
from typing import TextIO, Tuple, Union

import numpy as np

from .errors import AntitriError

PathLike = Union[str, Path]


class MatrixFormatError(AntitriError, ValueError):
    """The text does not describe a square numeric matrix."""


def _parse_token(tok: str, lineno: int):
    try:
        if tok.endswith("i"):
            body = tok[:-1]
            if not body or not (body[-1].isdigit() or body[-1] == "."):
                raise ValueError  # the imaginary coefficient must be written out
            return complex(body + "j")
        return float(tok)
    except ValueError:
        raise MatrixFormatError(f"line {lineno}: cannot parse {tok!r} as a number") from None


def parse_matrix(text: str) -> np.ndarray:
    """Parse the text format; the result is complex iff any token is complex."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s and not s.startswith("#"):
            lines.append((lineno, s))
    if not lines:
        raise MatrixFormatError("empty input")
    lineno, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise MatrixFormatError(f"line {lineno}: expected the matrix order, got {head!r}") from None
    if n < 1:
        raise MatrixFormatError(f"line {lineno}: order must be positive")
    rows = lines[1:]
    if len(rows) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(rows)}")
    values = []
    for lineno, s in rows:
        toks = s.split()
        if len(toks) != n:
            raise MatrixFormatError(f"line {lineno}: expected {n} entries, found {len(toks)}")
        values.append([_parse_token(t, lineno) for t in toks])
    is_complex = any(isinstance(v, complex) for row in values for v in row)
    A = np.array(values, dtype=np.complex128 if is_complex else np.float64)
    if not np.all(np.isfinite(A)):
        raise MatrixFormatError("matrix has non-finite entries")
    return A


def _fmt_real(x: float) -> str:
    return "%.17g" % x


def _fmt_complex(z: complex) -> str:
    return "%.17g%+.17gi" % (z.real, z.imag)


def format_matrix(A, comment: str = "") -> str:
    A = np.asarray(A)
    fmt = _fmt_complex if np.iscomplexobj(A) else _fmt_real
    out = io.StringIO()
    for line in comment.splitlines():
        out.write(f"# {line}\n")
    out.write(f"{A.shape[0]}\n")
    for row in A:
        out.write(" ".join(fmt(x) for x in row))
        out.write("\n")
    return out.getvalue()


def read_text(source: PathLike) -> str:
    """Contents of ``source``; ``'-'`` reads standard input."""
    if str(source) == "-":
        return sys.stdin.read()
    return Path(source).read_text()


def read_matrix(source: PathLike) -> Tuple[np.ndarray, str]:
    """Parse ``source`` and return ``(matrix, sha256 hex digest of the text)``."""
    text = read_text(source)
    return parse_matrix(text), hashlib.sha256(text.encode()).hexdigest()


def write_matrix(A, dest: Union[PathLike, TextIO], comment: str = "") -> None:
    text = format_matrix(A, comment)
    if hasattr(dest, "write"):
        dest.write(text)
    elif str(dest) == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)
