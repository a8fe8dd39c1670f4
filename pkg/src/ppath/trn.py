"""Bit-exact .trn on-disk format for tournaments.

Layout: line 1 ``TRN 1``; line 2 the decimal vertex count; then n lines of
exactly n characters over {'0','1','-'} with '-' only on the diagonal and
char j of line i equal to '1' iff i->j. Lines end with '\n'; no trailing
whitespace anywhere.
"""

from __future__ import annotations

from pathlib import Path

from .tournament import Tournament

_HEADER = b"TRN 1"


class TrnError(ValueError):
    """Base class for .trn parse failures."""


class MalformedHeader(TrnError):
    pass


class NonSquareMatrix(TrnError):
    pass


class OrientationViolation(TrnError):
    pass


class BadDiagonal(TrnError):
    pass


def write_trn(t: Tournament) -> bytes:
    lines = [_HEADER, str(t.n).encode()]
    for i, row in enumerate(t.rows):
        chars = bytearray(
            ord("1") if (row >> j) & 1 else ord("0") for j in range(t.n)
        )
        chars[i] = ord("-")
        lines.append(bytes(chars))
    return b"\n".join(lines) + b"\n"


def read_trn(data: bytes) -> Tournament:
    lines = data.split(b"\n")
    if len(lines) < 3 or lines[0] != _HEADER:
        raise MalformedHeader("first line must be 'TRN 1'")
    try:
        n = int(lines[1])
    except ValueError:
        raise MalformedHeader(f"bad vertex count line: {lines[1]!r}") from None
    if n < 1:
        raise MalformedHeader("vertex count must be >= 1")
    body = lines[2:]
    if len(body) != n + 1 or body[-1] != b"":
        raise NonSquareMatrix(f"expected exactly {n} matrix rows plus final newline")
    rows = []
    for i, line in enumerate(body[:n]):
        if len(line) != n:
            raise NonSquareMatrix(f"row {i} has {len(line)} chars, expected {n}")
        r = 0
        for j, ch in enumerate(line):
            if ch == ord("-"):
                if i != j:
                    raise BadDiagonal(f"'-' off the diagonal at ({i},{j})")
            elif ch == ord("1"):
                if i == j:
                    raise BadDiagonal(f"diagonal ({i},{i}) must be '-'")
                r |= 1 << j
            elif ch == ord("0"):
                if i == j:
                    raise BadDiagonal(f"diagonal ({i},{i}) must be '-'")
            else:
                raise TrnError(f"invalid character {chr(ch)!r} at ({i},{j})")
        rows.append(r)
    for i in range(n):
        for j in range(i + 1, n):
            if ((rows[i] >> j) & 1) == ((rows[j] >> i) & 1):
                raise OrientationViolation(f"pair ({i},{j}) oriented {'both ways' if (rows[i] >> j) & 1 else 'neither way'}")
    return Tournament.from_rows(rows)


def load_trn(path: str | Path) -> Tournament:
    return read_trn(Path(path).read_bytes())


def save_trn(t: Tournament, path: str | Path) -> None:
    Path(path).write_bytes(write_trn(t))
