"""Text formats shared by the library and the CLI.

All numbers are printed with 17 significant digits so that files round
trip through double precision exactly. Complex amplitudes are written
as ``re`` when the imaginary part is zero and ``re+imj`` otherwise.
Writers go through a temp file and an atomic rename, so a failed run
never leaves a partial output behind.
"""

from __future__ import annotations

import os

import numpy as np


def format_real(value: float) -> str:
    return "%.17g" % float(value)


def format_amplitude(value: complex) -> str:
    value = complex(value)
    if value.imag == 0.0:
        return format_real(value.real)
    return "%.17g%+.17gj" % (value.real, value.imag)


def parse_amplitude(token: str) -> complex:
    try:
        if token.endswith("j") or token.endswith("J"):
            return complex(token)
        return complex(float(token))
    except ValueError:
        raise ValueError("bad number %r" % token) from None


def atomic_write_text(path: str, text: str):
    """Write the whole file, or nothing."""
    tmp = path + ".tmp"
    with open(tmp, "w") as handle:
        handle.write(text)
    os.replace(tmp, path)


def _content_lines(text: str):
    """Yield (line_number, stripped_line), skipping blanks and comments."""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


class ParseError(ValueError):
    """Malformed input file; the message names the offending line."""


def read_matrix_text(text: str) -> np.ndarray:
    """Matrix file: first line N, then ``dense`` with N rows of N
    numbers, or ``sparse`` with ``row col value`` lines."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty matrix file")
    number, header = lines[0]
    try:
        size = int(header)
    except ValueError:
        raise ParseError("line %d: expected the matrix size, got %r" % (number, header)) from None
    if size < 2 or size & (size - 1):
        raise ParseError("line %d: size %d is not a power of two >= 2" % (number, size))
    if len(lines) < 2:
        raise ParseError("missing 'dense' or 'sparse' line")
    number, kind = lines[1]
    body = lines[2:]
    matrix = np.zeros((size, size), dtype=complex)
    if kind == "dense":
        if len(body) != size:
            raise ParseError("dense matrix needs %d rows, found %d" % (size, len(body)))
        for row, (line_number, line) in enumerate(body):
            tokens = line.split()
            if len(tokens) != size:
                raise ParseError("line %d: expected %d entries, got %d" % (line_number, size, len(tokens)))
            for col, token in enumerate(tokens):
                try:
                    matrix[row, col] = parse_amplitude(token)
                except ValueError as exc:
                    raise ParseError("line %d: %s" % (line_number, exc)) from None
    elif kind == "sparse":
        for line_number, line in body:
            tokens = line.split()
            if len(tokens) != 3:
                raise ParseError("line %d: expected 'row col value'" % line_number)
            try:
                row = int(tokens[0])
                col = int(tokens[1])
                value = parse_amplitude(tokens[2])
            except ValueError as exc:
                raise ParseError("line %d: %s" % (line_number, exc)) from None
            if not (0 <= row < size and 0 <= col < size):
                raise ParseError("line %d: index (%d, %d) out of range" % (line_number, row, col))
            matrix[row, col] += value
    else:
        raise ParseError("line %d: expected 'dense' or 'sparse', got %r" % (number, kind))
    if not np.any(matrix.imag):
        matrix = matrix.real
    return matrix


def read_matrix_file(path: str) -> np.ndarray:
    with open(path) as handle:
        return read_matrix_text(handle.read())


def read_state_text(text: str) -> np.ndarray:
    """State file: line 1 ``n <qubits>``, then 2^n amplitude lines."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty state file")
    number, header = lines[0]
    tokens = header.split()
    if len(tokens) != 2 or tokens[0] != "n":
        raise ParseError("line %d: expected 'n <qubits>'" % number)
    try:
        num_qubits = int(tokens[1])
    except ValueError:
        raise ParseError("line %d: bad qubit count %r" % (number, tokens[1])) from None
    if num_qubits < 1:
        raise ParseError("line %d: qubit count must be positive" % number)
    body = lines[1:]
    if len(body) != 1 << num_qubits:
        raise ParseError("state needs %d amplitudes, found %d" % (1 << num_qubits, len(body)))
    amps = np.zeros(1 << num_qubits, dtype=complex)
    for index, (line_number, line) in enumerate(body):
        try:
            amps[index] = parse_amplitude(line)
        except ValueError as exc:
            raise ParseError("line %d: %s" % (line_number, exc)) from None
    return amps


def read_state_file(path: str) -> np.ndarray:
    with open(path) as handle:
        return read_state_text(handle.read())


def serialize_state(amps) -> str:
    amps = np.asarray(amps, dtype=complex).reshape(-1)
    num_qubits = amps.size.bit_length() - 1
    if amps.size != 1 << num_qubits:
        raise ValueError("amplitude count %d is not a power of two" % amps.size)
    lines = ["n %d" % num_qubits]
    lines.extend(format_amplitude(a) for a in amps)
    return "\n".join(lines) + "\n"


def write_state_file(path: str, amps):
    atomic_write_text(path, serialize_state(amps))


def read_manifest_text(text: str, base_dir: str) -> list:
    """Curve manifest: lines ``distance path``; paths are relative to
    the manifest's directory. Returns (distance, absolute_path) pairs."""
    rows = []
    for line_number, line in _content_lines(text):
        tokens = line.split(None, 1)
        if len(tokens) != 2:
            raise ParseError("line %d: expected 'distance path'" % line_number)
        try:
            distance = float(tokens[0])
        except ValueError:
            raise ParseError("line %d: bad distance %r" % (line_number, tokens[0])) from None
        path = tokens[1].strip()
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        rows.append((distance, path))
    return rows


def read_manifest_file(path: str) -> list:
    with open(path) as handle:
        return read_manifest_text(handle.read(), os.path.dirname(os.path.abspath(path)))
