"""Amplitude encoding of 2x2 blocks over the canonical gate bank.

A block [[a,b],[c,d]] is stored as eight amplitudes aligned with the
bank order [X, Z, -Z, XZ, ZX, -I, I, I]. Only five slots are ever
produced by the encoder: I carries (a+d)/2, Z carries (a-d)/2, X
carries (b+c)/2, ZX carries b/2 and XZ carries c/2, which reproduces
the block exactly when the amplitudes are summed against the bank.
Files carry the raw amplitudes plus the normalization zeta; the
simulation divides by zeta when the memory state is prepared.
"""

from __future__ import annotations

import numpy as np

from .blockdecomp import BlockDecomposition, split_blocks
from .fileio import ParseError, atomic_write_text, format_amplitude, format_real, parse_amplitude
from .statevec import GATE_BANK

SLOT_X = 0
SLOT_Z = 1
SLOT_MINUS_Z = 2
SLOT_XZ = 3
SLOT_ZX = 4
SLOT_MINUS_I = 5
SLOT_I = 6

# Label order of the bank; slot 7 repeats I and is never addressed.
LABEL_TO_SLOT = {"X": 0, "Z": 1, "-Z": 2, "XZ": 3, "ZX": 4, "-I": 5, "I": 6}

# Each single-entry block is the half-sum of two bank gates. encode_block
# is these four identities applied to a general block.
UNIT_BLOCK_PAIRS = {
    (0, 0): (SLOT_I, SLOT_Z),
    (1, 0): (SLOT_X, SLOT_XZ),
    (0, 1): (SLOT_X, SLOT_ZX),
    (1, 1): (SLOT_I, SLOT_MINUS_Z),
}


def unit_block(row: int, col: int) -> np.ndarray:
    """The 2x2 matrix with a single 1 at (row, col), built from the bank."""
    a, b = UNIT_BLOCK_PAIRS[(row, col)]
    return (GATE_BANK[a] + GATE_BANK[b]) / 2.0


def encode_block(block) -> np.ndarray:
    """Gate-amplitude vector of a 2x2 block; slots -Z, -I and 7 stay zero."""
    block = np.asarray(block)
    if block.shape != (2, 2):
        raise ValueError("blocks must be 2x2")
    a, b = complex(block[0, 0]), complex(block[0, 1])
    c, d = complex(block[1, 0]), complex(block[1, 1])
    vector = np.zeros(8, dtype=complex)
    vector[SLOT_I] = (a + d) / 2.0
    vector[SLOT_Z] = (a - d) / 2.0
    vector[SLOT_X] = (b + c) / 2.0
    vector[SLOT_ZX] = b / 2.0
    vector[SLOT_XZ] = c / 2.0
    return vector


def decode_gatevector(vector) -> np.ndarray:
    """Sum of amplitude * gate over the bank; exact inverse of
    encode_block on dyadic-rational blocks."""
    vector = np.asarray(vector, dtype=complex)
    if vector.shape != (8,):
        raise ValueError("gate vectors have 8 slots")
    block = np.zeros((2, 2), dtype=complex)
    for slot in range(8):
        if vector[slot]:
            block += vector[slot] * GATE_BANK[slot]
    return block


class EncodedMemory:
    """Gate-amplitude records keyed by (shift i, block-row k).

    i_table lists the distinct shifts actually present, ascending; the
    i-register of the circuit indexes positions in this table rather
    than raw shifts, which keeps the register width r at
    ceil(log2(number of shifts)). zeta is the Euclidean norm of all
    raw amplitudes and is always recomputed from the records.
    """

    __slots__ = ("n", "records", "i_table", "zeta")

    def __init__(self, n: int, records: dict):
        if n < 1:
            raise ValueError("need at least one system qubit")
        if not records:
            raise ValueError("memory must hold at least one record")
        half = 1 << (n - 1)
        clean = {}
        for (i, k) in sorted(records):
            vector = np.asarray(records[(i, k)], dtype=complex)
            if vector.shape != (8,):
                raise ValueError("record (%d, %d) does not have 8 amplitudes" % (i, k))
            if not (0 <= i < half and 0 <= k < half):
                raise ValueError("record key (%d, %d) out of range for n=%d" % (i, k, n))
            if not np.any(vector):
                raise ValueError("record (%d, %d) is all zero" % (i, k))
            if vector[7] != 0.0:
                raise ValueError("record (%d, %d) uses filler slot 7" % (i, k))
            clean[(i, k)] = vector
        self.n = n
        self.records = clean
        self.i_table = tuple(sorted({i for (i, _k) in clean}))
        total = 0.0
        for vector in clean.values():
            total += float(np.sum(np.abs(vector) ** 2))
        self.zeta = float(np.sqrt(total))

    @property
    def r(self) -> int:
        """i-register width: ceil(log2(number of distinct shifts))."""
        return (len(self.i_table) - 1).bit_length()

    @property
    def num_qubits(self) -> int:
        """Total circuit width: r + 3 + (n-1) + n."""
        return self.r + 3 + (self.n - 1) + self.n

    def __len__(self):
        return len(self.records)


def encode_memory(dec: BlockDecomposition) -> EncodedMemory:
    """Encode every stored block; empty decompositions are an error
    because there is nothing to load."""
    if not dec.entries:
        raise ValueError("decomposition has no blocks to encode")
    records = {key: encode_block(block) for key, block in dec.entries.items()}
    return EncodedMemory(dec.n, records)


def encode_matrix(matrix) -> EncodedMemory:
    """Convenience: split a dense matrix into blocks and encode them."""
    return encode_memory(split_blocks(matrix))


def decode_memory(mem: EncodedMemory) -> BlockDecomposition:
    """Rebuild the block decomposition this memory stores."""
    entries = {key: decode_gatevector(vector) for key, vector in mem.records.items()}
    return BlockDecomposition(mem.n, entries)


def memory_from_gates(n: int, assignments: dict) -> EncodedMemory:
    """Hand-written memory: each (i, k) gets a single unit amplitude at
    the labeled gate slot, e.g. {(0, 0): "Z", (0, 1): "XZ"}."""
    records = {}
    for key, label in assignments.items():
        if label not in LABEL_TO_SLOT:
            raise ValueError("unknown gate label %r" % label)
        vector = np.zeros(8, dtype=complex)
        vector[LABEL_TO_SLOT[label]] = 1.0
        records[key] = vector
    return EncodedMemory(n, records)


def serialize(mem: EncodedMemory) -> str:
    """Canonical text form: fixed header, entries ordered by (i, k)."""
    lines = [
        "QGM 1",
        "n %d" % mem.n,
        "zeta %s" % format_real(mem.zeta),
        "itable %s" % ",".join(str(i) for i in mem.i_table),
    ]
    for (i, k) in sorted(mem.records):
        amps = " ".join(format_amplitude(a) for a in mem.records[(i, k)])
        lines.append("entry %d %d %s" % (i, k, amps))
    return "\n".join(lines) + "\n"


def parse(text: str) -> EncodedMemory:
    """Parse the QGM format, recomputing zeta and cross-checking it
    against the header value."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append((number, line))
    if len(lines) < 5:
        raise ParseError("memory file needs a 4-line header and at least one entry")

    number, line = lines[0]
    tokens = line.split()
    if not tokens or tokens[0] != "QGM":
        raise ParseError("line %d: expected 'QGM 1' header" % number)
    if tokens[1:] != ["1"]:
        raise ParseError("line %d: unsupported format version %r" % (number, " ".join(tokens[1:])))

    number, line = lines[1]
    tokens = line.split()
    if len(tokens) != 2 or tokens[0] != "n":
        raise ParseError("line %d: expected 'n <system qubit count>'" % number)
    try:
        n = int(tokens[1])
    except ValueError:
        raise ParseError("line %d: bad qubit count %r" % (number, tokens[1])) from None
    if n < 1:
        raise ParseError("line %d: qubit count must be positive" % number)

    zeta_number, line = lines[2]
    tokens = line.split()
    if len(tokens) != 2 or tokens[0] != "zeta":
        raise ParseError("line %d: expected 'zeta <value>'" % zeta_number)
    try:
        stated_zeta = float(tokens[1])
    except ValueError:
        raise ParseError("line %d: bad zeta %r" % (zeta_number, tokens[1])) from None

    itable_number, line = lines[3]
    tokens = line.split()
    if len(tokens) != 2 or tokens[0] != "itable":
        raise ParseError("line %d: expected 'itable <indices>'" % itable_number)
    try:
        stated_itable = [int(part) for part in tokens[1].split(",")]
    except ValueError:
        raise ParseError("line %d: bad shift index list %r" % (itable_number, tokens[1])) from None
    if stated_itable != sorted(set(stated_itable)):
        raise ParseError("line %d: shift indices must be distinct and ascending" % itable_number)

    half = 1 << (n - 1)
    records = {}
    for number, line in lines[4:]:
        tokens = line.split()
        if tokens[0] != "entry" or len(tokens) != 11:
            raise ParseError("line %d: expected 'entry <i> <k> <8 amplitudes>'" % number)
        try:
            i = int(tokens[1])
            k = int(tokens[2])
        except ValueError:
            raise ParseError("line %d: bad record key" % number) from None
        if not (0 <= i < half and 0 <= k < half):
            raise ParseError("line %d: record key (%d, %d) out of range for n=%d" % (number, i, k, n))
        if (i, k) in records:
            raise ParseError("line %d: duplicate record (%d, %d)" % (number, i, k))
        try:
            vector = np.array([parse_amplitude(token) for token in tokens[3:]], dtype=complex)
        except ValueError as exc:
            raise ParseError("line %d: %s" % (number, exc)) from None
        if not np.any(vector):
            raise ParseError("line %d: record (%d, %d) is all zero" % (number, i, k))
        if vector[7] != 0.0:
            raise ParseError("line %d: filler slot 7 must stay zero" % number)
        records[(i, k)] = vector

    mem = EncodedMemory(n, records)
    if list(mem.i_table) != stated_itable:
        raise ParseError(
            "line %d: itable %s does not match the stored shifts %s"
            % (itable_number, stated_itable, list(mem.i_table))
        )
    if abs(mem.zeta - stated_zeta) > 1e-12:
        raise ParseError(
            "line %d: stated zeta %s differs from recomputed %s"
            % (zeta_number, format_real(stated_zeta), format_real(mem.zeta))
        )
    return mem


def read_memory_file(path: str) -> EncodedMemory:
    with open(path) as handle:
        return parse(handle.read())


def write_memory_file(path: str, mem: EncodedMemory):
    atomic_write_text(path, serialize(mem))
