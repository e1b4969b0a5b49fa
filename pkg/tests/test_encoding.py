import numpy as np
import pytest

from qgatemem.blockdecomp import BlockDecomposition, split_blocks
from qgatemem.encoding import (
    SLOT_I,
    SLOT_MINUS_I,
    SLOT_MINUS_Z,
    SLOT_X,
    SLOT_XZ,
    SLOT_Z,
    SLOT_ZX,
    EncodedMemory,
    decode_gatevector,
    decode_memory,
    encode_block,
    encode_matrix,
    encode_memory,
    memory_from_gates,
    parse,
    read_memory_file,
    serialize,
    unit_block,
    write_memory_file,
)
from qgatemem.fileio import ParseError


def random_block(rng):
    return rng.normal(size=(2, 2))


def dyadic_block(rng):
    return rng.integers(-64, 65, size=(2, 2)) / float(1 << rng.integers(0, 7))


def test_unit_blocks_are_exact():
    for row in range(2):
        for col in range(2):
            expected = np.zeros((2, 2))
            expected[row, col] = 1.0
            assert np.array_equal(unit_block(row, col), expected)


def test_encode_block_off_diagonal():
    vector = encode_block([[0.0, 1.0], [0.0, 0.0]])
    expected = np.zeros(8, dtype=complex)
    expected[SLOT_X] = 0.5
    expected[SLOT_ZX] = 0.5
    assert np.array_equal(vector, expected)


def test_encode_block_identity():
    vector = encode_block(np.eye(2))
    assert vector[SLOT_I] == 1.0
    assert np.count_nonzero(vector) == 1


def test_encode_block_general():
    vector = encode_block([[2.0, 3.0], [5.0, 7.0]])
    assert vector[SLOT_I] == 4.5
    assert vector[SLOT_Z] == -2.5
    assert vector[SLOT_X] == 4.0
    assert vector[SLOT_ZX] == 1.5
    assert vector[SLOT_XZ] == 2.5
    assert vector[SLOT_MINUS_Z] == 0.0
    assert vector[SLOT_MINUS_I] == 0.0
    assert vector[7] == 0.0


def test_encoder_leaves_redundant_slots_empty():
    rng = np.random.default_rng(31)
    for _ in range(50):
        vector = encode_block(random_block(rng))
        assert vector[SLOT_MINUS_Z] == 0.0
        assert vector[SLOT_MINUS_I] == 0.0
        assert vector[7] == 0.0


def test_round_trip_dyadic_blocks_exact():
    rng = np.random.default_rng(32)
    for _ in range(200):
        block = dyadic_block(rng)
        assert np.array_equal(decode_gatevector(encode_block(block)), block)


def test_round_trip_random_blocks():
    rng = np.random.default_rng(33)
    for _ in range(50):
        block = random_block(rng)
        assert np.max(np.abs(decode_gatevector(encode_block(block)) - block)) < 1e-14


def test_decode_uses_every_slot():
    # hand-written vectors may use -Z and -I even though the encoder
    # never emits them
    vector = np.zeros(8, dtype=complex)
    vector[SLOT_MINUS_Z] = 1.0
    assert np.array_equal(decode_gatevector(vector), [[-1.0, 0.0], [0.0, 1.0]])
    vector = np.zeros(8, dtype=complex)
    vector[SLOT_MINUS_I] = 0.5
    assert np.array_equal(decode_gatevector(vector), [[-0.5, 0.0], [0.0, -0.5]])


def test_encode_memory_identity():
    mem = encode_matrix(np.eye(4))
    assert set(mem.records) == {(0, 0), (0, 1)}
    for vector in mem.records.values():
        assert vector[SLOT_I] == 1.0
        assert np.count_nonzero(vector) == 1
    assert mem.i_table == (0,)
    assert mem.r == 0
    assert abs(mem.zeta - np.sqrt(2.0)) < 1e-15


def test_encode_memory_diagonal_gates():
    # Z block at k=0 and X block at k=1, same shift
    matrix = np.zeros((4, 4))
    matrix[0:2, 0:2] = np.array([[1.0, 0.0], [0.0, -1.0]])
    matrix[2:4, 2:4] = np.array([[0.0, 1.0], [1.0, 0.0]])
    mem = encode_matrix(matrix)
    z_vector = mem.records[(0, 0)]
    assert z_vector[SLOT_Z] == 1.0
    assert np.count_nonzero(z_vector) == 1
    # an X block stores its two off-diagonal halves alongside the X slot
    x_vector = mem.records[(0, 1)]
    assert x_vector[SLOT_X] == 1.0
    assert x_vector[SLOT_ZX] == 0.5 and x_vector[SLOT_XZ] == 0.5
    assert abs(mem.zeta ** 2 - 2.5) < 1e-15


def test_encode_memory_single_corner():
    matrix = np.zeros((4, 4))
    matrix[0, 0] = 1.0
    mem = encode_matrix(matrix)
    assert set(mem.records) == {(0, 0)}
    vector = mem.records[(0, 0)]
    assert vector[SLOT_I] == 0.5 and vector[SLOT_Z] == 0.5
    assert abs(mem.zeta - np.sqrt(0.5)) < 1e-15


def test_encode_memory_rejects_empty():
    with pytest.raises(ValueError):
        encode_memory(BlockDecomposition(2, {}))


def test_zeta_is_amplitude_norm():
    rng = np.random.default_rng(34)
    matrix = rng.normal(size=(8, 8))
    mem = encode_matrix(matrix)
    total = sum(np.sum(np.abs(v) ** 2) for v in mem.records.values())
    assert abs(mem.zeta - np.sqrt(total)) < 1e-15


def test_zeta_squared_half_nonzeros_for_01_matrices():
    # holds when no block has both off-diagonal entries set; such a
    # block's X amplitudes add instead of staying independent
    rng = np.random.default_rng(35)
    for _ in range(20):
        matrix = (rng.random((8, 8)) < 0.2).astype(float)
        for r in range(4):
            for c in range(4):
                if matrix[2 * r, 2 * c + 1] and matrix[2 * r + 1, 2 * c]:
                    matrix[2 * r + 1, 2 * c] = 0.0
        if not np.any(matrix):
            matrix[0, 0] = 1.0
        mem = encode_matrix(matrix)
        assert abs(mem.zeta ** 2 - np.count_nonzero(matrix) / 2.0) < 1e-12


def test_i_table_and_register_width():
    for shifts, width in (((0,), 0), ((0, 1), 1), ((1, 2, 3), 2), ((0, 1, 2, 3), 2)):
        records = {(i, 0): None for i in shifts}
        for key in records:
            vector = np.zeros(8, dtype=complex)
            vector[SLOT_I] = 1.0
            records[key] = vector
        mem = EncodedMemory(3, records)
        assert mem.i_table == shifts
        assert mem.r == width
        assert mem.num_qubits == width + 3 + 2 + 3


def test_memory_from_gates():
    mem = memory_from_gates(2, {(0, 0): "Z", (0, 1): "XZ"})
    assert mem.records[(0, 0)][SLOT_Z] == 1.0
    assert mem.records[(0, 1)][SLOT_XZ] == 1.0
    assert abs(mem.zeta - np.sqrt(2.0)) < 1e-15
    assert mem.r == 0
    with pytest.raises(ValueError):
        memory_from_gates(2, {(0, 0): "W"})


def test_memory_validation():
    vector = np.zeros(8, dtype=complex)
    vector[SLOT_I] = 1.0
    with pytest.raises(ValueError):
        EncodedMemory(2, {})
    with pytest.raises(ValueError):
        EncodedMemory(2, {(2, 0): vector})
    with pytest.raises(ValueError):
        EncodedMemory(2, {(0, 0): np.zeros(8, dtype=complex)})
    filler = np.zeros(8, dtype=complex)
    filler[7] = 1.0
    with pytest.raises(ValueError):
        EncodedMemory(2, {(0, 0): filler})
    with pytest.raises(ValueError):
        EncodedMemory(2, {(0, 0): np.ones(4)})


def test_serialize_layout():
    mem = encode_matrix(np.eye(4))
    text = serialize(mem)
    lines = text.splitlines()
    assert lines[0] == "QGM 1"
    assert lines[1] == "n 2"
    assert lines[2].startswith("zeta ")
    assert lines[3] == "itable 0"
    assert lines[4].startswith("entry 0 0 ")
    assert lines[5].startswith("entry 0 1 ")
    assert text.endswith("\n")


def test_serialize_parse_round_trip():
    rng = np.random.default_rng(36)
    matrix = rng.normal(size=(16, 16)) * (rng.random((16, 16)) < 0.3)
    if not np.any(matrix):
        matrix[0, 0] = 1.0
    mem = encode_matrix(matrix)
    text = serialize(mem)
    back = parse(text)
    assert back.n == mem.n
    assert back.i_table == mem.i_table
    assert back.zeta == mem.zeta
    assert set(back.records) == set(mem.records)
    for key in mem.records:
        assert np.array_equal(back.records[key], mem.records[key])
    assert serialize(back) == text


def test_complex_amplitudes_round_trip():
    vector = np.zeros(8, dtype=complex)
    vector[SLOT_X] = 0.25 - 1.5j
    vector[SLOT_I] = 1.0 / 3.0
    mem = EncodedMemory(2, {(1, 0): vector})
    back = parse(serialize(mem))
    assert np.array_equal(back.records[(1, 0)], vector)


def test_parse_accepts_comments_and_blanks():
    mem = encode_matrix(np.eye(4))
    lines = serialize(mem).splitlines()
    decorated = "# gate memory\n\n" + "\n\n".join(lines) + "\n# end\n"
    back = parse(decorated)
    assert back.i_table == mem.i_table


def test_parse_rejects_bad_version():
    text = serialize(encode_matrix(np.eye(4))).replace("QGM 1", "QGM 2", 1)
    with pytest.raises(ParseError, match="version"):
        parse(text)


def test_parse_rejects_zeta_mismatch():
    text = serialize(encode_matrix(np.eye(4))).replace("zeta 1.4142135623730951", "zeta 1.5")
    with pytest.raises(ParseError, match="zeta"):
        parse(text)


def test_parse_rejects_itable_mismatch():
    text = serialize(encode_matrix(np.eye(4))).replace("itable 0", "itable 0,1")
    with pytest.raises(ParseError, match="itable"):
        parse(text)


def test_parse_rejects_unsorted_itable():
    text = serialize(encode_matrix(np.eye(4))).replace("itable 0", "itable 1,0")
    with pytest.raises(ParseError, match="ascending"):
        parse(text)


def test_parse_rejects_all_zero_record():
    text = serialize(encode_matrix(np.eye(4)))
    text = text.replace("entry 0 1 0 0 0 0 0 0 1 0", "entry 0 1 0 0 0 0 0 0 0 0")
    with pytest.raises(ParseError, match="all zero"):
        parse(text)


def test_parse_rejects_filler_slot():
    text = serialize(encode_matrix(np.eye(4)))
    text = text.replace("entry 0 1 0 0 0 0 0 0 1 0", "entry 0 1 0 0 0 0 0 0 1 1")
    with pytest.raises(ParseError, match="slot 7"):
        parse(text)


def test_parse_rejects_duplicate_entry():
    text = serialize(encode_matrix(np.eye(4)))
    text += "entry 0 1 0 0 0 0 0 0 1 0\n"
    with pytest.raises(ParseError, match="duplicate"):
        parse(text)


def test_parse_rejects_malformed_entry():
    text = serialize(encode_matrix(np.eye(4))) + "entry 0\n"
    with pytest.raises(ParseError, match="expected 'entry"):
        parse(text)
    text = serialize(encode_matrix(np.eye(4))).replace(" 1 0\nentry", " x 0\nentry", 1)
    with pytest.raises(ParseError):
        parse(text)


def test_parse_reports_line_numbers():
    text = serialize(encode_matrix(np.eye(4))) + "entry 0 9 0 0 0 0 0 0 1 0\n"
    with pytest.raises(ParseError, match="line 7"):
        parse(text)


def test_decode_memory_reconstructs_blocks():
    rng = np.random.default_rng(37)
    matrix = rng.integers(-2, 3, size=(8, 8)).astype(float)
    dec = split_blocks(matrix)
    back = decode_memory(encode_memory(dec))
    assert set(back.entries) == set(dec.entries)
    for key in dec.entries:
        assert np.max(np.abs(back.entries[key] - dec.entries[key])) < 1e-14


def test_memory_file_round_trip(tmp_path):
    mem = encode_matrix(np.eye(4))
    path = tmp_path / "identity.qgm"
    write_memory_file(str(path), mem)
    back = read_memory_file(str(path))
    assert back.zeta == mem.zeta
    assert serialize(back) == serialize(mem)
