"""Split a 2^n x 2^n matrix into 2x2 blocks addressed by (shift, row).

The submatrix at block-row r and block-column c is stored under the key
(i, k) with i = r XOR c and k = r. Collecting the blocks of one shift i
into a block-diagonal matrix H_i and pairing it with the permutation
P_i that XORs basis indices with 2*i gives H = sum_i H_i P_i, which is
what the simulation circuit evaluates term by term.
"""

from __future__ import annotations

import numpy as np


class BlockDecomposition:
    """Sparse collection of 2x2 blocks keyed by (shift i, block-row k)."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries: dict):
        if n < 1:
            raise ValueError("need at least one qubit")
        half = 1 << (n - 1)
        for (i, k), block in entries.items():
            if not (0 <= i < half and 0 <= k < half):
                raise ValueError("entry key (%d, %d) out of range for n=%d" % (i, k, n))
            if block.shape != (2, 2):
                raise ValueError("blocks must be 2x2")
            if not np.any(block):
                raise ValueError("all-zero block stored at (%d, %d)" % (i, k))
        self.n = n
        self.entries = entries

    @property
    def size(self) -> int:
        return 1 << self.n

    def shifts(self) -> list:
        """Distinct shift indices with at least one block, ascending."""
        return sorted({i for (i, _k) in self.entries})

    def __len__(self):
        return len(self.entries)


def _dense_to_array(matrix) -> np.ndarray:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    size = m.shape[0]
    if size < 2 or size & (size - 1):
        raise ValueError("matrix size %d is not a power of two >= 2" % size)
    return m


def split_blocks(matrix, n: int | None = None) -> BlockDecomposition:
    """Decompose a dense square matrix; zero blocks are omitted.

    The qubit count is inferred from the size and cross-checked against
    n when given.
    """
    dense = _dense_to_array(matrix)
    inferred = dense.shape[0].bit_length() - 1
    if n is not None and n != inferred:
        raise ValueError("qubit count %d does not match matrix size %d" % (n, dense.shape[0]))
    entries = {}
    half = dense.shape[0] // 2
    for r in range(half):
        for c in range(half):
            block = dense[2 * r : 2 * r + 2, 2 * c : 2 * c + 2]
            if np.any(block):
                entries[(r ^ c, r)] = np.array(block)
    return BlockDecomposition(inferred, entries)


def split_blocks_sparse(triplets, n: int) -> BlockDecomposition:
    """Decompose (row, col, value) triplets; duplicates accumulate."""
    size = 1 << n
    dense = np.zeros((size, size), dtype=complex)
    for row, col, value in triplets:
        if not (0 <= row < size and 0 <= col < size):
            raise ValueError("triplet index (%d, %d) out of range" % (row, col))
        dense[row, col] += value
    if not np.any(dense.imag):
        dense = dense.real
    return split_blocks(dense, n)


def permutation_for(i: int, n: int) -> int:
    """XOR bitmask the shift i applies to basis indices: 2*i, so the
    lowest index bit (the last qubit) is never touched."""
    if not 0 <= i < 1 << (n - 1):
        raise ValueError("shift %d out of range for n=%d" % (i, n))
    return 2 * i


def permutation_matrix(i: int, n: int) -> np.ndarray:
    """Dense form of the shift-i permutation; symmetric and self-inverse."""
    mask = permutation_for(i, n)
    size = 1 << n
    matrix = np.zeros((size, size))
    for col in range(size):
        matrix[col ^ mask, col] = 1.0
    return matrix


def block_diagonal(dec: BlockDecomposition, i: int) -> np.ndarray:
    """The block-diagonal factor for shift i; absent blocks stay zero."""
    size = dec.size
    blocks = {k: b for (j, k), b in dec.entries.items() if j == i}
    dtype = np.result_type(*(b.dtype for b in blocks.values())) if blocks else float
    matrix = np.zeros((size, size), dtype=dtype)
    for k, block in blocks.items():
        matrix[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = block
    return matrix


def hi_times_pi(dec: BlockDecomposition, i: int) -> np.ndarray:
    """Dense product of the shift-i block-diagonal factor and its
    permutation. Each block (i, k) lands at block-row k, block-column
    k XOR i; for a symmetric source matrix the product is symmetric."""
    size = dec.size
    blocks = {k: b for (j, k), b in dec.entries.items() if j == i}
    dtype = np.result_type(*(b.dtype for b in blocks.values())) if blocks else float
    matrix = np.zeros((size, size), dtype=dtype)
    for k, block in blocks.items():
        c = k ^ i
        matrix[2 * k : 2 * k + 2, 2 * c : 2 * c + 2] = block
    return matrix


def reconstruct(dec: BlockDecomposition) -> np.ndarray:
    """Reassemble the source matrix; exact, since every block is placed
    back at its original position."""
    size = dec.size
    dtype = np.result_type(*(b.dtype for b in dec.entries.values())) if dec.entries else float
    matrix = np.zeros((size, size), dtype=dtype)
    for (i, k), block in dec.entries.items():
        c = k ^ i
        matrix[2 * k : 2 * k + 2, 2 * c : 2 * c + 2] = block
    return matrix
