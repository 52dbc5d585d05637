"""Succinct building blocks: alphabet rank, keyless range minimum, and a
predecessor index that reads keys only through a caller-supplied oracle."""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from . import kernels
from .core import ContractError

WORD = 64


def ceil_log2(x: int) -> int:
    return max(0, (int(x) - 1).bit_length())


def lg(n: int) -> int:
    """max(1, ceil(lg n)), the integer log used for all parameter choices."""
    return max(1, ceil_log2(max(2, n)))


def _pow2_width(bits: int) -> int:
    w = 1
    while w < bits:
        w *= 2
    return w


class AlphabetRankIndex:
    """Counts, for position k, how many of A[1..k] equal A[k].

    Positions are 1-based in the public API.  With ``segment`` set (a power of
    two) counting restarts at every aligned block of that many positions,
    which is how one index serves every node on a tree level at once.

    Layout: when sigma^2 >= lg n each position stores its symbol plus its
    count since the last checkpoint.  For smaller alphabets there are minor
    checkpoints in between, and the remainder is counted by broadword
    comparison over the packed symbols.
    """

    def __init__(self, symbols, sigma: Optional[int] = None, segment: Optional[int] = None):
        sym = np.ascontiguousarray(symbols, dtype=np.int64)
        n = len(sym)
        if sigma is None:
            sigma = int(sym.max()) + 1 if n else 1
        sigma = max(1, int(sigma))
        if n and (sym.min() < 0 or sym.max() >= sigma):
            raise ContractError("symbol outside alphabet")
        self.n = n
        self.sigma = sigma
        lgn = lg(n)
        self.two_level = sigma * sigma < lgn
        self.width = _pow2_width(max(1, ceil_log2(sigma)))
        per_word = WORD // self.width
        seg_log = ceil_log2(segment) if segment else max(1, ceil_log2(max(n, 1))) + 1
        if segment and (1 << seg_log) != segment:
            raise ContractError("segment must be a power of two")
        major_log = ceil_log2(sigma * lgn)
        if self.two_level:
            lglgn = max(1, ceil_log2(lgn))
            minor_log = max(ceil_log2(sigma * lglgn), ceil_log2(per_word))
            major_log = max(major_log, minor_log)
        else:
            minor_log = 0
        self.seg_log, self.major_log, self.minor_log = seg_log, major_log, minor_log
        k = kernels.get()
        major, counts = k.build_rank_counts(sym, sigma, seg_log, major_log, minor_log, self.two_level)
        top = int(counts.max()) if len(counts) else 0
        self.count_width = max(1, ceil_log2(top + 1))
        if WORD % self.count_width:
            self.count_width = _pow2_width(self.count_width)
        packed_counts = k.pack_fields(counts, self.count_width)
        packed_sym = k.pack_fields(sym, self.width)
        self._major = major
        self._core = k.RankCore(n, sigma, self.width, seg_log, major_log, minor_log,
                                self.two_level, self.count_width, packed_sym, major, packed_counts)
        self._sym_words = packed_sym
        self._count_words = packed_counts

    @property
    def core(self):
        return self._core

    def __len__(self):
        return self.n

    def access(self, k: int) -> int:
        self._check(k)
        return int(self._core.symbol(k - 1))

    def rank(self, k: int) -> int:
        self._check(k)
        return int(self._core.rank(k - 1))

    def rank_symbol(self, c: int, k: int) -> int:
        """Occurrences of symbol c among A[1..k] (small alphabets only)."""
        if not self.two_level:
            raise ContractError("rank of an arbitrary symbol needs the two-level layout")
        if k == 0:
            return 0
        self._check(k)
        return int(self._core.rank_of(c, k - 1))

    def _check(self, k):
        if not 1 <= k <= self.n:
            raise ContractError(f"position {k} outside 1..{self.n}")

    def space_bits(self) -> dict:
        sym_bits = self.n * self.width
        if self.two_level:
            counter_bits = (len(self._count_words) * WORD)
        else:
            counter_bits = self.n * self.count_width
        major_bits = len(self._major) * lg(self.n)
        # the broadword counting and 64-bit popcount need no tables
        return {"symbols": sym_bits, "counters": counter_bits, "checkpoints": major_bits,
                "tables": 0, "total": sym_bits + counter_bits + major_bits}


def alphabet_rank(idx: AlphabetRankIndex, k: int) -> int:
    return idx.rank(k)


class RMQIndex:
    """Leftmost range-minimum positions without keeping the keys.

    Keys are read once at build time.  What remains is the 2n-bit stack
    sequence of the left-to-right minima, block start offsets, per-block
    Cartesian-tree shape ids with their answer tables, and two doubling
    tables: one over the blocks of each superblock (offsets of lg of the
    superblock size) and one over whole superblocks.  A superblock holds
    about lg n * lglg n blocks, so the top table costs O(n / lglg n) bits.
    Positions are 1-based in the public API.
    """

    def __init__(self, keys):
        keys = np.ascontiguousarray(keys, dtype=np.int64)
        n = len(keys)
        self.n = n
        self.block = max(1, -(-lg(n) // 4))
        k = kernels.get()
        if n == 0:
            self._core = None
            return
        bits, blk_pos, shapes = k.rmq_encode(keys, self.block)
        nb = len(shapes)
        shape_id = np.empty(nb, dtype=np.int64)
        ids: dict = {}
        tables = []
        for b in range(nb):
            length = min(self.block, n - b * self.block)
            key = (int(shapes[b]), length)
            sid = ids.get(key)
            if sid is None:
                sid = len(tables)
                ids[key] = sid
                tables.append(k.rmq_block_table(keys, b * self.block, length, self.block))
            shape_id[b] = sid
        table = np.concatenate(tables).astype(np.int8)
        starts = np.arange(nb, dtype=np.int64) * self.block
        block_min = np.array(
            [starts[b] + int(table[shape_id[b] * self.block * self.block
                                   + min(self.block, n - starts[b]) - 1]) for b in range(nb)],
            dtype=np.int64)
        lgn = lg(n)
        self.per = 1 << ceil_log2(max(2, lgn * max(1, ceil_log2(lgn))))
        inner, top = k.rmq_tables(keys, self.block, self.per, block_min)
        self.n_shapes = len(tables)
        self._parts = (bits, blk_pos, shape_id, table, inner, top)
        self._core = k.RMQCore(n, self.block, self.per, bits, blk_pos, shape_id, table, inner, top)

    @property
    def core(self):
        return self._core

    def query(self, i: int, j: int) -> int:
        if not 1 <= i <= j <= self.n:
            raise ContractError(f"bad interval [{i}, {j}] for n={self.n}")
        return int(self._core.query(i - 1, j - 1)) + 1

    def space_bits(self) -> dict:
        bits, blk_pos, shape_id, table, inner, top = self._parts
        lgn = lg(self.n)
        nb = len(shape_id)
        out = {
            "stack_bits": 2 * self.n + 1,
            "block_offsets": nb * lgn,
            "shape_ids": nb * max(1, ceil_log2(self.n_shapes)),
            "tables": table.size * max(1, ceil_log2(self.block)),
            "inner": inner.size * max(1, ceil_log2(self.per * self.block)),
            "top": top.size * lgn,
        }
        out["total"] = sum(out.values())
        return out


def rmq(idx: RMQIndex, i: int, j: int) -> int:
    return idx.query(i, j)


class PredecessorIndex:
    """Predecessor/successor over a sorted array seen only through an oracle.

    Every ``group``-th key is kept in full; the others are summarised by the
    most significant bit where each key differs from its successor (a blind
    trie over the group).  A query binary-searches the sampled keys, descends
    the blind trie using only the query's bits, then spends one oracle call
    to fix the answer.  Ranks are 1-based; ``oracle(r)`` must return the r-th
    smallest key.

    With ``segment`` set, the array is a concatenation of independently
    sorted runs of that length and queries name the run they search; ranks
    and oracle arguments are then local to the run.
    """

    MAX_ORACLE_CALLS = 2

    def __init__(self, keys, word_bits: int = WORD, segment: Optional[int] = None):
        keys = np.asarray(keys, dtype=np.int64)
        n = len(keys)
        seg = segment or max(n, 1)
        if n % seg:
            raise ContractError("length must be a multiple of the segment")
        runs = keys.reshape(-1, seg) if n else keys.reshape(0, seg)
        if runs.shape[1] > 1 and np.any(runs[:, 1:] < runs[:, :-1]):
            raise ContractError("keys must be sorted")
        self.n = n
        self.segment = seg
        self.word_bits = word_bits
        self.group = max(2, -(-word_bits // max(1, ceil_log2(word_bits))))
        self.samples = runs[:, :: self.group].copy()
        if n > 1:
            diff = keys[1:] ^ keys[:-1]
            hb = np.full(n - 1, -1, dtype=np.int8)
            nz = diff != 0
            d = diff[nz]
            b = np.floor(np.log2(d.astype(np.float64))).astype(np.int64)
            # float log2 can land one off near powers of two
            b[(d >> b) == 0] -= 1
            b[(d >> (b + 1)) != 0] += 1
            hb[nz] = b
            self.branch = hb
        else:
            self.branch = np.zeros(0, dtype=np.int8)
        self.last_oracle_calls = 0

    def space_bits(self) -> int:
        return self.samples.size * self.word_bits + len(self.branch) * max(1, ceil_log2(self.word_bits) + 1)

    def _blind(self, lo: int, hi: int, y: int) -> int:
        """Leaf of the blind trie on positions [lo, hi] that y's bits lead to."""
        br = self.branch
        while lo < hi:
            seg = br[lo:hi]
            m = lo + int(np.argmax(seg))
            bit = int(br[m])
            if bit < 0:
                return hi
            if (y >> bit) & 1:
                lo = m + 1
            else:
                hi = m
        return lo

    def _settle(self, y: int, oracle, want_pred: bool, run: int):
        self.last_oracle_calls = 0
        if self.n == 0:
            return None
        S = self.segment
        base = run * S
        g = int(np.searchsorted(self.samples[run], y, side="right")) - 1
        if g < 0:
            return None if want_pred else 1
        lo = base + g * self.group
        hi = min(base + S - 1, lo + self.group - 1)
        j = self._blind(lo, hi, y)
        key = oracle(j - base + 1)
        self.last_oracle_calls += 1
        br = self.branch
        if key == y:
            if want_pred:
                while j < hi and br[j] < 0:
                    j += 1
            else:
                # equal keys may run back into the previous group
                while j > base and br[j - 1] < 0:
                    j -= 1
            return j - base + 1
        p = (key ^ y).bit_length() - 1
        left, right = j, j
        while left > lo and br[left - 1] <= p:
            left -= 1
        while right < hi and br[right] <= p:
            right += 1
        if (y >> p) & 1:
            # y exceeds the whole run sharing key's prefix above bit p
            if want_pred:
                return right - base + 1
            return right - base + 2 if right + 1 < base + S else None
        if want_pred:
            return left - base if left > base else None
        return left - base + 1

    def predecessor(self, y: int, oracle: Callable[[int], int], run: int = 0):
        """Rank of the largest key <= y, or None."""
        return self._settle(int(y), oracle, True, run)

    def successor(self, y: int, oracle: Callable[[int], int], run: int = 0):
        """Rank of the smallest key >= y, or None."""
        return self._settle(int(y), oracle, False, run)


def predecessor(idx: PredecessorIndex, y: int, oracle, successor: bool = False):
    return idx.successor(y, oracle) if successor else idx.predecessor(y, oracle)
