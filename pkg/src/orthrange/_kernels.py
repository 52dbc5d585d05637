# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Hot loops, written once in Cython's pure-Python syntax.

Imported directly this file runs as ordinary Python.  ``_ckernels.pyx``
includes it verbatim and compiles it, so both backends share one source.
Word arithmetic is masked to 64 bits so the interpreted path wraps the way
C unsigned arithmetic does.
"""
import cython
import numpy as np

MASK64 = cython.declare(cython.ulonglong, 0xFFFFFFFFFFFFFFFF)
M1 = cython.declare(cython.ulonglong, 0x5555555555555555)
M2 = cython.declare(cython.ulonglong, 0x3333333333333333)
M4 = cython.declare(cython.ulonglong, 0x0F0F0F0F0F0F0F0F)
H01 = cython.declare(cython.ulonglong, 0x0101010101010101)


def compiled() -> bool:
    return cython.compiled


def _host(a):
    # interpreted twin: plain lists index faster than numpy and yield ints
    if cython.compiled:
        return a
    return a.tolist()


@cython.cfunc
@cython.inline
@cython.exceptval(check=False)
def popcount64(x: cython.ulonglong) -> cython.longlong:
    x = x - ((x >> 1) & M1)
    x = (x & M2) + ((x >> 2) & M2)
    x = (x + (x >> 4)) & M4
    return ((x * H01) & MASK64) >> 56


@cython.cfunc
@cython.inline
@cython.exceptval(check=False)
def get_field(words: cython.ulonglong[:], i: cython.longlong, width: cython.longlong,
              per_word: cython.longlong) -> cython.longlong:
    w: cython.ulonglong = words[i // per_word]
    if not cython.compiled:
        w = int(w)
    return (w >> ((i % per_word) * width)) & ((cython.cast(cython.ulonglong, 1) << width) - 1)


def pack_fields(values: cython.longlong[:], width: cython.longlong):
    """Pack non-negative ints into words, ``64 // width`` fields per word."""
    per_word: cython.longlong = 64 // width
    n: cython.Py_ssize_t = values.shape[0]
    out = np.zeros((n + per_word - 1) // per_word + 1, dtype=np.uint64)
    ov: cython.ulonglong[:] = out
    i: cython.Py_ssize_t
    v: cython.ulonglong
    cur: cython.ulonglong
    for i in range(n):
        v = values[i]
        cur = ov[i // per_word]
        if not cython.compiled:
            cur = int(cur)
            v = int(v)
        ov[i // per_word] = cur | (v << ((i % per_word) * width))
    return out


def unpack_fields(words: cython.ulonglong[:], n: cython.longlong, width: cython.longlong):
    per_word: cython.longlong = 64 // width
    out = np.empty(n, dtype=np.int64)
    ov: cython.longlong[:] = out
    i: cython.Py_ssize_t
    for i in range(n):
        ov[i] = get_field(words, i, width, per_word)
    return out


# ---------------------------------------------------------------------------
# alphabet rank


@cython.cclass
class RankCore:
    """Array part of an alphabet rank index.

    Counts restart at every aligned segment of ``1 << seg_log`` positions so
    one index can serve a whole tree level whose nodes are such segments.
    ``two_level`` selects the small-alphabet layout with minor checkpoints
    and broadword counting; otherwise every position carries its own count
    since the last checkpoint.
    """

    n: cython.longlong
    sigma: cython.longlong
    width: cython.longlong
    per_word: cython.longlong
    seg_log: cython.longlong
    major_log: cython.longlong
    minor_log: cython.longlong
    two_level: cython.bint
    count_width: cython.longlong
    count_per_word: cython.longlong
    sym: cython.ulonglong[:]
    major: cython.longlong[:]
    counts: cython.ulonglong[:]
    hi_mask: cython.ulonglong
    lo_fill: cython.ulonglong
    field_mask: cython.ulonglong

    def __init__(self, n, sigma, width, seg_log, major_log, minor_log, two_level,
                 count_width, sym, major, counts):
        self.n = n
        self.sigma = sigma
        self.width = width
        self.per_word = 64 // width
        self.seg_log = seg_log
        self.major_log = major_log
        self.minor_log = minor_log
        self.two_level = two_level
        self.count_width = count_width
        self.count_per_word = 64 // count_width
        self.sym = _host(sym)
        self.major = _host(major)
        self.counts = _host(counts)
        hm = 0
        lf = 0
        for f in range(64 // width):
            hm |= 1 << (f * width + width - 1)
            lf |= ((1 << (width - 1)) - 1) << (f * width)
        self.hi_mask = hm
        self.lo_fill = lf
        self.field_mask = (1 << width) - 1

    @cython.ccall
    @cython.exceptval(check=False)
    def symbol(self, k: cython.longlong) -> cython.longlong:
        return get_field(self.sym, k, self.width, self.per_word)

    @cython.cfunc
    @cython.exceptval(check=False)
    def _count_run(self, c: cython.longlong, lo: cython.longlong, hi: cython.longlong) -> cython.longlong:
        # occurrences of c in positions [lo, hi], fields never straddle words
        total: cython.longlong = 0
        wlo: cython.longlong = lo // self.per_word
        whi: cython.longlong = hi // self.per_word
        bcast: cython.ulonglong = 0
        f: cython.longlong
        wi: cython.longlong
        x: cython.ulonglong
        nz: cython.ulonglong
        zero: cython.ulonglong
        keep: cython.ulonglong
        a: cython.longlong
        b: cython.longlong
        for f in range(self.per_word):
            bcast |= cython.cast(cython.ulonglong, c) << (f * self.width)
        for wi in range(wlo, whi + 1):
            x = self.sym[wi]
            if not cython.compiled:
                x = int(x)
            x = x ^ bcast
            if self.width == 1:
                nz = x
            else:
                nz = ((((x & self.lo_fill) + self.lo_fill) & MASK64) | x) & self.hi_mask
            zero = (~nz) & self.hi_mask & MASK64
            a = 0
            b = self.per_word - 1
            if wi == wlo:
                a = lo % self.per_word
            if wi == whi:
                b = hi % self.per_word
            keep = MASK64
            if b + 1 < self.per_word:
                keep = (cython.cast(cython.ulonglong, 1) << ((b + 1) * self.width)) - 1
            keep = keep & ((MASK64 << (a * self.width)) & MASK64)
            total += popcount64(zero & keep)
        return total

    @cython.ccall
    @cython.exceptval(check=False)
    def rank_of(self, c: cython.longlong, k: cython.longlong) -> cython.longlong:
        """Occurrences of ``c`` in its segment up to and including ``k``.

        Only valid in the two-level layout, which keeps counters for every
        symbol.
        """
        res: cython.longlong = 0
        seg: cython.longlong = self.seg_log
        start: cython.longlong
        if seg > self.major_log:
            res += self.major[(k >> self.major_log) * self.sigma + c]
        if min(seg, self.major_log) > self.minor_log:
            res += get_field(self.counts, (k >> self.minor_log) * self.sigma + c,
                             self.count_width, self.count_per_word)
        start = (k >> min(seg, self.minor_log)) << min(seg, self.minor_log)
        return res + self._count_run(c, start, k)

    @cython.ccall
    @cython.exceptval(check=False)
    def rank(self, k: cython.longlong) -> cython.longlong:
        c: cython.longlong = get_field(self.sym, k, self.width, self.per_word)
        if self.two_level:
            return self.rank_of(c, k)
        res: cython.longlong = get_field(self.counts, k, self.count_width, self.count_per_word)
        if self.seg_log > self.major_log:
            res += self.major[(k >> self.major_log) * self.sigma + c]
        return res


def build_rank_counts(symbols: cython.longlong[:], sigma: cython.longlong, seg_log: cython.longlong,
                      major_log: cython.longlong, minor_log: cython.longlong, two_level: cython.bint):
    """Checkpoint counters and per-position (or per-minor) counts.

    Returns (major array, raw count array); the caller packs the counts.
    Running counters are reset lazily through stamps so large alphabets do
    not pay sigma work per segment.
    """
    n: cython.Py_ssize_t = symbols.shape[0]
    with_major: cython.bint = seg_log > major_log
    n_major: cython.longlong = (n >> major_log) + 1
    major = np.zeros(n_major * sigma if with_major else 0, dtype=np.int64)
    mv: cython.longlong[:] = major
    running = np.zeros(sigma, dtype=np.int64)
    rv: cython.longlong[:] = running
    rstamp_arr = np.full(sigma, -1, dtype=np.int64)
    rs: cython.longlong[:] = rstamp_arr
    since = np.zeros(sigma, dtype=np.int64)
    sv: cython.longlong[:] = since
    sstamp_arr = np.full(sigma, -1, dtype=np.int64)
    ss: cython.longlong[:] = sstamp_arr
    n_minor: cython.longlong = (n >> minor_log) + 1
    if two_level:
        counts = np.zeros(n_minor * sigma, dtype=np.int64)
    else:
        counts = np.zeros(n, dtype=np.int64)
    cv: cython.longlong[:] = counts
    since_log: cython.longlong = min(seg_log, major_log)
    maj_mask: cython.longlong = (1 << major_log) - 1
    min_mask: cython.longlong = (1 << minor_log) - 1
    i: cython.Py_ssize_t
    c: cython.longlong
    a: cython.longlong
    seg: cython.longlong
    blk: cython.longlong
    for i in range(n):
        seg = i >> seg_log
        blk = i >> since_log
        if with_major and (i & maj_mask) == 0:
            for a in range(sigma):
                mv[(i >> major_log) * sigma + a] = rv[a] if rs[a] == seg else 0
        if two_level and (i & min_mask) == 0:
            for a in range(sigma):
                cv[(i >> minor_log) * sigma + a] = sv[a] if ss[a] == blk else 0
        c = symbols[i]
        if rs[c] != seg:
            rs[c] = seg
            rv[c] = 0
        if ss[c] != blk:
            ss[c] = blk
            sv[c] = 0
        rv[c] += 1
        sv[c] += 1
        if not two_level:
            cv[i] = sv[c]
    return major, counts


# ---------------------------------------------------------------------------
# range minimum without stored keys
#
# The sequence ``stack`` encodes, per position, how many entries the
# left-to-right minimum stack pops (a run of ones) followed by one push (a
# zero).  With depth(i) the stack size after pushing i, the leftmost minimum
# key on [i, j] is the rightmost minimum depth on [i, j], so every comparison
# the query needs is answered from the bit sequence.


def rmq_encode(keys: cython.longlong[:], block: cython.longlong):
    """Stack bit sequence, block start offsets, and per-block shape codes."""
    n: cython.Py_ssize_t = keys.shape[0]
    nbits: cython.longlong = 2 * n + 1
    bits = np.zeros(nbits // 64 + 2, dtype=np.uint64)
    bv: cython.ulonglong[:] = bits
    nb: cython.longlong = (n + block - 1) // block
    blk_pos = np.zeros(nb + 1, dtype=np.int64)
    bp: cython.longlong[:] = blk_pos
    shapes = np.zeros(nb, dtype=np.int64)
    shv: cython.longlong[:] = shapes
    stack = np.empty(n + 1, dtype=np.int64)
    st: cython.longlong[:] = stack
    lstack = np.empty(block + 1, dtype=np.int64)
    ls: cython.longlong[:] = lstack
    top: cython.longlong = 0
    ltop: cython.longlong = 0
    pos: cython.longlong = 0
    i: cython.Py_ssize_t
    code: cython.longlong = 0
    cbit: cython.longlong = 0
    cur: cython.ulonglong
    b: cython.longlong
    for i in range(n):
        if i % block == 0:
            b = i // block
            bp[b] = pos
            if b > 0:
                shv[b - 1] = code
            code = 0
            cbit = 0
            ltop = 0
        while top > 0 and keys[st[top - 1]] > keys[i]:
            top -= 1
            cur = bv[pos >> 6]
            if not cython.compiled:
                cur = int(cur)
            bv[pos >> 6] = cur | (cython.cast(cython.ulonglong, 1) << (pos & 63))
            pos += 1
        st[top] = i
        top += 1
        pos += 1
        # block-local shape: same stack discipline restricted to the block
        while ltop > 0 and keys[ls[ltop - 1]] > keys[i]:
            ltop -= 1
            code |= 1 << cbit
            cbit += 1
        ls[ltop] = i
        ltop += 1
        cbit += 1
    if n > 0:
        shv[nb - 1] = code
    bp[nb] = pos
    return bits, blk_pos, shapes


def rmq_block_table(keys: cython.longlong[:], start: cython.longlong, length: cython.longlong,
                    block: cython.longlong):
    """Leftmost-minimum answers for every in-block range of one block."""
    tab = np.zeros(block * block, dtype=np.int8)
    tv: cython.schar[:] = tab
    a: cython.longlong
    b: cython.longlong
    best: cython.longlong
    for a in range(length):
        best = a
        for b in range(a, length):
            if keys[start + b] < keys[start + best]:
                best = b
            tv[a * block + b] = best
    return tab


@cython.cclass
class RMQCore:
    """Query side of the range-minimum index.

    Blocks of ``block`` positions are grouped into superblocks of ``per``
    blocks.  ``inner[lv, b]`` is the leftmost minimum over blocks
    b..b+2^lv-1 inside one superblock, stored as an offset from the
    superblock start; ``top[lv, s]`` does the same over whole superblocks
    with absolute positions.  Candidates are compared by stack depth alone.
    """

    n: cython.longlong
    block: cython.longlong
    per: cython.longlong
    bits: cython.ulonglong[:]
    blk_pos: cython.longlong[:]
    shape_id: cython.longlong[:]
    table: cython.schar[:]
    inner: cython.longlong[:]
    top: cython.longlong[:]
    istride: cython.longlong
    tstride: cython.longlong

    def __init__(self, n, block, per, bits, blk_pos, shape_id, table, inner, top):
        self.n = n
        self.block = block
        self.per = per
        self.bits = _host(bits)
        self.blk_pos = _host(blk_pos)
        self.shape_id = _host(shape_id)
        self.table = _host(table)
        self.istride = inner.shape[1]
        self.inner = _host(np.ascontiguousarray(inner).reshape(-1))
        self.tstride = top.shape[1]
        self.top = _host(np.ascontiguousarray(top).reshape(-1))

    @cython.ccall
    @cython.exceptval(check=False)
    def depth(self, i: cython.longlong) -> cython.longlong:
        """Stack size right after position ``i`` is pushed."""
        b: cython.longlong = i // self.block
        need: cython.longlong = i - b * self.block + 1
        pos: cython.longlong = self.blk_pos[b]
        w: cython.ulonglong
        zeros: cython.ulonglong
        z: cython.longlong
        off: cython.longlong = pos & 63
        wi: cython.longlong = pos >> 6
        while True:
            w = self.bits[wi]
            if not cython.compiled:
                w = int(w)
            zeros = (~w) & MASK64
            zeros = (zeros >> off) << off
            z = popcount64(zeros)
            if z >= need:
                break
            need -= z
            wi += 1
            off = 0
        # position of the need-th zero inside zeros
        while need > 1:
            zeros = zeros & (zeros - 1)
            need -= 1
        zeros = zeros & ((~(zeros - 1)) & MASK64)
        z = popcount64((zeros - 1) & MASK64)
        pos = wi * 64 + z
        return 2 * i + 1 - pos

    @cython.cfunc
    @cython.exceptval(check=False)
    def _in_block(self, b: cython.longlong, lo: cython.longlong, hi: cython.longlong) -> cython.longlong:
        base: cython.longlong = self.shape_id[b] * self.block * self.block
        return b * self.block + self.table[base + lo * self.block + hi]

    @cython.cfunc
    @cython.exceptval(check=False)
    def _pick(self, best: cython.longlong, cand: cython.longlong) -> cython.longlong:
        # smaller depth wins, then the position further right
        bd: cython.longlong = self.depth(best)
        cd: cython.longlong = self.depth(cand)
        if cd < bd or (cd == bd and cand > best):
            return cand
        return best

    @cython.cfunc
    @cython.exceptval(check=False)
    def _inner(self, best: cython.longlong, lo: cython.longlong, hi: cython.longlong) -> cython.longlong:
        # whole blocks lo..hi, all inside one superblock
        lv: cython.longlong = 0
        while (2 << lv) <= hi - lo + 1:
            lv += 1
        base: cython.longlong = (lo // self.per) * self.per * self.block
        best = self._pick(best, base + self.inner[lv * self.istride + lo])
        return self._pick(best, base + self.inner[lv * self.istride + hi - (1 << lv) + 1])

    @cython.ccall
    @cython.exceptval(check=False)
    def query(self, i: cython.longlong, j: cython.longlong) -> cython.longlong:
        bi: cython.longlong = i // self.block
        bj: cython.longlong = j // self.block
        if bi == bj:
            return self._in_block(bi, i - bi * self.block, j - bi * self.block)
        best: cython.longlong = self._in_block(bi, i - bi * self.block, self.block - 1)
        lo: cython.longlong = bi + 1
        hi: cython.longlong = bj - 1
        sl: cython.longlong
        sh: cython.longlong
        lv: cython.longlong
        if lo <= hi:
            sl = lo // self.per
            sh = hi // self.per
            if sl == sh:
                best = self._inner(best, lo, hi)
            else:
                best = self._inner(best, lo, (sl + 1) * self.per - 1)
                if sh > sl + 1:
                    lv = 0
                    while (2 << lv) <= sh - sl - 1:
                        lv += 1
                    best = self._pick(best, self.top[lv * self.tstride + sl + 1])
                    best = self._pick(best, self.top[lv * self.tstride + sh - (1 << lv)])
                best = self._inner(best, sh * self.per, hi)
        return self._pick(best, self._in_block(bj, 0, j - bj * self.block))


def rmq_tables(keys: cython.longlong[:], block: cython.longlong, per: cython.longlong, block_min):
    """In-superblock and superblock doubling tables over block minima."""
    bm: cython.longlong[:] = block_min
    nb: cython.Py_ssize_t = bm.shape[0]
    ilv: cython.longlong = 1
    while (1 << ilv) <= per:
        ilv += 1
    inner = np.zeros((ilv, max(nb, 1)), dtype=np.int64)
    iv: cython.longlong[:, :] = inner
    i: cython.Py_ssize_t
    lv: cython.longlong
    a: cython.longlong
    b: cython.longlong
    base: cython.longlong
    for i in range(nb):
        iv[0, i] = bm[i] - (i // per) * per * block
    for lv in range(1, ilv):
        for i in range(nb - (1 << lv) + 1):
            if i % per + (1 << lv) > per:
                continue
            base = (i // per) * per * block
            a = iv[lv - 1, i] + base
            b = iv[lv - 1, i + (1 << (lv - 1))] + base
            iv[lv, i] = (b if keys[b] < keys[a] else a) - base
    ns: cython.Py_ssize_t = (nb + per - 1) // per
    tlv: cython.longlong = 1
    while (1 << tlv) <= ns:
        tlv += 1
    top = np.zeros((tlv, max(ns, 1)), dtype=np.int64)
    tv: cython.longlong[:, :] = top
    s: cython.Py_ssize_t
    for s in range(ns):
        a = bm[s * per]
        for i in range(s * per + 1, min(nb, (s + 1) * per)):
            if keys[bm[i]] < keys[a]:
                a = bm[i]
        tv[0, s] = a
    for lv in range(1, tlv):
        for s in range(ns - (1 << lv) + 1):
            a = tv[lv - 1, s]
            b = tv[lv - 1, s + (1 << (lv - 1))]
            tv[lv, s] = b if keys[b] < keys[a] else a
    return inner, top


# ---------------------------------------------------------------------------
# ball inheritance


@cython.cclass
class BallChaser:
    """Follows a ball down the tree through stored jumps.

    ``route_*`` lists, for each source depth, the physical jumps that make
    up its scheduled skip; each physical jump is one rank core.
    """

    height: cython.longlong
    route_start: cython.longlong[:]
    route_len: cython.longlong[:]
    hop_dst: cython.longlong[:]
    hop_core: cython.longlong[:]
    cores: list
    hops = cython.declare(cython.longlong, visibility="public")

    def __init__(self, height, route_start, route_len, hop_dst, hop_core, cores):
        self.height = height
        self.route_start = _host(route_start)
        self.route_len = _host(route_len)
        self.hop_dst = _host(hop_dst)
        self.hop_core = _host(hop_core)
        self.cores = cores
        self.hops = 0

    @cython.ccall
    @cython.exceptval(check=False)
    def leaf(self, depth: cython.longlong, node: cython.longlong, index: cython.longlong) -> cython.longlong:
        """Leaf reached by ball ``index`` (0-based) of ``node`` at ``depth``."""
        core: RankCore
        h: cython.longlong
        dst: cython.longlong
        k: cython.longlong
        c: cython.longlong
        while depth < self.height:
            for h in range(self.route_start[depth], self.route_start[depth] + self.route_len[depth]):
                dst = self.hop_dst[h]
                core = self.cores[self.hop_core[h]]
                k = (node << (self.height - depth)) + index
                c = core.symbol(k)
                index = core.rank(k) - 1
                node = (node << (dst - depth)) | c
                depth = dst
                self.hops += 1
        return node


# ---------------------------------------------------------------------------
# staircase sweep for shallow cuttings
#
# Samples arrive in ascending z.  ``bx``/``bg`` hold the 2-d staircase
# g(x) = min y over processed samples with sx <= x as breakpoints: g equals
# bg[i] on [bx[i], bx[i+1]), bg strictly decreasing, bg = U where uncovered.


def stair_sweep(sx: cython.longlong[:], sy: cython.longlong[:], U: cython.longlong):
    """Face rectangles of the staircase for samples in processing order.

    Returns ``(x1, x2, y1, y2, owner, fstart, fcount)``.  Faces of sample
    ``s`` occupy ``fstart[s] : fstart[s] + fcount[s]`` sorted by x; the
    region below no sample follows with owner -1 and its block is described
    by the last entry of ``fstart``/``fcount``.
    """
    r: cython.Py_ssize_t = sx.shape[0]
    cap: cython.Py_ssize_t = 3 * r + 2
    x1a = np.empty(cap, dtype=np.int64)
    x2a = np.empty(cap, dtype=np.int64)
    y1a = np.empty(cap, dtype=np.int64)
    y2a = np.empty(cap, dtype=np.int64)
    owa = np.empty(cap, dtype=np.int64)
    fsa = np.zeros(r + 1, dtype=np.int64)
    fca = np.zeros(r + 1, dtype=np.int64)
    X1: cython.longlong[:] = x1a
    X2: cython.longlong[:] = x2a
    Y1: cython.longlong[:] = y1a
    Y2: cython.longlong[:] = y2a
    OW: cython.longlong[:] = owa
    FS: cython.longlong[:] = fsa
    FC: cython.longlong[:] = fca
    bxa = np.zeros(r + 2, dtype=np.int64)
    bga = np.zeros(r + 2, dtype=np.int64)
    bx: cython.longlong[:] = bxa
    bg: cython.longlong[:] = bga
    m: cython.Py_ssize_t = 1
    bx[0] = 0
    bg[0] = U
    nf: cython.Py_ssize_t = 0
    s: cython.Py_ssize_t
    lo: cython.Py_ssize_t
    hi: cython.Py_ssize_t
    mid: cython.Py_ssize_t
    i: cython.Py_ssize_t
    j: cython.Py_ssize_t
    k: cython.Py_ssize_t
    src: cython.Py_ssize_t
    shift: cython.Py_ssize_t
    t: cython.Py_ssize_t
    x: cython.longlong
    y: cython.longlong
    left: cython.longlong
    right: cython.longlong
    for s in range(r):
        x = sx[s]
        y = sy[s]
        FS[s] = nf
        lo = 0
        hi = m - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if bx[mid] <= x:
                lo = mid
            else:
                hi = mid - 1
        i = lo
        if bg[i] <= y:
            continue
        j = i
        left = x
        while j < m and bg[j] > y:
            right = bx[j + 1] if j + 1 < m else U
            X1[nf] = left
            X2[nf] = right
            Y1[nf] = y
            Y2[nf] = bg[j]
            OW[nf] = s
            nf += 1
            left = right
            j += 1
        FC[s] = nf - FS[s]
        # splice: keep [0, k), write (x, y) at k, move [src, m) to k + 1
        k = i + 1 if bx[i] < x else i
        src = j + 1 if (j < m and bg[j] == y) else j
        shift = k + 1 - src
        if shift > 0:
            t = m - 1
            while t >= src:
                bx[t + shift] = bx[t]
                bg[t + shift] = bg[t]
                t -= 1
        elif shift < 0:
            for t in range(src, m):
                bx[t + shift] = bx[t]
                bg[t + shift] = bg[t]
        bx[k] = x
        bg[k] = y
        m += shift
    FS[r] = nf
    for i in range(m):
        if bg[i] > 0:
            X1[nf] = bx[i]
            X2[nf] = bx[i + 1] if i + 1 < m else U
            Y1[nf] = 0
            Y2[nf] = bg[i]
            OW[nf] = -1
            nf += 1
    FC[r] = nf - FS[r]
    return x1a[:nf], x2a[:nf], y1a[:nf], y2a[:nf], owa[:nf], fsa, fca


def owner_sweep(sx: cython.longlong[:], syr: cython.longlong[:], sprio: cython.longlong[:],
                qx: cython.longlong[:], qyr: cython.longlong[:]):
    """First-processed sample whose xy-quadrant holds each query.

    Samples and queries both arrive sorted by x.  ``syr`` is a sample's
    1-based y-rank, ``qyr`` the count of sample y-values <= the query's y.
    A prefix-minimum Fenwick tree over y-ranks holds processing order.
    Returns the owning sample's ``sprio`` value per query, or -1.
    """
    r: cython.Py_ssize_t = sx.shape[0]
    nq: cython.Py_ssize_t = qx.shape[0]
    INF: cython.longlong = r + 1
    fen = np.full(r + 1, INF, dtype=np.int64)
    F: cython.longlong[:] = fen
    out = np.empty(nq, dtype=np.int64)
    O: cython.longlong[:] = out
    a: cython.Py_ssize_t = 0
    q: cython.Py_ssize_t
    p: cython.longlong
    best: cython.longlong
    v: cython.longlong
    for q in range(nq):
        while a < r and sx[a] <= qx[q]:
            p = syr[a]
            v = sprio[a]
            while p <= r:
                if v < F[p]:
                    F[p] = v
                p += p & (-p)
            a += 1
        best = INF
        p = qyr[q]
        while p > 0:
            if F[p] < best:
                best = F[p]
            p -= p & (-p)
        O[q] = best if best < INF else -1
    return out


def face_bisect(fx1: cython.longlong[:], fstart: cython.longlong[:], fcount: cython.longlong[:],
                owner: cython.longlong[:], qx: cython.longlong[:]):
    """Face index holding each query, given the owning sample (or -1)."""
    nq: cython.Py_ssize_t = qx.shape[0]
    r: cython.Py_ssize_t = fstart.shape[0] - 1
    out = np.empty(nq, dtype=np.int64)
    O: cython.longlong[:] = out
    q: cython.Py_ssize_t
    o: cython.longlong
    lo: cython.longlong
    hi: cython.longlong
    mid: cython.longlong
    for q in range(nq):
        o = owner[q]
        if o < 0:
            o = r
        lo = fstart[o]
        hi = lo + fcount[o] - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if fx1[mid] <= qx[q]:
                lo = mid
            else:
                hi = mid - 1
        O[q] = lo
    return out


@cython.cfunc
@cython.exceptval(check=False)
def _last_le(keys: cython.longlong[:], lo: cython.longlong, hi: cython.longlong,
             v: cython.longlong) -> cython.longlong:
    # last index in [lo, hi) with keys[idx] <= v; keys ascending, keys[lo] <= v
    mid: cython.longlong
    hi -= 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if keys[mid] <= v:
            lo = mid
        else:
            hi = mid - 1
    return lo


def conflict_bfs(px: cython.longlong[:], py: cython.longlong[:], pz: cython.longlong[:],
                 seed: cython.longlong[:],
                 x1: cython.longlong[:], x2: cython.longlong[:],
                 y1: cython.longlong[:], y2: cython.longlong[:], top: cython.longlong[:],
                 rstart: cython.longlong[:], rend: cython.longlong[:],
                 by_y: cython.longlong[:],
                 ustart: cython.longlong[:], uend: cython.longlong[:], U: cython.longlong):
    """Cells whose top-upper-right corner dominates each point.

    Cells are indexed in (x1, y1) order; ``by_y`` lists them in (y1, x1)
    order.  ``rstart:rend`` is the run of cells whose
    x1 equals a cell's x2 (right neighbours, sorted by y1); ``ustart:uend``
    the run in ``by_y`` whose y1 equals its y2.  Each point's search starts
    at ``seed``, the cell holding its xy-projection, and walks right/up.
    Heights never increase along either direction, so each neighbour run is
    cut at the first cell that is too low.

    Returns (cell per pair, point per pair, conflict tests made).
    """
    n: cython.Py_ssize_t = px.shape[0]
    nc: cython.Py_ssize_t = x1.shape[0]
    cap: cython.Py_ssize_t = 2 * n + 16
    pc = np.empty(cap, dtype=np.int64)
    pp = np.empty(cap, dtype=np.int64)
    PC: cython.longlong[:] = pc
    PP: cython.longlong[:] = pp
    stamp_arr = np.full(nc, -1, dtype=np.int64)
    ST: cython.longlong[:] = stamp_arr
    queue_arr = np.empty(nc, dtype=np.int64)
    Q: cython.longlong[:] = queue_arr
    ybuf = np.empty(nc, dtype=np.int64)
    YB: cython.longlong[:] = ybuf
    xbuf = np.empty(nc, dtype=np.int64)
    XB: cython.longlong[:] = xbuf
    tests: cython.longlong = 0
    npairs: cython.Py_ssize_t = 0
    s: cython.Py_ssize_t
    head: cython.Py_ssize_t
    tail: cython.Py_ssize_t
    c: cython.longlong
    d: cython.longlong
    t: cython.longlong
    a: cython.longlong
    sx: cython.longlong
    sy: cython.longlong
    sz: cython.longlong
    y0: cython.longlong
    x0: cython.longlong
    # key arrays for bisecting a neighbour run
    for t in range(nc):
        YB[t] = y1[t]
        XB[t] = x1[by_y[t]]
    for s in range(n):
        c = seed[s]
        sx = px[s]
        sy = py[s]
        sz = pz[s]
        if top[c] <= sz:
            continue
        ST[c] = s
        Q[0] = c
        head = 0
        tail = 1
        while head < tail:
            c = Q[head]
            head += 1
            if npairs == cap:
                cap *= 2
                pc = np.concatenate((pc, np.empty(cap - npairs, dtype=np.int64)))
                pp = np.concatenate((pp, np.empty(cap - npairs, dtype=np.int64)))
                PC = pc
                PP = pp
            PC[npairs] = c
            PP[npairs] = s
            npairs += 1
            if x2[c] < U and rstart[c] < rend[c]:
                y0 = y1[c] if y1[c] > sy else sy
                t = _last_le(YB, rstart[c], rend[c], y0)
                while t < rend[c] and y1[t] < y2[c]:
                    tests += 1
                    if top[t] <= sz:
                        break
                    if ST[t] != s:
                        ST[t] = s
                        Q[tail] = t
                        tail += 1
                    t += 1
            if y2[c] < U and ustart[c] < uend[c]:
                x0 = x1[c] if x1[c] > sx else sx
                a = _last_le(XB, ustart[c], uend[c], x0)
                while a < uend[c]:
                    d = by_y[a]
                    if x1[d] >= x2[c]:
                        break
                    tests += 1
                    if top[d] <= sz:
                        break
                    if ST[d] != s:
                        ST[d] = s
                        Q[tail] = d
                        tail += 1
                    a += 1
    return pc[:npairs], pp[:npairs], tests


# ---------------------------------------------------------------------------
# offline dominance helpers


def group_cumcount(order: cython.longlong[:], group: cython.longlong[:], ngroups: cython.longlong):
    """Rank of each element within its group, following ``order``."""
    n: cython.Py_ssize_t = order.shape[0]
    cnt_arr = np.zeros(ngroups, dtype=np.int64)
    C: cython.longlong[:] = cnt_arr
    out = np.zeros(group.shape[0], dtype=np.int64)
    O: cython.longlong[:] = out
    i: cython.Py_ssize_t
    e: cython.longlong
    g: cython.longlong
    for i in range(n):
        e = order[i]
        g = group[e]
        O[e] = C[g]
        C[g] += 1
    return out


def entry_ranks(order: cython.longlong[:], ent_start: cython.longlong[:], ent_len: cython.longlong[:],
                ent_cell: cython.longlong[:], ncell: cython.longlong):
    """Per-entry rank inside its cell, elements visited in ``order``.

    Entries of element ``e`` are ``ent_start[e] : ent_start[e] + ent_len[e]``.
    """
    n: cython.Py_ssize_t = order.shape[0]
    cnt_arr = np.zeros(ncell, dtype=np.int64)
    C: cython.longlong[:] = cnt_arr
    out = np.zeros(ent_cell.shape[0], dtype=np.int64)
    O: cython.longlong[:] = out
    i: cython.Py_ssize_t
    j: cython.longlong
    e: cython.longlong
    c: cython.longlong
    for i in range(n):
        e = order[i]
        for j in range(ent_start[e], ent_start[e] + ent_len[e]):
            c = ent_cell[j]
            O[j] = C[c]
            C[c] += 1
    return out


def bucket(keys: cython.longlong[:], nb: cython.longlong):
    """Stable counting sort: (order, offsets) with bucket b at offsets[b]:offsets[b+1]."""
    n: cython.Py_ssize_t = keys.shape[0]
    off = np.zeros(nb + 1, dtype=np.int64)
    F: cython.longlong[:] = off
    out = np.empty(n, dtype=np.int64)
    O: cython.longlong[:] = out
    pos_arr = np.empty(nb, dtype=np.int64)
    P: cython.longlong[:] = pos_arr
    i: cython.Py_ssize_t
    b: cython.Py_ssize_t
    for i in range(n):
        F[keys[i] + 1] += 1
    for b in range(nb):
        F[b + 1] += F[b]
        P[b] = F[b]
    for i in range(n):
        O[P[keys[i]]] = i
        P[keys[i]] += 1
    return out, off


@cython.cfunc
@cython.inline
@cython.exceptval(check=False)
def _guard_ok(qw: cython.ulonglong, pw: cython.ulonglong, H: cython.ulonglong) -> cython.bint:
    # fields of qw carry their guard bit; no field borrows iff all q >= p
    return (((qw - pw) & MASK64) & H) == H


def cell_scan(loff: cython.longlong[:], lword: cython.ulonglong[:], lelem: cython.longlong[:],
              lkey: cython.longlong[:],
              qoff: cython.longlong[:], qword: cython.ulonglong[:], qelem: cython.longlong[:],
              qkey: cython.longlong[:],
              H: cython.ulonglong, any_only: cython.bint, exclude_self: cython.bint):
    """Quadratic packed dominance scan inside every cell.

    ``lword``/``qword`` hold cell-local ranks packed three to a word, the
    query words with guard bits set.  With ``any_only`` each query stops at
    its first hit.  With ``exclude_self`` pairs with equal keys are skipped.
    Returns (input element, query element) pairs; in ``any_only`` mode at
    most one pair per query.
    """
    nc: cython.Py_ssize_t = loff.shape[0] - 1
    cap: cython.Py_ssize_t = 1024
    pe = np.empty(cap, dtype=np.int64)
    qe = np.empty(cap, dtype=np.int64)
    PE: cython.longlong[:] = pe
    QE: cython.longlong[:] = qe
    k: cython.Py_ssize_t = 0
    c: cython.Py_ssize_t
    a: cython.longlong
    b: cython.longlong
    qw: cython.ulonglong
    pw: cython.ulonglong
    for c in range(nc):
        if loff[c] == loff[c + 1]:
            continue
        for a in range(qoff[c], qoff[c + 1]):
            qw = qword[a]
            if not cython.compiled:
                qw = int(qw)
            for b in range(loff[c], loff[c + 1]):
                pw = lword[b]
                if not cython.compiled:
                    pw = int(pw)
                if _guard_ok(qw, pw, H):
                    if exclude_self and lkey[b] == qkey[a]:
                        continue
                    if k == cap:
                        cap *= 2
                        pe = np.concatenate((pe, np.empty(cap - k, dtype=np.int64)))
                        qe = np.concatenate((qe, np.empty(cap - k, dtype=np.int64)))
                        PE = pe
                        QE = qe
                    PE[k] = lelem[b]
                    QE[k] = qelem[a]
                    k += 1
                    if any_only:
                        break
    return pe[:k], qe[:k]


def block_brute(x: cython.longlong[:], y: cython.longlong[:], z: cython.longlong[:],
                isq: cython.char[:], key: cython.longlong[:], block: cython.longlong,
                any_only: cython.bint, exclude_self: cython.bint):
    """All pairs i < j inside each aligned block with i an input, j a query
    and (x, y, z)[i] <= (x, y, z)[j].  Positions are the element indices."""
    n: cython.Py_ssize_t = x.shape[0]
    cap: cython.Py_ssize_t = 1024
    pe = np.empty(cap, dtype=np.int64)
    qe = np.empty(cap, dtype=np.int64)
    PE: cython.longlong[:] = pe
    QE: cython.longlong[:] = qe
    k: cython.Py_ssize_t = 0
    j: cython.Py_ssize_t
    i: cython.Py_ssize_t
    lo: cython.Py_ssize_t
    for j in range(n):
        if not isq[j]:
            continue
        lo = (j // block) * block
        for i in range(lo, j):
            if isq[i]:
                continue
            if x[i] <= x[j] and y[i] <= y[j] and z[i] <= z[j]:
                if exclude_self and key[i] == key[j]:
                    continue
                if k == cap:
                    cap *= 2
                    pe = np.concatenate((pe, np.empty(cap - k, dtype=np.int64)))
                    qe = np.concatenate((qe, np.empty(cap - k, dtype=np.int64)))
                    PE = pe
                    QE = qe
                PE[k] = i
                QE[k] = j
                k += 1
                if any_only:
                    break
    return pe[:k], qe[:k]


def dom3_sweep(order: cython.longlong[:], xr: cython.longlong[:], y: cython.longlong[:],
               isq: cython.char[:], key: cython.longlong[:],
               any_only: cython.bint, exclude_self: cython.bint):
    """3-d dominance by sweeping z with a min-y segment tree over x-ranks.

    ``order`` lists elements by (z, inputs first); ``xr`` are distinct
    x-ranks with inputs before queries on equal x, so an input is left of a
    query exactly when its x is <= the query's.  Each reported pair costs a
    root-to-leaf walk.
    """
    n: cython.Py_ssize_t = order.shape[0]
    size: cython.Py_ssize_t = 1
    while size < xr.shape[0]:
        size *= 2
    INF: cython.longlong = 0x7FFFFFFFFFFFFFFF
    tree_arr = np.full(2 * size, INF, dtype=np.int64)
    T: cython.longlong[:] = tree_arr
    who_arr = np.full(size, -1, dtype=np.int64)
    W: cython.longlong[:] = who_arr
    stack_arr = np.empty(6 * 66, dtype=np.int64)
    S: cython.longlong[:] = stack_arr
    cap: cython.Py_ssize_t = 1024
    pe = np.empty(cap, dtype=np.int64)
    qe = np.empty(cap, dtype=np.int64)
    PE: cython.longlong[:] = pe
    QE: cython.longlong[:] = qe
    k: cython.Py_ssize_t = 0
    i: cython.Py_ssize_t
    e: cython.longlong
    p: cython.longlong
    v: cython.longlong
    node: cython.longlong
    lo: cython.longlong
    span: cython.longlong
    top: cython.Py_ssize_t
    limit: cython.longlong
    qy: cython.longlong
    done: cython.bint
    for i in range(n):
        e = order[i]
        if not isq[e]:
            p = xr[e] + size
            W[xr[e]] = e
            v = y[e]
            while p >= 1 and v < T[p]:
                T[p] = v
                p >>= 1
            continue
        limit = xr[e]  # leaves [0, limit)
        qy = y[e]
        if limit == 0:
            continue
        done = False
        # walk down from the root, keeping subtrees that start inside [0, limit)
        top = 0
        S[0] = 1
        S[1] = 0
        S[2] = size
        top = 3
        while top > 0 and not done:
            top -= 3
            node = S[top]
            lo = S[top + 1]
            span = S[top + 2]
            if lo >= limit or T[node] > qy:
                continue
            if node >= size:
                if exclude_self and key[W[lo]] == key[e]:
                    continue
                if k == cap:
                    cap *= 2
                    pe = np.concatenate((pe, np.empty(cap - k, dtype=np.int64)))
                    qe = np.concatenate((qe, np.empty(cap - k, dtype=np.int64)))
                    PE = pe
                    QE = qe
                PE[k] = W[lo]
                QE[k] = e
                k += 1
                if any_only:
                    done = True
                continue
            span >>= 1
            S[top] = 2 * node + 1
            S[top + 1] = lo + span
            S[top + 2] = span
            S[top + 3] = 2 * node
            S[top + 4] = lo
            S[top + 5] = span
            top += 6
    return pe[:k], qe[:k]


# ---------------------------------------------------------------------------
# offline 2-d point location over a binary trie of x-ranks


def segment_nodes(lo: cython.longlong[:], hi: cython.longlong[:], size: cython.longlong):
    """Canonical trie nodes covering [lo[i], hi[i]] for every item i.

    Nodes use heap numbering with leaves at ``size + x``.  Returns
    (node, item) pairs in item order.
    """
    n: cython.Py_ssize_t = lo.shape[0]
    cap: cython.Py_ssize_t = 2 * n + 16
    nd = np.empty(cap, dtype=np.int64)
    it = np.empty(cap, dtype=np.int64)
    ND: cython.longlong[:] = nd
    IT: cython.longlong[:] = it
    k: cython.Py_ssize_t = 0
    i: cython.Py_ssize_t
    a: cython.longlong
    b: cython.longlong
    for i in range(n):
        a = lo[i] + size
        b = hi[i] + size + 1
        while a < b:
            if k + 2 > cap:
                cap *= 2
                nd = np.concatenate((nd, np.empty(cap - k, dtype=np.int64)))
                it = np.concatenate((it, np.empty(cap - k, dtype=np.int64)))
                ND = nd
                IT = it
            if a & 1:
                ND[k] = a
                IT[k] = i
                k += 1
                a += 1
            if b & 1:
                b -= 1
                ND[k] = b
                IT[k] = i
                k += 1
            a >>= 1
            b >>= 1
    return nd[:k], it[:k]


def pl_merge(ivoff: cython.longlong[:], lo_words: cython.ulonglong[:], hi_words: cython.ulonglong[:],
             iv_id: cython.longlong[:], qoff: cython.longlong[:], q_words: cython.ulonglong[:],
             q_id: cython.longlong[:], width: cython.longlong, out: cython.longlong[:]):
    """Stab each node's sorted queries into its sorted disjoint intervals.

    Interval endpoints and query values are packed fields of ``width`` bits;
    node ``v`` owns fields ``ivoff[v]:ivoff[v+1]`` and ``qoff[v]:qoff[v+1]``.
    Hits are written to ``out[query] = interval id``.
    """
    nn: cython.Py_ssize_t = ivoff.shape[0] - 1
    per: cython.longlong = 64 // width
    v: cython.Py_ssize_t
    i: cython.longlong
    j: cython.longlong
    qy: cython.longlong
    for v in range(nn):
        i = ivoff[v]
        if i == ivoff[v + 1]:
            continue
        for j in range(qoff[v], qoff[v + 1]):
            qy = get_field(q_words, j, width, per)
            while i < ivoff[v + 1] and get_field(hi_words, i, width, per) < qy:
                i += 1
            if i == ivoff[v + 1]:
                break
            if get_field(lo_words, i, width, per) <= qy:
                out[q_id[j]] = iv_id[i]


def maxima_sweep(order: cython.longlong[:], yr: cython.longlong[:], z: cython.longlong[:], ny: cython.longlong):
    """Maxima of distinct points visited by decreasing (x, y, z).

    ``yr`` are 1-based y-ranks with the largest y at 1, so a Fenwick prefix
    over ranks ``1..yr`` covers every earlier point with y' >= y.
    """
    n: cython.Py_ssize_t = order.shape[0]
    fen_arr = np.full(ny + 1, -1, dtype=np.int64)
    T: cython.longlong[:] = fen_arr
    out = np.zeros(n, dtype=np.int8)
    O: cython.char[:] = out
    i: cython.Py_ssize_t
    e: cython.longlong
    j: cython.longlong
    best: cython.longlong
    v: cython.longlong
    for i in range(n):
        e = order[i]
        v = z[e]
        best = -1
        j = yr[e]
        while j > 0:
            if T[j] > best:
                best = T[j]
            j -= j & -j
        O[e] = best < v
        j = yr[e]
        while j <= ny:
            if T[j] < v:
                T[j] = v
            j += j & -j
    return out


# ---------------------------------------------------------------------------
# merge tree over x with y-sorted node lists and min-z segment trees


def slab_query(ids: cython.int[:], zmin: cython.int[:], yv: cython.int[:], L: cython.longlong,
               size: cython.longlong, x1: cython.longlong, x2: cython.longlong,
               y1: cython.longlong, y2: cython.longlong, z0: cython.longlong,
               limit: cython.longlong):
    """Local indices of the points in [x1, x2] x [y1, y2] x (-inf, z0].

    Level ``v`` of ``ids`` lists the points of each aligned x-block of
    2^v leaves by increasing y (padding -1 last).  ``zmin`` holds one
    min-z segment tree of 2*size nodes per level.  ``limit`` <= 0 means
    no limit.
    """
    cap: cython.Py_ssize_t = 64
    out = np.empty(cap, dtype=np.int64)
    O: cython.longlong[:] = out
    k: cython.Py_ssize_t = 0
    stack_arr = np.empty(2 * 66, dtype=np.int64)
    S: cython.longlong[:] = stack_arr
    top: cython.Py_ssize_t
    a: cython.longlong = x1 + size
    b: cython.longlong = x2 + size + 1
    lev: cython.longlong = 0
    node: cython.longlong
    j: cython.longlong
    base: cython.longlong
    width: cython.longlong
    lo: cython.longlong
    hi: cython.longlong
    m: cython.longlong
    e: cython.longlong
    toff: cython.longlong
    sa: cython.longlong
    sb: cython.longlong
    u: cython.longlong
    side: cython.longlong
    if x1 > x2 or y1 > y2:
        return out[:0]
    while a < b and lev <= L:
        for side in range(2):
            if side == 0:
                if not (a & 1):
                    continue
                node = a
                a += 1
            else:
                if not (b & 1):
                    continue
                b -= 1
                node = b
            j = node - (size >> lev)
            width = 1 << lev
            base = lev * size + j * width
            # first position with y >= y1, first with y > y2 (padding is +inf)
            lo = base
            hi = base + width
            while lo < hi:
                m = (lo + hi) >> 1
                e = ids[m]
                if e >= 0 and yv[e] < y1:
                    lo = m + 1
                else:
                    hi = m
            sa = lo
            hi = base + width
            while lo < hi:
                m = (lo + hi) >> 1
                e = ids[m]
                if e >= 0 and yv[e] <= y2:
                    lo = m + 1
                else:
                    hi = m
            sb = lo
            if sa >= sb:
                continue
            # report positions [sa, sb) of this level with z <= z0
            toff = lev * 2 * size
            sa = sa - lev * size + size
            sb = sb - lev * size + size
            while sa < sb:
                for u in range(2):
                    if u == 0:
                        if not (sa & 1):
                            continue
                        node = sa
                        sa += 1
                    else:
                        if not (sb & 1):
                            continue
                        sb -= 1
                        node = sb
                    if zmin[toff + node] > z0:
                        continue
                    S[0] = node
                    top = 1
                    while top > 0:
                        top -= 1
                        node = S[top]
                        if zmin[toff + node] > z0:
                            continue
                        if node >= size:
                            if k == cap:
                                cap *= 2
                                out = np.concatenate((out, np.empty(cap - k, dtype=np.int64)))
                                O = out
                            O[k] = ids[lev * size + node - size]
                            k += 1
                            if limit > 0 and k >= limit:
                                return out[:k]
                            continue
                        S[top] = 2 * node + 1
                        S[top + 1] = 2 * node
                        top += 2
                sa >>= 1
                sb >>= 1
        a >>= 1
        b >>= 1
        lev += 1
    return out[:k]


def slab_min(ids: cython.int[:], zmin: cython.int[:], yv: cython.int[:], L: cython.longlong,
             size: cython.longlong, x1: cython.longlong, x2: cython.longlong,
             y1: cython.longlong, y2: cython.longlong):
    """Smallest z in [x1, x2] x [y1, y2] over the slab-tree layout, or -1."""
    INF: cython.longlong = 0x7FFFFFFF
    best: cython.longlong = INF
    a: cython.longlong = x1 + size
    b: cython.longlong = x2 + size + 1
    lev: cython.longlong = 0
    node: cython.longlong
    j: cython.longlong
    base: cython.longlong
    width: cython.longlong
    lo: cython.longlong
    hi: cython.longlong
    m: cython.longlong
    e: cython.longlong
    toff: cython.longlong
    sa: cython.longlong
    sb: cython.longlong
    side: cython.longlong
    if x1 > x2 or y1 > y2:
        return -1
    while a < b and lev <= L:
        for side in range(2):
            if side == 0:
                if not (a & 1):
                    continue
                node = a
                a += 1
            else:
                if not (b & 1):
                    continue
                b -= 1
                node = b
            j = node - (size >> lev)
            width = 1 << lev
            base = lev * size + j * width
            lo = base
            hi = base + width
            while lo < hi:
                m = (lo + hi) >> 1
                e = ids[m]
                if e >= 0 and yv[e] < y1:
                    lo = m + 1
                else:
                    hi = m
            sa = lo
            hi = base + width
            while lo < hi:
                m = (lo + hi) >> 1
                e = ids[m]
                if e >= 0 and yv[e] <= y2:
                    lo = m + 1
                else:
                    hi = m
            sb = lo
            toff = lev * 2 * size
            sa = sa - lev * size + size
            sb = sb - lev * size + size
            while sa < sb:
                if sa & 1:
                    if zmin[toff + sa] < best:
                        best = zmin[toff + sa]
                    sa += 1
                if sb & 1:
                    sb -= 1
                    if zmin[toff + sb] < best:
                        best = zmin[toff + sb]
                sa >>= 1
                sb >>= 1
        a >>= 1
        b >>= 1
        lev += 1
    return -1 if best == INF else best
