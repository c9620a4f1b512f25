"""Hot O(p^2) kernels.

Every kernel exists twice: a numba version and a pure-numpy version. The
module-level names (``count_3aps_bitset``, ``longest_ap_scan``, ...) are bound
to whichever path ``_backend`` selected. Sequential search loops
(``exhaustive_partition``, ``anneal_loop``) have no useful vectorised form;
their numpy path is the same source run by the interpreter (``.py_func``).

Bit-vectors are little-endian uint64 words: residue ``r`` lives in bit
``r & 63`` of word ``r >> 6``. Bits at positions >= p are always zero.
"""
from __future__ import annotations

import math

import numpy as np

from ._backend import USE_NUMBA, njit

WORD = 64


# ---------------------------------------------------------------------------
# packing helpers (not hot; numpy only)

def pack_bits(indicator: np.ndarray) -> np.ndarray:
    ind = np.asarray(indicator, dtype=bool)
    nbytes = -(-ind.size // 8)
    nbytes = -(-nbytes // 8) * 8
    raw = np.zeros(nbytes, dtype=np.uint8)
    packed = np.packbits(ind, bitorder="little")
    raw[: packed.size] = packed
    return raw.view("<u8").astype(np.uint64)


def unpack_bits(words: np.ndarray, p: int) -> np.ndarray:
    raw = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, bitorder="little")[:p].astype(bool)


def cyclic_words(indicator: np.ndarray) -> np.ndarray:
    """Pack the cyclic extension of ``indicator`` so any 64-bit window
    starting below p can be read without wrap-around logic."""
    p = indicator.size
    idx = np.arange(2 * p + 2 * WORD) % p
    return pack_bits(np.asarray(indicator, dtype=bool)[idx])


# ---------------------------------------------------------------------------
# 3AP count: rotate-AND-popcount per difference m

@njit
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit
def _window64(dwords, q):
    w = q >> 6
    o = q & 63
    if o == 0:
        return dwords[w]
    return (dwords[w] >> np.uint64(o)) | (dwords[w + 1] << np.uint64(64 - o))


@njit
def _count_bitset_nb(words, dwords, p):
    nw = words.shape[0]
    total = 0
    for m in range(p):
        m2 = (2 * m) % p
        for k in range(nw):
            a = words[k]
            if a == 0:
                continue
            x = a & _window64(dwords, 64 * k + m) & _window64(dwords, 64 * k + m2)
            total += int(_popcount64(x))
    return total


def _windows_np(dwords: np.ndarray, q: np.ndarray) -> np.ndarray:
    w = q >> 6
    o = (q & 63).astype(np.uint64)
    lo = dwords[w] >> o
    hi = np.where(o == 0, np.uint64(0), dwords[w + 1] << ((np.uint64(64) - o) & np.uint64(63)))
    return lo | hi


def _count_bitset_np(words, dwords, p, block_words=1 << 20):
    nw = words.shape[0]
    base = np.arange(nw, dtype=np.int64) * WORD
    live = words != 0
    base, words = base[live], words[live]
    if words.size == 0:
        return 0
    step = max(1, block_words // words.size)
    total = 0
    for lo in range(0, p, step):
        m = np.arange(lo, min(p, lo + step), dtype=np.int64)[:, None]
        x = words & _windows_np(dwords, base + m) & _windows_np(dwords, base + (2 * m) % p)
        total += int(np.bitwise_count(x).sum())
    return total


# ---------------------------------------------------------------------------
# longest AP: for each step walk the full cycle once, starting just after a gap

@njit
def _longest_ap_nb(ind, p):
    best_len, best_step, best_start = 0, 0, 0
    for step in range(1, (p - 1) // 2 + 1):
        # find a residue not in S; caller guarantees one exists
        z = 0
        while ind[z]:
            z = (z + step) % p
        run, run_start = 0, 0
        x = z
        for _ in range(p):
            x += step
            if x >= p:
                x -= p
            if ind[x]:
                if run == 0:
                    run_start = x
                run += 1
                if run > best_len or (run == best_len and step == best_step and run_start < best_start):
                    best_len, best_step, best_start = run, step, run_start
            else:
                run = 0
    return best_start, best_step, best_len


def _longest_ap_np(ind, p):
    ind = np.asarray(ind, dtype=bool)
    best_len, best_step, best_start = 0, 0, 0
    j = np.arange(1, p + 1, dtype=np.int64)
    z0 = int(np.flatnonzero(~ind)[0])
    for step in range(1, (p - 1) // 2 + 1):
        pos = (z0 + step * j) % p
        seq = ind[pos].astype(np.int8)
        edges = np.diff(np.concatenate(([0], seq, [0])))
        starts = np.flatnonzero(edges == 1)
        if starts.size == 0:
            continue
        ends = np.flatnonzero(edges == -1)
        lengths = ends - starts
        top = int(lengths.max())
        if top > best_len:
            cand = pos[starts[lengths == top]]
            best_len, best_step, best_start = top, step, int(cand.min())
    return best_start, best_step, best_len


# ---------------------------------------------------------------------------
# direct DFT: coeffs[a] = sum_n f[n] * exp(2 pi i (a n mod p) / p)

def roots_of_unity(p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(p) / p)


@njit
def _dft_direct_nb(f, roots):
    p = f.shape[0]
    out = np.zeros(p, dtype=np.complex128)
    nz = np.flatnonzero(f)
    for a in range(p):
        acc = 0j
        for t in range(nz.shape[0]):
            n = nz[t]
            acc += f[n] * roots[(a * n) % p]
        out[a] = acc
    return out


def _dft_direct_np(f, roots, block=256):
    p = f.shape[0]
    nz = np.flatnonzero(f)
    vals = f[nz].astype(np.complex128)
    out = np.empty(p, dtype=np.complex128)
    for a0 in range(0, p, block):
        a = np.arange(a0, min(p, a0 + block), dtype=np.int64)
        out[a0 : a0 + a.size] = roots[np.outer(a, nz) % p] @ vals
    return out


# ---------------------------------------------------------------------------
# Bohr scan: smallest n in [1, p-1] with min(a n mod p, p - a n mod p) <= dmax

@njit
def _bohr_scan_nb(freqs, p, dmax):
    k = freqs.shape[0]
    for n in range(1, p):
        ok = True
        for i in range(k):
            r = (freqs[i] * n) % p
            if min(r, p - r) > dmax:
                ok = False
                break
        if ok:
            return n
    return -1


def _bohr_scan_np(freqs, p, dmax):
    n = np.arange(1, p, dtype=np.int64)
    ok = np.ones(p - 1, dtype=bool)
    for a in freqs:
        r = (int(a) * n) % p
        ok &= np.minimum(r, p - r) <= dmax
    hits = np.flatnonzero(ok)
    return int(n[hits[0]]) if hits.size else -1


# ---------------------------------------------------------------------------
# incremental 3AP deltas for search loops
#
# With T' = T + {x} and f its indicator, the ordered progressions through x are
#   2 * #{b in T' : 2b - x in T'} + #{a in T' : 2x - a in T'} - 2
# (inclusion-exclusion over which slot holds x; any two slots equal to x force
# the third, p odd).

@njit
def _through(f, members, nmem, x, p):
    na = 0
    nb = 0
    for t in range(nmem):
        b = members[t]
        na += f[(2 * b - x) % p]
        nb += f[(2 * x - b) % p]
    return 2 * na + nb - 2


@njit
def _full_count(f, members, nmem, p):
    inv2 = (p + 1) // 2
    total = 0
    for i in range(nmem):
        for j in range(nmem):
            total += f[((members[i] + members[j]) * inv2) % p]
    return total


@njit
def exhaustive_partition(p, s, first, bound, cap):
    """Enumerate s-subsets with smallest element ``first`` in lexicographic
    order, pruning any prefix whose count already exceeds ``bound``.

    Returns (best, n_best, buf, nodes): buf rows are the first ``cap``
    minimizers, lexicographic.
    """
    buf = np.zeros((cap, s), dtype=np.int64)
    f = np.zeros(p, dtype=np.int64)
    c = np.zeros(s, dtype=np.int64)
    partial = np.zeros(s + 1, dtype=np.int64)
    best = bound
    n_best = 0
    nodes = 0
    c[0] = first
    f[first] = 1
    partial[1] = 1
    nodes += 1
    if s == 1:
        if 1 <= best:
            buf[0, 0] = first
            return 1, 1, buf, nodes
        return best, 0, buf, nodes
    k = 1
    c[1] = first + 1
    while True:
        if c[k] <= p - (s - k):
            x = c[k]
            f[x] = 1
            cnt = partial[k] + _through(f, c, k + 1, x, p)
            nodes += 1
            # every remaining element adds at least its trivial progression
            if cnt + (s - k - 1) > best:
                f[x] = 0
                c[k] += 1
                continue
            partial[k + 1] = cnt
            if k + 1 == s:
                if cnt < best:
                    best = cnt
                    n_best = 0
                if n_best < cap:
                    buf[n_best, :] = c
                n_best += 1
                f[x] = 0
                c[k] += 1
            else:
                k += 1
                c[k] = c[k - 1] + 1
        else:
            k -= 1
            if k < 1:
                break
            f[c[k]] = 0
            c[k] += 1
    return best, n_best, buf, nodes


@njit
def anneal_loop(p, members, temps, rem_idx, add_idx, uniforms, check_every):
    """Metropolis single-swap annealing on the exact 3AP count.

    ``members`` is modified in place. Returns (energy, best_energy,
    best_members, accepted, mismatches).
    """
    s = members.shape[0]
    f = np.zeros(p, dtype=np.int64)
    for t in range(s):
        f[members[t]] = 1
    outside = np.empty(p - s, dtype=np.int64)
    j = 0
    for r in range(p):
        if f[r] == 0:
            outside[j] = r
            j += 1
    energy = _full_count(f, members, s, p)
    best = energy
    best_members = members.copy()
    accepted = 0
    mismatches = 0
    steps = temps.shape[0]
    if s == 0 or s == p:
        return energy, best, best_members, accepted, mismatches
    for t in range(steps):
        i = rem_idx[t]
        jj = add_idx[t]
        r = members[i]
        a = outside[jj]
        d_rem = _through(f, members, s, r, p)
        f[r] = 0
        members[i] = a
        f[a] = 1
        d_add = _through(f, members, s, a, p)
        de = d_add - d_rem
        if de <= 0 or uniforms[t] < math.exp(-de / temps[t]):
            energy += de
            outside[jj] = r
            accepted += 1
            if energy < best:
                best = energy
                best_members[:] = members
        else:
            f[a] = 0
            f[r] = 1
            members[i] = r
        if check_every > 0 and (t + 1) % check_every == 0:
            if _full_count(f, members, s, p) != energy:
                mismatches += 1
    return energy, best, best_members, accepted, mismatches


# ---------------------------------------------------------------------------
# backend binding

if USE_NUMBA:
    count_3aps_bitset = _count_bitset_nb
    longest_ap_scan = _longest_ap_nb
    dft_direct_kernel = _dft_direct_nb
    bohr_scan = _bohr_scan_nb
else:
    count_3aps_bitset = _count_bitset_np
    longest_ap_scan = _longest_ap_np
    dft_direct_kernel = _dft_direct_np
    bohr_scan = _bohr_scan_np

# both paths, for cross-checks and benchmarks (on the numpy backend the
# "_nb" entries are the same source, uncompiled)
IMPLEMENTATIONS = {
    "count_3aps_bitset": (_count_bitset_nb, _count_bitset_np),
    "longest_ap_scan": (_longest_ap_nb, _longest_ap_np),
    "dft_direct_kernel": (_dft_direct_nb, _dft_direct_np),
    "bohr_scan": (_bohr_scan_nb, _bohr_scan_np),
}
