"""The numba kernels and their numpy twins must agree bit for bit."""
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ap3lab import kernels
from ap3lab.kernels import IMPLEMENTATIONS, cyclic_words, pack_bits, roots_of_unity, unpack_bits
from oracles import count_pairs

PRIMES = [5, 7, 11, 13, 61, 67, 127, 131, 257]


@st.composite
def indicators(draw):
    p = draw(st.sampled_from(PRIMES))
    bits = draw(st.lists(st.booleans(), min_size=p, max_size=p))
    return p, np.array(bits, dtype=bool)


@settings(max_examples=100, deadline=None)
@given(indicators())
def test_pack_unpack_round_trip(case):
    p, ind = case
    assert np.array_equal(unpack_bits(pack_bits(ind), p), ind)


@settings(max_examples=100, deadline=None)
@given(indicators())
def test_count_kernels_agree_with_oracle(case):
    p, ind = case
    words, dwords = pack_bits(ind), cyclic_words(ind)
    expected = count_pairs(p, np.flatnonzero(ind))
    for fn in IMPLEMENTATIONS["count_3aps_bitset"]:
        assert int(fn(words, dwords, p)) == expected


@settings(max_examples=100, deadline=None)
@given(indicators())
def test_longest_ap_kernels_agree(case):
    p, ind = case
    assume(not ind.all())  # the full set is handled before the kernel
    a = IMPLEMENTATIONS["longest_ap_scan"][0](ind, p)
    b = IMPLEMENTATIONS["longest_ap_scan"][1](ind, p)
    assert tuple(int(x) for x in a) == tuple(int(x) for x in b)


@pytest.mark.parametrize("p", [5, 13, 101, 257])
def test_dft_kernels_agree(p, rng):
    f = rng.random(p)
    roots = roots_of_unity(p)
    a = IMPLEMENTATIONS["dft_direct_kernel"][0](f, roots)
    b = IMPLEMENTATIONS["dft_direct_kernel"][1](f, roots)
    assert np.allclose(a, b, rtol=0, atol=1e-10)


@pytest.mark.parametrize("p", [7, 101, 1009])
def test_bohr_kernels_agree(p, rng):
    for _ in range(20):
        k = int(rng.integers(0, 4))
        freqs = rng.integers(0, p, size=k).astype(np.int64)
        dmax = int(rng.integers(0, p // 2))
        a = IMPLEMENTATIONS["bohr_scan"][0](freqs, p, dmax)
        b = IMPLEMENTATIONS["bohr_scan"][1](freqs, p, dmax)
        assert int(a) == int(b)


def test_sequential_kernels_match_interpreted_twins():
    # numba-compiled and plain-Python executions of the same source
    for fn in (kernels.exhaustive_partition,):
        compiled = fn(11, 5, 0, 121, 10)
        interp = fn.py_func(11, 5, 0, 121, 10)
        assert int(compiled[0]) == int(interp[0]) and int(compiled[1]) == int(interp[1])
        assert np.array_equal(compiled[2][: int(compiled[1])], interp[2][: int(interp[1])])
    rng = np.random.default_rng(3)
    p, s, n = 31, 10, 400
    members = np.sort(rng.choice(p, size=s, replace=False)).astype(np.int64)
    temps = np.geomspace(4, 0.1, n)
    rem, add, uni = rng.integers(0, s, n), rng.integers(0, p - s, n), rng.random(n)
    a = kernels.anneal_loop(p, members.copy(), temps, rem, add, uni, 50)
    b = kernels.anneal_loop.py_func(p, members.copy(), temps, rem, add, uni, 50)
    assert int(a[0]) == int(b[0]) and int(a[1]) == int(b[1])
    assert np.array_equal(np.sort(a[2]), np.sort(b[2]))
    assert int(a[4]) == 0 and int(b[4]) == 0


def test_cli_output_identical_across_backends(tmp_path):
    import os
    import subprocess
    import sys
    from pathlib import Path

    data = Path(__file__).parent / "data"
    cases = [
        ["count", "--set", str(data / "set101.txt")],
        ["search", "--p", "13", "--s", "6", "--cap", "20"],
        ["search", "--p", "31", "--s", "10", "--method", "anneal", "--seed", "2", "--steps", "2000"],
        ["bohr", "--set", str(data / "set101.txt"), "--threshold", "15", "--eps", "0.2", "--length", "5"],
    ]
    for argv in cases:
        outs = []
        for backend in ("numba", "numpy"):
            env = {**os.environ, "AP3LAB_BACKEND": backend}
            r = subprocess.run([sys.executable, "-m", "ap3lab", *argv], env=env, capture_output=True, text=True, check=True)
            outs.append(r.stdout)
        assert outs[0] == outs[1], argv
