import hashlib
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vivc.errors import DelayTooLarge
from vivc.hashing import TAG_STEP, count_hashes
from vivc.seq_hash import brent, check_state, cycle_experiment, iterate, step, truncated_step

states = st.binary(min_size=32, max_size=32)

# sha256sum over b"VIVC/step" || 32 zero bytes
STEP_ZERO = "a588a3cec5547425050b1631bc0c98863e3d5cb40e951915165966d3ec38164c"


def test_step_pinned_vector():
    assert step(bytes(32)).hex() == STEP_ZERO


@given(states)
def test_step_deterministic(s):
    assert step(s) == step(s)
    assert len(step(s)) == 32


@given(states)
def test_three_steps_match_iterate(s):
    assert step(step(step(s))) == iterate(s, 3)


@given(states)
def test_iterate_boundaries(s):
    assert iterate(s, 0) == s
    assert iterate(s, 1) == step(s)


@settings(max_examples=30, deadline=None)
@given(states, st.integers(0, 2**10), st.integers(0, 2**10))
def test_composition_law(s, a, b):
    assert iterate(s, a + b) == iterate(iterate(s, a), b)


def test_composition_law_up_to_2_12():
    rng = random.Random(7)
    for _ in range(10):
        s = rng.randbytes(32)
        a = rng.randrange(2**12)
        b = rng.randrange(2**12 - a + 1)
        assert iterate(s, a + b) == iterate(iterate(s, a), b)


def test_brute_force_composition_oracle():
    s = bytes(range(32))
    oracle = s
    for _ in range(50):
        oracle = hashlib.sha256(b"VIVC/step" + oracle).digest()
    assert iterate(s, 50) == oracle


def test_delay_cap():
    with pytest.raises(DelayTooLarge):
        iterate(bytes(32), 11, t_max=10)
    with pytest.raises(DelayTooLarge):
        iterate(bytes(32), 2**32 + 1)


@pytest.mark.parametrize("n", [0, 1, 7, 1000])
def test_counter_reports_exactly_n(n, raw_sha_calls):
    with count_hashes() as hc:
        iterate(bytes(32), n)
    assert hc[TAG_STEP] == n
    assert raw_sha_calls["n"] == n


def test_check_state():
    assert check_state(bytes(32)) == bytes(32)
    with pytest.raises(ValueError):
        check_state(bytes(31))


def rho_bruteforce(f, x0):
    seen = {}
    v, i = x0, 0
    while v not in seen:
        seen[v] = i
        v = f(v)
        i += 1
    return seen[v], i - seen[v]


def test_brent_matches_bruteforce_on_truncated_hash():
    f = truncated_step(12)
    rng = random.Random(3)
    for _ in range(30):
        x0 = rng.randrange(2**12)
        assert brent(f, x0) == rho_bruteforce(f, x0)


def test_constant_function_cycle_of_one():
    tail, cycle = brent(lambda v: 5, 5)
    assert (tail, cycle) == (0, 1)
    tail, cycle = brent(lambda v: 5, 9)
    assert (tail, cycle) == (1, 1)


@pytest.mark.parametrize("bits,trials", [(16, 200), (8, 500)])
def test_cycle_statistics_within_factor_4(bits, trials):
    stats = cycle_experiment(bits, trials, seed=1)
    expected = math.sqrt(math.pi * 2**bits / 2)
    assert expected / 4 <= stats.mean_rho <= expected * 4
    assert stats.stderr > 0
    # same detector, brute-forced independently
    f = truncated_step(bits)
    rng = random.Random(1)
    rhos = [sum(rho_bruteforce(f, rng.randrange(2**bits))) for _ in range(trials)]
    assert sum(rhos) / trials == pytest.approx(stats.mean_rho)


def test_cycle_experiment_range():
    with pytest.raises(ValueError):
        cycle_experiment(25, 10)
