import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mis_lab.errors import BadWeights, InvalidSpec, TargetOutOfRange
from mis_lab.sft2d import (Sft2dSpec, block_gluing_probe, build_strip, preset_spec, frame_count_bruteforce,
                           frame_count_empirical, mix_2d, pattern_count_2d, sft_boundary_complexity,
                           sft_realize_t, strip_entropy)

LOG_G = math.log((1 + math.sqrt(5)) / 2)


def test_empty_language_rejected():
    with pytest.raises(InvalidSpec):
        Sft2dSpec.from_strings(2, ["0110"])


def test_no_vertical_pair_strip_matrices():
    spec = preset_spec("no_vertical_pair")
    v = build_strip(spec, 1, 1)
    h = build_strip(spec, 2, 1)
    assert [list(r) for r in v.transition] == [[1, 1], [1, 0]]
    assert [list(r) for r in h.transition] == [[1, 1], [1, 1]]
    assert float(strip_entropy(spec, 1, 1).mid) == pytest.approx(LOG_G, abs=1e-12)
    assert float(strip_entropy(spec, 2, 1).mid) == pytest.approx(math.log(2), abs=1e-12)


def test_checkerboard_strip_alternates():
    v = build_strip(preset_spec("checkerboard"), 1, 1)
    assert [list(r) for r in v.transition] == [[0, 1], [1, 0]]


def test_full_shift_strip_rate():
    spec = Sft2dSpec.full(2)
    for i in (1, 2, 3):
        assert float(strip_entropy(spec, 1, i).mid) / i == pytest.approx(math.log(2))


@pytest.mark.parametrize("name", ["sparse_ones", "no_vertical_pair", "diagonal_ones", "even_parity"])
def test_strip_rates_nonincreasing(name):
    spec = preset_spec(name)
    for direction in (1, 2):
        rates = [float(strip_entropy(spec, direction, i).mid) / i for i in (1, 2, 3)]
        assert all(a >= b - 1e-12 for a, b in zip(rates, rates[1:]))


def test_diagonal_and_parity_frame_counts():
    a = [None, 2, 3]
    for k in range(3, 13):
        a.append(a[-1] + a[-2])
    e4, e5 = preset_spec("diagonal_ones"), preset_spec("even_parity")
    for m in range(1, 7):
        for n in range(1, 7):
            assert frame_count_empirical(e4, m, n, 1) == a[m + n - 1]
            assert frame_count_empirical(e5, m, n, 1) == 2 ** (m + n - 1)


def test_checkerboard_has_two_global_patterns():
    spec = preset_spec("checkerboard")
    assert {pattern_count_2d(spec, m, n) for m in range(1, 5) for n in range(1, 5)} == {2}


specs = st.frozensets(st.tuples(*[st.integers(0, 1)] * 4), min_size=4)


@given(specs, st.integers(1, 2), st.integers(1, 2), st.integers(1, 2))
def test_frame_dp_matches_bruteforce(allowed, m, n, i):
    try:
        spec = Sft2dSpec(2, allowed)
    except InvalidSpec:
        return
    assert frame_count_empirical(spec, m, n, i) == frame_count_bruteforce(spec, m, n, i)


def test_mixing_formula_endpoints():
    v, h = Fraction(1, 2), Fraction(1, 3)
    assert mix_2d(v, h, 1, 0) == v
    assert mix_2d(v, h, 1, 1) == h
    assert mix_2d(v, h, 2, Fraction(1, 2)) == (v + h) / 4
    with pytest.raises(BadWeights):
        sft_boundary_complexity([v, h], 1, [Fraction(1, 2), Fraction(1, 3)])


def test_realize_t_round_trip():
    v, h = Fraction(1, 2), Fraction(1, 3)
    target = mix_2d(v, h, 1, Fraction(1, 4))
    t = sft_realize_t(v, h, 1, target)
    assert abs(float(mix_2d(v, h, 1, t)) - float(target)) < 1e-15
    with pytest.raises(TargetOutOfRange):
        sft_realize_t(v, h, 1, Fraction(9, 10))


def test_gluing_probe():
    assert block_gluing_probe(Sft2dSpec.full(2), 1, 3).verified
    assert block_gluing_probe(preset_spec("no_vertical_pair"), 2, 3).verified
    probe = block_gluing_probe(preset_spec("checkerboard"), 2, 3)
    assert not probe.verified and probe.counterexample is not None
