"""Dyadic ladder construction and the per-window error bound."""

import math
from collections import Counter

import numpy as np
import pytest

from driftest import EmpiricalWindow, build_ladder, xi_bound
from driftest.windows import (UNION_BOUND_CONSTANT, concentration_radius,
                              dump_stream, dyadic_depth, ladder_xis,
                              load_stream, parse_stream_text)


def brute_ladder(stream):
    """Suffix counts recomputed independently for each dyadic size."""
    t = len(stream)
    out = []
    j = 0
    while 2**j <= t:
        out.append(dict(Counter(stream[t - 2**j:])))
        j += 1
    return out


def ladder_as_dicts(ladder):
    return [dict(zip(w.symbols.tolist(), w.counts.tolist())) for w in ladder.windows]


def test_ladder_hand_example():
    assert ladder_as_dicts(build_ladder([5, 5, 7, 7])) == [
        {7: 1}, {7: 2}, {5: 2, 7: 2}]


def test_ladder_single_sample():
    assert ladder_as_dicts(build_ladder([9])) == [{9: 1}]


def test_ladder_ignores_samples_beyond_largest_window():
    # T=5: depth floor(log2 5) = 2, so the oldest sample is never counted
    assert ladder_as_dicts(build_ladder([1, 2, 3, 4, 5])) == [
        {5: 1}, {4: 1, 5: 1}, {2: 1, 3: 1, 4: 1, 5: 1}]


def test_ladder_rejects_bad_streams():
    with pytest.raises(ValueError):
        build_ladder([])
    with pytest.raises(ValueError):
        build_ladder([3, -1])


def test_ladder_matches_brute_force_and_nests():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        t = int(rng.integers(1, 4097))
        stream = rng.integers(0, int(rng.integers(2, 30)), size=t).tolist()
        ladder = build_ladder(stream)
        dicts = ladder_as_dicts(ladder)
        assert dicts == brute_ladder(stream)
        for j in range(len(dicts) - 1):
            for sym, count in dicts[j].items():
                assert count <= dicts[j + 1].get(sym, 0)


def test_depth():
    assert dyadic_depth(1) == 0
    assert dyadic_depth(5) == 2
    assert dyadic_depth(4096) == 12
    with pytest.raises(ValueError):
        dyadic_depth(0)


def xi_oracle(phi, j, delta):
    c = 4.0 * math.pi**2 / 3.0
    return phi + 3.0 * math.sqrt(math.log(c * (j * j + 1) / delta) / 2**j)


def test_xi_point_mass_j0():
    w = EmpiricalWindow.from_samples([3])
    value = xi_bound(w, 0, 0.05)
    assert value == pytest.approx(xi_oracle(1.0, 0, 0.05), abs=1e-12)
    assert value == pytest.approx(8.0820807, abs=1e-6)


def test_xi_mixed_window_j2():
    w = EmpiricalWindow.from_samples([0, 0, 1, 2])
    phi = (math.sqrt(0.5) + 0.5 + 0.5) / 2
    value = xi_bound(w, 2, 0.05)
    assert value == pytest.approx(xi_oracle(phi, 2, 0.05), abs=1e-12)
    assert value == pytest.approx(4.8735288, abs=1e-6)


def test_xi_large_constant_window_j10():
    w = EmpiricalWindow.from_samples([7] * 1024)
    value = xi_bound(w, 10, 0.05)
    assert value == pytest.approx(xi_oracle(1.0 / 32.0, 10, 0.05), abs=1e-12)
    assert value == pytest.approx(0.3304872, abs=1e-6)


def test_xi_strictly_decreasing_in_delta():
    w = EmpiricalWindow.from_samples([0, 1, 2, 3])
    values = [xi_bound(w, 2, d) for d in (0.01, 0.05, 0.2, 0.5, 0.9)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_concentration_degenerates_at_j0():
    for delta in (0.05, 0.3):
        expected = 3.0 * math.sqrt(math.log(UNION_BOUND_CONSTANT / delta))
        assert concentration_radius(0, delta) == pytest.approx(expected, abs=1e-15)


def test_xi_validation():
    w = EmpiricalWindow.from_samples([1, 2])
    with pytest.raises(ValueError):
        xi_bound(w, 2, 0.05)  # size mismatch
    with pytest.raises(ValueError):
        xi_bound(w, 1, 0.0)
    with pytest.raises(ValueError):
        xi_bound(w, 1, 1.0)


def test_ladder_xis_align_with_windows():
    ladder = build_ladder([1, 1, 2, 3, 1, 2, 1, 1])
    xis = ladder_xis(ladder, 0.1)
    assert len(xis) == len(ladder.windows)
    for j, value in enumerate(xis):
        assert value == xi_bound(ladder[j], j, 0.1)


def test_parse_stream_text():
    arr = parse_stream_text("# header\n\n5\n 7 \n0\n")
    assert arr.tolist() == [5, 7, 0]


def test_parse_stream_errors_carry_line_numbers():
    with pytest.raises(ValueError, match="line 2"):
        parse_stream_text("1\nx\n")
    with pytest.raises(ValueError, match="line 3"):
        parse_stream_text("1\n2\n-4\n")
    with pytest.raises(ValueError, match="empty sample stream"):
        parse_stream_text("# nothing\n\n")


def test_stream_file_round_trip(tmp_path):
    path = tmp_path / "stream.txt"
    dump_stream([3, 1, 4, 1, 5], path)
    assert load_stream(path).tolist() == [3, 1, 4, 1, 5]
