import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphere_uncertainty.checks import random_expansion
from sphere_uncertainty.quadrature import build_grid, coupling_integral_direct
from sphere_uncertainty.sphere_core import MultiIndex, enumerate_indices
from sphere_uncertainty.uncertainty import (
    FormatError,
    FourierExpansion,
    ZeroGravityCenterError,
    ZeroNormError,
    conjugacy_order,
    conjugate_pairs,
    coupling_integral,
    expansion_from_json,
    expansion_to_json,
    gravity_center,
    load_expansion,
    momentum_variance,
    pair_sum,
    uncertainty_report,
    zonal_report,
)

Y00_S2 = MultiIndex(0, (0,))
Y10_S2 = MultiIndex(1, (0,))


def _example():
    # 1 + sqrt(3) x_1 on S^2 in the orthonormal basis
    return FourierExpansion(2, {Y00_S2: 1.0, Y10_S2: 1.0})


def test_example_function_report():
    rep = uncertainty_report(_example())
    np.testing.assert_allclose(rep.xi, [1 / math.sqrt(3), 0, 0], atol=1e-15)
    assert rep.var_s == pytest.approx(2.0)
    assert rep.var_m == pytest.approx(1.0)
    assert rep.u == pytest.approx(math.sqrt(2))
    assert rep.bound == 1.0 and rep.bound_ok


def test_report_dict_keys():
    d = uncertainty_report(_example()).to_dict()
    assert list(d) == ["xi_O", "norm_xi", "var_S", "var_M", "U", "bound", "bound_ok"]
    json.dumps(d)


def test_constant_function():
    F = FourierExpansion(3, {MultiIndex(0, (0, 0)): 2.0})
    np.testing.assert_array_equal(gravity_center(F), 0.0)
    assert momentum_variance(F) == 0.0
    assert conjugate_pairs(F) == []
    with pytest.raises(ZeroGravityCenterError):
        uncertainty_report(F)


def test_zero_function():
    F = FourierExpansion(2, {Y00_S2: 0.0})
    assert len(F) == 0
    with pytest.raises(ZeroNormError):
        gravity_center(F)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_single_harmonic_momentum(n):
    for idx in enumerate_indices(n, 3):
        F = FourierExpansion(n, {idx: 1 - 2j})
        assert momentum_variance(F) == pytest.approx(3 * (3 + n - 1))


def test_expansion_validation():
    with pytest.raises(ValueError):
        FourierExpansion(2, {(1, (2,)): 1.0})
    with pytest.raises(FormatError):
        FourierExpansion(2, {Y00_S2: math.nan})
    F = _example()
    with pytest.raises(TypeError):
        F.coefficients[Y00_S2] = 3.0


def test_laplacian_coefficients():
    F = FourierExpansion(3, {MultiIndex(2, (1, 0)): 1.0, MultiIndex(0, (0, 0)): 5.0})
    lap = F.laplacian()
    assert lap.coefficients == {MultiIndex(2, (1, 0)): -8.0}


def test_conjugacy_order():
    assert conjugacy_order((1, (0,)), (2, (0,))) == 1
    assert conjugacy_order((1, (0,)), (2, (1,))) == 2
    assert conjugacy_order((1, (0,)), (3, (0,))) is None
    assert conjugacy_order((2, (1,)), (2, (1,))) is None
    assert conjugacy_order((3, (2, 1)), (2, (1, 1))) == 2


def test_zonal_pairs_are_first_order():
    F = FourierExpansion(3, {MultiIndex(l, (0, 0)): 1.0 for l in range(5)})
    pairs = conjugate_pairs(F)
    assert len(pairs) == 8
    assert all(p.nu == 1 and abs(p.k.l - p.m.l) == 1 for p in pairs)


def test_tesseral_pair_structure():
    n = 4
    support = {MultiIndex(l, (0, 0, 0)): 1.0 for l in range(1, 6)}
    support.update({MultiIndex(l, (2, 0, 0)): -0.5 for l in range(2, 6)})
    pairs = conjugate_pairs(FourierExpansion(n, support))
    for p in pairs:
        assert p.nu == 1
        assert abs(p.k.l - p.m.l) == 1 and p.k.k == p.m.k


def test_coupling_example_value():
    # I_1 between the zonal l=1 and l=2 harmonics on S^3
    val = coupling_integral(3, (1, (0, 0)), (2, (0, 0)))
    grid = build_grid(3, 6)
    direct = coupling_integral_direct(grid, (1, (0, 0)), (2, (0, 0)))
    np.testing.assert_allclose(val, direct, atol=1e-14)
    assert val[0].real == pytest.approx(0.5, rel=1e-14)


def test_coupling_rejects_non_conjugate():
    with pytest.raises(ValueError):
        coupling_integral(2, (1, (0,)), (3, (0,)))
    with pytest.raises(ValueError):
        coupling_integral(2, (1, (0,)), (2, (0,)), nu=2)


@pytest.mark.parametrize("n", [2, 3])
def test_coupling_matches_oracle_all_pairs(n):
    grid = build_grid(n, 8)
    idxs = [i for l in range(4) for i in enumerate_indices(n, l)]
    for k in idxs:
        for m in idxs:
            nu = conjugacy_order(k, m)
            direct = coupling_integral_direct(grid, k, m)
            if nu is None:
                np.testing.assert_allclose(direct, 0, atol=1e-12)
                continue
            series = coupling_integral(n, k, m, nu)
            np.testing.assert_allclose(series, direct, atol=1e-12)
            if nu < n:
                assert np.count_nonzero(series) == 1
            else:
                assert abs(series[n - 1]) ** 2 + abs(series[n]) ** 2 == pytest.approx(
                    2 * abs(series[n - 1]) ** 2)


def _real_expansion(rng, n, lmax):
    # conj(Y_l^k) is Y_l^k with k_last negated, so these coefficients give a real F
    coeffs = {}
    for l in range(lmax + 1):
        for idx in enumerate_indices(n, l):
            last = idx.k[-1]
            if last < 0:
                continue
            if last == 0:
                coeffs[idx] = rng.normal()
            else:
                c = complex(rng.normal(), rng.normal())
                coeffs[idx] = c
                coeffs[MultiIndex(l, idx.k[:-1] + (-last,))] = c.conjugate()
    return FourierExpansion(n, coeffs)


@pytest.mark.parametrize("seed", range(5))
def test_pair_sum_real_for_real_function(seed):
    rng = np.random.default_rng(seed)
    n = 2 + seed % 2
    F = _real_expansion(rng, n, 4)
    grid = build_grid(n, 8)
    assert np.max(np.abs(F.evaluate(grid.theta, grid.phi).imag)) < 1e-12
    total = pair_sum(F)
    assert np.max(np.abs(total.imag)) < 1e-12
    np.testing.assert_allclose(total.real / F.norm_sq(), gravity_center(F), atol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_fast_path_matches_full_pair_sum(seed):
    rng = np.random.default_rng(100 + seed)
    F = random_expansion(rng, 3, 3)
    np.testing.assert_allclose(pair_sum(F).real / F.norm_sq(), gravity_center(F), atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000),
       scale=st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_scaling_invariance(seed, scale):
    rng = np.random.default_rng(seed)
    F = random_expansion(rng, 2 + seed % 2, 3)
    a, b = uncertainty_report(F), uncertainty_report(F.scaled(scale))
    np.testing.assert_allclose(a.xi, b.xi, atol=1e-12)
    assert b.var_s == pytest.approx(a.var_s, rel=1e-10)
    assert b.var_m == pytest.approx(a.var_m, rel=1e-12)
    assert b.u == pytest.approx(a.u, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(2, 4), lmax=st.integers(1, 3))
def test_bound_and_gravity_center_inside_ball(seed, n, lmax):
    rng = np.random.default_rng(seed)
    F = random_expansion(rng, n, lmax)
    rep = uncertainty_report(F)
    assert rep.norm_xi < 1
    assert rep.bound_ok


def test_zonal_report_matches_generic():
    rng = np.random.default_rng(7)
    for n in (2, 3, 5):
        c = rng.normal(size=8)
        F = FourierExpansion(n, {MultiIndex(l, (0,) * (n - 1)): v for l, v in enumerate(c)})
        a, b = zonal_report(n, c), uncertainty_report(F)
        np.testing.assert_allclose(a.xi, b.xi, atol=1e-14)
        assert a.var_m == pytest.approx(b.var_m, rel=1e-14)


# coefficient files

def _doc(**over):
    doc = {"n": 2, "coefficients": [{"l": 0, "k": [0], "re": 1.0, "im": 0.0},
                                    {"l": 1, "k": [0], "re": 1.0, "im": 0.0}]}
    doc.update(over)
    return doc


def test_json_round_trip(tmp_path):
    F = random_expansion(np.random.default_rng(1), 3, 2)
    path = tmp_path / "f.json"
    path.write_text(json.dumps(expansion_to_json(F)))
    G = load_expansion(path)
    assert dict(G.coefficients) == dict(F.coefficients)


def test_json_example():
    F = expansion_from_json(_doc())
    assert uncertainty_report(F).u == pytest.approx(math.sqrt(2))


def test_json_imaginary_part_optional():
    doc = _doc(coefficients=[{"l": 0, "k": [0], "re": 2}])
    assert expansion_from_json(doc).coefficients == {Y00_S2: 2}


@pytest.mark.parametrize("doc", [
    [],
    {"n": 2},
    {"n": 2, "coefficients": [], "extra": 1},
    {"n": 1, "coefficients": []},
    {"n": "2", "coefficients": []},
    {"n": 2, "coefficients": {}},
    {"n": 2, "coefficients": [{"l": 0, "k": [0], "re": 1, "phase": 0}]},
    {"n": 2, "coefficients": [{"l": 0, "k": [0]}]},
    {"n": 2, "coefficients": [{"l": 0, "k": [0, 0], "re": 1}]},
    {"n": 2, "coefficients": [{"l": 1, "k": [2], "re": 1}]},
    {"n": 2, "coefficients": [{"l": 0, "k": [0], "re": "1"}]},
    {"n": 2, "coefficients": [{"l": 0, "k": [0], "re": 1}, {"l": 0, "k": [0], "re": 2}]},
    {"n": 2, "coefficients": ["x"]},
])
def test_json_rejects_malformed(doc):
    with pytest.raises(FormatError):
        expansion_from_json(doc)


def test_load_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(FormatError):
        load_expansion(path)
