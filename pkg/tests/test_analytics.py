import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpf.analytics import (
    CpfScenario,
    bound_lower,
    bound_upper,
    bounds_for_scenario,
    fidelity_biphoton_if,
    fidelity_biphoton_if_closed_form,
    fidelity_biphoton_si,
    fidelity_coherent,
    fidelity_fock,
    fidelity_gen_bipartite,
    fidelity_ghz,
    hypothesis_outputs,
    minimize_fidelity_over_a,
    numeric_fidelity,
)
from cpf.linalg import fidelity
from cpf.sources import BiphotonIF, BiphotonSI, Coherent, Fock, GenBipartite, Ghz, ghz_output
from oracles import fidelity_sqrtm

unit = st.floats(min_value=0.0, max_value=1.0)
ALL_SOURCES = [Coherent(), Fock(), Ghz(), GenBipartite(0.3), BiphotonSI(), BiphotonIF()]


def test_bound_upper_examples():
    assert bound_upper(1.0, 4, 3) == 1.0
    assert bound_upper(0.0, 4, 1) == 0.0
    assert bound_upper(math.sqrt(0.8), 4, 11) == pytest.approx(0.2576980378, abs=1e-10)


def test_bound_lower_examples():
    assert bound_lower(1.0, 5, 7) == pytest.approx(0.4)
    assert bound_lower(0.3, 4, 0) == 0.375
    assert bound_lower(math.sqrt(0.8), 4, 11) == pytest.approx(0.375 * 0.8**22, rel=1e-12)
    assert bound_lower(math.sqrt(0.8), 4, 11) == pytest.approx(0.0027670116, abs=1e-10)


def test_closed_form_examples():
    assert fidelity_coherent(0.4, 0.4) == 1.0
    assert fidelity_coherent(1.0, 0.0) == pytest.approx(0.6065306597, abs=1e-10)
    assert fidelity_fock(0.3, 0.3) == pytest.approx(1.0)
    assert fidelity_fock(0.0, 1.0) == 0.0
    assert fidelity_fock(0.2, 0.8) == pytest.approx(0.8, abs=1e-15)
    assert fidelity_biphoton_si(0.7, 0.7) == pytest.approx(1.0)
    assert fidelity_biphoton_si(0.0, 1.0) == 0.5


@settings(max_examples=80, deadline=None)
@given(a=unit, g0=unit, g1=unit)
def test_gen_bipartite_reductions(a, g0, g1):
    assert fidelity_gen_bipartite(0.0, g0, g1) == pytest.approx(fidelity_fock(g0, g1), abs=1e-14)
    assert fidelity_gen_bipartite(0.5, g0, g1) == pytest.approx(fidelity_biphoton_si(g0, g1), abs=1e-14)
    assert fidelity_gen_bipartite(a, g0, g0) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(g0=unit, g1=unit)
def test_fidelities_symmetric(g0, g1):
    for f in (fidelity_coherent, fidelity_fock, fidelity_biphoton_si):
        assert f(g0, g1) == pytest.approx(f(g1, g0), abs=1e-14)
    assert fidelity_gen_bipartite(0.4, g0, g1) == pytest.approx(fidelity_gen_bipartite(0.4, g1, g0), abs=1e-14)


@pytest.mark.parametrize("g0,g1", [(0.2, 0.0), (0.5, 0.1), (0.9, 0.3), (0.0, 1.0)])
def test_closed_forms_against_scipy_oracle(g0, g1):
    for src, closed in [
        (Fock(), fidelity_fock(g0, g1)),
        (GenBipartite(0.3), fidelity_gen_bipartite(0.3, g0, g1)),
        (BiphotonSI(), fidelity_biphoton_si(g0, g1)),
    ]:
        states = hypothesis_outputs(CpfScenario(4, 1, g0, g1, src))
        assert fidelity(*states) == pytest.approx(closed, abs=1e-10)
    if 0 < g0 < 1 and 0 < g1 < 1:
        # full-rank outputs, where scipy.linalg.sqrtm is well conditioned
        states = hypothesis_outputs(CpfScenario(4, 1, g0, g1, Fock()))
        assert fidelity_sqrtm(*states) == pytest.approx(fidelity_fock(g0, g1), abs=1e-9)


def test_coherent_matches_truncated_fock():
    for g0, g1 in [(0.2, 0.0), (1.0, 0.0), (0.55, 0.3)]:
        numeric = numeric_fidelity(CpfScenario(4, 1, g0, g1, Coherent(1.0, 30)))
        assert numeric == pytest.approx(fidelity_coherent(g0, g1), abs=1e-8)


@pytest.mark.parametrize(
    "g0,g1,expected",
    [
        (0.5, 0.5, (0.0, 1.0)),
        (0.2, 0.8, (0.0, 0.8)),
        (0.0, 0.5, (0.0, math.sqrt(0.5))),
    ],
)
def test_minimize_examples(g0, g1, expected):
    res = minimize_fidelity_over_a(g0, g1)
    assert res.a_min == pytest.approx(expected[0], abs=1e-8)
    assert res.f_min == pytest.approx(expected[1], abs=1e-8)
    assert res.degenerate == (g0 == g1)


def test_minimize_grid_scan_oracle():
    grid = np.linspace(0, 1, 1001)
    for g0, g1 in [(0.2, 0.8), (0.65, 0.55), (0.95, 0.85)]:
        vals = [fidelity_gen_bipartite(a, g0, g1) for a in grid]
        res = minimize_fidelity_over_a(g0, g1)
        assert res.a_min == pytest.approx(grid[int(np.argmin(vals))], abs=1e-8)
        assert res.f_min == pytest.approx(min(vals), abs=1e-12)


def test_ghz_fidelity_degenerate_and_symmetric():
    assert fidelity_ghz(CpfScenario(5, 1, 0.4, 0.4, Ghz())) == pytest.approx(1.0, abs=1e-12)
    sc = CpfScenario(5, 1, 0.3, 0.05, Ghz())
    values = [fidelity_ghz(sc, i, k) for i, k in [(0, 1), (1, 0), (2, 4), (3, 0)]]
    assert max(values) - min(values) <= 1e-9


def test_ghz_two_boxes_brute_force():
    # N=2, gamma0=0, gamma1=1: target at box 0 gives (|00><00| + |01><01|)/2, at box 1 (|00><00| + |10><10|)/2
    a = np.diag([0.5, 0.5, 0, 0])
    b = np.diag([0.5, 0, 0.5, 0])
    assert fidelity_ghz(CpfScenario(2, 1, 0.0, 1.0, Ghz())) == pytest.approx(fidelity_sqrtm(a, b), abs=1e-12)
    assert fidelity_ghz(CpfScenario(2, 1, 0.0, 1.0, Ghz())) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_ghz_fidelity_matches_block_structure(n):
    g0, g1 = 0.35, 0.1
    rates_i = [g1] + [g0] * (n - 1)
    rates_k = [g0, g1] + [g0] * (n - 2)
    expected = fidelity(ghz_output(rates_i), ghz_output(rates_k))
    assert fidelity_ghz(CpfScenario(n, 1, g0, g1, Ghz())) == pytest.approx(expected, abs=1e-12)


def test_biphoton_if_numeric_examples(caplog):
    assert fidelity_biphoton_if(0.4, 0.4) == pytest.approx(1.0, abs=1e-12)
    assert fidelity_biphoton_if(0.0, 0.0) == pytest.approx(1.0, abs=1e-12)
    # brute force: outputs of ADC(0.1)xADC(0.3) and ADC(0.3)xADC(0.3) on the Bell pair
    g0, g1 = 0.3, 0.1
    x0, x1 = math.sqrt(1 - g0), math.sqrt(1 - g1)

    def out(ga, gb, xa, xb):
        rho = np.zeros((4, 4))
        rho[0, 0] = 0.5 * (1 + ga * gb)
        rho[1, 1] = 0.5 * ga * (1 - gb)
        rho[2, 2] = 0.5 * (1 - ga) * gb
        rho[3, 3] = 0.5 * (1 - ga) * (1 - gb)
        rho[0, 3] = rho[3, 0] = 0.5 * xa * xb
        return rho

    expected = fidelity_sqrtm(out(g1, g0, x1, x0), out(g0, g0, x0, x0))
    with caplog.at_level(logging.INFO, logger="cpf.analytics"):
        value = fidelity_biphoton_if(g0, g1)
    assert value == pytest.approx(expected, abs=1e-10)
    assert value == pytest.approx(0.9859615563, abs=1e-9)
    # the printed alpha/beta expression does not reproduce it; only a diagnostic is logged
    assert abs(fidelity_biphoton_if_closed_form(g0, g1) - value) > 1e-8
    assert "idler-free closed form disagrees" in caplog.text


def test_bounds_examples():
    b = bounds_for_scenario(CpfScenario(4, 0, 0.3, 0.1, Coherent()))
    assert b.lower == 0.375
    q = bounds_for_scenario(CpfScenario(4, 11, 0.2, 0.0, Fock()))
    c = bounds_for_scenario(CpfScenario(4, 11, 0.2, 0.0, Coherent()))
    assert q.upper == pytest.approx(0.2577, abs=1e-4)
    assert c.lower == pytest.approx(0.375 * math.exp(-22 * (math.sqrt(0.8) - 1) ** 2), rel=1e-12)
    assert c.lower == pytest.approx(0.2934, abs=1e-4)
    assert q.upper < c.lower
    g = bounds_for_scenario(CpfScenario(6, 3, 0.5, 0.5, Ghz()))
    assert g.upper == 1.0


def test_bounds_exponents_per_source():
    N, M = 4, 3
    F = fidelity_ghz(CpfScenario(N, M, 0.4, 0.1, Ghz()))
    g = bounds_for_scenario(CpfScenario(N, M, 0.4, 0.1, Ghz()))
    assert g.upper == pytest.approx(min(1, 3 * F**M))
    assert g.lower == pytest.approx(3 / 8 * F ** (2 * M))
    F = fidelity_biphoton_if(0.4, 0.1)
    b = bounds_for_scenario(CpfScenario(N, M, 0.4, 0.1, BiphotonIF()))
    assert b.lower == pytest.approx(2 / 8 * F ** (4 * M))
    assert b.upper == pytest.approx(min(1, 3 * F ** (2 * M)))


@settings(max_examples=40, deadline=None)
@given(
    g0=unit,
    g1=unit,
    M=st.integers(0, 60),
    source=st.sampled_from(ALL_SOURCES),
)
def test_bounds_ordered_and_monotone(g0, g1, M, source):
    sc = CpfScenario(4, M, g0, g1, source)
    b = bounds_for_scenario(sc)
    nxt = bounds_for_scenario(sc.replace(m_uses=M + 1))
    assert 0.0 <= b.lower <= b.upper <= 1.0
    assert nxt.lower <= b.lower + 1e-15
    assert nxt.upper <= b.upper + 1e-15


def test_scenario_validation():
    with pytest.raises(ValueError):
        CpfScenario(1, 1, 0.1, 0.2, Fock())
    with pytest.raises(ValueError):
        CpfScenario(4, -1, 0.1, 0.2, Fock())
    with pytest.raises(ValueError, match="even N"):
        CpfScenario(6 - 1, 1, 0.1, 0.2, BiphotonIF())
    with pytest.raises(ValueError, match="even N"):
        CpfScenario(2, 1, 0.1, 0.2, BiphotonIF())
    with pytest.raises(ValueError, match="GHZ"):
        CpfScenario(13, 1, 0.1, 0.2, Ghz())
    with pytest.raises(ValueError):
        CpfScenario(4, 1, 1.1, 0.2, Fock())
