import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringflow.noon import (
    chain_elimination,
    chain_gap_numeric,
    chain_model,
    fig4_interaction,
    noon_gap_closed_form,
    noon_validity,
    reduced_levels,
)


def test_chain_model_structure():
    model = chain_model(5, 0.7, 0.01)
    n = 5
    assert model.diagonal[0] == 0.0 and model.diagonal[n] == 0.0
    assert np.allclose(model.diagonal, model.diagonal[::-1])
    assert np.allclose(model.hopping, model.hopping[::-1])
    assert model.diagonal[2] == pytest.approx(0.7 * 2 * 3)
    assert model.hopping[0] == pytest.approx(0.01 * math.sqrt(5))


def test_single_atom_chain():
    assert chain_gap_numeric(1, 1.0, 0.02) == pytest.approx(0.04, rel=1e-12)
    assert noon_gap_closed_form(1, 1.0, 0.02) == pytest.approx(0.04, rel=1e-12)


def test_closed_form_small_systems():
    assert noon_gap_closed_form(2, 0.1, 0.008) == pytest.approx(4 * 0.008**2 / 0.1, rel=1e-12)
    # N=2 chain exactly: antisymmetric state at 0, symmetric pair couples the
    # endpoint combination to the middle site with strength 2b
    g, b = 0.14, 0.006
    exact = (math.sqrt(g * g + 16 * b * b) - g) / 2
    assert chain_gap_numeric(2, g, b) == pytest.approx(exact, rel=1e-12)


def test_fig4_rule_and_reference_point():
    g5 = fig4_interaction(5, 0.008)
    assert g5 == pytest.approx(4 * math.pi * 0.008 * math.sqrt(5) / 4, rel=1e-12)
    closed = noon_gap_closed_form(5, g5, 0.008)
    assert closed == pytest.approx(2 * 0.008**5 * 5 / (g5**4 * 24), rel=1e-12)
    assert closed == pytest.approx(1.3688e-6, rel=1e-3)
    assert chain_gap_numeric(5, g5, 0.008) == pytest.approx(closed, rel=0.1)


@given(
    st.integers(min_value=1, max_value=8),
    st.floats(min_value=0.01, max_value=1.0),
    st.floats(min_value=1e-4, max_value=0.05),
)
@settings(max_examples=40, deadline=None)
def test_elimination_at_origin_reproduces_closed_form(n, g, b):
    red = chain_elimination(n, g, b, 0.0)
    assert 2 * abs(red.effective_coupling) == pytest.approx(
        noon_gap_closed_form(n, g, b), rel=1e-11
    )


def test_elimination_n2_by_hand():
    g, b = 0.1, 0.008
    red = chain_elimination(2, g, b, 0.0)
    assert red.effective_coupling == pytest.approx(-2 * b * b / g, rel=1e-12)
    assert red.tail_correction == pytest.approx(-1.0, rel=1e-12)
    lo, hi = reduced_levels(2, g, b, 0.0)
    assert hi - lo == pytest.approx(4 * b * b / g, rel=1e-12)


def test_elimination_pole_guard():
    with pytest.raises(ValueError):
        chain_elimination(3, 0.5, 0.01, 0.5 * 1 * 2)  # lambda on t_1


def test_reduced_levels_approximate_chain():
    b = 0.008
    for n in (2, 3, 4, 5, 6):
        g = fig4_interaction(n, b)
        model = chain_model(n, g, b)
        from scipy.linalg import eigh_tridiagonal

        exact = eigh_tridiagonal(model.diagonal, model.hopping, select="i", select_range=(0, 1))[0]
        lo, hi = reduced_levels(n, g, b, 0.0)
        assert lo == pytest.approx(exact[0], abs=0.05 * max(abs(exact[0]), 1e-12))
        assert hi - lo == pytest.approx(exact[1] - exact[0], rel=0.05)


def test_closed_form_converges_to_chain_as_barrier_shrinks():
    ratios = []
    for b in (4e-3, 1e-3, 2.5e-4):
        g = 0.1
        ratios.append(noon_gap_closed_form(3, g, b) / chain_gap_numeric(3, g, b))
    assert all(abs(r2 - 1) < abs(r1 - 1) for r1, r2 in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(1.0, rel=1e-3)


def test_validity_reference_point():
    v = noon_validity(5, 0.1, 0.008)
    x = 0.1 * 4 / (2 * 0.008 * math.sqrt(5))
    assert v.ratio_barrier == pytest.approx(x + math.sqrt(x * x + 1), rel=1e-12)
    y = (2 + 0.1 * 7) / (0.1 * math.sqrt(20))
    assert v.ratio_interaction == pytest.approx(y + math.sqrt(y * y + 1), rel=1e-12)
    assert v.ratio_barrier > 10 and v.ratio_interaction > 10
    assert v.condition_met


def test_validity_limits():
    assert noon_validity(5, 1e9, 0.008).ratio_barrier > 1e9
    assert math.isinf(noon_validity(5, 2.0, 0.0).ratio_barrier)
    assert noon_validity(5, 1e9, 0.008).ratio_interaction < 10  # interactions too strong
    assert not noon_validity(5, 1e9, 0.008).condition_met
    # barrier huge: first condition fails
    assert not noon_validity(5, 0.1, 10.0).condition_met


def test_chain_parity_of_lowest_pair():
    model = chain_model(5, 0.06, 0.008)
    from scipy.linalg import eigh_tridiagonal

    vals, vecs = eigh_tridiagonal(model.diagonal, model.hopping, select="i", select_range=(0, 1))
    ground, excited = vecs[:, 0], vecs[:, 1]
    assert np.allclose(ground, ground[::-1], atol=1e-10) or np.allclose(
        ground, -ground[::-1], atol=1e-10
    )
    same = np.allclose(ground, ground[::-1], atol=1e-10)
    if same:
        assert np.allclose(excited, -excited[::-1], atol=1e-10)
    else:
        assert np.allclose(excited, excited[::-1], atol=1e-10)
