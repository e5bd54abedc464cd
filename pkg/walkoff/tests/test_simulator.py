"""
Base-out Markov chain, Monte Carlo oracle and extra-inning game model
"""
import os
from dataclasses import replace
from itertools import product

import numpy as np
import pytest
from numpy.testing import assert_allclose

from walkoff.base import BaseOutState, live_states
from walkoff.exceptions import SimulatorError
from walkoff.retrosheet import read_event_directory
from walkoff.simulator import (SCORED, THREE_OUTS, EventModel, GeometricGameModel, bunt_policy_value,
                               calibrate_event_model, fit_geometric, game_length_distribution, game_length_table,
                               monte_carlo_score_prob, observed_extra_innings, sac_failure_state, score_prob,
                               score_probs, season_uplift, simulate_half_inning, transition_matrix)

test_dir = os.path.dirname(os.path.abspath(__file__))
data_dir = os.path.join(test_dir, 'data')

ALL_OUTS = EventModel(p_out=1.0, p_walk=0.0, p_single=0.0, p_double=0.0, p_triple=0.0, p_home_run=0.0)
TWO_OUTCOMES = EventModel(p_out=0.7, p_walk=0.0, p_single=0.3, p_double=0.0, p_triple=0.0, p_home_run=0.0,
                          single_scores_from_second=1.0)


def model_grid():
    default = EventModel()
    fixture = EventModel.from_config(os.path.join(data_dir, 'model.cfg'))
    return [
        default, fixture, TWO_OUTCOMES,
        replace(fixture, sac_fail_mode='lead_runner_out'),
        replace(default, out_scores_from_third=0.5, single_scores_from_second=0.9, double_scores_from_first=0.1),
        EventModel(p_out=0.5, p_walk=0.2, p_single=0.1, p_double=0.1, p_triple=0.05, p_home_run=0.05)
    ]


@pytest.mark.fast
def test_event_model_validation():
    with pytest.raises(SimulatorError):
        EventModel(p_out=0.7)
    with pytest.raises(SimulatorError):
        EventModel(single_scores_from_second=1.2)
    with pytest.raises(SimulatorError):
        EventModel(sac_fail_mode='runner_holds')
    fixture = EventModel.from_config(os.path.join(data_dir, 'model.cfg'))
    assert fixture.p_sac_success == 0.025
    assert fixture.single_scores_from_third == 1.0
    assert EventModel.from_config() == EventModel()
    assert EventModel.from_config(fixture.to_config()) == fixture


@pytest.mark.fast
@pytest.mark.parametrize('m', model_grid())
def test_transition_matrix_is_stochastic(m):
    M = transition_matrix(m)
    assert M.shape == (24, 26)
    assert_allclose(M.sum(axis=1), 1.0, atol=1e-12)
    assert (M >= 0).all()
    M[0, 0] = 5
    assert transition_matrix(m)[0, 0] != 5


@pytest.mark.fast
def test_all_outs_never_scores():
    assert_allclose(score_probs(ALL_OUTS), 0)
    rng = np.random.default_rng(0)
    for _ in range(20):
        result = simulate_half_inning(BaseOutState(second=True), ALL_OUTS, rng)
        assert not result.scored
        assert result.plate_appearances == 3
        assert result.trajectory[-1] == BaseOutState(outs=3)


@pytest.mark.fast
def test_hand_solved_chains():
    singles = EventModel(p_out=0.0, p_walk=0.0, p_single=1.0, p_double=0.0, p_triple=0.0, p_home_run=0.0)
    assert score_prob(BaseOutState(third=True), singles) == pytest.approx(1)
    assert_allclose(score_probs(EventModel(p_out=0.0, p_walk=0.0, p_single=0.0, p_double=0.0, p_triple=0.0,
                                           p_home_run=1.0)), 1)

    assert score_prob(BaseOutState(third=True, outs=2), TWO_OUTCOMES) == pytest.approx(0.3)
    assert score_prob(BaseOutState(second=True, outs=2), TWO_OUTCOMES) == pytest.approx(0.3)
    # empty -> first -> first and second -> run, three singles before the third out
    assert score_prob(BaseOutState(outs=2), TWO_OUTCOMES) == pytest.approx(0.3**3)
    # one out buys a second chance at every step
    p_2 = 0.3
    p_1 = 0.3 + 0.7 * p_2
    assert score_prob(BaseOutState(second=True, outs=1), TWO_OUTCOMES) == pytest.approx(p_1)


@pytest.mark.fast
@pytest.mark.parametrize('m', model_grid())
def test_score_prob_is_monotone(m):
    p = score_probs(m)
    for state in live_states():
        for base in range(3):
            if not state.bases[base]:
                bases = list(state.bases)
                bases[base] = True
                assert p[BaseOutState(*bases, state.outs).index] >= p[state.index] - 1e-12
        if state.outs > 0:
            assert p[state._replace(outs=state.outs - 1).index] >= p[state.index] - 1e-12


@pytest.mark.fast
def test_simulation_is_seeded():
    m = EventModel()
    first = simulate_half_inning(BaseOutState(second=True), m, np.random.default_rng(12))
    second = simulate_half_inning(BaseOutState(second=True), m, np.random.default_rng(12))
    assert first == second
    assert first.trajectory[0] == BaseOutState(second=True)


@pytest.mark.fast
def test_monte_carlo_agrees_with_exact_solution():
    state = BaseOutState(second=True)
    for m in (TWO_OUTCOMES, EventModel()):
        estimate, se = monte_carlo_score_prob(state, m, 200000, seed=8)
        assert abs(estimate - score_prob(state, m)) < 3 * se
    assert monte_carlo_score_prob(state, ALL_OUTS, 1000, seed=8) == (0.0, 0.0)


@pytest.mark.fast
def test_single_trajectories_agree_with_exact_solution():
    state = BaseOutState(first=True, outs=1)
    m = EventModel()
    rng = np.random.default_rng(21)
    n = 20000
    hits = sum(simulate_half_inning(state, m, rng).scored for _ in range(n))
    exact = score_prob(state, m)
    assert abs(hits / n - exact) < 3 * np.sqrt(exact * (1 - exact) / n)


@pytest.mark.slow
@pytest.mark.parametrize('m', model_grid()[:3])
def test_monte_carlo_all_states(m):
    exact = score_probs(m)
    for state in live_states():
        estimate, _ = monte_carlo_score_prob(state, m, 10**6, seed=state.index)
        assert abs(estimate - exact[state.index]) < 0.002


@pytest.mark.distributed
def test_monte_carlo_independent_of_workers():
    state = BaseOutState(second=True)
    serial = monte_carlo_score_prob(state, EventModel(), 40000, seed=3, block_size=10000)
    parallel = monte_carlo_score_prob(state, EventModel(), 40000, seed=3, n_workers=2, block_size=10000)
    assert serial == parallel


@pytest.mark.fast
def test_bunt_policy_value():
    certain = EventModel(p_out=0.5, p_walk=0.0, p_single=0.5, p_double=0.0, p_triple=0.0, p_home_run=0.0,
                         out_scores_from_third=1.0)
    bunt, _ = bunt_policy_value(certain, 1.0)
    assert bunt == pytest.approx(1)

    for m in model_grid():
        if m.sac_fail_mode == 'batter_out':
            bunt, swing = bunt_policy_value(m, 0.0)
            assert bunt <= swing + 1e-12
        values = [bunt_policy_value(m, p)[0] for p in np.linspace(0, 1, 11)]
        if score_prob(BaseOutState(third=True, outs=1), m) >= score_prob(sac_failure_state(m), m):
            assert np.all(np.diff(values) >= -1e-12)
        assert len({bunt_policy_value(m, p)[1] for p in (0.0, 0.5, 1.0)}) == 1

    with pytest.raises(SimulatorError):
        bunt_policy_value(EventModel(), 1.5)


@pytest.mark.fast
def test_sac_failure_state():
    assert sac_failure_state(EventModel()) == BaseOutState(second=True, outs=1)
    assert sac_failure_state(EventModel(sac_fail_mode='lead_runner_out')) == BaseOutState(first=True, outs=1)


@pytest.mark.fast
def test_sacrifice_transitions():
    m = EventModel.from_config(os.path.join(data_dir, 'model.cfg'))
    M = transition_matrix(m)
    second = BaseOutState(second=True).index
    assert M[second, BaseOutState(third=True, outs=1).index] == pytest.approx(m.p_sac_success)
    assert M[BaseOutState(third=True, outs=2).index, THREE_OUTS] == pytest.approx(m.p_out + m.p_sac_success +
                                                                                   m.p_sac_fail)
    assert M[BaseOutState(third=True).index, SCORED] > M[BaseOutState(second=True).index, SCORED]


@pytest.mark.fast
def test_calibration_hits_targets():
    calibrated = calibrate_event_model(EventModel(), 0.736, 0.566, 0.75)
    bunt, swing = bunt_policy_value(calibrated, 0.75)
    assert bunt == pytest.approx(0.736, abs=1e-6)
    assert swing == pytest.approx(0.566, abs=1e-6)
    total = sum(getattr(calibrated, o) for o in ('p_out', 'p_walk', 'p_single', 'p_double', 'p_triple', 'p_home_run',
                                                 'p_sac_success', 'p_sac_fail'))
    assert total == pytest.approx(1, abs=1e-12)

    with pytest.raises(SimulatorError):
        calibrate_event_model(EventModel(), 1.0, 0.0, 0.75)


@pytest.mark.fast
def test_game_length():
    assert game_length_distribution(GeometricGameModel(1.0), 2) == 0
    g = GeometricGameModel(0.72)
    assert game_length_distribution(g, 3) == pytest.approx(0.0784)
    assert 1 - game_length_distribution(g, 3) == pytest.approx(0.9216)
    assert game_length_distribution(GeometricGameModel(0.5), 3) == pytest.approx(0.25)
    for r in (0.1, 0.5, 1.0):
        assert game_length_distribution(GeometricGameModel(r), 1) == 1

    table = game_length_table(g)
    assert list(table['inning']) == [10, 11, 12, 13, 14, 15]
    assert table.loc[1, 'p_within'] == pytest.approx(0.9216)
    assert table['p_exactly'].sum() == pytest.approx(1 - 0.28**6)

    with pytest.raises(SimulatorError):
        GeometricGameModel(0.0)
    with pytest.raises(SimulatorError):
        game_length_distribution(g, 0)


@pytest.mark.fast
@pytest.mark.parametrize(['n', 'p_bunt', 'p_swing', 'p_continue_win', 'expected'], [
    (4.15, 0.6, 0.6, 0.5, 0.0),
    (4.15, 0.736, 0.566, 0.5, 0.35275),
    (4.15, 0.736, 0.566, 0.0, 0.7055),
])
def test_season_uplift(n, p_bunt, p_swing, p_continue_win, expected):
    assert season_uplift(n, p_bunt, p_swing, p_continue_win) == pytest.approx(expected)


@pytest.mark.fast
def test_season_uplift_validation():
    with pytest.raises(SimulatorError):
        season_uplift(4, 1.2, 0.5, 0.5)


@pytest.mark.fast
def test_observed_extra_innings():
    counts = observed_extra_innings(read_event_directory(os.path.join(data_dir, 'events')))
    assert counts == {1: 11, 2: 3}
    assert fit_geometric(counts).r == pytest.approx(14 / 17)
    with pytest.raises(SimulatorError):
        fit_geometric({})
