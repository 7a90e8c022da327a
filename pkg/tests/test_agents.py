"""Update rules, presets, agent behaviour, and the linear reduction."""

import numpy as np
import pytest

from envlib import (
    CHAIN_GAMMA,
    CHAIN_OPTIMAL_Q,
    CHAIN_TRANSITIONS,
    PAIN_CHAIN_TRANSITIONS,
    chain_env,
    pain_chain_env,
    random_positive_mdp,
)
from oracles import stream_optimal_q, value_iteration

from splitq.agents import (
    AgentKind,
    DQLAgent,
    LinearSplitAgent,
    MaxPainAgent,
    MENTAL_KINDS,
    PRESET_TABLE,
    QLAgent,
    SarsaAgent,
    SplitQAgent,
    Sql2Agent,
    dql_update,
    linear_update,
    make_agent,
    maxpain_update,
    preset_params,
    ql_update,
    sarsa_update,
    sql2_select,
    sql2_update,
    sql_select,
    sql_update,
)
from splitq.core import AgentParams, LinearQFunction, QTables, RewardPair, RowTable
from splitq.tournament import run_rollout


def greedy_params(**kw):
    kw.setdefault("epsilon", 1.0)
    kw.setdefault("gamma", CHAIN_GAMMA)
    return AgentParams(**kw)


class TestAgentKind:
    def test_parse_case_insensitive(self):
        assert AgentKind.parse("ql") is AgentKind.QL
        assert AgentKind.parse("bvftd") is AgentKind.BVFTD
        assert AgentKind.parse(AgentKind.PD) is AgentKind.PD

    def test_unknown_kind_raises(self):
        with pytest.raises(ValueError):
            AgentKind.parse("freeform")

    def test_labels_round_trip(self):
        for kind in AgentKind:
            assert AgentKind.parse(kind.value) is kind


class TestPresets:
    def test_fixed_presets_exact(self):
        sql = preset_params(AgentKind.SQL)
        assert (sql.lambda_pos, sql.w_pos, sql.lambda_neg, sql.w_neg) == (1.0, 1.0, 1.0, 1.0)
        # Knockout naming: the stream named in the acronym is the zeroed one.
        pql = preset_params(AgentKind.PQL)
        assert (pql.lambda_pos, pql.w_pos, pql.lambda_neg, pql.w_neg) == (0.0, 0.0, 1.0, 1.0)
        nql = preset_params(AgentKind.NQL)
        assert (nql.lambda_pos, nql.w_pos, nql.lambda_neg, nql.w_neg) == (1.0, 1.0, 0.0, 0.0)

    def test_noisy_presets_need_rng(self):
        with pytest.raises(ValueError):
            preset_params(AgentKind.ADHD)

    def test_sampling_stays_inside_the_band(self):
        # Memory factors are clamped to [0, 1]; reward weights only to >= 0.
        rng = np.random.default_rng(11)
        for kind in MENTAL_KINDS:
            (m_lp, h_lp), (m_wp, h_wp), (m_ln, h_ln), (m_wn, h_wn) = PRESET_TABLE[kind]
            for _ in range(200):
                p = preset_params(kind, rng)
                assert max(0.0, m_lp - h_lp) <= p.lambda_pos <= min(1.0, m_lp + h_lp)
                assert max(0.0, m_wp - h_wp) <= p.w_pos <= m_wp + h_wp
                assert max(0.0, m_ln - h_ln) <= p.lambda_neg <= min(1.0, m_ln + h_ln)
                assert max(0.0, m_wn - h_wn) <= p.w_neg <= m_wn + h_wn

    def test_memory_factors_never_exceed_one(self):
        # ADD's gain memory and CP's loss memory are centred at 1; the upper
        # half of the band must fold onto 1 or the stored table would grow
        # geometrically once alpha decays below the excess.
        rng = np.random.default_rng(12)
        saw_clamped_add = saw_clamped_cp = False
        for _ in range(500):
            add = preset_params(AgentKind.ADD, rng)
            cp = preset_params(AgentKind.CP, rng)
            assert add.lambda_pos <= 1.0 and add.lambda_neg <= 1.0
            assert cp.lambda_pos <= 1.0 and cp.lambda_neg <= 1.0
            saw_clamped_add = saw_clamped_add or add.lambda_pos == 1.0
            saw_clamped_cp = saw_clamped_cp or cp.lambda_neg == 1.0
        assert saw_clamped_add and saw_clamped_cp  # the clamp actually binds
        # Reward weights are not capped: PD's loss weight lives around 100.
        pd = preset_params(AgentKind.PD, np.random.default_rng(13))
        assert pd.w_neg > 1.0

    def test_preset_table_means(self):
        # The headline parameterisations: which stream is dimmed or boosted.
        assert PRESET_TABLE[AgentKind.ADD][2][0] == 0.5  # dimmed loss memory
        assert PRESET_TABLE[AgentKind.ADHD][0][0] == 0.2  # both memories fade
        assert PRESET_TABLE[AgentKind.AD][0][0] == 0.1
        assert PRESET_TABLE[AgentKind.CP][1][0] == 0.5  # muted gain reward
        assert PRESET_TABLE[AgentKind.BVFTD][1][0] == 100.0  # boosted gains
        assert PRESET_TABLE[AgentKind.PD][3][0] == 100.0  # boosted losses
        assert PRESET_TABLE[AgentKind.M][0] == (0.5, 0.1)

    def test_reproducible_given_stream(self):
        a = preset_params(AgentKind.PD, np.random.default_rng(3))
        b = preset_params(AgentKind.PD, np.random.default_rng(3))
        assert a == b

    def test_overrides_pass_through(self):
        p = preset_params(AgentKind.SQL, epsilon=0.2, gamma=0.5)
        assert p.epsilon == 0.2 and p.gamma == 0.5


class TestQlUpdate:
    def test_first_update_with_alpha_one_takes_target(self):
        table = RowTable()
        table.row(0, 2)
        ql_update(table, 0, 1, 5.0, None, alpha=1.0, gamma=0.9)
        assert table.value(0, 1) == 5.0

    def test_bootstrap_uses_max_of_next_row(self):
        table = RowTable()
        table.row(0, 2)
        nxt = table.row(1, 2)
        nxt[0] = 2.0
        nxt[1] = 7.0
        ql_update(table, 0, 0, 1.0, 1, alpha=0.5, gamma=0.9)
        assert table.value(0, 0) == pytest.approx(0.5 * (1.0 + 0.9 * 7.0))

    def test_terminal_has_no_bootstrap(self):
        table = RowTable()
        table.row(0, 1)
        ql_update(table, 0, 0, 3.0, None, alpha=0.5, gamma=0.9)
        assert table.value(0, 0) == pytest.approx(1.5)

    def test_alpha_validated(self):
        table = RowTable()
        table.row(0, 1)
        with pytest.raises(ValueError):
            ql_update(table, 0, 0, 1.0, None, alpha=0.0, gamma=0.9)

    def test_converges_to_value_iteration_on_chain(self):
        agent = QLAgent(AgentKind.QL, greedy_params(), np.random.default_rng(0))
        run_rollout(agent, chain_env(), horizon=30000, record=False)
        oracle_q, _ = value_iteration(4, 2, CHAIN_TRANSITIONS, CHAIN_GAMMA)
        assert np.allclose(oracle_q, CHAIN_OPTIMAL_Q)
        for s in range(4):
            for a in range(2):
                assert agent.tables.positive.value(s, a) == pytest.approx(
                    oracle_q[s, a], abs=0.05
                )


class TestDqlUpdate:
    def test_exactly_one_table_changes(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            a, b = RowTable(), RowTable()
            a.row(0, 2)
            b.row(0, 2)
            dql_update(a, b, 0, 0, 1.0, None, 1.0, 0.9, rng)
            changed_a = a.value(0, 0) != 0.0
            changed_b = b.value(0, 0) != 0.0
            assert changed_a != changed_b

    def test_coin_is_roughly_fair(self):
        rng = np.random.default_rng(5)
        n = 4000
        count_a = 0
        for _ in range(n):
            a, b = RowTable(), RowTable()
            a.row(0, 1)
            b.row(0, 1)
            dql_update(a, b, 0, 0, 1.0, None, 1.0, 0.9, rng)
            count_a += a.value(0, 0) != 0.0
        assert abs(count_a - n / 2) < 5 * np.sqrt(n * 0.25)

    def test_cross_evaluation(self):
        # Learner argmax is action 1, but the target value comes from the
        # other table's entry for that same action.
        a, b = RowTable(), RowTable()
        a.row(0, 1)
        b.row(0, 1)
        a.row(1, 2)[1] = 9.0
        b.row(1, 2)[1] = 2.0
        rng = np.random.default_rng(1)
        while True:
            dql_update(a, b, 0, 0, 1.0, 1, 1.0, 0.5, rng)
            if a.value(0, 0) != 0.0:
                break
            b.row(0)[0] = 0.0
        assert a.value(0, 0) == pytest.approx(1.0 + 0.5 * 2.0)

    def test_agent_acts_on_sum_of_tables(self):
        agent = DQLAgent(AgentKind.DQL, AgentParams(epsilon=0.0), np.random.default_rng(0))
        agent.tables.positive.row("s", 2)[0] = 3.0
        agent.tables.negative.row("s", 2)[1] = 4.0
        assert agent.act("s", 2) == 1


class TestSarsa:
    def test_backup_uses_chosen_next_action(self):
        table = RowTable()
        table.row(0, 2)
        nxt = table.row(1, 2)
        nxt[0] = 2.0
        nxt[1] = 7.0
        sarsa_update(table, 0, 0, 1.0, 1, next_action=0, alpha=1.0, gamma=0.5)
        # Bootstraps the chosen action's value (2.0), not the max (7.0).
        assert table.value(0, 0) == pytest.approx(1.0 + 0.5 * 2.0)

    def test_agent_commits_to_pending_action(self):
        agent = SarsaAgent(AgentKind.SARSA, AgentParams(epsilon=0.0), np.random.default_rng(0))
        agent.act(0, 2)
        agent.tables.positive.row(1, 2)[1] = 5.0
        agent.observe(0, 0, RewardPair(1.0, 0.0), 1, 2)
        # The greedy choice at state 1 was made inside observe; act must
        # return it unchanged even if the table is perturbed afterwards.
        agent.tables.positive.row(1)[0] = 99.0
        assert agent.act(1, 2) == 1

    def test_pending_cleared_on_new_episode(self):
        agent = SarsaAgent(AgentKind.SARSA, AgentParams(epsilon=0.0), np.random.default_rng(0))
        agent.act(0, 2)
        agent.observe(0, 0, RewardPair(1.0, 0.0), 1, 2)
        agent.begin_episode()
        agent.tables.positive.row(0)[0] = 1.0
        assert agent.act(0, 2) == 0

    def test_on_policy_value_tracks_uniform_policy_not_optimal(self):
        # With full exploration SARSA estimates the uniform policy's value,
        # which on this chain sits far below the optimal value everywhere.
        params = AgentParams(epsilon=1.0, gamma=CHAIN_GAMMA)
        agent = SarsaAgent(AgentKind.SARSA, params, np.random.default_rng(2))
        run_rollout(agent, chain_env(), horizon=40000, record=False)
        # Uniform-policy Q from a dedicated evaluation sweep.
        q = np.zeros((4, 2))
        for _ in range(2000):
            new_q = np.zeros_like(q)
            for (s, a), branches in CHAIN_TRANSITIONS.items():
                total = 0.0
                for prob, nxt, reward in branches:
                    cont = 0.0 if nxt is None else q[nxt].mean()
                    total += prob * (reward + CHAIN_GAMMA * cont)
                new_q[s, a] = total
            q = new_q
        for s in range(4):
            for a in range(2):
                learned = agent.tables.positive.value(s, a)
                assert learned == pytest.approx(q[s, a], abs=0.75)
        # Decisively below the optimal value where the policies diverge.
        assert agent.tables.positive.value(0, 0) < CHAIN_OPTIMAL_Q[0, 0] - 2.0


class TestSqlUpdate:
    def test_neutral_params_update_each_stream_like_ql(self):
        tables = QTables()
        tables.positive.row(0, 1)
        tables.negative.row(0, 1)
        params = AgentParams(gamma=0.9)
        sql_update(tables, params, 0, 0, RewardPair(4.0, -1.5), None, alpha=1.0)
        assert tables.positive.value(0, 0) == 4.0
        assert tables.negative.value(0, 0) == -1.5

    def test_lambda_decays_the_stored_estimate(self):
        tables = QTables()
        tables.positive.row(0, 1)[0] = 10.0
        tables.negative.row(0, 1)
        params = AgentParams(lambda_pos=0.5, gamma=0.9)
        sql_update(tables, params, 0, 0, RewardPair(0.0, 0.0), None, alpha=0.1)
        # 0.5 * 10 + 0.1 * (0 + 0 - 10) = 4.0
        assert tables.positive.value(0, 0) == pytest.approx(4.0)

    def test_w_scales_incoming_reward(self):
        tables = QTables()
        tables.positive.row(0, 1)
        tables.negative.row(0, 1)
        params = AgentParams(w_neg=100.0, gamma=0.9)
        sql_update(tables, params, 0, 0, RewardPair(0.0, -2.0), None, alpha=1.0)
        assert tables.negative.value(0, 0) == pytest.approx(-200.0)

    def test_streams_bootstrap_independently(self):
        tables = QTables()
        tables.positive.row(0, 1)
        tables.negative.row(0, 1)
        nxt_p = tables.positive.row(1, 2)
        nxt_n = tables.negative.row(1, 2)
        nxt_p[:] = [1.0, 3.0]
        nxt_n[:] = [-4.0, -2.0]
        params = AgentParams(gamma=0.5)
        sql_update(tables, params, 0, 0, RewardPair(0.0, 0.0), 1, alpha=1.0)
        assert tables.positive.value(0, 0) == pytest.approx(0.5 * 3.0)
        assert tables.negative.value(0, 0) == pytest.approx(0.5 * -2.0)

    def test_zeroed_stream_stays_exactly_zero(self):
        rng = np.random.default_rng(8)
        tables = QTables()
        params = AgentParams(lambda_neg=0.0, w_neg=0.0, gamma=0.95)
        for _ in range(300):
            s = int(rng.integers(3))
            nxt = int(rng.integers(3))
            tables.positive.row(s, 2)
            tables.negative.row(s, 2)
            pair = RewardPair(float(rng.uniform(0, 5)), float(-rng.uniform(0, 5)))
            sql_update(
                tables, params, s, int(rng.integers(2)), pair,
                None if rng.random() < 0.2 else nxt,
                alpha=float(rng.uniform(0.01, 1.0)), n_next=2,
            )
        for s in range(3):
            assert np.all(tables.negative.row(s) == 0.0)

    def test_positive_stream_fixed_point_on_chain(self):
        params = greedy_params()
        agent = SplitQAgent(AgentKind.SQL, params, np.random.default_rng(3))
        run_rollout(agent, chain_env(), horizon=30000, record=False)
        q_pos, _ = stream_optimal_q(4, 2, CHAIN_TRANSITIONS, CHAIN_GAMMA, "pos")
        q_neg, _ = stream_optimal_q(4, 2, CHAIN_TRANSITIONS, CHAIN_GAMMA, "neg")
        for s in range(4):
            for a in range(2):
                assert agent.tables.positive.value(s, a) == pytest.approx(q_pos[s, a], abs=0.05)
                assert agent.tables.negative.value(s, a) == pytest.approx(q_neg[s, a], abs=0.05)

    def test_selection_sums_streams_unweighted(self):
        tables = QTables()
        tables.positive.row("s", 2)[:] = [10.0, 0.0]
        tables.negative.row("s", 2)[:] = [-9.0, 0.5]
        # negative row holds a positive entry only in this synthetic check
        tables.negative.row("s")[1] = 0.0
        tables.positive.row("s")[1] = 2.0
        rng = np.random.default_rng(0)
        assert sql_select(tables, 0.0, "s", 2, rng) == 1  # 1 vs 2


class TestSqlLockstepWithQl:
    def test_all_positive_rewards_make_sql_identical_to_ql(self):
        _, make_env = random_positive_mdp(17)
        env_ql = make_env(900)
        env_sql = make_env(900)
        ql = QLAgent(AgentKind.QL, AgentParams(), np.random.default_rng(55))
        sql = SplitQAgent(AgentKind.SQL, AgentParams(), np.random.default_rng(55))
        state_ql, state_sql = env_ql.reset(), env_sql.reset()
        for _ in range(2000):
            a_ql = ql.act(state_ql, 2)
            a_sql = sql.act(state_sql, 2)
            assert a_ql == a_sql
            next_ql, pair_ql, done_ql = env_ql.step(state_ql, a_ql)
            next_sql, pair_sql, done_sql = env_sql.step(state_sql, a_sql)
            assert pair_ql == pair_sql and done_ql == done_sql
            ql.observe(state_ql, a_ql, pair_ql, None if done_ql else next_ql, 2)
            sql.observe(state_sql, a_sql, pair_sql, None if done_sql else next_sql, 2)
            state_ql, state_sql = next_ql, next_sql
        for s in range(3):
            combined = sql.tables.combined_row(s)
            reference = ql.tables.positive.row(s)
            assert np.max(np.abs(combined - reference)) <= 1e-12
            assert np.all(sql.tables.negative.row(s) == 0.0)


class TestSql2:
    def test_update_ignores_w(self):
        tables = QTables()
        tables.positive.row(0, 1)
        tables.negative.row(0, 1)
        params = AgentParams(w_pos=100.0, w_neg=100.0, gamma=0.9)
        sql2_update(tables, params, 0, 0, RewardPair(2.0, -3.0), None, alpha=1.0)
        assert tables.positive.value(0, 0) == 2.0
        assert tables.negative.value(0, 0) == -3.0

    def test_selection_applies_w(self):
        tables = QTables()
        tables.positive.row("s", 2)[:] = [1.0, 0.0]
        tables.negative.row("s", 2)[:] = [-0.5, -0.1]
        rng = np.random.default_rng(0)
        neutral = AgentParams()
        assert sql2_select(tables, neutral, "s", 2, rng) == 0  # 0.5 vs -0.1
        loss_averse = AgentParams(w_neg=10.0)
        assert sql2_select(tables, loss_averse, "s", 2, rng) == 1  # -4 vs -1

    def test_agent_wiring(self):
        agent = Sql2Agent(AgentKind.SQL2, AgentParams(w_neg=10.0, epsilon=0.0), np.random.default_rng(0))
        agent.tables.positive.row("s", 2)[:] = [1.0, 0.0]
        agent.tables.negative.row("s", 2)[:] = [-0.5, -0.1]
        assert agent.act("s", 2) == 1


class TestMaxPain:
    def test_pain_table_learns_loss_magnitudes(self):
        tables = QTables()
        tables.positive.row(0, 1)
        tables.negative.row(0, 1)
        maxpain_update(tables, 0, 0, RewardPair(2.0, -3.0), None, alpha=1.0, gamma=0.9)
        assert tables.positive.value(0, 0) == 2.0
        assert tables.negative.value(0, 0) == 3.0  # magnitude, not sign

    def test_pain_table_stays_nonnegative(self):
        rng = np.random.default_rng(9)
        tables = QTables()
        for _ in range(500):
            s = int(rng.integers(3))
            tables.positive.row(s, 2)
            tables.negative.row(s, 2)
            pair = RewardPair(float(rng.uniform(0, 5)), float(-rng.uniform(0, 5)))
            nxt = None if rng.random() < 0.3 else int(rng.integers(3))
            maxpain_update(
                tables, s, int(rng.integers(2)), pair, nxt,
                alpha=float(rng.uniform(0.01, 1.0)), gamma=0.95, n_next=2,
            )
        for s in list(tables.negative.states()):
            assert np.all(tables.negative.row(s) >= 0.0)

    def test_pain_fixed_point_is_max_pain_not_min(self):
        params = greedy_params()
        agent = MaxPainAgent(AgentKind.MP, params, np.random.default_rng(6))
        run_rollout(agent, pain_chain_env(), horizon=30000, record=False)
        q_pain, _ = stream_optimal_q(3, 2, PAIN_CHAIN_TRANSITIONS, CHAIN_GAMMA, "pain")
        # Hand check of the root: worst path pays 3, then 5, then 8.
        assert q_pain[0, 0] == pytest.approx(3.0 + 0.95 * (5.0 + 0.95 * 8.0))
        for s in range(3):
            for a in range(2):
                assert agent.tables.negative.value(s, a) == pytest.approx(q_pain[s, a], abs=0.05)
                # all rewards here are losses, so the gain table never moves
                assert agent.tables.positive.value(s, a) == 0.0

    def test_selection_trades_reward_against_pain(self):
        agent = MaxPainAgent(AgentKind.MP, AgentParams(epsilon=0.0), np.random.default_rng(0), mixing=0.5)
        agent.tables.positive.row("s", 2)[:] = [4.0, 3.0]
        agent.tables.negative.row("s", 2)[:] = [6.0, 0.0]
        # 0.5*4 - 0.5*6 = -1 against 0.5*3 - 0 = 1.5
        assert agent.act("s", 2) == 1

    def test_mixing_validated(self):
        with pytest.raises(ValueError):
            MaxPainAgent(AgentKind.MP, AgentParams(), np.random.default_rng(0), mixing=1.5)


class TestVisitSchedule:
    def test_visits_shared_across_streams_and_alpha_follows(self):
        agent = SplitQAgent(AgentKind.SQL, AgentParams(epsilon=0.0), np.random.default_rng(0))
        agent.act(0, 2)
        agent.observe(0, 0, RewardPair(1.0, -1.0), None, 0)
        assert int(agent.tables.visits.row(0)[0]) == 1
        agent.act(0, 2)
        agent.observe(0, 0, RewardPair(1.0, -1.0), None, 0)
        assert int(agent.tables.visits.row(0)[0]) == 2
        # After updates with alpha 1 then 1/2**0.8 the entry follows the
        # deterministic recursion of the schedule.
        expected = 1.0
        expected = expected + 2**-0.8 * (1.0 - expected)
        assert agent.tables.positive.value(0, 0) == pytest.approx(expected)

    def test_each_action_has_its_own_count(self):
        agent = QLAgent(AgentKind.QL, AgentParams(epsilon=0.0), np.random.default_rng(0))
        agent.act(0, 2)
        agent.observe(0, 0, RewardPair(1.0, 0.0), None, 0)
        agent.act(0, 2)
        agent.observe(0, 1, RewardPair(1.0, 0.0), None, 0)
        assert int(agent.tables.visits.row(0)[0]) == 1
        assert int(agent.tables.visits.row(0)[1]) == 1


class TestLinearUpdate:
    def _one_hot(self, n_states, n_actions):
        dim = n_states * n_actions

        def extractor(state, action):
            psi = np.zeros(dim)
            psi[state * n_actions + action] = 1.0
            return psi

        return extractor, dim

    def test_one_hot_reduction_matches_tabular_split(self):
        rng = np.random.default_rng(21)
        extractor, dim = self._one_hot(3, 2)
        params = AgentParams(lambda_pos=0.7, w_pos=2.0, lambda_neg=0.4, w_neg=3.0, gamma=0.9)
        fn = LinearQFunction(feature_extractor=extractor, feature_dim=dim)
        tables = QTables()
        for s in range(3):
            tables.positive.row(s, 2)
            tables.negative.row(s, 2)
        for _ in range(400):
            s = int(rng.integers(3))
            a = int(rng.integers(2))
            nxt = None if rng.random() < 0.2 else int(rng.integers(3))
            pair = RewardPair(float(rng.uniform(0, 4)), float(-rng.uniform(0, 4)))
            alpha = float(rng.uniform(0.05, 1.0))
            sql_update(tables, params, s, a, pair, nxt, alpha, n_next=2)
            linear_update(fn, params, s, a, pair, nxt, None if nxt is None else range(2), alpha)
            for cs in range(3):
                for ca in range(2):
                    idx = cs * 2 + ca
                    assert abs(fn.theta_pos[idx] - tables.positive.value(cs, ca)) <= 1e-12
                    assert abs(fn.theta_neg[idx] - tables.negative.value(cs, ca)) <= 1e-12

    def test_unsplit_equals_split_on_positive_rewards_with_neutral_params(self):
        rng = np.random.default_rng(22)
        extractor, dim = self._one_hot(3, 2)
        params = AgentParams(gamma=0.9)
        split_fn = LinearQFunction(feature_extractor=extractor, feature_dim=dim)
        plain_fn = LinearQFunction(feature_extractor=extractor, feature_dim=dim)
        for _ in range(400):
            s = int(rng.integers(3))
            a = int(rng.integers(2))
            nxt = None if rng.random() < 0.2 else int(rng.integers(3))
            pair = RewardPair(float(rng.uniform(0, 4)), 0.0)
            alpha = float(rng.uniform(0.05, 1.0))
            next_actions = None if nxt is None else range(2)
            linear_update(split_fn, params, s, a, pair, nxt, next_actions, alpha, split=True)
            linear_update(plain_fn, params, s, a, pair, nxt, next_actions, alpha, split=False)
            assert np.all(split_fn.theta_neg == 0.0)
            assert np.max(np.abs(split_fn.theta_pos - plain_fn.theta_pos)) <= 1e-10

    def test_terminal_requires_no_next_actions(self):
        extractor, dim = self._one_hot(2, 2)
        fn = LinearQFunction(feature_extractor=extractor, feature_dim=dim)
        linear_update(fn, AgentParams(), 0, 0, RewardPair(1.0, 0.0), None, None, 0.5)
        with pytest.raises(ValueError):
            linear_update(fn, AgentParams(), 0, 0, RewardPair(1.0, 0.0), 1, [], 0.5)


class TestMakeAgent:
    def test_kind_to_class_mapping(self):
        rng = np.random.default_rng(0)
        prng = np.random.default_rng(1)
        assert isinstance(make_agent("QL", rng), QLAgent)
        assert isinstance(make_agent("DQL", rng), DQLAgent)
        assert isinstance(make_agent("SARSA", rng), SarsaAgent)
        assert isinstance(make_agent("MP", rng), MaxPainAgent)
        assert isinstance(make_agent("SQL2", rng), Sql2Agent)
        for kind in ("SQL", "PQL", "NQL", "ADD", "ADHD", "AD", "CP", "bvFTD", "PD", "M"):
            agent = make_agent(kind, rng, param_rng=prng)
            assert isinstance(agent, SplitQAgent)
            assert not isinstance(agent, Sql2Agent)

    def test_mental_kinds_sample_from_param_stream(self):
        a = make_agent("PD", np.random.default_rng(0), param_rng=np.random.default_rng(42))
        b = make_agent("PD", np.random.default_rng(1), param_rng=np.random.default_rng(42))
        assert a.params == b.params
        c = make_agent("PD", np.random.default_rng(1), param_rng=np.random.default_rng(43))
        assert c.params != a.params

    def test_explicit_params_win(self):
        p = AgentParams(lambda_pos=0.3)
        agent = make_agent("ADHD", np.random.default_rng(0), params=p)
        assert agent.params is p

    def test_linear_variants(self):
        extractor = lambda s, a: np.ones(2)
        agent = make_agent(
            "SQL", np.random.default_rng(0), feature_extractor=extractor, feature_dim=2
        )
        assert isinstance(agent, LinearSplitAgent)
        with pytest.raises(ValueError):
            make_agent("SQL", np.random.default_rng(0), feature_extractor=extractor)
