import numpy as np
import pytest

from relmaze.bench.suite import generate_suite_entries
from relmaze.config.settings import SamplerConfig, SuiteSpec
from relmaze.engine.episode import greedy_rollout, run_episode
from relmaze.engine.qtable import QTable
from relmaze.engine.replay import ExperienceTuple, ReplayBuffer, retrieve_similar
from relmaze.engine.sampler import ARGMAX_BRANCH, PROPOSER_BRANCH, ActionSampler, sample_action, update_q
from relmaze.errors import LabelError
from relmaze.maze.core import Coord, shortest_path_len
from relmaze.proposer.builtin import GreedyBlindProposer, OracleProposer, ScriptedProposer, UniformRandomProposer
from relmaze.proposer.interface import Proposal, ProposalContext, Proposer
from relmaze.relations.graph import build_graph


class ExplodingProposer(Proposer):
    """Fails the test if the sampler ever asks it"""

    @property
    def name(self):
        return "exploding"

    def propose(self, ctx):
        raise AssertionError("proposer branch taken")


class CountingProposer(Proposer):
    def __init__(self):
        self.calls = 0

    @property
    def name(self):
        return "counting"

    def propose(self, ctx):
        self.calls += 1
        return Proposal(action=ctx.graph.neighbors(ctx.current)[-1])


def _context(graph, q, current="A"):
    return ProposalContext(graph=graph, current=current, goal=graph.goal_label, q_row=q.row(current))


class TestQUpdate:
    def test_goal_step_from_zero(self, open_3x3):
        q = QTable(build_graph(open_3x3))
        t = ExperienceTuple(s="F", a="I", r=30.0, s_next="I")
        assert update_q(SamplerConfig(), q, t, terminal=True) == pytest.approx(3.0)
        assert q.get("F", "I") == pytest.approx(3.0)

    def test_ordinary_step_from_zero(self, open_3x3):
        q = QTable(build_graph(open_3x3))
        t = ExperienceTuple(s="E", a="F", r=-1.0, s_next="F")
        assert update_q(SamplerConfig(), q, t, terminal=False) == pytest.approx(-0.1)

    def test_bootstraps_from_next_state(self, open_3x3):
        q = QTable(build_graph(open_3x3))
        q.set("F", "I", 3.0)
        t = ExperienceTuple(s="E", a="F", r=-1.0, s_next="F")
        # 0.1 * (-1 + 0.9 * 3.0)
        assert update_q(SamplerConfig(), q, t, terminal=False) == pytest.approx(0.17)

    def test_terminal_ignores_next_state(self, open_3x3):
        q = QTable(build_graph(open_3x3))
        q.set("I", "H", 100.0)
        t = ExperienceTuple(s="H", a="I", r=30.0, s_next="I")
        assert update_q(SamplerConfig(), q, t, terminal=True) == pytest.approx(3.0)

    def test_rejected_moves_go_to_the_penalty_map(self, open_3x3):
        q = QTable(build_graph(open_3x3))
        t = ExperienceTuple(s="A", a="E", r=-1.0, s_next="A", rejected=True)
        assert update_q(SamplerConfig(), q, t, terminal=False) == pytest.approx(-0.1)
        assert q.penalties == {("A", "E"): pytest.approx(-0.1)}
        assert len(q) == 0
        assert set(q.row("A")) == {"B", "D"}


class TestQTable:
    def test_best_action_ties_go_to_lowest_label(self, open_3x3):
        q = QTable(build_graph(open_3x3))
        assert q.best_action("E") == "B"
        q.set("E", "H", 0.5)
        assert q.best_action("E") == "H"

    def test_snapshot(self, open_3x3, walled_5x5):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        q.set("A", "B", 1.5)
        q.set("A", "E", -0.1)
        restored = QTable.from_snapshot(q.to_snapshot(), graph)
        assert restored.values == q.values
        assert restored.penalties == q.penalties
        with pytest.raises(LabelError):
            QTable.from_snapshot(q.to_snapshot(), build_graph(walled_5x5))


class TestSampler:
    @pytest.mark.parametrize("epsilon,low,high", [(0.3, 0.68, 0.72), (0.7, 0.28, 0.32)])
    def test_proposer_frequency_matches_one_minus_epsilon(self, open_3x3, epsilon, low, high):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        ctx = _context(graph, q)
        cfg = SamplerConfig(epsilon=epsilon, seed=7001)
        # the proposer always answers D, the untrained argmax always B
        proposer = CountingProposer()
        n = 10_000
        picks = [sample_action(cfg, q, ctx, proposer) for _ in range(n)]
        assert proposer.calls == picks.count("D")
        assert low <= picks.count("D") / n <= high

    def test_branch_frequency_through_action_sampler(self, open_3x3):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        sampler = ActionSampler(SamplerConfig(epsilon=0.3, seed=0))
        n = 10_000
        hits = sum(
            sampler.sample(q, "A", OracleProposer(), lambda: _context(graph, q)).branch == PROPOSER_BRANCH
            for _ in range(n)
        )
        assert 0.68 <= hits / n <= 0.72

    @pytest.mark.parametrize("epsilon,expected", [(0.0, "D"), (1.0, "B")])
    def test_sample_action_boundaries(self, open_3x3, epsilon, expected):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        ctx = _context(graph, q)
        cfg = SamplerConfig(epsilon=epsilon, seed=7002)
        assert {sample_action(cfg, q, ctx, CountingProposer()) for _ in range(500)} == {expected}

    def test_epsilon_one_never_asks_the_proposer(self, open_3x3):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        sampler = ActionSampler(SamplerConfig(epsilon=1.0))
        built = []

        def factory():
            built.append(1)
            return _context(graph, q)

        for _ in range(200):
            choice = sampler.sample(q, "A", ExplodingProposer(), factory)
            assert choice.branch == ARGMAX_BRANCH
            assert choice.action == "B"
        assert built == []

    def test_epsilon_zero_always_asks_the_proposer(self, open_3x3):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        proposer = CountingProposer()
        sampler = ActionSampler(SamplerConfig(epsilon=0.0))
        for _ in range(200):
            assert sampler.sample(q, "A", proposer, lambda: _context(graph, q)).action == "D"
        assert proposer.calls == 200

    def test_conventional_orientation(self, open_3x3):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        sampler = ActionSampler(SamplerConfig(epsilon=0.0, proposer_probability="epsilon"))
        for _ in range(50):
            assert sampler.sample(q, "A", ExplodingProposer(), lambda: _context(graph, q)).branch == ARGMAX_BRANCH

    def test_proposer_failure_falls_back_to_argmax(self, open_3x3):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        q.set("A", "D", 1.0)
        sampler = ActionSampler(SamplerConfig(epsilon=0.0))
        choice = sampler.sample(q, "A", ScriptedProposer([]), lambda: _context(graph, q))
        assert choice.fallback
        assert choice.action == "D"

    def test_sample_action_is_reproducible(self, open_3x3):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        q.set("A", "D", 1.0)
        ctx = _context(graph, q)
        cfg = SamplerConfig(epsilon=0.5, seed=42)
        rng1, rng2 = np.random.default_rng(42), np.random.default_rng(42)
        proposer = CountingProposer()
        picks1 = [sample_action(cfg, q, ctx, proposer, rng1) for _ in range(50)]
        picks2 = [sample_action(cfg, q, ctx, proposer, rng2) for _ in range(50)]
        assert picks1 == picks2

    def test_epsilon_decay(self):
        cfg = SamplerConfig(epsilon=0.3, epsilon_final=0.1, decay_episodes=10)
        assert cfg.epsilon_at(0) == pytest.approx(0.3)
        assert cfg.epsilon_at(5) == pytest.approx(0.2)
        assert cfg.epsilon_at(50) == pytest.approx(0.1)
        assert SamplerConfig().epsilon_at(50) == pytest.approx(0.3)


class TestReplay:
    def test_fifo_capacity(self):
        buf = ReplayBuffer(capacity=2)
        for i in range(3):
            buf.append(ExperienceTuple(s="A", a="B", r=float(i), s_next="B"))
        assert [t.r for t in buf.entries] == [1.0, 2.0]

    def test_retrieval_order(self, open_3x3):
        graph = build_graph(open_3x3)
        buf = ReplayBuffer()
        t0 = ExperienceTuple(s="A", a="B", r=-1, s_next="B", q=0.0)
        t1 = ExperienceTuple(s="B", a="C", r=-1, s_next="C", q=1.0)
        t2 = ExperienceTuple(s="B", a="E", r=-1, s_next="E", q=2.0)
        t3 = ExperienceTuple(s="I", a="H", r=-1, s_next="H", q=5.0)
        t4 = ExperienceTuple(s="A", a="D", r=-1, s_next="D", q=0.0)
        for t in (t0, t1, t2, t3, t4):
            buf.append(t)
        # nearest first, then higher q, then most recent
        assert retrieve_similar(buf, graph, "A", 3) == [t4, t0, t2]
        assert retrieve_similar(buf, graph, "A", 0) == []
        assert retrieve_similar(ReplayBuffer(), graph, "A", 4) == []


class TestEpisode:
    def test_oracle_walks_the_shortest_path(self, walled_5x5):
        graph = build_graph(walled_5x5)
        q = QTable(graph)
        buf = ReplayBuffer()
        cfg = SamplerConfig(epsilon=0.0)
        log = run_episode(walled_5x5, graph, q, buf, cfg, OracleProposer(), walled_5x5.start)
        assert log.reached_goal
        assert log.step_count == shortest_path_len(walled_5x5) == 8
        assert log.rewards == [-1.0] * 7 + [30.0]
        assert log.total_return == 23.0
        assert log.rejected_moves == 0
        assert log.proposer_calls == 8
        assert len(buf) == 8
        assert buf.entries[-1].q == pytest.approx(3.0)

    def test_greedy_blind_runs_into_the_cap(self, walled_5x5):
        graph = build_graph(walled_5x5)
        cfg = SamplerConfig(epsilon=0.0)
        log = run_episode(walled_5x5, graph, QTable(graph), ReplayBuffer(), cfg,
                          GreedyBlindProposer(), walled_5x5.start)
        assert not log.reached_goal
        assert log.step_count == 100
        assert log.rejected_moves == 98
        assert log.visited[-1] == Coord(0, 2)
        assert log.total_return == -100.0

    def test_out_of_grid_label_is_rejected(self, open_3x3):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        log = run_episode(open_3x3, graph, q, ReplayBuffer(), SamplerConfig(epsilon=0.0),
                          ScriptedProposer(["ZZ", "B", "C", "F", "I"]), open_3x3.start)
        assert log.reached_goal
        assert log.visited[:2] == [Coord(0, 0), Coord(0, 0)]
        assert log.rejected_moves == 1
        assert log.step_count == 5
        assert q.penalties[("A", "ZZ")] == pytest.approx(-0.1)

    def test_script_exhaustion_counts_fallbacks(self, open_3x3):
        graph = build_graph(open_3x3)
        log = run_episode(open_3x3, graph, QTable(graph), ReplayBuffer(), SamplerConfig(epsilon=0.0),
                          ScriptedProposer([]), open_3x3.start)
        assert log.proposer_fallbacks == log.step_count > 0

    def test_start_at_goal(self, open_3x3):
        graph = build_graph(open_3x3)
        log = run_episode(open_3x3, graph, QTable(graph), ReplayBuffer(), SamplerConfig(),
                          OracleProposer(), open_3x3.goal)
        assert log.reached_goal and log.step_count == 0 and log.visited == [open_3x3.goal]

    def test_seeded_episodes_are_reproducible(self, walled_5x5):
        graph = build_graph(walled_5x5)

        def once():
            return run_episode(walled_5x5, graph, QTable(graph), ReplayBuffer(), SamplerConfig(seed=9),
                               GreedyBlindProposer(), walled_5x5.start)

        assert once() == once()


class TestGreedyRollout:
    def test_follows_learned_values(self, open_3x3):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        for s, a in (("A", "B"), ("B", "C"), ("C", "F"), ("F", "I")):
            q.set(s, a, 1.0)
        log = greedy_rollout(open_3x3, graph, q, open_3x3.start)
        assert log.reached_goal
        assert log.step_count == 4

    def test_untrained_table_oscillates(self, open_3x3):
        graph = build_graph(open_3x3)
        log = greedy_rollout(open_3x3, graph, QTable(graph), open_3x3.start)
        assert not log.reached_goal
        assert log.step_count == 36
        assert set(log.visited) == {Coord(0, 0), Coord(0, 1)}

    @pytest.mark.slow
    def test_uniform_random_proposer_converges_on_small_suite(self):
        entries = [e for e in generate_suite_entries(SuiteSpec()) if e.size_class == "5x5"]
        assert len(entries) == 30
        for i, entry in enumerate(entries):
            maze = entry.maze
            graph = build_graph(maze)
            q = QTable(graph)
            cfg = SamplerConfig(epsilon=0.5, seed=i)
            buf = ReplayBuffer(cfg.buffer_capacity)
            sampler = ActionSampler(cfg)
            proposer = UniformRandomProposer(seed=i)
            converged = None
            for n in range(500):
                run_episode(maze, graph, q, buf, cfg, proposer, maze.start,
                            sampler=sampler, maze_id=entry.id, episode_index=n)
                if greedy_rollout(maze, graph, q, maze.start).reached_goal:
                    converged = n
                    break
            assert converged is not None, entry.id
