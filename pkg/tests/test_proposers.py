import pytest

from relmaze.config.settings import ProposerConfig
from relmaze.engine.qtable import QTable
from relmaze.engine.replay import ExperienceTuple
from relmaze.errors import ConfigError, GatewayError, ReplyParseError, ScriptExhaustedError, TransportError
from relmaze.maze.core import Coord
from relmaze.proposer.builtin import GreedyBlindProposer, OracleProposer, ScriptedProposer, UniformRandomProposer
from relmaze.proposer.factory import create_proposer
from relmaze.proposer.interface import ProposalContext
from relmaze.proposer.llm import LLMProposer
from relmaze.proposer.prompting import (
    build_coordinate_prompt,
    build_prompt,
    parse_coordinate_reply,
    parse_reply,
)
from relmaze.relations.graph import build_graph, render_relations


def context(maze, at, q=None, exemplars=(), budget=10):
    graph = build_graph(maze)
    current = graph.label(at)
    table = q if q is not None else QTable(graph)
    return ProposalContext(
        graph=graph,
        current=current,
        goal=graph.goal_label,
        q_row=table.row(current),
        exemplars=list(exemplars),
        step_budget_left=budget,
    )


def test_q_row_keys_must_be_neighbours(open_3x3):
    graph = build_graph(open_3x3)
    with pytest.raises(ValueError):
        ProposalContext(graph=graph, current="A", goal="I", q_row={"E": 1.0})


class TestBuiltinProposers:
    def test_oracle_takes_the_short_way_round(self, walled_5x5):
        # right along the top is 12 moves, down the left side is 8
        assert OracleProposer().propose(context(walled_5x5, Coord(0, 0))).action == "F"

    def test_oracle_always_moves_closer(self, open_3x3):
        ctx = context(open_3x3, Coord(0, 0))
        action = OracleProposer().propose(ctx).action
        assert ctx.graph.distance(action, "I") == 3

    def test_greedy_blind_walks_into_walls(self, walled_5x5):
        ctx = context(walled_5x5, Coord(0, 2))
        action = GreedyBlindProposer().propose(ctx).action
        assert action == "H"
        assert action not in ctx.graph.neighbors("C")

    def test_greedy_blind_breaks_ties_by_label(self, walled_5x5):
        assert GreedyBlindProposer().propose(context(walled_5x5, Coord(0, 0))).action == "B"

    def test_scripted_replays_then_fails(self, open_3x3):
        proposer = ScriptedProposer(["B", "ZZ"])
        ctx = context(open_3x3, Coord(0, 0))
        assert proposer.propose(ctx).action == "B"
        assert proposer.propose(ctx).action == "ZZ"
        with pytest.raises(ScriptExhaustedError):
            proposer.propose(ctx)

    def test_uniform_random_is_seeded(self, open_3x3):
        ctx = context(open_3x3, Coord(1, 1))
        first, second = UniformRandomProposer(seed=3), UniformRandomProposer(seed=3)
        seq1 = [first.propose(ctx).action for _ in range(20)]
        seq2 = [second.propose(ctx).action for _ in range(20)]
        assert seq1 == seq2
        assert set(seq1) <= {"B", "D", "F", "H"}

    def test_factory(self, open_3x3):
        assert create_proposer(ProposerConfig(kind="oracle")).name == "oracle"
        assert create_proposer(ProposerConfig(kind="scripted", script=["A"])).name == "scripted"
        with pytest.raises(ConfigError):
            create_proposer(ProposerConfig(kind="llm"))


class TestPrompts:
    def test_relational_prompt_layout(self, open_3x3):
        graph = build_graph(open_3x3)
        q = QTable(graph)
        q.set("A", "D", 2.5)
        q.set("A", "B", -1.0)
        exemplars = [ExperienceTuple(s="B", a="C", r=-1, s_next="C", q=-0.1)] * 6
        ctx = context(open_3x3, Coord(0, 0), q=q, exemplars=exemplars, budget=7)
        prompt = build_prompt(ctx, max_exemplars=4)
        assert render_relations(graph) in prompt
        assert "Current node: A" in prompt
        assert "Goal node: I" in prompt
        assert "Moves left: 7" in prompt
        assert "Q-values of available moves (higher is better): B:-1.00 D:2.50" in prompt
        assert prompt.count("(B, C, -1, C, -0.10)") == 4
        assert prompt.endswith("Answer with exactly one neighbour label of node A.")

    def test_coordinate_prompt_has_no_labels(self, walled_5x5):
        prompt = build_coordinate_prompt(context(walled_5x5, Coord(0, 0)))
        assert "Current position: (0,0)" in prompt
        assert "Goal position: (2,2)" in prompt
        assert "(1,1)" in prompt
        assert "relation" not in prompt.lower()
        assert "Q-values" not in prompt

    def test_parse_prefers_neighbours(self, open_3x3):
        ctx = context(open_3x3, Coord(0, 0))
        # "I" is a node label but not a neighbour of A
        assert parse_reply("I'd go to D.", ctx).action == "D"

    def test_parse_falls_back_to_any_grid_label(self, open_3x3):
        assert parse_reply("Go to E", context(open_3x3, Coord(0, 0))).action == "E"

    def test_parse_failure(self, open_3x3):
        with pytest.raises(ReplyParseError):
            parse_reply("move to q", context(open_3x3, Coord(0, 0)))
        with pytest.raises(ReplyParseError):
            parse_reply("Q", context(open_3x3, Coord(0, 0)))

    def test_parse_coordinates(self, open_3x3):
        ctx = context(open_3x3, Coord(0, 0))
        assert parse_coordinate_reply("I move to (1, 0).", ctx).action == "D"
        with pytest.raises(ReplyParseError):
            parse_coordinate_reply("(9, 9)", ctx)


class TestLLMProposer:
    def test_records_transcript(self, open_3x3, canned_backend):
        proposer = LLMProposer(canned_backend(["B"]), tag="m1")
        assert proposer.propose(context(open_3x3, Coord(0, 0))).action == "B"
        entry = proposer.transcripts[0]
        assert entry.tag == "m1" and entry.reply == "B" and entry.action == "B"
        assert "Relation network:" in entry.prompt

    def test_coordinate_style(self, open_3x3, canned_backend):
        proposer = LLMProposer(canned_backend(["(1,0)"]), prompt_style="coordinate")
        assert proposer.propose(context(open_3x3, Coord(0, 0))).action == "D"

    def test_gateway_failure_is_recorded_and_raised(self, open_3x3, canned_backend):
        proposer = LLMProposer(canned_backend([TransportError("down", attempts=3)]))
        with pytest.raises(GatewayError):
            proposer.propose(context(open_3x3, Coord(0, 0)))
        assert proposer.transcripts[0].error.startswith("TransportError")

    def test_unparseable_reply(self, open_3x3, canned_backend):
        proposer = LLMProposer(canned_backend(["no idea"]))
        with pytest.raises(ReplyParseError):
            proposer.propose(context(open_3x3, Coord(0, 0)))
