"""Prompt construction and reply parsing for LLM proposers"""

import re
from typing import List

from ..errors import InvalidPositionError, ReplyParseError
from ..relations.graph import render_relations
from ..relations.labels import decode_label
from .interface import Proposal, ProposalContext

DEFAULT_EXEMPLARS = 4

SYSTEM_PROMPT = (
    "You are a path-planning agent in a maze. Reach the goal in as few moves as possible. "
    "Never move to a node that is not directly connected to your current node."
)

_LABEL_TOKEN = re.compile(r"\b[A-Z]+\b")
_COORD_TOKEN = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def _format_q_row(ctx: ProposalContext) -> str:
    if not ctx.q_row:
        return "none"
    ordered = sorted(ctx.q_row.items(), key=lambda kv: decode_label(kv[0]))
    return " ".join(f"{a}:{v:.2f}" for a, v in ordered)


def build_prompt(ctx: ProposalContext, max_exemplars: int = DEFAULT_EXEMPLARS) -> str:
    """Relational prompt: network, position, Q-values and exemplars, labels only"""
    parts = [
        "The maze is given as a relation network. "
        'Each line "X: Y Z" means node X is directly connected to nodes Y and Z.',
        "",
        "Relation network:",
        render_relations(ctx.graph),
        "",
        f"Current node: {ctx.current}",
        f"Goal node: {ctx.goal}",
        f"Moves left: {ctx.step_budget_left}",
        f"Q-values of available moves (higher is better): {_format_q_row(ctx)}",
    ]
    exemplars = ctx.exemplars[:max_exemplars]
    if exemplars:
        parts += [
            "",
            "Similar past experience as (state, action, reward, next state, Q-value):",
        ]
        parts += [t.as_prompt_line() for t in exemplars]
    parts += ["", f"Answer with exactly one neighbour label of node {ctx.current}."]
    return "\n".join(parts)


def build_coordinate_prompt(ctx: ProposalContext) -> str:
    """Coordinate-only prompt used by the naive method (no relation network)"""
    g = ctx.graph
    free = set(g.labels)
    blocked = [
        f"({r},{c})"
        for r in range(g.height)
        for c in range(g.width)
        if g.label((r, c)) not in free
    ]
    cur = g.coord(ctx.current)
    goal = g.coord(ctx.goal)
    parts = [
        f"The maze is a grid of {g.height} rows and {g.width} columns. "
        "Positions are (row, col) counted from 0. You move up, down, left or right by one cell.",
        f"Blocked cells: {', '.join(blocked) if blocked else 'none'}",
        f"Current position: ({cur.row},{cur.col})",
        f"Goal position: ({goal.row},{goal.col})",
        f"Moves left: {ctx.step_budget_left}",
    ]
    if any(v != 0.0 for v in ctx.q_row.values()):
        pairs = []
        for a, v in sorted(ctx.q_row.items(), key=lambda kv: decode_label(kv[0])):
            c = g.coord(a)
            pairs.append(f"({c.row},{c.col}):{v:.2f}")
        parts.append(f"Q-values of available moves (higher is better): {' '.join(pairs)}")
    parts += ["", "Answer with the (row, col) position you move to next."]
    return "\n".join(parts)


def parse_reply(reply: str, ctx: ProposalContext) -> Proposal:
    """First neighbour label in the reply, else the first in-grid label, else failure"""
    tokens: List[str] = _LABEL_TOKEN.findall(reply)
    neighbors = set(ctx.graph.neighbors(ctx.current))
    for tok in tokens:
        if tok in neighbors:
            return Proposal(action=tok, rationale=reply.strip())
    for tok in tokens:
        if ctx.graph.contains_label(tok):
            return Proposal(action=tok, rationale=reply.strip())
    raise ReplyParseError(f"no node label in reply: {reply[:80]!r}")


def parse_coordinate_reply(reply: str, ctx: ProposalContext) -> Proposal:
    """First in-grid (row, col) pair in the reply, mapped to its label"""
    for match in _COORD_TOKEN.finditer(reply):
        try:
            label = ctx.graph.label((int(match.group(1)), int(match.group(2))))
        except InvalidPositionError:
            continue
        return Proposal(action=label, rationale=reply.strip())
    raise ReplyParseError(f"no grid position in reply: {reply[:80]!r}")
