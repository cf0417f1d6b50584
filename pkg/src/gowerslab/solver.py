"""Backward-induction solver, strategy extraction, and verification.

Finite clopen games are determined: ``solve`` computes the winner and a
full strategy table for the winner, memoized on canonical position
serializations (histories are the state; positions with different move
lists are never merged).  ``naive_solve_oracle`` is the independent
check: plain unmemoized minimax with a smaller default budget.

Strategies are finite position-to-move tables, total on the positions
reachable when the owner follows the table and the opponent plays
anything legal.  ``verify_strategy`` replays a table against the
exhaustive adversary (every legal opponent line) or a seeded uniform
one, and reports the exact fraction of outcomes landing in the payoff.

A player with no legal move at a non-terminal position loses; finite
truncations can strand a player even though the infinite games cannot.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

from .errors import Budget, IllegalMove, StrategyIncomplete
from .games import (
    GameKind,
    GamePosition,
    Move,
    Player,
    initial_position,
    legal_moves,
    move_legal,
    play_outcome,
)
from .payoffs import Payoff
from .space import SpaceInstance


@dataclass
class Strategy:
    owner: Player
    kind: GameKind
    root: int
    horizon: int
    table: dict = field(default_factory=dict)  # pos.key() -> Move
    verified: bool = False
    name: str = ""

    def move_at(self, pos: GamePosition) -> Move:
        key = pos.key()
        if key not in self.table:
            raise StrategyIncomplete(key)
        return self.table[key]

    def to_json(self) -> dict:
        entries = [
            {"pos": [list(m) for m in key[3]], "move": move.to_json()}
            for key, move in sorted(
                self.table.items(), key=lambda item: repr(item[0])
            )
        ]
        return {
            "owner": self.owner.value,
            "kind": self.kind.value,
            "root": self.root,
            "horizon": self.horizon,
            "verified": self.verified,
            "name": self.name,
            "entries": entries,
        }

    @staticmethod
    def from_json(data: dict) -> "Strategy":
        strat = Strategy(
            Player(data["owner"]),
            GameKind(data["kind"]),
            data["root"],
            data["horizon"],
            verified=data.get("verified", False),
            name=data.get("name", ""),
        )
        head = (strat.kind.value, strat.root, strat.horizon)
        for entry in data["entries"]:
            key = head + (tuple(tuple(m) for m in entry["pos"]),)
            strat.table[key] = Move.from_json(entry["move"])
        return strat


@dataclass
class SolveResult:
    winner: Player
    strategy: Strategy
    nodes_expanded: int
    exhausted: bool = False


@dataclass
class VerificationReport:
    mode: str
    target: str
    plays: int
    in_accepts: int

    @property
    def fraction_accepts(self) -> Fraction:
        return Fraction(self.in_accepts, self.plays) if self.plays else Fraction(0)

    @property
    def fraction_target(self) -> Fraction:
        if self.target == "accepts":
            return self.fraction_accepts
        return 1 - self.fraction_accepts

    @property
    def passed(self) -> bool:
        return self.plays > 0 and self.fraction_target == 1


def _accepts_fn(space: SpaceInstance, payoff: Payoff) -> Callable[[GamePosition], bool]:
    if payoff.delta is not None:
        from .approx import expanded_payoff  # local import; approx sits above

        payoff = expanded_payoff(space, payoff)

    def accepts(pos: GamePosition) -> bool:
        return payoff.accepts(play_outcome(pos, space))

    return accepts


def _minimax(space, pos0, accepts, goal_owner, budget, memo):
    """True iff goal_owner forces the outcome into accepts from pos0."""
    nodes = 0

    def value(pos: GamePosition) -> bool:
        nonlocal nodes
        if memo is not None:
            key = pos.key()
            hit = memo.get(key)
            if hit is not None:
                return hit
        budget.tick()
        nodes += 1
        if pos.terminal:
            v = accepts(pos)
        else:
            moves = legal_moves(space, pos)
            if not moves:
                v = pos.to_move is not goal_owner
            elif pos.to_move is goal_owner:
                v = any(value(pos.child(m)) for m in moves)
            else:
                v = all(value(pos.child(m)) for m in moves)
        if memo is not None:
            memo[key] = v
        return v

    result = value(pos0)
    return result, lambda: nodes, value


def _extract(space, pos0, winner, want, value_fn, table):
    """Fill the winner's table along all opponent lines; first winning
    move in canonical order at winner nodes."""

    def build(pos: GamePosition):
        if pos.terminal:
            return
        moves = legal_moves(space, pos)
        if pos.to_move is winner:
            for m in moves:
                child = pos.child(m)
                if value_fn(child) == want:
                    table[pos.key()] = m
                    build(child)
                    return
            raise AssertionError("winner has no winning move; solver inconsistent")
        for m in moves:
            build(pos.child(m))

    build(pos0)


def _solve_impl(space, kind, root, payoff, goal_owner, budget, memoized):
    pos0 = initial_position(kind, root, payoff.horizon)
    accepts = _accepts_fn(space, payoff)
    memo = {} if memoized else None
    goal_reached, node_count, value_fn = _minimax(
        space, pos0, accepts, goal_owner, budget, memo
    )
    winner = goal_owner if goal_reached else goal_owner.other
    strategy = Strategy(winner, kind, root, payoff.horizon, name=f"solve:{payoff.name}")
    _extract(space, pos0, winner, goal_reached, value_fn, strategy.table)
    strategy.verified = True  # exhaustive backward induction is the proof
    return SolveResult(winner, strategy, node_count())


def solve(
    space: SpaceInstance,
    kind: GameKind,
    root: int,
    payoff: Payoff,
    goal_owner: Player,
    budget: Optional[Budget] = None,
) -> SolveResult:
    """Decide the finite-horizon clopen game and extract a winning strategy.

    The goal owner targets ``payoff.accepts``; the opponent the
    complement.  The returned strategy belongs to whoever wins.
    """
    budget = budget or Budget(2_000_000, "solve")
    return _solve_impl(space, kind, root, payoff, goal_owner, budget, memoized=True)


def naive_solve_oracle(
    space: SpaceInstance,
    kind: GameKind,
    root: int,
    payoff: Payoff,
    goal_owner: Player,
    budget: Optional[Budget] = None,
) -> SolveResult:
    """Unmemoized minimax over the same rules; the differential oracle."""
    budget = budget or Budget(500_000, "naive_solve_oracle")
    return _solve_impl(space, kind, root, payoff, goal_owner, budget, memoized=False)


def verify_strategy(
    space: SpaceInstance,
    strat: Strategy,
    payoff: Payoff,
    mode: str = "exhaustive",
    target: str = "accepts",
    seed: int = 0,
    trials: int = 100,
) -> VerificationReport:
    """Replay a strategy against the exhaustive or seeded-random adversary.

    ``target`` names the side the owner claims to force ("accepts" or
    "complement"); the report's ``passed`` says whether every replayed
    outcome landed there.
    """
    accepts = _accepts_fn(space, payoff)
    pos0 = initial_position(strat.kind, strat.root, strat.horizon)
    report = VerificationReport(mode, target, 0, 0)

    def walk(pos: GamePosition):
        if pos.terminal:
            report.plays += 1
            if accepts(pos):
                report.in_accepts += 1
            return
        if pos.to_move is strat.owner:
            move = strat.move_at(pos)
            if not move_legal(space, pos, move):
                raise IllegalMove(f"strategy move {move} illegal at {pos.key()}")
            walk(pos.child(move))
            return
        moves = legal_moves(space, pos)
        for m in moves:
            walk(pos.child(m))

    if mode == "exhaustive":
        walk(pos0)
        return report

    rng = random.Random(seed)
    for _ in range(trials):
        pos = pos0
        while not pos.terminal:
            if pos.to_move is strat.owner:
                move = strat.move_at(pos)
                if not move_legal(space, pos, move):
                    raise IllegalMove(f"strategy move {move} illegal at {pos.key()}")
            else:
                options = legal_moves(space, pos)
                if not options:
                    break
                move = rng.choice(options)
            pos = pos.child(move)
        if pos.terminal:
            report.plays += 1
            if accepts(pos):
                report.in_accepts += 1
    return report


def verified(
    space: SpaceInstance, strat: Strategy, payoff: Payoff, target: str = "accepts"
) -> Strategy:
    """Return the strategy marked verified, or raise if verification fails."""
    report = verify_strategy(space, strat, payoff, target=target)
    if not report.passed:
        raise ValueError(
            f"strategy {strat.name!r} fails exhaustive verification toward {target}: "
            f"{report.fraction_target} of {report.plays} plays"
        )
    return replace(strat, verified=True)


def strategy_from_rule(
    space: SpaceInstance,
    kind: GameKind,
    root: int,
    horizon: int,
    owner: Player,
    rule: Callable[[SpaceInstance, GamePosition], Move],
    name: str = "rule",
) -> Strategy:
    """Materialize a move rule into a total table by forward expansion
    over every legal opponent line."""
    strat = Strategy(owner, kind, root, horizon, name=name)

    def walk(pos: GamePosition):
        if pos.terminal:
            return
        if pos.to_move is owner:
            move = rule(space, pos)
            if not move_legal(space, pos, move):
                raise IllegalMove(f"rule produced illegal move {move} at {pos.key()}")
            strat.table[pos.key()] = move
            walk(pos.child(move))
            return
        for m in legal_moves(space, pos):
            walk(pos.child(m))

    walk(initial_position(kind, root, horizon))
    return strat
