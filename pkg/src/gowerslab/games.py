"""Rule systems of the six games at finite horizon.

Positions are immutable move histories; move generation is a pure
function of (space, position).  Conventions for the finite truncation:

* The horizon of a position is the length of the finished outcome: the
  number of point moves for the interleaved games (so always even there)
  and for the chooser games, and the number of set moves for the strong
  asymptotic game.
* In the interleaved games the second player opens with a bare subspace
  and thereafter answers with (point, subspace) pairs, except for the
  very last answer, which is a bare point: the trailing subspace of the
  infinite game constrains nothing once the outcome is complete, and
  dropping it keeps game trees small.
* Nothing forbids repeating a point; the chooser may answer the same
  point at every turn if it stays admitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import IllegalMove, IllegalPosition, NotTerminal
from .space import SpaceInstance, SubspaceId


class Player(str, Enum):
    I = "I"
    II = "II"

    @property
    def other(self) -> "Player":
        return Player.II if self is Player.I else Player.I


class GameKind(str, Enum):
    ADVERSARIAL_A = "A"
    ADVERSARIAL_B = "B"
    KASTANAS = "K"
    ASYMPTOTIC_F = "F"
    GOWERS_G = "G"
    STRONG_ASYMPTOTIC_SF = "SF"


INTERLEAVED = (GameKind.ADVERSARIAL_A, GameKind.ADVERSARIAL_B, GameKind.KASTANAS)
CHOOSER = (GameKind.ASYMPTOTIC_F, GameKind.GOWERS_G)


@dataclass(frozen=True)
class Move:
    """One move: a bare subspace, a bare point, a (point, subspace) pair,
    or a precompact-set reference (index into the instance's system)."""

    player: Player
    point: Optional[int] = None
    subspace: Optional[SubspaceId] = None
    block: Optional[int] = None

    def key(self) -> tuple:
        return (self.player.value, self.point, self.subspace, self.block)

    def to_json(self) -> dict:
        out = {"player": self.player.value}
        if self.point is not None:
            out["point"] = self.point
        if self.subspace is not None:
            out["subspace"] = self.subspace
        if self.block is not None:
            out["block"] = self.block
        return out

    @staticmethod
    def from_json(data: dict) -> "Move":
        return Move(
            Player(data["player"]),
            data.get("point"),
            data.get("subspace"),
            data.get("block"),
        )


@dataclass(frozen=True)
class GamePosition:
    kind: GameKind
    root: SubspaceId
    horizon: int
    moves: tuple = ()

    def key(self) -> tuple:
        return (
            self.kind.value,
            self.root,
            self.horizon,
            tuple(m.key() for m in self.moves),
        )

    @property
    def depth(self) -> int:
        """Number of outcome entries produced so far."""
        if self.kind in INTERLEAVED:
            return max(0, len(self.moves) - 1)
        return len(self.moves) // 2

    @property
    def point_prefix(self) -> tuple:
        if self.kind in INTERLEAVED:
            return tuple(m.point for m in self.moves[1:])
        if self.kind in CHOOSER:
            return tuple(m.point for m in self.moves if m.point is not None)
        return ()

    @property
    def block_prefix(self) -> tuple:
        return tuple(m.block for m in self.moves if m.block is not None)

    @property
    def terminal(self) -> bool:
        return self.depth >= self.horizon

    @property
    def to_move(self) -> Player:
        if self.kind in INTERLEAVED:
            return Player.II if len(self.moves) % 2 == 0 else Player.I
        return Player.I if len(self.moves) % 2 == 0 else Player.II

    def child(self, move: Move) -> "GamePosition":
        return GamePosition(self.kind, self.root, self.horizon, self.moves + (move,))

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "root": self.root,
            "horizon": self.horizon,
            "moves": [m.to_json() for m in self.moves],
        }


def initial_position(kind: GameKind, root: SubspaceId, horizon: int) -> GamePosition:
    if horizon < 1:
        raise ValueError("horizon must be positive")
    if kind in INTERLEAVED and horizon % 2 != 0:
        raise ValueError(f"game {kind.value} needs an even outcome length")
    return GamePosition(kind, root, horizon)


def _interleaved_rules(kind: GameKind):
    # Returns (opening_rel, I_subspace_rel, II_subspace_rel) as tags.
    # "leq_root"/"la_root" compare against the game root; "leq_last"
    # against the opponent's most recent subspace (Kastanas nesting).
    if kind is GameKind.ADVERSARIAL_A:
        return ("leq_root", "la_root", "leq_root")
    if kind is GameKind.ADVERSARIAL_B:
        return ("la_root", "leq_root", "la_root")
    return ("leq_root", "leq_last", "leq_last")


def _subspace_ok(space: SpaceInstance, pos: GamePosition, rel: str, q: SubspaceId) -> bool:
    if rel == "leq_root":
        return space.leq(q, pos.root)
    if rel == "la_root":
        return space.lessapprox(q, pos.root)
    last = pos.moves[-1].subspace
    return space.leq(q, last)


def _subspace_choices(space: SpaceInstance, pos: GamePosition, rel: str) -> tuple:
    if rel == "leq_root":
        return space.below(pos.root)
    if rel == "la_root":
        return space.lessapprox_below(pos.root)
    return space.below(pos.moves[-1].subspace)


def move_legal(space: SpaceInstance, pos: GamePosition, move: Move) -> bool:
    """Direct legality predicate, mirroring the move generator."""
    if pos.terminal or move.player is not pos.to_move:
        return False
    kind = pos.kind
    if kind in INTERLEAVED:
        opening_rel, i_rel, ii_rel = _interleaved_rules(kind)
        if not pos.moves:
            return (
                move.point is None
                and move.block is None
                and move.subspace is not None
                and _subspace_ok(space, pos, opening_rel, move.subspace)
            )
        constraint = pos.moves[-1].subspace
        if move.point is None or move.block is not None:
            return False
        if not space.admits(pos.point_prefix + (move.point,), constraint):
            return False
        if pos.to_move is Player.I:
            return move.subspace is not None and _subspace_ok(space, pos, i_rel, move.subspace)
        final = len(pos.moves) == pos.horizon
        if final:
            return move.subspace is None
        return move.subspace is not None and _subspace_ok(space, pos, ii_rel, move.subspace)
    if kind in CHOOSER:
        rel = "la_root" if kind is GameKind.ASYMPTOTIC_F else "leq_root"
        if pos.to_move is Player.I:
            return (
                move.point is None
                and move.block is None
                and move.subspace is not None
                and _subspace_ok(space, pos, rel, move.subspace)
            )
        return (
            move.subspace is None
            and move.block is None
            and move.point is not None
            and space.admits(pos.point_prefix + (move.point,), pos.moves[-1].subspace)
        )
    # Strong asymptotic game.
    if space.system is None:
        raise IllegalPosition("strong asymptotic game needs a precompact system")
    if pos.to_move is Player.I:
        return (
            move.point is None
            and move.block is None
            and move.subspace is not None
            and space.lessapprox(move.subspace, pos.root)
        )
    if move.block is None or move.point is not None or move.subspace is not None:
        return False
    family = space.system.family
    return 0 <= move.block < len(family) and space.set_admitted(
        family[move.block], pos.moves[-1].subspace
    )


def legal_moves(space: SpaceInstance, pos: GamePosition) -> list:
    """All legal moves for the player to move, in canonical order.

    Pairs are ordered point-major, then by subspace id.
    """
    if pos.terminal:
        return []
    kind = pos.kind
    out = []
    if kind in INTERLEAVED:
        opening_rel, i_rel, ii_rel = _interleaved_rules(kind)
        if not pos.moves:
            return [
                Move(Player.II, subspace=q)
                for q in _subspace_choices(space, pos, opening_rel)
            ]
        constraint = pos.moves[-1].subspace
        admitted = space.admitted_points(pos.point_prefix, constraint)
        if pos.to_move is Player.I:
            subspaces = _subspace_choices(space, pos, i_rel)
            for x in admitted:
                for q in subspaces:
                    out.append(Move(Player.I, point=x, subspace=q))
            return out
        if len(pos.moves) == pos.horizon:
            return [Move(Player.II, point=y) for y in admitted]
        subspaces = _subspace_choices(space, pos, ii_rel)
        for y in admitted:
            for q in subspaces:
                out.append(Move(Player.II, point=y, subspace=q))
        return out
    if kind in CHOOSER:
        rel = "la_root" if kind is GameKind.ASYMPTOTIC_F else "leq_root"
        if pos.to_move is Player.I:
            return [
                Move(Player.I, subspace=q) for q in _subspace_choices(space, pos, rel)
            ]
        constraint = pos.moves[-1].subspace
        return [
            Move(Player.II, point=x)
            for x in space.admitted_points(pos.point_prefix, constraint)
        ]
    if space.system is None:
        raise IllegalPosition("strong asymptotic game needs a precompact system")
    if pos.to_move is Player.I:
        return [
            Move(Player.I, subspace=q) for q in space.lessapprox_below(pos.root)
        ]
    constraint = pos.moves[-1].subspace
    return [
        Move(Player.II, block=k)
        for k, elems in enumerate(space.system.family)
        if space.set_admitted(elems, constraint)
    ]


def apply_move(space: SpaceInstance, pos: GamePosition, move: Move) -> GamePosition:
    if not move_legal(space, pos, move):
        raise IllegalMove(f"move {move} illegal at {pos.key()}")
    return pos.child(move)


def play_outcome(pos: GamePosition, space: Optional[SpaceInstance] = None):
    """Outcome of a finished play: the point sequence, or for the strong
    asymptotic game the sequence of played precompact sets."""
    if not pos.terminal:
        raise NotTerminal(f"position at depth {pos.depth} of {pos.horizon}")
    if pos.kind is GameKind.STRONG_ASYMPTOTIC_SF:
        if space is None:
            return pos.block_prefix
        return tuple(space.system.family[k] for k in pos.block_prefix)
    return pos.point_prefix


def replay(
    space: SpaceInstance,
    kind: GameKind,
    root: SubspaceId,
    horizon: int,
    moves,
) -> GamePosition:
    """Rebuild a position from a move list, validating every step."""
    pos = initial_position(kind, root, horizon)
    for move in moves:
        if not move_legal(space, pos, move):
            raise IllegalPosition(f"move {move} fails replay at {pos.key()}")
        pos = pos.child(move)
    return pos
