"""Rule systems: legal move generation, replay, outcome shapes."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gowerslab import GameKind, Move, Player, with_system
from gowerslab.approx import ms_singleton_system
from gowerslab.errors import IllegalMove, IllegalPosition, NotTerminal
from gowerslab.games import (
    apply_move,
    initial_position,
    legal_moves,
    move_legal,
    play_outcome,
    replay,
)
from gowerslab.instances import mathias_silver, top_subspace


def palette_id(space, label):
    return space.palette.index(label)


class TestLegalMoves:
    def test_kastanas_openings_are_all_below_root(self, ms6):
        top = top_subspace(ms6)
        pos = initial_position(GameKind.KASTANAS, top, 2)
        openings = legal_moves(ms6, pos)
        expected = [q for q in range(len(ms6.palette)) if ms6.leq(q, top)]
        assert [m.subspace for m in openings] == expected
        assert all(m.player is Player.II and m.point is None for m in openings)

    def test_zero_slack_asymptotic_collapses_to_root(self):
        ms = mathias_silver(5, 2, 0)
        top = top_subspace(ms)
        pos = initial_position(GameKind.ASYMPTOTIC_F, top, 1)
        moves = legal_moves(ms, pos)
        assert [m.subspace for m in moves] == [top]

    def test_adversarial_after_opening(self, ms6):
        # Below the full space, after she opens an odd subspace, his pairs
        # combine points of her subspace with near-full subspaces.
        top = top_subspace(ms6)
        p0 = palette_id(ms6, (1, 3, 5))
        pos = initial_position(GameKind.ADVERSARIAL_A, top, 2).child(
            Move(Player.II, subspace=p0)
        )
        moves = legal_moves(ms6, pos)
        points = sorted({m.point for m in moves})
        assert points == [1, 3, 5]
        assert all(ms6.lessapprox(m.subspace, top) for m in moves)
        # Brute-force cross-check against the defining predicate.
        brute = [
            (x, q)
            for x in range(len(ms6.points))
            for q in range(len(ms6.palette))
            if ms6.admits((x,), p0) and ms6.lessapprox(q, top)
        ]
        assert [(m.point, m.subspace) for m in moves] == brute

    def test_final_interleaved_answer_is_bare(self, ms6):
        top = top_subspace(ms6)
        pos = initial_position(GameKind.KASTANAS, top, 2)
        pos = pos.child(legal_moves(ms6, pos)[0])
        pos = pos.child(legal_moves(ms6, pos)[0])
        finals = legal_moves(ms6, pos)
        assert all(m.subspace is None and m.point is not None for m in finals)

    def test_points_may_repeat(self, ms6):
        top = top_subspace(ms6)
        pos = initial_position(GameKind.GOWERS_G, top, 2)
        pos = pos.child(Move(Player.I, subspace=top))
        pos = pos.child(Move(Player.II, point=0))
        pos = pos.child(Move(Player.I, subspace=top))
        assert move_legal(ms6, pos, Move(Player.II, point=0))

    def test_gowers_subspaces_unconstrained_below_root(self, ms6):
        top = top_subspace(ms6)
        pos = initial_position(GameKind.GOWERS_G, top, 1)
        moves = legal_moves(ms6, pos)
        assert len(moves) == len(ms6.below(top))


class TestApplyMove:
    def test_subspace_only_move_keeps_depth(self, ms6):
        top = top_subspace(ms6)
        pos = initial_position(GameKind.ADVERSARIAL_A, top, 2)
        opening = legal_moves(ms6, pos)[0]
        nxt = apply_move(ms6, pos, opening)
        assert nxt.depth == 0 and nxt.point_prefix == ()

    def test_point_move_extends_prefix(self, ms6):
        top = top_subspace(ms6)
        pos = initial_position(GameKind.ASYMPTOTIC_F, top, 2)
        pos = apply_move(ms6, pos, legal_moves(ms6, pos)[0])
        pos = apply_move(ms6, pos, legal_moves(ms6, pos)[0])
        assert pos.depth == 1 and len(pos.point_prefix) == 1

    def test_kastanas_pair_projects_to_prefix(self, ms6):
        top = top_subspace(ms6)
        pos = initial_position(GameKind.KASTANAS, top, 2)
        pos = apply_move(ms6, pos, legal_moves(ms6, pos)[0])
        pair = legal_moves(ms6, pos)[0]
        pos = apply_move(ms6, pos, pair)
        assert pos.point_prefix == (pair.point,)

    def test_illegal_move_rejected(self, ms6):
        top = top_subspace(ms6)
        pos = initial_position(GameKind.ASYMPTOTIC_F, top, 1)
        with pytest.raises(IllegalMove):
            apply_move(ms6, pos, Move(Player.II, point=0))


class TestOutcome:
    def test_interleaved_outcome_length(self, ms6):
        top = top_subspace(ms6)
        pos = initial_position(GameKind.ADVERSARIAL_A, top, 4)
        while not pos.terminal:
            pos = pos.child(legal_moves(ms6, pos)[0])
        assert len(play_outcome(pos)) == 4

    def test_chooser_outcome(self, ms6):
        top = top_subspace(ms6)
        pos = initial_position(GameKind.GOWERS_G, top, 3)
        while not pos.terminal:
            pos = pos.child(legal_moves(ms6, pos)[0])
        assert len(play_outcome(pos)) == 3

    def test_strong_outcome_is_played_sets(self, ms6):
        space = with_system(ms6, ms_singleton_system(ms6))
        top = top_subspace(space)
        pos = initial_position(GameKind.STRONG_ASYMPTOTIC_SF, top, 2)
        pos = pos.child(legal_moves(space, pos)[0])
        pos = pos.child(Move(Player.II, block=2))
        pos = pos.child(legal_moves(space, pos)[0])
        pos = pos.child(Move(Player.II, block=5))
        assert play_outcome(pos, space) == (frozenset({2}), frozenset({5}))

    def test_not_terminal_raises(self, ms6):
        pos = initial_position(GameKind.GOWERS_G, top_subspace(ms6), 2)
        with pytest.raises(NotTerminal):
            play_outcome(pos)


class TestReplayAndContainment:
    def _random_play(self, space, kind, horizon, seed):
        rng = random.Random(seed)
        pos = initial_position(kind, top_subspace(space), horizon)
        while not pos.terminal:
            pos = pos.child(rng.choice(legal_moves(space, pos)))
        return pos

    def test_round_trip(self, ms6):
        for kind in (GameKind.KASTANAS, GameKind.ADVERSARIAL_A, GameKind.GOWERS_G):
            horizon = 2 if kind is not GameKind.GOWERS_G else 2
            for seed in range(5):
                pos = self._random_play(ms6, kind, horizon, seed)
                again = replay(ms6, pos.kind, pos.root, pos.horizon, pos.moves)
                assert again == pos

    def test_replay_rejects_corrupted_history(self, ms6):
        pos = self._random_play(ms6, GameKind.KASTANAS, 2, 1)
        bad = pos.moves[:-1] + (Move(Player.II, point=0, subspace=0),)
        with pytest.raises(IllegalPosition):
            replay(ms6, pos.kind, pos.root, pos.horizon, bad)

    def test_b_play_with_tight_subspaces_is_a_play(self, ms6):
        # A second-player-constrained play whose first player also kept
        # his subspaces near-full is legal in the other adversarial game.
        top = top_subspace(ms6)
        for seed in range(20):
            rng = random.Random(seed)
            pos = initial_position(GameKind.ADVERSARIAL_B, top, 2)
            ok = True
            while not pos.terminal:
                moves = legal_moves(ms6, pos)
                if pos.to_move is Player.I:
                    tight = [
                        m for m in moves if ms6.lessapprox(m.subspace, top)
                    ]
                    if not tight:
                        ok = False
                        break
                    move = rng.choice(tight)
                else:
                    move = rng.choice(moves)
                pos = pos.child(move)
            if not ok:
                continue
            replay(ms6, GameKind.ADVERSARIAL_A, top, 2, pos.moves)

    def test_asymptotic_moves_legal_in_gowers(self, ms6):
        top = top_subspace(ms6)
        f_pos = initial_position(GameKind.ASYMPTOTIC_F, top, 1)
        g_pos = initial_position(GameKind.GOWERS_G, top, 1)
        for move in legal_moves(ms6, f_pos):
            assert move_legal(ms6, g_pos, move)


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_property_random_plays_replay(data, ms6):
    kind = data.draw(
        st.sampled_from(
            [GameKind.KASTANAS, GameKind.ADVERSARIAL_A, GameKind.ADVERSARIAL_B,
             GameKind.ASYMPTOTIC_F, GameKind.GOWERS_G]
        )
    )
    horizon = 2
    pos = initial_position(kind, top_subspace(ms6), horizon)
    while not pos.terminal:
        moves = legal_moves(ms6, pos)
        if not moves:
            break
        pos = pos.child(data.draw(st.sampled_from(moves)))
    again = replay(ms6, pos.kind, pos.root, pos.horizon, pos.moves)
    assert again == pos
    assert len(pos.point_prefix) == pos.depth
