"""Approximate machinery: expansions, discretization, strategy lifts,
precompact systems, block sequences, and the strong asymptotic game.

All metric arithmetic is exact (rationals), so expansion boundaries are
decidable and every test in the suite is bit-reproducible.  Strict
versus non-strict comparisons follow the conventions the constructions
need: discretized admission uses a strict bound, expansions a
non-strict one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Optional

from .errors import Budget, FiniteExhaustion, NotDense, SpecInvalid
from .games import GameKind, Move, Player, initial_position, legal_moves, move_legal
from .payoffs import Payoff
from .reductions import asymptotic_recommendation
from .solver import Strategy, VerificationReport
from .space import LENGTH_INDEXED, SpaceInstance, iterated_meet
from .util import parse_fraction


@dataclass(frozen=True)
class DeltaSeq:
    """A horizon-length sequence of strictly positive rationals."""

    values: tuple

    def __post_init__(self):
        if not self.values or any(v <= 0 for v in self.values):
            raise SpecInvalid("delta sequence must be nonempty and positive")

    @staticmethod
    def of(*values) -> "DeltaSeq":
        return DeltaSeq(tuple(parse_fraction(v) for v in values))

    @staticmethod
    def constant(value, horizon: int) -> "DeltaSeq":
        return DeltaSeq((parse_fraction(value),) * horizon)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def halved(self) -> "DeltaSeq":
        return DeltaSeq(tuple(v / 2 for v in self.values))

    def tripled(self) -> "DeltaSeq":
        return DeltaSeq(tuple(3 * v for v in self.values))


# -- expansions -----------------------------------------------------------------


def expand_point_set(space: SpaceInstance, points, delta) -> frozenset:
    """All points within delta of the set (non-strict)."""
    space.require_metric()
    delta = parse_fraction(delta)
    points = frozenset(points)
    return frozenset(
        x
        for x in range(len(space.points))
        if any(space.distance(x, y) <= delta for y in points)
    )


def materialize_payoff_set(space: SpaceInstance, payoff: Payoff) -> frozenset:
    """All accepted sequences over the whole point universe."""
    n = len(space.points)
    return frozenset(
        seq
        for seq in product(range(n), repeat=payoff.horizon)
        if payoff.accepts(seq)
    )


def expand_sequence_set(space: SpaceInstance, seqs, delta: DeltaSeq) -> frozenset:
    """Coordinatewise delta-expansion of a set of equal-length sequences."""
    space.require_metric()
    seqs = list(seqs)
    if not seqs:
        return frozenset()
    k = len(seqs[0])
    out = set()
    for cand in product(range(len(space.points)), repeat=k):
        for y in seqs:
            if all(space.distance(cand[i], y[i]) <= delta[i] for i in range(k)):
                out.add(cand)
                break
    return frozenset(out)


def expand_sequence_membership(
    space: SpaceInstance, seq: tuple, target: Payoff, delta: DeltaSeq
) -> bool:
    """Is the sequence within delta (coordinatewise) of an accepted one?"""
    space.require_metric()
    if len(seq) != target.horizon or len(delta) != target.horizon:
        raise SpecInvalid("sequence, payoff, and delta lengths must agree")
    k = len(seq)
    for y in product(range(len(space.points)), repeat=k):
        if not target.accepts(y):
            continue
        if all(space.distance(seq[i], y[i]) <= delta[i] for i in range(k)):
            return True
    return False


def expanded_payoff(space: SpaceInstance, payoff: Payoff) -> Payoff:
    """Resolve a payoff carrying a delta into a plain membership payoff."""
    if payoff.delta is None:
        return payoff
    delta = payoff.delta
    base = Payoff(payoff.horizon, payoff.accepts, payoff.name)
    expanded = expand_sequence_set(space, materialize_payoff_set(space, base), delta)
    return Payoff(
        payoff.horizon, lambda seq: seq in expanded, f"({payoff.name})_delta"
    )


def expanded_target(
    space: SpaceInstance, payoff: Payoff, delta: DeltaSeq, side: str = "accepts"
) -> Payoff:
    """The delta-expansion of the payoff's accepted set or of its
    complement, as a plain payoff (used to verify lifted strategies)."""
    base = materialize_payoff_set(space, payoff)
    if side == "complement":
        everything = set(product(range(len(space.points)), repeat=payoff.horizon))
        base = frozenset(everything - base)
    expanded = expand_sequence_set(space, base, delta)
    return Payoff(
        payoff.horizon,
        lambda seq: seq in expanded,
        f"({payoff.name}:{side})_delta",
    )


# -- nets -------------------------------------------------------------------------


@dataclass(frozen=True)
class Net:
    center_set: frozenset
    resolution: Fraction
    members: tuple

    def covers(self, space: SpaceInstance) -> bool:
        return all(
            any(space.distance(x, m) <= self.resolution for m in self.members)
            for x in self.center_set
        )


def build_net(space: SpaceInstance, points, resolution) -> Net:
    """Greedy net in canonical point order: keep a point iff it is farther
    than the resolution from everything kept so far."""
    resolution = parse_fraction(resolution)
    members = []
    for x in sorted(points):
        if all(space.distance(x, m) > resolution for m in members):
            members.append(x)
    return Net(frozenset(points), resolution, tuple(members))


# -- precompact systems -------------------------------------------------------------


class PrecompactSystem:
    """A finite family of nonempty point sets with an associative sum
    compatible with admission."""

    def __init__(self, family, oplus: Callable, name: str = ""):
        self.family = tuple(frozenset(k) for k in family)
        if any(not k for k in self.family):
            raise SpecInvalid("precompact sets must be nonempty")
        self.oplus = oplus
        self.name = name
        self._closure: Optional[tuple] = None

    def closure(self, budget: Optional[Budget] = None) -> tuple:
        """Smallest superset of the family closed under the sum."""
        if self._closure is not None:
            return self._closure
        budget = budget or Budget(where="system closure")
        seen = {k: None for k in self.family}
        frontier = list(self.family)
        while frontier:
            fresh = []
            for a in list(seen):
                for b in frontier:
                    budget.tick()
                    for s in (self.oplus(a, b), self.oplus(b, a)):
                        if s not in seen:
                            seen[s] = None
                            fresh.append(s)
            frontier = fresh
        self._closure = tuple(seen)
        return self._closure

    def block_sum(self, sets: tuple, indices) -> frozenset:
        """Sum of sets[i] over the indices taken in increasing order."""
        idx = sorted(indices)
        acc = sets[idx[0]]
        for i in idx[1:]:
            acc = self.oplus(acc, sets[i])
        return acc

    def validate(self, space: SpaceInstance, budget: Optional[Budget] = None) -> None:
        """Exhaustively test associativity on the closure and admission
        compatibility over the palette; raises on failure."""
        budget = budget or Budget(where="system validation")
        closure = self.closure(budget)
        for a in closure:
            for b in closure:
                for c in closure:
                    budget.tick()
                    if self.oplus(self.oplus(a, b), c) != self.oplus(a, self.oplus(b, c)):
                        raise SpecInvalid("precompact sum is not associative")
        for p in space.subspaces():
            for a in self.family:
                if not space.set_admitted(a, p):
                    continue
                for b in self.family:
                    budget.tick()
                    if not space.set_admitted(b, p):
                        continue
                    if not space.set_admitted(self.oplus(a, b), p):
                        raise SpecInvalid(
                            f"sum of admitted sets not admitted below subspace {p}"
                        )


def ms_singleton_system(space: SpaceInstance) -> PrecompactSystem:
    """Singletons with max as the sum; block sequences of singletons are
    exactly increasing subsequences."""

    def oplus(a, b):
        return frozenset({max(max(a), max(b))})

    return PrecompactSystem(
        [frozenset({i}) for i in range(len(space.points))],
        oplus,
        name="singletons-max",
    )


def field_subspace_system(space: SpaceInstance) -> PrecompactSystem:
    """Over a finite-field instance: nonzero parts of all subspaces, with
    the sum-span as the operation."""
    if space.meta.get("kind") != "rosendal":
        raise SpecInvalid("the field system needs a Rosendal instance")
    q = space.meta["field_order"]
    index = {v: i for i, v in enumerate(space.points)}

    def close(ids: frozenset) -> frozenset:
        vecs = {space.points[i] for i in ids}
        changed = True
        while changed:
            changed = False
            current = list(vecs)
            for a in current:
                for b in current:
                    s = tuple((x + y) % q for x, y in zip(a, b))
                    if any(s) and s not in vecs:
                        vecs.add(s)
                        changed = True
                for lam in range(2, q):
                    s = tuple(lam * x % q for x in a)
                    if s not in vecs:
                        vecs.add(s)
                        changed = True
        return frozenset(index[v] for v in vecs)

    def oplus(a, b):
        return close(frozenset(a | b))

    lines = {close(frozenset({i})) for i in range(len(space.points))}
    family = {frozenset(k) for k in lines}
    frontier = list(family)
    while frontier:
        fresh = []
        for a in list(family):
            for b in frontier:
                s = oplus(a, b)
                if s not in family:
                    family.add(s)
                    fresh.append(s)
        frontier = fresh
    return PrecompactSystem(sorted(family, key=sorted), oplus, name=f"subspaces-F{q}")


# -- discretization and strategy lifts -------------------------------------------------


def discretize(
    space: SpaceInstance, dense, delta: DeltaSeq, name: str = ""
) -> SpaceInstance:
    """The plain space over a dense subset, with admission weakened to
    "within the stage's delta of an admitted host point" (strict).

    The returned instance has no metric and length-indexed admission;
    its palette and relations are those of the host.
    """
    space.require_metric()
    host_ids = tuple(sorted(dense))
    if not host_ids:
        raise NotDense("dense set is empty")
    scale = min(delta.values) / 2
    for x in range(len(space.points)):
        if not any(space.distance(x, y) <= scale for y in host_ids):
            raise NotDense(f"host point {x} farther than {scale} from the dense set")
    n_host = len(space.points)

    def admits(history, p):
        y = host_ids[history[-1]]
        bound = delta[len(history) - 1]
        return any(
            space.admits((x,), p) and space.distance(x, y) < bound
            for x in range(n_host)
        )

    return SpaceInstance(
        name or f"discretized({space.name})",
        points=[space.points[i] for i in host_ids],
        palette=space.palette,
        leq=space.leq,
        leq_star=space.leq_star,
        admits=admits,
        meet_witness=space.meet_witness,
        fusion_witness=space.fusion_witness,
        asymptotic_slack=space.asymptotic_slack,
        admission=LENGTH_INDEXED,
        compatible_hint=space.compatible_hint,
        meta={**space.meta, "discretized": True, "host_points": host_ids},
    )


def restrict_payoff(discretized: SpaceInstance, payoff: Payoff) -> Payoff:
    """View a host payoff as a payoff on discretized outcomes."""
    host_ids = discretized.meta["host_points"]
    base = payoff.accepts
    return Payoff(
        payoff.horizon,
        lambda seq: base(tuple(host_ids[i] for i in seq)),
        f"{payoff.name}|dense",
    )


def _shadow_to_dense(space, discretized, host_point, bound, stage):
    host_ids = discretized.meta["host_points"]
    for local, host in enumerate(host_ids):
        if space.distance(host_point, host) < bound:
            return local
    raise FiniteExhaustion(stage, f"no dense point within {bound} of {host_point}")


def _witness_in_host(space, discretized, local_point, constraint, bound, stage):
    host_ids = discretized.meta["host_points"]
    target = host_ids[local_point]
    for x in range(len(space.points)):
        if space.admits((x,), constraint) and space.distance(x, target) < bound:
            return x
    raise FiniteExhaustion(stage, f"no admitted host point within {bound}")


def lift_strategy(
    space: SpaceInstance,
    discretized: SpaceInstance,
    strat: Strategy,
    direction: str,
    payoff: Payoff,
    delta: DeltaSeq,
) -> Strategy:
    """Lift a strategy verified on the discretized space back to the host.

    Directions: "F-I" and "B-II" lift strategies toward complements (the
    lift lands in the expanded complement), "G-II" and "A-I" toward the
    set (the lift lands in the expanded set).  Subspace moves transfer
    unchanged; points are shadowed to the dense set or witnessed back in
    the host within the stage's delta.
    """
    if not strat.verified:
        raise ValueError("lift_strategy refuses unverified inputs")
    if len(delta) != strat.horizon:
        raise SpecInvalid("delta length must match the strategy horizon")
    if direction == "F-I":
        return _lift_chooser(space, discretized, strat, delta, Player.I)
    if direction == "G-II":
        return _lift_chooser(space, discretized, strat, delta, Player.II)
    if direction in ("A-I", "B-II"):
        return _lift_interleaved(space, discretized, strat, delta)
    raise ValueError(f"unknown lift direction {direction!r}")


def _lift_chooser(space, discretized, strat, delta, owner):
    kind = strat.kind
    out = Strategy(owner, kind, strat.root, strat.horizon, name=f"lift:{strat.name}")

    def walk(real_pos, disc_pos):
        if real_pos.terminal:
            return
        if owner is Player.I:
            disc_move = strat.move_at(disc_pos)
            my_move = Move(Player.I, subspace=disc_move.subspace)
            out.table[real_pos.key()] = my_move
            real_mid = real_pos.child(my_move)
            disc_mid = disc_pos.child(disc_move)
            i = real_pos.depth
            for answer in legal_moves(space, real_mid):
                shadow = _shadow_to_dense(
                    space, discretized, answer.point, delta[i], "chooser shadow"
                )
                disc_answer = Move(Player.II, point=shadow)
                if not move_legal(discretized, disc_mid, disc_answer):
                    raise FiniteExhaustion("chooser shadow", "shadow move illegal")
                walk(real_mid.child(answer), disc_mid.child(disc_answer))
        else:
            for his in legal_moves(space, real_pos):
                disc_his = Move(Player.I, subspace=his.subspace)
                disc_mid = disc_pos.child(disc_his)
                reply = strat.move_at(disc_mid)
                i = real_pos.depth
                x = _witness_in_host(
                    space, discretized, reply.point, his.subspace, delta[i],
                    "chooser witness",
                )
                real_mid = real_pos.child(his)
                my_move = Move(Player.II, point=x)
                out.table[real_mid.key()] = my_move
                walk(real_mid.child(my_move), disc_mid.child(reply))

    walk(
        initial_position(kind, strat.root, strat.horizon),
        initial_position(kind, strat.root, strat.horizon),
    )
    return out


def _lift_interleaved(space, discretized, strat, delta):
    kind = strat.kind
    owner = strat.owner
    out = Strategy(owner, kind, strat.root, strat.horizon, name=f"lift:{strat.name}")
    start_real = initial_position(kind, strat.root, strat.horizon)
    start_disc = initial_position(kind, strat.root, strat.horizon)

    def walk(real_pos, disc_pos):
        if real_pos.terminal:
            return
        mover = real_pos.to_move
        if mover is owner:
            disc_move = strat.move_at(disc_pos)
            if disc_move.point is None:
                # Opening: copy the subspace.
                my_move = Move(owner, subspace=disc_move.subspace)
                disc_next = disc_pos.child(disc_move)
            else:
                idx = len(real_pos.point_prefix)
                constraint = real_pos.moves[-1].subspace
                x = _witness_in_host(
                    space, discretized, disc_move.point, constraint, delta[idx],
                    "interleaved witness",
                )
                my_move = Move(owner, point=x, subspace=disc_move.subspace)
                disc_next = disc_pos.child(disc_move)
            out.table[real_pos.key()] = my_move
            walk(real_pos.child(my_move), disc_next)
            return
        for theirs in legal_moves(space, real_pos):
            if theirs.point is None:
                disc_theirs = theirs
            else:
                idx = len(real_pos.point_prefix)
                shadow = _shadow_to_dense(
                    space, discretized, theirs.point, delta[idx], "interleaved shadow"
                )
                disc_theirs = Move(theirs.player, point=shadow, subspace=theirs.subspace)
            if not move_legal(discretized, disc_pos, disc_theirs):
                raise FiniteExhaustion("interleaved shadow", "shadow move illegal")
            walk(real_pos.child(theirs), disc_pos.child(disc_theirs))

    walk(start_real, start_disc)
    return out


# -- approximate chooser-to-asymptotic transfer ------------------------------------------


@dataclass
class ApproxAsymptoticTransfer:
    q: int
    strategy: Strategy
    chain: list


def approx_asymptotic_from_gowers(
    space: SpaceInstance,
    sigma: Strategy,
    payoff: Payoff,
    delta: DeltaSeq,
    provider,
    budget: Optional[Budget] = None,
) -> ApproxAsymptoticTransfer:
    """Metric version of the chooser-to-asymptotic transfer.

    States realise sequences only up to twice the stage delta; the chain
    is refined against the delta-expansions of the reachable sets, and
    the resulting asymptotic strategy forces the three-delta expansion
    of the target (verify it against ``expanded_target`` with the
    tripled delta).
    """
    budget = budget or Budget(where="approx_asymptotic_from_gowers")
    if not sigma.verified or sigma.owner is not Player.II:
        raise ValueError("approx transfer needs her verified chooser strategy")
    space.require_metric()
    root = sigma.root
    horizon = payoff.horizon
    n_points = len(space.points)

    seqs = [()]
    for length in range(1, horizon):
        seqs.extend(product(range(n_points), repeat=length))
    seq_index = {s: n for n, s in enumerate(seqs)}

    states: dict = {(): initial_position(GameKind.GOWERS_G, root, horizon)}
    reach_cache: dict = {}

    def reachable(pos):
        key = pos.key()
        if key not in reach_cache:
            pts = set()
            for r in space.below(root):
                budget.tick()
                pts.add(sigma.move_at(pos.child(Move(Player.I, subspace=r))).point)
            reach_cache[key] = frozenset(pts)
        return reach_cache[key]

    for s in seqs[1:]:
        parent = states.get(s[:-1])
        if parent is None:
            states[s] = None
            continue
        stage = len(s) - 1
        found = None
        for r in space.below(root):
            budget.tick()
            reply = sigma.move_at(parent.child(Move(Player.I, subspace=r)))
            if space.distance(reply.point, s[-1]) <= 2 * delta[stage]:
                found = parent.child(Move(Player.I, subspace=r)).child(reply)
                break
        states[s] = found

    chain = [root]
    for s in seqs:
        budget.tick()
        state = states[s]
        if state is None:
            chain.append(chain[-1])
            continue
        refined = provider.subset_refinement_expanded(
            space, reachable(state), chain[-1], delta[len(s)]
        )
        chain.append(refined)

    q = space.fusion_witness(tuple(chain))
    out = Strategy(
        Player.I, GameKind.ASYMPTOTIC_F, q, horizon, name=f"approxF-from-G:{sigma.name}"
    )

    def walk(f_pos, tracked: tuple):
        if f_pos.terminal:
            return
        n = seq_index[tracked]
        meet = space.meet_witness(q, chain[n + 1])
        if meet is None:
            raise FiniteExhaustion(
                "approx_asymptotic_from_gowers", "meet with chain element undefined"
            )
        my_move = Move(Player.I, subspace=meet)
        out.table[f_pos.key()] = my_move
        f_mid = f_pos.child(my_move)
        stage = len(tracked)
        for answer in legal_moves(space, f_mid):
            shadow = None
            for y in range(n_points):
                if space.distance(answer.point, y) <= delta[stage]:
                    shadow = y
                    break
            nxt = tracked + (shadow,)
            if len(nxt) < horizon and states.get(nxt) is None:
                raise FiniteExhaustion(
                    "approx_asymptotic_from_gowers",
                    f"no realised state near {nxt}",
                )
            walk(f_mid.child(answer), nxt)

    walk(initial_position(GameKind.ASYMPTOTIC_F, q, horizon), ())
    return ApproxAsymptoticTransfer(q, out, chain)


# -- block sequences and the strong asymptotic game ----------------------------------------


def enumerate_block_sequences(
    system: PrecompactSystem, sets: tuple, length: int, budget: Optional[Budget] = None
) -> list:
    """All sequences picking each entry from the sum over one block of an
    increasing tuple of nonempty index sets; deduplicated, canonical
    order."""
    budget = budget or Budget(where="enumerate_block_sequences")
    n = len(sets)
    if length == 0:
        return [()]
    out: dict = {}

    def subsets_from(start):
        indices = range(start, n)
        for size in range(1, n - start + 1):
            for c in combinations(indices, size):
                yield c

    def walk(prefix, start):
        if len(prefix) == length:
            out.setdefault(prefix, None)
            return
        for block in subsets_from(start):
            budget.tick()
            total = system.block_sum(sets, block)
            for x in sorted(total):
                walk(prefix + (x,), block[-1] + 1)

    walk((), 0)
    return sorted(out)


def strong_asymptotic_from_asymptotic(
    space: SpaceInstance,
    system: PrecompactSystem,
    tau: Strategy,
    payoff: Payoff,
    delta: DeltaSeq,
    budget: Optional[Budget] = None,
) -> Strategy:
    """His strong-asymptotic strategy from his asymptotic one.

    Per round, enumerate net points of every block sum available so far,
    meet the asymptotic recommendations over all those prefixes (and the
    previous move), and play the meet.  Block sequences of any outcome
    then land in the delta-expansion of the target.
    """
    budget = budget or Budget(where="strong_asymptotic")
    if not tau.verified or tau.owner is not Player.I:
        raise ValueError("strong asymptotic transfer needs his verified strategy")
    k = payoff.horizon
    root = tau.root
    nets: dict = {}

    def net_members(i, sum_set):
        key = (i, sum_set)
        if key not in nets:
            nets[key] = build_net(space, sum_set, delta[i]).members
        return nets[key]

    def prefix_pool(sets: tuple) -> list:
        """Net-decorated prefixes over the sets played so far."""
        n = len(sets)
        pool = [()]

        def extend(prefix, start):
            if len(prefix) == k - 1:
                return
            for size in range(1, n - start + 1):
                for block in combinations(range(start, n), size):
                    budget.tick()
                    total = system.block_sum(sets, block)
                    for y in net_members(len(prefix), total):
                        nxt = prefix + (y,)
                        pool.append(nxt)
                        extend(nxt, block[-1] + 1)

        extend((), 0)
        return pool

    out = Strategy(
        Player.I,
        GameKind.STRONG_ASYMPTOTIC_SF,
        root,
        k,
        name=f"SF-from-F:{tau.name}",
    )
    sf_space = space
    if sf_space.system is not system:
        # The game needs the system attached to the instance.
        raise SpecInvalid("attach the system to the instance before transferring")

    def walk(sf_pos, prev):
        if sf_pos.terminal:
            return
        sets = tuple(system.family[b] for b in sf_pos.block_prefix)
        parts = [
            asymptotic_recommendation(space, tau, s).subspace
            for s in prefix_pool(sets)
        ]
        if prev is not None:
            parts.append(prev)
        move_sub = iterated_meet(space, parts, root)
        my_move = Move(Player.I, subspace=move_sub)
        out.table[sf_pos.key()] = my_move
        sf_mid = sf_pos.child(my_move)
        for answer in legal_moves(sf_space, sf_mid):
            walk(sf_mid.child(answer), move_sub)

    walk(initial_position(GameKind.STRONG_ASYMPTOTIC_SF, root, k), None)
    return out


def verify_strong_asymptotic(
    space: SpaceInstance,
    system: PrecompactSystem,
    strategy: Strategy,
    payoff: Payoff,
    delta: DeltaSeq,
    budget: Optional[Budget] = None,
) -> VerificationReport:
    """Exhaustively play the strong asymptotic strategy and check every
    block sequence of every outcome against the delta-expanded target.

    The report counts (outcome, block sequence) pairs."""
    budget = budget or Budget(where="verify_strong_asymptotic")
    if space.metric is None and all(v < 1 for v in delta.values):
        # Discrete distance: expansion below one is the set itself.
        in_target = payoff.accepts
    else:
        metric_space = space if space.metric is not None else _with_discrete_metric(space)
        expanded_set = expand_sequence_set(
            metric_space, materialize_payoff_set(space, payoff), delta
        )
        in_target = expanded_set.__contains__

    report = VerificationReport("exhaustive", "accepts", 0, 0)

    def walk(pos):
        if pos.terminal:
            sets = tuple(system.family[b] for b in pos.block_prefix)
            for seq in enumerate_block_sequences(system, sets, payoff.horizon, budget):
                report.plays += 1
                if in_target(seq):
                    report.in_accepts += 1
            return
        if pos.to_move is Player.I:
            move = strategy.move_at(pos)
            walk(pos.child(move))
            return
        for m in legal_moves(space, pos):
            budget.tick()
            walk(pos.child(m))

    walk(initial_position(GameKind.STRONG_ASYMPTOTIC_SF, strategy.root, strategy.horizon))
    return report


def _with_discrete_metric(space: SpaceInstance) -> SpaceInstance:
    """View of a plain instance carrying the discrete 0/1 metric."""
    return SpaceInstance(
        f"discrete-metric({space.name})",
        points=space.points,
        palette=space.palette,
        leq=space.leq,
        leq_star=space.leq_star,
        admits=space.admits,
        meet_witness=space.meet_witness,
        fusion_witness=space.fusion_witness,
        metric=lambda x, y: Fraction(0) if x == y else Fraction(1),
        asymptotic_slack=space.asymptotic_slack,
        admission=space.admission,
        compatible_hint=space.compatible_hint,
        system=space.system,
        meta=space.meta,
    )
