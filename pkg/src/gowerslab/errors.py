"""Exception types and the node-budget guard shared across the package.

Finite truncations of infinitary constructions can run out of room.  The
rule everywhere in this package is that running out must be loud: an
operation either finishes with a checkable result or raises one of the
exceptions below carrying enough context to diagnose where the finite
instance was exhausted.
"""

from __future__ import annotations


class GowersLabError(Exception):
    """Base class for all package-specific errors."""


class ExhaustionBudget(GowersLabError):
    """An enumeration exceeded its configured node budget."""

    def __init__(self, nodes: int, where: str = ""):
        self.nodes = nodes
        self.where = where
        msg = f"node budget of {nodes} exhausted"
        if where:
            msg += f" in {where}"
        super().__init__(msg)


class FiniteExhaustion(GowersLabError):
    """A witness search (meet, fusion, diagonalization) ran out of subspaces.

    The infinite theory guarantees these witnesses exist; a finite palette
    may not contain them.  ``stage`` records which step of which
    construction failed.
    """

    def __init__(self, stage: str, detail: str = ""):
        self.stage = stage
        self.detail = detail
        msg = f"finite exhaustion at {stage}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class IllegalPosition(GowersLabError):
    """A move history does not replay legally from the empty position."""


class IllegalMove(GowersLabError):
    """A move is not legal at the given position."""


class NotTerminal(GowersLabError):
    """An outcome was requested from a position that is not finished."""


class StrategyIncomplete(GowersLabError):
    """A strategy table has no entry for a reachable position."""

    def __init__(self, position_key):
        self.position_key = position_key
        super().__init__(f"strategy table has no entry for position {position_key!r}")


class PigeonholeUnavailable(GowersLabError):
    """No palette subspace decides the requested point set.

    ``witness`` holds a pair of points showing the failure when one is
    available (a point inside the set and one outside it, both admitted).
    """

    def __init__(self, detail: str = "", witness=None):
        self.witness = witness
        msg = "pigeonhole principle unavailable"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NoMetric(GowersLabError):
    """A metric operation was applied to an instance without a metric."""


class NotDense(GowersLabError):
    """A candidate dense set does not cover the space at the needed scale."""


class KindMismatch(GowersLabError):
    """A construction was applied to an instance of the wrong kind."""


class SpecInvalid(GowersLabError):
    """An instance or scenario description is internally inconsistent."""


class PaletteNotClosedUnderMeet(GowersLabError):
    """An explicit palette is missing the intersection of two members."""

    def __init__(self, p, q):
        self.pair = (p, q)
        super().__init__(f"palette misses the meet of subspaces {p} and {q}")


class Budget:
    """Mutable node counter raising :class:`ExhaustionBudget` when spent.

    A single budget may be threaded through nested enumerations; ticks are
    cumulative.
    """

    def __init__(self, nodes: int = 10_000_000, where: str = ""):
        self.limit = nodes
        self.used = 0
        self.where = where

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise ExhaustionBudget(self.limit, self.where)

    def spawn(self, where: str) -> "Budget":
        """Sub-budget sharing this counter's remaining headroom."""
        child = Budget(self.limit - self.used, where)
        return child
