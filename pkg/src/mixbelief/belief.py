"""Private, public and mixture beliefs over world states.

Worlds are enumerated exactly.  Priors are chance probabilities only: the
belief conditions on infostate membership and never reweights histories by
how likely an opponent was to take its observed actions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .fosg import CHANCE, TERMINAL, Game, GameError, Infostate, WorldState, project_public
from .tree import GameTree, game_tree


def world_id(w: WorldState) -> str:
    """Stable identifier of a history: both seats' infostate keys."""
    return f"{w.info_keys[0]}|{w.info_keys[1]}"


@dataclass(frozen=True)
class LambdaSchedule:
    """Mixture weight per decision index of the acting seat.

    Indices past the end of ``values`` use ``fallback``; when that is None the
    last listed value is reused.
    """

    values: tuple[float, ...] = ()
    fallback: float | None = None

    def __post_init__(self):
        if not self.values and self.fallback is None:
            raise GameError("a schedule needs at least one lambda")
        for lam in self.all_values():
            if not 0.0 <= lam <= 1.0:
                raise GameError(f"lambda {lam} outside [0, 1]")

    @classmethod
    def constant(cls, lam: float) -> "LambdaSchedule":
        return cls((), float(lam))

    @classmethod
    def parse(cls, text: str | float | Sequence[float]) -> "LambdaSchedule":
        if isinstance(text, (int, float)):
            return cls.constant(float(text))
        if isinstance(text, str):
            parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
            text = [float(p) for p in parts]
        values = tuple(float(v) for v in text)
        return cls.constant(values[0]) if len(values) == 1 else cls(values)

    def all_values(self) -> tuple[float, ...]:
        return self.values + (() if self.fallback is None else (self.fallback,))

    def at(self, decision_index: int) -> float:
        if decision_index < len(self.values):
            return self.values[decision_index]
        return self.fallback if self.fallback is not None else self.values[-1]

    def __str__(self) -> str:
        if not self.values:
            return repr(self.fallback)
        text = ",".join(repr(v) for v in self.values)
        return text if self.fallback is None else f"{text};{self.fallback!r}"


@dataclass(frozen=True)
class BeliefDistribution:
    conditioning_key: str
    worlds: tuple[WorldState, ...]
    masses: np.ndarray
    marginals: tuple[dict[str, float], dict[str, float]]

    def __len__(self) -> int:
        return len(self.worlds)

    def mass(self, w: WorldState) -> float:
        for world, m in zip(self.worlds, self.masses):
            if world == w:
                return float(m)
        return 0.0

    def as_dict(self) -> dict[str, float]:
        return {world_id(w): float(m) for w, m in zip(self.worlds, self.masses)}

    def same_distribution(self, other: "BeliefDistribution") -> bool:
        return (
            self.worlds == other.worlds
            and np.array_equal(self.masses, other.masses)
            and self.marginals == other.marginals
        )

    def csv_rows(self) -> list[tuple[str, str, str]]:
        return [(self.conditioning_key, world_id(w), repr(float(m))) for w, m in zip(self.worlds, self.masses)]


def write_belief_csv(path, beliefs: Iterable[BeliefDistribution]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["conditioning_key", "world_id", "mass"])
        for b in beliefs:
            writer.writerows(b.csv_rows())


def _marginals(worlds: Sequence[WorldState], masses: np.ndarray) -> tuple[dict[str, float], dict[str, float]]:
    out: tuple[dict[str, float], dict[str, float]] = ({}, {})
    for w, m in zip(worlds, masses):
        for seat in (0, 1):
            key = w.info_keys[seat]
            out[seat][key] = out[seat].get(key, 0.0) + float(m)
    return out


def _distribution(key: str, worlds: Sequence[WorldState], masses: np.ndarray) -> BeliefDistribution:
    keep = masses > 0
    kept = tuple(w for w, k in zip(worlds, keep) if k)
    if not kept:
        raise GameError(f"no world state is consistent with {key!r}")
    masses = masses[keep]
    masses.setflags(write=False)
    return BeliefDistribution(key, kept, masses, _marginals(kept, masses))


def _normalise(weights: np.ndarray) -> np.ndarray:
    # normalised over the full public support so that mixing endpoints are bitwise equal
    return weights / weights.sum()


class BeliefModel:
    """Exact beliefs for one game.

    Small games are served from the cached full tree; larger ones are walked
    from the root, pruning every branch whose public key stops being a prefix
    of the target.
    """

    def __init__(self, game: Game, tree: GameTree | None = None, use_tree: bool = True):
        self.game = game
        self.tree = tree
        if tree is None and use_tree:
            try:
                self.tree = game_tree(game)
            except GameError:
                self.tree = None
        self._public_cache = lru_cache(maxsize=65536)(self._public_worlds)

    # -- support -----------------------------------------------------------
    def _public_worlds(self, public_key: str) -> tuple[tuple[WorldState, ...], np.ndarray]:
        if self.tree is not None:
            idx = self.tree.by_public.get(public_key, [])
            worlds = tuple(self.tree.nodes[i] for i in idx)
            priors = np.array([self.tree.reach[i] for i in idx], dtype=np.float64)
            return worlds, priors
        return self._walk(public_key)

    def _walk(self, public_key: str):
        game = self.game
        worlds, priors = [], []
        stack = [(game.initial_state(), 1.0)]
        while stack:
            w, prior = stack.pop()
            if w.public_key == public_key:
                worlds.append(w)
                priors.append(prior)
                continue
            if w.player == TERMINAL or not public_key.startswith(w.public_key):
                continue
            if w.player == CHANCE:
                moves = game.chance_outcomes(w)
            else:
                moves = [(a, 1.0) for a in game.legal_actions(w)]
            for a, pa in reversed(moves):
                stack.append((game.child(w, a), prior * pa))
        return tuple(worlds), np.array(priors, dtype=np.float64)

    def consistent_worlds(self, key: str, seat: int | None = None) -> list[tuple[WorldState, float]]:
        """Worlds whose public key (``seat`` None) or seat infostate key equals ``key``.

        Priors are raw chance reach probabilities; nothing is normalised here.
        """
        if seat is None:
            worlds, priors = self._public_cache(key)
        else:
            pub_worlds, pub_priors = self._public_cache(project_public(key))
            pairs = [(w, p) for w, p in zip(pub_worlds, pub_priors) if w.info_keys[seat] == key]
            worlds = tuple(w for w, _ in pairs)
            priors = np.array([p for _, p in pairs])
        if not len(worlds):
            raise GameError(f"unreachable key {key!r}")
        return [(w, float(p)) for w, p in zip(worlds, priors)]

    # -- beliefs -----------------------------------------------------------
    def _private_weights(self, s: Infostate) -> tuple[tuple[WorldState, ...], np.ndarray, np.ndarray]:
        worlds, priors = self._public_cache(s.public_key)
        if not worlds:
            raise GameError(f"unreachable public key {s.public_key!r}")
        own = np.array([w.info_keys[s.seat] == s.key for w in worlds])
        if not own.any():
            raise GameError(f"unreachable infostate {s.key!r}")
        return worlds, priors, own

    def private_belief(self, s: Infostate) -> BeliefDistribution:
        worlds, priors, own = self._private_weights(s)
        return _distribution(s.key, worlds, _normalise(np.where(own, priors, 0.0)))

    def public_belief(self, public_key: str) -> BeliefDistribution:
        worlds, priors = self._public_cache(public_key)
        if not worlds:
            raise GameError(f"unreachable public key {public_key!r}")
        return _distribution(public_key, worlds, _normalise(priors))

    def mixture_belief(self, s: Infostate, lam: float) -> BeliefDistribution:
        """``(1 - lam) * private + lam * public``, mixed world by world."""
        if not 0.0 <= lam <= 1.0:
            raise GameError(f"lambda {lam} outside [0, 1]")
        worlds, priors, own = self._private_weights(s)
        private = _normalise(np.where(own, priors, 0.0))
        public = _normalise(priors)
        return _distribution(s.key, worlds, (1.0 - lam) * private + lam * public)

    def belief(self, s: Infostate, schedule: LambdaSchedule) -> BeliefDistribution:
        return self.mixture_belief(s, schedule.at(s.decision_index))


def sample_world(belief: BeliefDistribution, rng: np.random.Generator) -> WorldState:
    """Draw one world proportionally to its mass."""
    if not len(belief):
        raise GameError("cannot sample from an empty belief")
    return belief.worlds[int(rng.choice(len(belief), p=belief.masses))]


def sample_indices(belief: BeliefDistribution, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` draws at once; consumes the same random stream as repeated :func:`sample_world`."""
    if not len(belief):
        raise GameError("cannot sample from an empty belief")
    return rng.choice(len(belief), size=count, p=belief.masses)
