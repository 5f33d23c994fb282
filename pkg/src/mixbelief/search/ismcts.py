"""Single-observer IS-MCTS over a mixture belief.

Every iteration determinizes a world from the belief, then descends one tree
whose nodes are infostates keyed by (seat, infostate key).  Both seats share
the tree, so opponent nodes are also infostates rather than histories.  All
randomness is drawn up front: one root index and one row of uniforms per
iteration.  This lets the pure-Python reference and the compiled kernel agree
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..belief import BeliefModel, LambdaSchedule, sample_indices
from ..fosg import CHANCE, TERMINAL, Game, GameError, Infostate, WorldState
from ..tree import game_tree

DEFAULT_C = 0.7


@dataclass
class EdgeStats:
    """Per-edge visit counts and value sums, keyed by (seat, infostate key) then action."""

    visits: dict[tuple[int, str], dict[int, int]]
    values: dict[tuple[int, str], dict[int, float]]

    def node(self, seat: int, key: str) -> dict[int, int]:
        return self.visits.get((seat, key), {})

    def edge(self, seat: int, key: str, a: int) -> tuple[int, float]:
        node = (seat, key)
        return self.visits.get(node, {}).get(a, 0), self.values.get(node, {}).get(a, 0.0)


class ArrayEdgeStats(EdgeStats):
    """Kernel output; dictionaries are only built when asked for."""

    def __init__(self, tree, visits: np.ndarray, values: np.ndarray):
        self._ct = tree.compiled()
        self._v = visits
        self._s = values
        self._dicts = None

    def node(self, seat: int, key: str) -> dict[int, int]:
        i = self._ct.info_index.get((seat, key))
        if i is None:
            return {}
        return {int(a): int(self._v[i, a]) for a in np.flatnonzero(self._v[i])}

    def _build(self):
        if self._dicts is None:
            out_v, out_s = {}, {}
            for i in np.flatnonzero(self._v.sum(axis=1)):
                acts = np.flatnonzero(self._v[i])
                out_v[self._ct.info_keys[i]] = {int(a): int(self._v[i, a]) for a in acts}
                out_s[self._ct.info_keys[i]] = {int(a): float(self._s[i, a]) for a in acts}
            self._dicts = (out_v, out_s)
        return self._dicts

    @property
    def visits(self):
        return self._build()[0]

    @property
    def values(self):
        return self._build()[1]


@dataclass
class IsmctsReport:
    infostate: Infostate
    lam: float
    actions: tuple[int, ...]
    shares: np.ndarray
    root_visits: int
    stats: EdgeStats

    @property
    def recommended(self) -> int:
        return self.actions[int(np.argmax(self.shares))]


def uct_select(visits: dict[int, int], values: dict[int, float], legal, c: float = DEFAULT_C) -> int:
    """UCB1 over the children legal in the sampled world.

    Unvisited children come first, lowest id first.  Otherwise the parent
    count is the sum of the legal children's visits and the first maximum
    wins ties.
    """
    for a in legal:
        if visits.get(a, 0) == 0:
            return a
    log_total = math.log(sum(visits[a] for a in legal))
    best, pick = -math.inf, legal[0]
    for a in legal:
        n = visits[a]
        score = values[a] / n + c * math.sqrt(log_total / n)
        if score > best:
            best, pick = score, a
    return pick


def _chance_pick(outcomes, u: float) -> int:
    acc = 0.0
    for a, p in outcomes:
        acc += p
        if u < acc:
            return a
    return outcomes[-1][0]


class Ismcts:
    """IS-MCTS decider.  ``budget`` is the number of iterations per decision.

    ``backend`` selects the compiled kernel (``"kernel"``), the Python
    reference (``"python"``) or the kernel whenever the full tree fits in
    memory (``"auto"``).
    """

    name = "ismcts"

    def __init__(
        self,
        game: Game,
        budget: int = 1000,
        c: float = DEFAULT_C,
        beliefs: BeliefModel | None = None,
        backend: str = "auto",
    ):
        if budget < 1:
            raise GameError("budget must be at least 1")
        if backend not in ("auto", "kernel", "python"):
            raise GameError(f"unknown backend {backend!r}")
        self.game = game
        self.budget = budget
        self.c = float(c)
        self.beliefs = beliefs or BeliefModel(game)
        self.tree = self.beliefs.tree
        if backend == "auto":
            backend = "kernel" if self.tree is not None else "python"
        if backend == "kernel" and self.tree is None:
            self.tree = game_tree(game)
        self.backend = backend

    def decide(self, s: Infostate, schedule: LambdaSchedule, rng: np.random.Generator) -> IsmctsReport:
        lam = schedule.at(s.decision_index)
        belief = self.beliefs.mixture_belief(s, lam)
        roots = sample_indices(belief, rng, self.budget)
        uniforms = rng.random((self.budget, self.game.max_depth + 1))
        if self.backend == "kernel":
            nodes = np.array([self.tree.index[w] for w in belief.worlds], dtype=np.int64)
            stats, root_counts = self._run_kernel(nodes[roots], uniforms)
        else:
            stats, root_counts = self._run_python([belief.worlds[i] for i in roots], uniforms)
        own_world = next(w for w in belief.worlds if w.info_keys[s.seat] == s.key)
        actions = self.game._legal(own_world.payload)
        node = stats.node(s.seat, s.key)
        counts = np.array([node.get(a, 0) for a in actions], dtype=np.float64)
        total = counts.sum()
        shares = counts / total if total > 0 else np.full(len(actions), 1.0 / len(actions))
        return IsmctsReport(s, lam, actions, shares, root_counts.get((s.seat, s.key), 0), stats)

    def policy_row(self, report: IsmctsReport, actions: tuple[int, ...]) -> np.ndarray:
        if tuple(actions) != report.actions:
            raise GameError("action set differs from the searched infostate")
        return report.shares.copy()

    # -- reference implementation ------------------------------------------
    def _run_python(self, worlds: list[WorldState], uniforms: np.ndarray):
        game, c = self.game, self.c
        visits: dict[tuple[int, str], dict[int, int]] = {}
        values: dict[tuple[int, str], dict[int, float]] = {}
        root_counts: dict[tuple[int, str], int] = {}
        for t, w in enumerate(worlds):
            u = uniforms[t]
            r = 0
            root = (w.player, w.info_keys[w.player])
            root_counts[root] = root_counts.get(root, 0) + 1
            visits.setdefault(root, {})
            path: list[tuple[tuple[int, str], int, int]] = []
            expanding = False
            while w.player != TERMINAL:
                if w.player == CHANCE:
                    w = game.child(w, _chance_pick(game.chance_outcomes(w), u[r]))
                    r += 1
                    continue
                node = (w.player, w.info_keys[w.player])
                if expanding or node not in visits:
                    visits.setdefault(node, {})
                    break
                legal = game.legal_actions(w)
                nv = visits[node]
                pick = uct_select(nv, values.get(node, {}), legal, c)
                if nv.get(pick, 0) == 0:
                    expanding = True
                path.append((node, pick, w.player))
                w = game.child(w, pick)
            while w.player != TERMINAL:
                if w.player == CHANCE:
                    w = game.child(w, _chance_pick(game.chance_outcomes(w), u[r]))
                else:
                    legal = game.legal_actions(w)
                    w = game.child(w, legal[min(int(u[r] * len(legal)), len(legal) - 1)])
                r += 1
            ret0 = game.returns(w)[0]
            for node, a, owner in path:
                nv = visits[node]
                nv[a] = nv.get(a, 0) + 1
                vals = values.setdefault(node, {})
                vals[a] = vals.get(a, 0.0) + (ret0 if owner == 0 else -ret0)
        visits = {k: v for k, v in visits.items() if v}
        return EdgeStats(visits, values), root_counts

    # -- compiled path -----------------------------------------------------
    def _run_kernel(self, start: np.ndarray, uniforms: np.ndarray):
        from ._kernel import ismcts_kernel

        ct = self.tree.compiled()
        visits, values, roots = ismcts_kernel(
            ct.player,
            ct.child_start,
            ct.child_count,
            ct.child_action,
            ct.child_node,
            ct.child_prob,
            ct.info_id,
            ct.util0,
            start,
            uniforms,
            self.c,
            len(ct.info_keys),
            self.game.num_actions,
        )
        root_counts = {ct.info_keys[i]: int(roots[i]) for i in np.flatnonzero(roots)}
        return ArrayEdgeStats(self.tree, visits, values), root_counts
