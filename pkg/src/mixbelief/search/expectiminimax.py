"""Exact perfect-information evaluation with alpha-beta pruning.

Chance nodes are resolved by expectation (children searched with a full
window), so pruning happens at player nodes only.  A transposition table keyed
by the rules payload stores value bounds and is kept across calls.
"""

from __future__ import annotations

import math

from ..fosg import CHANCE, TERMINAL, Game, WorldState

INF = math.inf


class Expectiminimax:
    def __init__(self, game: Game):
        self.game = game
        self.table: dict = {}

    def value(self, w: WorldState | object, seat: int) -> float:
        """Game value of ``w`` for ``seat`` when every hidden card or die is known."""
        payload = w.payload if isinstance(w, WorldState) else w
        v = self._search(payload, -INF, INF)
        return v if seat == 0 else -v

    def action_values(self, w: WorldState, seat: int) -> dict[int, float]:
        """Value for ``seat`` of each legal action at ``w``."""
        g = self.game
        return {a: self.value(g._next(w.payload, a), seat) for a in g._legal(w.payload)}

    def _search(self, p, alpha: float, beta: float) -> float:
        g = self.game
        player = g._player(p)
        if player == TERMINAL:
            return g._returns(p)[0]
        entry = self.table.get(p)
        if entry is not None:
            lo, hi = entry
            if lo == hi or lo >= beta:
                return lo
            if hi <= alpha:
                return hi
            alpha = max(alpha, lo)
            beta = min(beta, hi)
        else:
            lo, hi = -INF, INF
        if player == CHANCE:
            v = 0.0
            for a, prob in g._chance(p):
                v += prob * self._search(g._next(p, a), -INF, INF)
            self.table[p] = (v, v)
            return v
        a0, b0 = alpha, beta
        if player == 0:
            v = -INF
            for a in g._legal(p):
                v = max(v, self._search(g._next(p, a), alpha, beta))
                if v >= beta:
                    break
                alpha = max(alpha, v)
        else:
            v = INF
            for a in g._legal(p):
                v = min(v, self._search(g._next(p, a), alpha, beta))
                if v <= alpha:
                    break
                beta = min(beta, v)
        if v <= a0:
            hi = min(hi, v)
        elif v >= b0:
            lo = max(lo, v)
        else:
            lo = hi = v
        self.table[p] = (lo, hi)
        return v
