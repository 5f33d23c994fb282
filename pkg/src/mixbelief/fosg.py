"""Factored-observation game core.

Every transition emits one public observation and one private observation
per seat.  Infostate keys are built incrementally from those observations,
so two histories share a key exactly when the seat saw the same thing.

Games implement a small payload-level rules API (``_player``, ``_legal``,
``_next`` ...).  Search code calls that API directly because it never needs
observations; everything that does (beliefs, policies, evaluation) goes
through :class:`WorldState` and :meth:`Game.apply_action`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Hashable, Iterator, Sequence

CHANCE = -1
TERMINAL = -2
NUM_SEATS = 2


class GameError(ValueError):
    """Raised when a rule precondition is violated (illegal action, terminal query ...)."""


@dataclass(frozen=True, slots=True)
class Observation:
    public: str
    private: tuple[str, str]


@dataclass(frozen=True, slots=True)
class WorldState:
    """A history-annotated game state.

    ``payload`` is the game-specific rules state and alone determines the
    future of the game; the remaining fields record how the state was reached.
    """

    payload: Hashable
    player: int
    move_number: int
    info_keys: tuple[str, str]
    public_key: str
    decisions: tuple[int, int]

    @property
    def is_terminal(self) -> bool:
        return self.player == TERMINAL

    @property
    def is_chance(self) -> bool:
        return self.player == CHANCE


def _field(text: str) -> str:
    return f"{len(text)}:{text}"


def info_entry(public: str, private: str, own_action: str) -> str:
    return _field(public) + _field(private) + _field(own_action)


def public_entry(public: str) -> str:
    return _field(public)


def _split_fields(key: str) -> Iterator[str]:
    pos = 0
    while pos < len(key):
        colon = key.index(":", pos)
        size = int(key[pos:colon])
        yield key[colon + 1 : colon + 1 + size]
        pos = colon + 1 + size


def parse_info_key(key: str) -> list[tuple[str, str, str]]:
    """Decode an infostate key into ``(public, private, own_action)`` entries."""
    fields = list(_split_fields(key))
    if len(fields) % 3:
        raise GameError(f"malformed infostate key {key!r}")
    return [tuple(fields[i : i + 3]) for i in range(0, len(fields), 3)]  # type: ignore[misc]


def parse_public_key(key: str) -> list[str]:
    return list(_split_fields(key))


def project_public(info_key: str) -> str:
    """Public infostate key of an infostate key (drops private parts and own actions)."""
    return "".join(public_entry(pub) for pub, _, _ in parse_info_key(info_key))


@dataclass(frozen=True, slots=True)
class Infostate:
    seat: int
    key: str
    public_key: str
    decision_index: int

    @property
    def entries(self) -> list[tuple[str, str, str]]:
        return parse_info_key(self.key)


@dataclass(frozen=True, slots=True)
class PublicInfostate:
    key: str

    @property
    def observations(self) -> list[str]:
        return parse_public_key(self.key)


class Game:
    """Base class for two-player zero-sum games with explicit chance.

    Subclasses provide the payload-level rules:

    ``_initial()``, ``_player(p)``, ``_legal(p)``, ``_chance(p)``,
    ``_next(p, a)``, ``_observe(p, a, nxt)``, ``_returns(p)``,
    ``action_label(a)``, ``chance_label(a)``.
    """

    name = "game"
    #: upper bound on the number of transitions from the initial state
    max_depth = 0
    num_actions = 0

    # -- payload rules (overridden) -------------------------------------
    def _initial(self) -> Any:
        raise NotImplementedError

    def _player(self, p: Any) -> int:
        raise NotImplementedError

    def _legal(self, p: Any) -> tuple[int, ...]:
        raise NotImplementedError

    def _chance(self, p: Any) -> tuple[tuple[int, float], ...]:
        raise NotImplementedError

    def _next(self, p: Any, a: int) -> Any:
        raise NotImplementedError

    def _observe(self, p: Any, a: int, nxt: Any) -> Observation:
        raise NotImplementedError

    def _returns(self, p: Any) -> tuple[float, float]:
        raise NotImplementedError

    def _is_legal(self, p: Any, player: int, a: int) -> bool:
        if player == CHANCE:
            return any(a == o for o, _ in self._chance(p))
        return a in self._legal(p)

    def action_label(self, a: int) -> str:
        raise NotImplementedError

    def chance_label(self, a: int) -> str:
        return str(a)

    def params(self) -> dict[str, Any]:
        return {}

    # -- world-level API --------------------------------------------------
    def initial_state(self) -> WorldState:
        p = self._initial()
        return WorldState(p, self._player(p), 0, ("", ""), "", (0, 0))

    def legal_actions(self, w: WorldState) -> tuple[int, ...]:
        if w.player == TERMINAL:
            raise GameError("legal_actions on a terminal state")
        if w.player == CHANCE:
            return tuple(a for a, _ in self._chance(w.payload))
        return self._legal(w.payload)

    def chance_outcomes(self, w: WorldState) -> tuple[tuple[int, float], ...]:
        if w.player != CHANCE:
            raise GameError("chance_outcomes on a non-chance state")
        return self._chance(w.payload)

    def apply_action(self, w: WorldState, a: int) -> tuple[WorldState, Observation]:
        if w.player == TERMINAL:
            raise GameError("apply_action on a terminal state")
        if not self._is_legal(w.payload, w.player, a):
            raise GameError(f"illegal action {a} at move {w.move_number}")
        nxt = self._next(w.payload, a)
        obs = self._observe(w.payload, a, nxt)
        actor = w.player
        label = self.action_label(a) if actor >= 0 else ""
        keys = tuple(
            w.info_keys[s] + info_entry(obs.public, obs.private[s], label if s == actor else "")
            for s in range(NUM_SEATS)
        )
        decisions = w.decisions
        if actor >= 0:
            decisions = tuple(d + (s == actor) for s, d in enumerate(decisions))
        child = WorldState(
            nxt,
            self._player(nxt),
            w.move_number + 1,
            keys,  # type: ignore[arg-type]
            w.public_key + public_entry(obs.public),
            decisions,  # type: ignore[arg-type]
        )
        return child, obs

    def child(self, w: WorldState, a: int) -> WorldState:
        return self.apply_action(w, a)[0]

    def returns(self, w: WorldState) -> tuple[float, float]:
        if w.player != TERMINAL:
            raise GameError("utility of a non-terminal state")
        return self._returns(w.payload)

    def utility(self, w: WorldState, seat: int) -> float:
        return self.returns(w)[seat]

    def infostate(self, w: WorldState, seat: int) -> Infostate:
        return Infostate(seat, w.info_keys[seat], w.public_key, w.decisions[seat])

    def public_state(self, w: WorldState) -> PublicInfostate:
        return PublicInfostate(w.public_key)

    def action_id(self, label: str) -> int:
        for a in range(self.num_actions):
            if self.action_label(a) == label:
                return a
        raise GameError(f"unknown action label {label!r}")

    def replay(self, actions: Sequence[int]) -> WorldState:
        w = self.initial_state()
        for a in actions:
            w = self.child(w, a)
        return w

    def enumerate_initial_worlds(self) -> list[tuple[WorldState, float]]:
        """All states reached by the opening chance events, with their probabilities."""
        out: list[tuple[WorldState, float]] = []
        stack = [(self.initial_state(), 1.0)]
        while stack:
            w, prob = stack.pop()
            if w.player != CHANCE:
                out.append((w, prob))
                continue
            for a, pa in reversed(self._chance(w.payload)):
                stack.append((self.child(w, a), prob * pa))
        return out

    def describe(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.name}({args})"


@dataclass(frozen=True)
class History:
    """Initial world plus the action sequence that was applied to it."""

    game: Game
    actions: tuple[int, ...] = ()

    def states(self) -> list[WorldState]:
        w = self.game.initial_state()
        out = [w]
        for a in self.actions:
            w = self.game.child(w, a)
            out.append(w)
        return out

    @property
    def final(self) -> WorldState:
        return self.game.replay(self.actions)

    def extend(self, a: int) -> "History":
        return History(self.game, self.actions + (a,))
