"""Tabular policies distilled from online deciders, and their file format.

A single pass queries the decider once at every infostate where the seat
acts.  Stabilisation averages passes in batches until the running average
moves by less than a threshold (max-norm) between consecutive batches.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from multiprocessing import get_context
from typing import Any, Callable, Sequence

import numpy as np

from .belief import LambdaSchedule
from .fosg import Game, GameError, Infostate
from .tree import game_tree

log = logging.getLogger(__name__)

ROW_TOLERANCE = 1e-9
METADATA_FIELDS = ("game", "params", "algorithm", "seat", "schedule", "seed", "budget")


class PolicyParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class StabilizationError(RuntimeError):
    """Raised when the running average is still moving after ``max_batches``."""

    def __init__(self, variation: float, batches: int):
        super().__init__(f"policy did not stabilise after {batches} batches (last variation {variation:.6g})")
        self.variation = variation
        self.batches = batches


@dataclass(frozen=True)
class StabilizationConfig:
    batch_size: int = 10
    threshold: float = 0.01
    max_batches: int = 200

    def __post_init__(self):
        if self.batch_size < 1 or self.max_batches < 1:
            raise GameError("batch size and max batches must be positive")
        if not 0.0 < self.threshold <= 1.0:
            raise GameError("threshold must lie in (0, 1]")


@dataclass
class Layout:
    """Decision infostates of one seat with their legal actions, in tree order."""

    seat: int
    infostates: list[Infostate]
    actions: list[tuple[int, ...]]
    offsets: np.ndarray

    @classmethod
    def of(cls, game: Game, seat: int) -> "Layout":
        tree = game_tree(game)
        infostates, actions = [], []
        for key in tree.decision_infostates(seat):
            w = tree.nodes[tree.by_info[seat][key][0]]
            infostates.append(game.infostate(w, seat))
            actions.append(game.legal_actions(w))
        offsets = np.cumsum([0] + [len(a) for a in actions])
        return cls(seat, infostates, actions, offsets)

    @property
    def size(self) -> int:
        return int(self.offsets[-1])


@dataclass
class TabularPolicy:
    """Probability vectors keyed by infostate key, plus the metadata that produced them."""

    seat: int
    rows: dict[str, tuple[tuple[int, ...], np.ndarray]]
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for key, (actions, probs) in self.rows.items():
            _check_row(key, actions, probs)

    def __contains__(self, key: str) -> bool:
        return key in self.rows

    def __len__(self) -> int:
        return len(self.rows)

    def row(self, key: str) -> tuple[tuple[int, ...], np.ndarray]:
        try:
            return self.rows[key]
        except KeyError:
            raise GameError(f"policy does not cover infostate {key!r}") from None

    def prob(self, key: str, a: int) -> float:
        actions, probs = self.row(key)
        return float(probs[actions.index(a)]) if a in actions else 0.0

    def equals(self, other: "TabularPolicy") -> bool:
        """Bit-exact comparison of rows and metadata."""
        if self.seat != other.seat or self.metadata != other.metadata or list(self.rows) != list(other.rows):
            return False
        for key, (actions, probs) in self.rows.items():
            oa, op = other.rows[key]
            if actions != oa or probs.tobytes() != op.tobytes():
                return False
        return True

    @classmethod
    def from_vector(cls, layout: Layout, vec: np.ndarray, metadata: dict | None = None) -> "TabularPolicy":
        rows = {}
        for i, s in enumerate(layout.infostates):
            probs = np.array(vec[layout.offsets[i] : layout.offsets[i + 1]], dtype=np.float64)
            rows[s.key] = (layout.actions[i], probs)
        return cls(layout.seat, rows, dict(metadata or {}))

    def vector(self, layout: Layout) -> np.ndarray:
        return np.concatenate([self.row(s.key)[1] for s in layout.infostates])


def _check_row(key: str, actions, probs) -> None:
    if len(actions) != len(probs):
        raise GameError(f"row {key!r}: {len(actions)} actions but {len(probs)} probabilities")
    if (np.asarray(probs) < 0).any() or abs(float(np.sum(probs)) - 1.0) > ROW_TOLERANCE:
        raise GameError(f"row {key!r} is not a probability vector")


def uniform_policy(game: Game, seat: int) -> TabularPolicy:
    layout = Layout.of(game, seat)
    vec = np.concatenate([np.full(len(a), 1.0 / len(a)) for a in layout.actions])
    return TabularPolicy.from_vector(layout, vec, {"algorithm": "uniform", "seat": seat})


def policy_from_function(game: Game, seat: int, fn: Callable[[Infostate, tuple[int, ...]], Sequence[float]]) -> TabularPolicy:
    layout = Layout.of(game, seat)
    rows = {s.key: (acts, np.asarray(fn(s, acts), dtype=np.float64)) for s, acts in zip(layout.infostates, layout.actions)}
    return TabularPolicy(seat, rows, {"seat": seat})


# -- extraction -------------------------------------------------------------
def public_stream(public_key: str) -> int:
    # siblings of one public state share a stream, so lam=1 rows cannot differ by sampling noise
    return int.from_bytes(hashlib.blake2b(public_key.encode(), digest_size=8).digest(), "little")


def pass_rng(seed: int, pass_idx: int, s: Infostate) -> np.random.Generator:
    return np.random.default_rng([seed, pass_idx, public_stream(s.public_key)])


def extract_vector(decider, layout: Layout, schedule: LambdaSchedule, seed: int, pass_idx: int) -> np.ndarray:
    vec = np.empty(layout.size)
    for i, s in enumerate(layout.infostates):
        report = decider.decide(s, schedule, pass_rng(seed, pass_idx, s))
        vec[layout.offsets[i] : layout.offsets[i + 1]] = decider.policy_row(report, layout.actions[i])
    return vec


def _metadata(decider, seat: int, schedule: LambdaSchedule, seed: int) -> dict[str, Any]:
    return {
        "game": decider.game.name,
        "params": decider.game.params(),
        "algorithm": decider.name,
        "seat": seat,
        "schedule": str(schedule),
        "seed": seed,
        "budget": decider.budget,
    }


def extract_policy(decider, seat: int, schedule: LambdaSchedule, seed: int, pass_idx: int = 0) -> TabularPolicy:
    """One pass: query ``decider`` once at every decision infostate of ``seat``."""
    layout = Layout.of(decider.game, seat)
    vec = extract_vector(decider, layout, schedule, seed, pass_idx)
    return TabularPolicy.from_vector(layout, vec, _metadata(decider, seat, schedule, seed))


_WORKER: dict[str, Any] = {}


def _worker_init(decider, layout, schedule, seed):
    _WORKER.update(decider=decider, layout=layout, schedule=schedule, seed=seed)


def _worker_pass(pass_idx: int) -> np.ndarray:
    w = _WORKER
    return extract_vector(w["decider"], w["layout"], w["schedule"], w["seed"], pass_idx)


@dataclass
class StabilizedPolicy:
    policy: TabularPolicy
    batches: int
    variation: float
    history: list[float]


def stabilize(
    decider,
    seat: int,
    schedule: LambdaSchedule,
    seed: int,
    config: StabilizationConfig = StabilizationConfig(),
    workers: int = 1,
) -> StabilizedPolicy:
    """Average passes batch by batch until the average stops moving.

    Pass ``p`` always uses the streams derived from ``(seed, p)``, and sums are
    reduced in pass order, so the result does not depend on ``workers``.
    """
    layout = Layout.of(decider.game, seat)
    total = np.zeros(layout.size)
    prev = None
    history: list[float] = []
    pool = None
    if workers > 1:
        pool = ProcessPoolExecutor(
            workers, mp_context=get_context("fork"), initializer=_worker_init, initargs=(decider, layout, schedule, seed)
        )
    try:
        for batch in range(1, config.max_batches + 1):
            first = (batch - 1) * config.batch_size
            idx = range(first, first + config.batch_size)
            if pool is None:
                vectors = [extract_vector(decider, layout, schedule, seed, p) for p in idx]
            else:
                vectors = list(pool.map(_worker_pass, idx))
            for v in vectors:
                total += v
            avg = total / (batch * config.batch_size)
            if prev is not None:
                variation = float(np.max(np.abs(avg - prev)))
                history.append(variation)
                log.debug("batch %d variation %.6g", batch, variation)
                if variation < config.threshold:
                    log.info(
                        "%s seat %d schedule %s converged after %d batches (variation %.6g)",
                        decider.name, seat, schedule, batch, variation,
                    )
                    meta = _metadata(decider, seat, schedule, seed)
                    return StabilizedPolicy(TabularPolicy.from_vector(layout, avg, meta), batch, variation, history)
            prev = avg
    finally:
        if pool is not None:
            pool.shutdown()
    raise StabilizationError(history[-1] if history else math.inf, config.max_batches)


# -- persistence ------------------------------------------------------------
def _encode_meta(value: Any) -> str:
    return value if isinstance(value, str) else json.dumps(value, sort_keys=True)


def save_policy(policy: TabularPolicy, path, game: Game | None = None) -> None:
    """Write ``policy`` as ``# key=value`` headers followed by tab-separated rows."""
    if game is None:
        from .games import make_game

        game = make_game(policy.metadata["game"], **policy.metadata.get("params", {}))
    missing = [k for k in METADATA_FIELDS if k not in policy.metadata]
    if missing:
        raise GameError(f"policy metadata lacks {', '.join(missing)}")
    lines = [f"# {k}={_encode_meta(policy.metadata[k])}" for k in METADATA_FIELDS]
    lines += [f"# {k}={_encode_meta(v)}" for k, v in policy.metadata.items() if k not in METADATA_FIELDS]
    for key, (actions, probs) in policy.rows.items():
        for a, p in zip(actions, probs):
            lines.append(f"{key}\t{game.action_label(a)}\t{float(p)!r}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _decode_meta(key: str, text: str) -> Any:
    if key in ("game", "algorithm", "schedule"):
        return text
    return json.loads(text)


def load_policy(path) -> TabularPolicy:
    from .games import make_game

    meta: dict[str, Any] = {}
    rows: dict[str, tuple[list[int], list[float]]] = {}
    row_line: dict[str, int] = {}
    game = None
    with open(path) as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for n, line in enumerate(lines, start=1):
        if line.startswith("#"):
            if rows:
                raise PolicyParseError(n, "metadata after the first row")
            key, sep, value = line[1:].strip().partition("=")
            if not sep:
                raise PolicyParseError(n, "metadata line without '='")
            try:
                meta[key] = _decode_meta(key, value)
            except json.JSONDecodeError as exc:
                raise PolicyParseError(n, f"bad value for {key}: {exc}") from None
            continue
        if game is None:
            missing = [k for k in METADATA_FIELDS if k not in meta]
            if missing:
                raise PolicyParseError(n, f"missing metadata {', '.join(missing)}")
            try:
                game = make_game(meta["game"], **meta["params"])
            except (GameError, TypeError) as exc:
                raise PolicyParseError(n, str(exc)) from None
        parts = line.split("\t")
        if len(parts) != 3:
            raise PolicyParseError(n, f"expected 3 tab-separated fields, got {len(parts)}")
        key, label, prob = parts
        try:
            a = game.action_id(label)
            p = float(prob)
        except (GameError, ValueError) as exc:
            raise PolicyParseError(n, str(exc)) from None
        if key in rows and row_line[key] != n - len(rows[key][0]):
            raise PolicyParseError(n, f"rows for {key!r} are not contiguous")
        acts, probs = rows.setdefault(key, ([], []))
        row_line.setdefault(key, n)
        acts.append(a)
        probs.append(p)
    if game is None:
        missing = [k for k in METADATA_FIELDS if k not in meta]
        if missing:
            raise PolicyParseError(len(lines) + 1, f"missing metadata {', '.join(missing)}")
    out = {}
    for key, (acts, probs) in rows.items():
        vec = np.array(probs, dtype=np.float64)
        end = row_line[key] + len(acts) - 1
        if (vec < 0).any() or abs(float(vec.sum()) - 1.0) > ROW_TOLERANCE:
            raise PolicyParseError(end, f"probabilities for {key!r} sum to {vec.sum()!r}")
        out[key] = (tuple(acts), vec)
    return TabularPolicy(int(meta["seat"]), out, meta)


def file_hash(path) -> str:
    """Git blob sha1 of a file's contents."""
    with open(path, "rb") as fh:
        data = fh.read()
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()
