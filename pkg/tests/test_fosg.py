from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixbelief import CHANCE, TERMINAL, GameError, make_game
from mixbelief.fosg import History, info_entry, parse_info_key, parse_public_key, project_public, public_entry
from mixbelief.tree import game_tree

text = st.text(min_size=0, max_size=8)


@given(st.lists(st.tuples(text, text, text), max_size=6))
def test_info_key_round_trip(entries):
    key = "".join(info_entry(*e) for e in entries)
    assert parse_info_key(key) == entries
    assert parse_public_key(project_public(key)) == [e[0] for e in entries]


@given(st.lists(text, max_size=6))
def test_public_key_round_trip(obs):
    assert parse_public_key("".join(public_entry(o) for o in obs)) == obs


def test_keys_are_injective_across_field_boundaries():
    assert info_entry("ab", "", "") != info_entry("a", "b", "")


def random_playout(game, rng):
    w = game.initial_state()
    states = [w]
    actions = []
    while w.player != TERMINAL:
        if w.player == CHANCE:
            outs = game.chance_outcomes(w)
            a = outs[rng.integers(len(outs))][0]
        else:
            legal = game.legal_actions(w)
            a = legal[rng.integers(len(legal))]
        actions.append(a)
        w = game.child(w, a)
        states.append(w)
    return actions, states


GAMES = [
    ("liars_dice", {}),
    ("liars_dice", {"faces": 3}),
    ("liars_dice", {"dice": 2, "faces": 3}),
    ("leduc", {}),
    ("trick", {}),
    ("trick", {"cards": 20, "hidden": 6}),
]


@pytest.mark.parametrize("name,params", GAMES)
@given(seed=st.integers(0, 2**32 - 1))
def test_playout_invariants(name, params, seed):
    game = make_game(name, **params)
    actions, states = random_playout(game, np.random.default_rng(seed))
    final = states[-1]
    assert len(actions) <= game.max_depth
    for k, w in enumerate(states):
        assert w.move_number == k
        # exactly one of terminal / chance / player
        assert (w.player == TERMINAL) + (w.player == CHANCE) + (w.player >= 0) == 1
        assert project_public(w.info_keys[0]) == project_public(w.info_keys[1]) == w.public_key
    for prev, nxt in zip(states, states[1:]):
        for seat in (0, 1):
            assert len(parse_info_key(nxt.info_keys[seat])) == len(parse_info_key(prev.info_keys[seat])) + 1
    r = game.returns(final)
    assert r[0] + r[1] == 0.0
    assert History(game, tuple(actions)).final == final
    assert game.replay(actions).info_keys == final.info_keys


def test_terminal_queries_raise(ld2):
    w = ld2.replay([0, 0, 0, ld2.challenge])
    with pytest.raises(GameError):
        ld2.legal_actions(w)
    with pytest.raises(GameError):
        ld2.apply_action(w, 0)
    with pytest.raises(GameError):
        ld2.returns(ld2.initial_state())


def test_illegal_bid_raises(ld2):
    w = ld2.replay([0, 1, 2])
    with pytest.raises(GameError):
        ld2.apply_action(w, 1)
    with pytest.raises(GameError):
        ld2.apply_action(ld2.initial_state(), 7)


def test_apply_action_is_pure(ld2):
    w = ld2.replay([0, 1])
    before = (w.payload, w.info_keys, w.public_key)
    ld2.apply_action(w, 0)
    assert (w.payload, w.info_keys, w.public_key) == before


def test_action_labels_are_a_bijection():
    for name, params in GAMES[:4]:
        g = make_game(name, **params)
        labels = [g.action_label(a) for a in range(g.num_actions)]
        assert len(set(labels)) == len(labels)
        assert all(g.action_id(lbl) == a for a, lbl in enumerate(labels))


def test_die_roll_is_private_to_owner(ld2):
    w, obs = ld2.apply_action(ld2.initial_state(), 1)
    assert obs.public == "" and obs.private == ("2", "")


def test_trick_play_is_public():
    g = make_game("trick")
    w = g.initial_state()
    for _ in range(2):
        w = g.child(w, g.chance_outcomes(w)[0][0])
    card = g.legal_actions(w)[0]
    _, obs = g.apply_action(w, card)
    assert obs.public == g.card_label(card) and obs.private == ("", "")


@pytest.mark.parametrize(
    "name,params,count",
    [
        ("liars_dice", {}, 4),
        ("leduc", {}, 30),
        ("trick", {}, comb(10, 4) * comb(6, 4)),
    ],
)
def test_enumerate_initial_worlds(name, params, count):
    g = make_game(name, **params)
    worlds = g.enumerate_initial_worlds()
    probs = np.array([p for _, p in worlds])
    assert len(worlds) == count
    assert abs(probs.sum() - 1.0) < 1e-12
    assert np.allclose(probs, 1.0 / count, rtol=0, atol=1e-15)
    assert [w.payload for w, _ in worlds] == [w.payload for w, _ in g.enumerate_initial_worlds()]


def test_histories_sharing_a_key_share_legal_actions(leduc):
    tree = game_tree(leduc)
    for seat in (0, 1):
        for key, members in tree.by_info[seat].items():
            acting = [tree.nodes[i] for i in members if tree.nodes[i].player == seat]
            assert len({leduc.legal_actions(w) for w in acting}) <= 1
