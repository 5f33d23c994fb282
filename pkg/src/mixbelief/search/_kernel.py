"""Compiled IS-MCTS loop over a flattened game tree.

Mirrors :meth:`mixbelief.search.ismcts.Ismcts._run_python` step for step,
including the order in which pre-drawn uniforms are consumed, so both paths
produce identical statistics for the same inputs.
"""

import math

import numpy as np
from numba import njit

_CHANCE = -1
_TERMINAL = -2


@njit(cache=True)
def _chance_child(start, count, child_prob, u):
    acc = 0.0
    for j in range(count):
        acc += child_prob[start + j]
        if u < acc:
            return start + j
    return start + count - 1


@njit(cache=True)
def ismcts_kernel(
    player,
    child_start,
    child_count,
    child_action,
    child_node,
    child_prob,
    info_id,
    util0,
    start_nodes,
    uniforms,
    c,
    n_infos,
    n_actions,
):
    visits = np.zeros((n_infos, n_actions), dtype=np.int64)
    values = np.zeros((n_infos, n_actions), dtype=np.float64)
    root_visits = np.zeros(n_infos, dtype=np.int64)
    in_tree = np.zeros(n_infos, dtype=np.bool_)
    depth_cap = uniforms.shape[1]
    path_info = np.empty(depth_cap, dtype=np.int64)
    path_action = np.empty(depth_cap, dtype=np.int64)
    path_owner = np.empty(depth_cap, dtype=np.int64)

    for t in range(start_nodes.shape[0]):
        node = start_nodes[t]
        r = 0
        root = info_id[node]
        root_visits[root] += 1
        in_tree[root] = True
        depth = 0
        expanding = False
        while True:
            pl = player[node]
            if pl == _TERMINAL:
                break
            s = child_start[node]
            k = child_count[node]
            if pl == _CHANCE:
                node = child_node[_chance_child(s, k, child_prob, uniforms[t, r])]
                r += 1
                continue
            info = info_id[node]
            if expanding or not in_tree[info]:
                in_tree[info] = True
                break
            pick = -1
            for j in range(k):
                if visits[info, child_action[s + j]] == 0:
                    pick = j
                    break
            if pick < 0:
                total = 0
                for j in range(k):
                    total += visits[info, child_action[s + j]]
                log_total = math.log(total)
                best = -np.inf
                for j in range(k):
                    a = child_action[s + j]
                    n = visits[info, a]
                    score = values[info, a] / n + c * math.sqrt(log_total / n)
                    if score > best:
                        best = score
                        pick = j
            else:
                expanding = True
            path_info[depth] = info
            path_action[depth] = child_action[s + pick]
            path_owner[depth] = pl
            depth += 1
            node = child_node[s + pick]

        while player[node] != _TERMINAL:
            s = child_start[node]
            k = child_count[node]
            if player[node] == _CHANCE:
                node = child_node[_chance_child(s, k, child_prob, uniforms[t, r])]
            else:
                j = int(uniforms[t, r] * k)
                if j >= k:
                    j = k - 1
                node = child_node[s + j]
            r += 1

        ret0 = util0[node]
        for d in range(depth):
            visits[path_info[d], path_action[d]] += 1
            values[path_info[d], path_action[d]] += ret0 if path_owner[d] == 0 else -ret0

    return visits, values, root_visits
