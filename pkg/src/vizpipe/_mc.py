"""Marching-cubes case table, generated from the 15 base configurations.

Cube corners are numbered in the conventional ring order::

    0:(0,0,0) 1:(1,0,0) 2:(1,1,0) 3:(0,1,0)
    4:(0,0,1) 5:(1,0,1) 6:(1,1,1) 7:(0,1,1)

and the 12 edges connect::

    0:(0,1) 1:(1,2) 2:(2,3)  3:(3,0)
    4:(4,5) 5:(5,6) 6:(6,7)  7:(7,4)
    8:(0,4) 9:(1,5) 10:(2,6) 11:(3,7)

A configuration is the 8-bit mask of corners whose value exceeds the level.
The full 256-entry triangulation table is closed over the 24 cube rotations
and the sign complement (complemented cases reuse the base triangulation
with reversed winding, so orientation stays consistent).
"""

import numpy as np

CORNERS = (
    (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
    (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1),
)

EDGES = (
    (0, 1), (1, 2), (2, 3), (3, 0),
    (4, 5), (5, 6), (6, 7), (7, 4),
    (0, 4), (1, 5), (2, 6), (3, 7),
)

# triangulations of the 15 rotation/complement equivalence classes,
# keyed by the minimal configuration in each class
BASE_CASES = {
    0: [],
    1: [(0, 8, 3)],
    3: [(1, 8, 3), (9, 8, 1)],
    5: [(0, 8, 3), (1, 2, 10)],
    7: [(2, 8, 3), (2, 10, 8), (10, 9, 8)],
    15: [(9, 8, 10), (10, 8, 11)],
    20: [(1, 2, 10), (8, 4, 7)],
    21: [(3, 4, 7), (3, 0, 4), (1, 2, 10)],
    23: [(2, 10, 9), (2, 9, 7), (2, 7, 3), (7, 9, 4)],
    26: [(9, 0, 1), (8, 4, 7), (2, 3, 11)],
    27: [(4, 7, 11), (9, 4, 11), (9, 11, 2), (9, 2, 1)],
    29: [(1, 11, 10), (1, 4, 11), (1, 0, 4), (7, 11, 4)],
    30: [(4, 7, 8), (9, 0, 11), (9, 11, 10), (11, 0, 3)],
    60: [(9, 5, 8), (8, 5, 7), (10, 1, 3), (10, 3, 11)],
    90: [(0, 1, 9), (4, 7, 8), (2, 3, 11), (5, 10, 6)],
}


def _rotation_corner_perms():
    """Corner permutations of the 24 proper rotations of the cube."""
    axis_vecs = [np.array(v) for v in
                 [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]]
    index = {c: i for i, c in enumerate(CORNERS)}
    perms = set()
    for x in axis_vecs:
        for y in axis_vecs:
            if np.dot(x, y) != 0:
                continue
            z = np.cross(x, y)
            rot = np.array([x, y, z]).T
            if round(float(np.linalg.det(rot))) != 1:
                continue
            perm = []
            for c in CORNERS:
                v = rot @ (np.array(c) - 0.5) + 0.5
                perm.append(index[tuple(int(round(t)) for t in v)])
            perms.add(tuple(perm))
    assert len(perms) == 24
    return sorted(perms)


def _edge_perm(corner_perm):
    edge_index = {frozenset(e): i for i, e in enumerate(EDGES)}
    return tuple(
        edge_index[frozenset((corner_perm[a], corner_perm[b]))] for a, b in EDGES
    )


def _apply_config(config, corner_perm):
    out = 0
    for i in range(8):
        if config >> i & 1:
            out |= 1 << corner_perm[i]
    return out


def _build_tri_table():
    perms = _rotation_corner_perms()
    edge_perms = [_edge_perm(p) for p in perms]
    table = [None] * 256
    for config, tris in BASE_CASES.items():
        table[config] = [tuple(t) for t in tris]
    # close the table over rotations and complement
    changed = True
    while changed:
        changed = False
        for config in range(256):
            if table[config] is None:
                continue
            tris = table[config]
            for perm, eperm in zip(perms, edge_perms):
                image = _apply_config(config, perm)
                if table[image] is None:
                    table[image] = [
                        (eperm[a], eperm[b], eperm[c]) for a, b, c in tris
                    ]
                    changed = True
            comp = config ^ 0xFF
            if table[comp] is None:
                table[comp] = [(c, b, a) for a, b, c in tris]
                changed = True
    assert all(entry is not None for entry in table)
    return table


TRI_TABLE = _build_tri_table()

#: flat (256, 15) int8 array of edge indices, padded with -1
TRI_ARRAY = np.full((256, 15), -1, dtype=np.int8)
for _config, _tris in enumerate(TRI_TABLE):
    _flat = [e for tri in _tris for e in tri]
    TRI_ARRAY[_config, : len(_flat)] = _flat

#: per-configuration triangle count
TRI_COUNTS = np.array([len(t) for t in TRI_TABLE], dtype=np.int32)
