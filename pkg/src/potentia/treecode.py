"""Spatial tree over charge atoms for monopole-accelerated summation.

Nodes split their tight atom bounding box at its center into 2^d octants;
leaves hold at most ``leaf_size`` atoms and are always evaluated directly.
A cell is summarized by its total weight placed at the weight centroid when
``diag < theta * r`` with r measured target-to-centroid; cells containing
the target and cells with nearly cancelling mass are always opened.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DEPTH = 60


@dataclass(frozen=True)
class KernelTree:
    dimension: int
    perm: np.ndarray  # original atom indices, leaves own contiguous slices
    node_lo: np.ndarray
    node_hi: np.ndarray
    node_centroid: np.ndarray
    node_mass: np.ndarray
    node_absmass: np.ndarray
    node_diag: np.ndarray
    node_start: np.ndarray
    node_count: np.ndarray
    node_children: np.ndarray
    node_is_leaf: np.ndarray

    @property
    def node_count_total(self) -> int:
        return self.node_mass.shape[0]


def build_tree(locs: np.ndarray, ws: np.ndarray, leaf_size: int = 48) -> KernelTree:
    locs = np.asarray(locs, dtype=float)
    ws = np.asarray(ws, dtype=float)
    n, d = locs.shape
    if n == 0:
        raise ValueError("cannot build a tree over an empty charge")
    nch = 1 << d

    lo_l, hi_l, cen_l, mass_l, absm_l, diag_l = [], [], [], [], [], []
    start_l, count_l, child_l, leaf_l = [], [], [], []
    perm_parts: list[np.ndarray] = []
    perm_cursor = 0

    # BFS so queue position equals node index; children ids assigned in
    # append order.
    queue: list[tuple[np.ndarray, int]] = [(np.arange(n, dtype=np.int64), 0)]
    next_node = 1
    head = 0
    while head < len(queue):
        idx, level = queue[head]
        head += 1
        pts = locs[idx]
        w = ws[idx]
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        diag = float(np.sqrt(np.sum((hi - lo) ** 2)))
        mass = float(np.sum(w))
        absmass = float(np.sum(np.abs(w)))
        if idx.size == 1:
            centroid = pts[0].copy()
        elif mass != 0.0:
            centroid = (w[:, None] * pts).sum(axis=0) / mass
        else:
            centroid = 0.5 * (lo + hi)  # cancelling cell: opened anyway

        lo_l.append(lo)
        hi_l.append(hi)
        cen_l.append(centroid)
        mass_l.append(mass)
        absm_l.append(absmass)
        diag_l.append(diag)

        is_leaf = idx.size <= leaf_size or level >= MAX_DEPTH or diag == 0.0
        if is_leaf:
            leaf_l.append(True)
            start_l.append(perm_cursor)
            count_l.append(idx.size)
            # idx stays ascending: octant selection preserves arange order
            perm_parts.append(idx)
            perm_cursor += idx.size
            child_l.append(np.full(nch, -1, dtype=np.int64))
        else:
            leaf_l.append(False)
            start_l.append(-1)
            count_l.append(0)
            mid = 0.5 * (lo + hi)
            octant = np.zeros(idx.size, dtype=np.int64)
            for j in range(d):
                octant |= (pts[:, j] > mid[j]).astype(np.int64) << j
            kids = np.full(nch, -1, dtype=np.int64)
            for o in range(nch):
                sub = idx[octant == o]
                if sub.size:
                    kids[o] = next_node
                    next_node += 1
                    queue.append((sub, level + 1))
            child_l.append(kids)

    tree = KernelTree(
        dimension=d,
        perm=np.concatenate(perm_parts) if perm_parts else np.zeros(0, dtype=np.int64),
        node_lo=np.array(lo_l),
        node_hi=np.array(hi_l),
        node_centroid=np.array(cen_l),
        node_mass=np.array(mass_l),
        node_absmass=np.array(absm_l),
        node_diag=np.array(diag_l),
        node_start=np.array(start_l, dtype=np.int64),
        node_count=np.array(count_l, dtype=np.int64),
        node_children=np.array(child_l, dtype=np.int64).reshape(len(child_l), nch),
        node_is_leaf=np.array(leaf_l, dtype=bool),
    )
    return tree
