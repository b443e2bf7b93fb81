"""Hot summation loops: direct kernel sums and treecode traversal.

Two interchangeable implementations live here: numba ``@njit`` kernels
(parallel over targets) and a pure-numpy fallback.  Within either backend the
direct sum and the fully opened treecode produce bitwise identical values,
because both accumulate the per-atom contributions in original atom-list
order with a strict left-to-right fold and share the per-pair arithmetic.

Status codes: 0 finite, 1 minus-infinity (target on a positive atom, d >= 2),
2 plus-infinity (target on a negative atom, d >= 2).
"""

from __future__ import annotations

import math

import numpy as np

from .backend import USE_NUMBA

STATUS_FINITE = 0
STATUS_MINUS_INF = 1
STATUS_PLUS_INF = 2

# Cells whose monopole nearly cancels are always opened: the monopole of a
# cancelling cell has unbounded relative error.
CANCEL_GUARD = 1e-3


def _kernel_values_np(d: int, r: np.ndarray) -> np.ndarray:
    if d == 1:
        return r.copy()
    if d == 2:
        with np.errstate(divide="ignore"):
            return np.log(r)
    if d == 3:
        with np.errstate(divide="ignore"):
            return -1.0 / r
    with np.errstate(divide="ignore"):
        return -(r ** (2.0 - d))


def _direct_np(locs, ws, targets):
    n, d = locs.shape
    m = targets.shape[0]
    vals = np.zeros(m)
    status = np.zeros(m, dtype=np.int8)
    if n == 0:
        return vals, status
    for t in range(m):
        diff = locs - targets[t]
        r = np.sqrt(np.sum(diff * diff, axis=1))
        contrib = ws * _kernel_values_np(d, r)
        if d >= 2:
            hit = np.nonzero(r == 0.0)[0]
            if hit.size:
                i = hit[0]
                status[t] = STATUS_MINUS_INF if ws[i] > 0 else STATUS_PLUS_INF
                vals[t] = -np.inf if ws[i] > 0 else np.inf
                continue
        vals[t] = np.cumsum(contrib)[-1]
    return vals, status


def _traverse_np(tree, locs, ws, targets, theta):
    n, d = locs.shape
    m = targets.shape[0]
    vals = np.zeros(m)
    status = np.zeros(m, dtype=np.int8)
    for t in range(m):
        y = targets[t]
        frontier = np.array([0], dtype=np.int64)
        far_nodes = []
        leaf_nodes = []
        while frontier.size:
            leaf = tree.node_is_leaf[frontier]
            leaf_nodes.append(frontier[leaf])
            internal = frontier[~leaf]
            if internal.size == 0:
                break
            inside = np.all(
                (tree.node_lo[internal] <= y) & (y <= tree.node_hi[internal]), axis=1
            )
            rc = np.sqrt(np.sum((tree.node_centroid[internal] - y) ** 2, axis=1))
            guarded = np.abs(tree.node_mass[internal]) < CANCEL_GUARD * tree.node_absmass[internal]
            accept = (~inside) & (~guarded) & (tree.node_diag[internal] < theta * rc)
            far_nodes.append(internal[accept])
            opened = internal[~accept]
            kids = tree.node_children[opened].ravel()
            frontier = kids[kids >= 0]

        far = 0.0
        if far_nodes:
            fn = np.concatenate(far_nodes)
            if fn.size:
                rc = np.sqrt(np.sum((tree.node_centroid[fn] - y) ** 2, axis=1))
                far = np.cumsum(tree.node_mass[fn] * _kernel_values_np(d, rc))[-1]

        scratch = np.zeros(n)
        st = STATUS_FINITE
        ln = np.concatenate(leaf_nodes) if leaf_nodes else np.zeros(0, dtype=np.int64)
        for node in ln:
            lo = tree.node_start[node]
            idx = tree.perm[lo : lo + tree.node_count[node]]
            diff = locs[idx] - y
            r = np.sqrt(np.sum(diff * diff, axis=1))
            contrib = ws[idx] * _kernel_values_np(d, r)
            if d >= 2:
                hit = np.nonzero(r == 0.0)[0]
                if hit.size:
                    i = idx[hit[0]]
                    st = STATUS_MINUS_INF if ws[i] > 0 else STATUS_PLUS_INF
                    break
            scratch[idx] = contrib
        if st != STATUS_FINITE:
            status[t] = st
            vals[t] = -np.inf if st == STATUS_MINUS_INF else np.inf
            continue
        near = np.cumsum(scratch)[-1] if n else 0.0
        vals[t] = near + far
    return vals, status


if USE_NUMBA:
    from numba import njit, prange

    @njit(cache=True, inline="always")
    def _kernel_value(d, r):
        if d == 1:
            return r
        if d == 2:
            return math.log(r)
        if d == 3:
            return -1.0 / r
        return -(r ** (2.0 - d))

    @njit(cache=True, parallel=True)
    def _direct_nb(locs, ws, targets, out_vals, out_status):
        n, d = locs.shape
        m = targets.shape[0]
        for t in prange(m):
            acc = 0.0
            st = 0
            for i in range(n):
                r2 = 0.0
                for j in range(d):
                    dx = locs[i, j] - targets[t, j]
                    r2 += dx * dx
                r = math.sqrt(r2)
                if r == 0.0 and d >= 2:
                    st = 1 if ws[i] > 0 else 2
                    break
                acc += ws[i] * _kernel_value(d, r)
            if st == 0:
                out_vals[t] = acc
            elif st == 1:
                out_vals[t] = -np.inf
            else:
                out_vals[t] = np.inf
            out_status[t] = st

    @njit(cache=True, parallel=True)
    def _traverse_nb(
        locs,
        ws,
        perm,
        node_lo,
        node_hi,
        node_centroid,
        node_mass,
        node_absmass,
        node_diag,
        node_start,
        node_count,
        node_children,
        node_is_leaf,
        targets,
        theta,
        out_vals,
        out_status,
    ):
        n, d = locs.shape
        m = targets.shape[0]
        nch = node_children.shape[1]
        for t in prange(m):
            scratch = np.zeros(n)
            stack = np.empty(64 * nch + 64, dtype=np.int64)
            stack[0] = 0
            sp = 1
            far = 0.0
            st = 0
            while sp > 0 and st == 0:
                sp -= 1
                node = stack[sp]
                if node_is_leaf[node]:
                    for k in range(node_start[node], node_start[node] + node_count[node]):
                        i = perm[k]
                        r2 = 0.0
                        for j in range(d):
                            dx = locs[i, j] - targets[t, j]
                            r2 += dx * dx
                        r = math.sqrt(r2)
                        if r == 0.0 and d >= 2:
                            st = 1 if ws[i] > 0 else 2
                            break
                        scratch[i] = ws[i] * _kernel_value(d, r)
                else:
                    inside = True
                    for j in range(d):
                        if targets[t, j] < node_lo[node, j] or targets[t, j] > node_hi[node, j]:
                            inside = False
                            break
                    r2 = 0.0
                    for j in range(d):
                        dx = node_centroid[node, j] - targets[t, j]
                        r2 += dx * dx
                    rc = math.sqrt(r2)
                    guarded = abs(node_mass[node]) < CANCEL_GUARD * node_absmass[node]
                    if (not inside) and (not guarded) and node_diag[node] < theta * rc:
                        far += node_mass[node] * _kernel_value(d, rc)
                    else:
                        for j in range(nch):
                            child = node_children[node, j]
                            if child >= 0:
                                stack[sp] = child
                                sp += 1
            if st == 0:
                near = 0.0
                for i in range(n):
                    near += scratch[i]
                out_vals[t] = near + far
            elif st == 1:
                out_vals[t] = -np.inf
            else:
                out_vals[t] = np.inf
            out_status[t] = st


def direct_sum(locs: np.ndarray, ws: np.ndarray, targets: np.ndarray):
    """Per-target kernel sums in atom-list order; returns (values, status)."""
    locs = np.ascontiguousarray(locs, dtype=float)
    ws = np.ascontiguousarray(ws, dtype=float)
    targets = np.ascontiguousarray(targets, dtype=float)
    if USE_NUMBA:
        m = targets.shape[0]
        vals = np.zeros(m)
        status = np.zeros(m, dtype=np.int8)
        _direct_nb(locs, ws, targets, vals, status)
        return vals, status
    return _direct_np(locs, ws, targets)


def tree_sum(tree, locs: np.ndarray, ws: np.ndarray, targets: np.ndarray, theta: float):
    """Treecode kernel sums; monopole far field, direct near field."""
    locs = np.ascontiguousarray(locs, dtype=float)
    ws = np.ascontiguousarray(ws, dtype=float)
    targets = np.ascontiguousarray(targets, dtype=float)
    if USE_NUMBA:
        m = targets.shape[0]
        vals = np.zeros(m)
        status = np.zeros(m, dtype=np.int8)
        _traverse_nb(
            locs,
            ws,
            tree.perm,
            tree.node_lo,
            tree.node_hi,
            tree.node_centroid,
            tree.node_mass,
            tree.node_absmass,
            tree.node_diag,
            tree.node_start,
            tree.node_count,
            tree.node_children,
            tree.node_is_leaf,
            targets,
            theta,
            vals,
            status,
        )
        return vals, status
    return _traverse_np(tree, locs, ws, targets, theta)
