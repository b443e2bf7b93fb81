import numpy as np
import pytest

from potentia import fastsum
from potentia.charges import discrete_charge, point_charge
from potentia.potentials import (
    potential_arrays,
    potential_batch,
    potential_treecode,
    potential_treecode_arrays,
)
from potentia.treecode import build_tree


def rng(seed):
    return np.random.Generator(np.random.Philox(seed))


def make_instance(seed, n=2000, m=200, signed=False):
    r = rng(seed)
    locs = r.uniform(0.0, 1.0, size=(n, 2))
    ws = r.normal(size=n) if signed else np.ones(n)
    c = discrete_charge(2, locs, ws)
    ang = r.uniform(0.0, 2.0 * np.pi, m)
    rad = r.uniform(3.0, 5.0, m)
    targets = np.stack([0.5 + rad * np.cos(ang), 0.5 + rad * np.sin(ang)], axis=1)
    return c, targets


def test_theta_domain_error():
    c, targets = make_instance(1, n=50, m=5)
    for theta in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            potential_treecode(c, targets, theta)


def test_theta_to_zero_bitwise_equals_direct():
    c, targets = make_instance(2, n=800, m=80)
    direct, ds = potential_arrays(c, targets)
    tree, ts = potential_treecode_arrays(c, targets, 1e-15)
    assert np.array_equal(direct, tree)
    assert np.array_equal(ds, ts)


def test_theta_to_zero_bitwise_signed_charge():
    c, targets = make_instance(3, n=500, m=50, signed=True)
    direct, _ = potential_arrays(c, targets)
    tree, _ = potential_treecode_arrays(c, targets, 1e-15)
    assert np.array_equal(direct, tree)


def test_numpy_path_bitwise_and_accuracy():
    # exercise the pure-numpy implementations directly, whatever the backend
    c, targets = make_instance(4, n=600, m=60)
    direct, ds = fastsum._direct_np(c.locations, c.weights, targets)
    tree = build_tree(c.locations, c.weights)
    opened, ts = fastsum._traverse_np(tree, c.locations, c.weights, targets, 1e-15)
    assert np.array_equal(direct, opened)
    approx, _ = fastsum._traverse_np(tree, c.locations, c.weights, targets, 0.5)
    assert np.max(np.abs(approx - direct) / np.abs(direct)) < 1e-3


def test_single_atom_any_theta():
    c = point_charge(2, [0.25, 0.75], 2.0)
    targets = np.array([[3.0, 1.0], [-2.0, 0.5]])
    direct, _ = potential_arrays(c, targets)
    for theta in (0.1, 0.5, 0.9):
        tree, _ = potential_treecode_arrays(c, targets, theta)
        assert np.array_equal(direct, tree)


def test_accuracy_theta_half():
    c, targets = make_instance(5, n=5000, m=300)
    direct, _ = potential_arrays(c, targets)
    tree, _ = potential_treecode_arrays(c, targets, 0.5)
    rel = np.max(np.abs(tree - direct) / np.abs(direct))
    assert rel <= 1e-3


def test_error_monotone_in_theta_median():
    errs = {0.3: [], 0.7: []}
    for seed in range(5):
        c, targets = make_instance(20 + seed, n=3000, m=150)
        direct, _ = potential_arrays(c, targets)
        for theta in (0.3, 0.7):
            tree, _ = potential_treecode_arrays(c, targets, theta)
            errs[theta].append(np.max(np.abs(tree - direct) / np.abs(direct)))
    assert np.median(errs[0.3]) <= np.median(errs[0.7])


def test_cancelling_cells_stay_accurate():
    # clusters of near-cancelling pairs: the mass guard must open them
    r = rng(6)
    base = r.uniform(0.0, 1.0, size=(400, 2))
    eps = r.uniform(-1e-4, 1e-4, size=(400, 2))
    locs = np.concatenate([base, base + eps], axis=0)
    ws = np.concatenate([np.ones(400), -np.ones(400) * (1.0 - 1e-6)])
    c = discrete_charge(2, locs, ws)
    targets = np.array([[4.0, 0.5], [0.5, -3.5], [-2.5, 2.5]])
    direct, _ = potential_arrays(c, targets)
    tree, _ = potential_treecode_arrays(c, targets, 0.5)
    scale = float(np.sum(np.abs(c.weights)))
    assert np.max(np.abs(tree - direct)) <= 1e-3 * scale


def test_target_on_atom_status():
    r = rng(7)
    locs = r.uniform(0.0, 1.0, size=(300, 2))
    c = discrete_charge(2, locs, np.ones(300))
    targets = np.array([locs[17], [5.0, 5.0]])
    tree = potential_treecode(c, targets, 0.5)
    assert tree[0].status == "minus-infinity"
    assert tree[1].is_finite
    direct = potential_batch(c, targets)
    assert direct[0].status == "minus-infinity"
    assert tree[1].value == pytest.approx(direct[1].value, rel=1e-3)


def test_treecode_d1_and_d3():
    r = rng(8)
    for d in (1, 3):
        locs = r.uniform(-1.0, 1.0, size=(500, d))
        c = discrete_charge(d, locs, r.uniform(0.5, 1.5, size=500))
        targets = r.uniform(3.0, 5.0, size=(40, d))
        direct, _ = potential_arrays(c, targets)
        tree, _ = potential_treecode_arrays(c, targets, 0.4)
        assert np.max(np.abs(tree - direct) / np.abs(direct)) < 1e-3
        opened, _ = potential_treecode_arrays(c, targets, 1e-15)
        assert np.array_equal(direct, opened)
