"""Shared instances and random generators for the test suite."""

import numpy as np
import pytest

from cqaoa import (GraphPartition, MultiProcessorScheduling, SetPacking, SparseHermitian,
                   QuantumState, VertexCover)

# Canonical instances used throughout.  Task letters A..E map to indices 0..4;
# paper-style 1-indexed vertices/elements map to 0-indexed here.
GP4_PATH = GraphPartition(4, ((0, 1), (1, 2), (2, 3)))
GP6_PATH = GraphPartition(6, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5)))
MPS25 = MultiProcessorScheduling(2, (3, 4, 8, 2, 5))
MPS25_CONFLICT_CD = MultiProcessorScheduling(2, (3, 4, 8, 2, 5), conflicts=((2, 3),))
MPS3_CONFLICT_BC = MultiProcessorScheduling(2, (1, 1, 1), conflicts=((1, 2),))
SETPACK4 = SetPacking(6, (frozenset({0, 2}), frozenset({1}), frozenset({3, 4}),
                          frozenset({1, 4, 5})))
SETPACK6 = SetPacking(8, (frozenset({0, 2}), frozenset({1}), frozenset({3, 4}),
                          frozenset({1, 4, 5}), frozenset({4, 7}), frozenset({5, 6})))
VC_EQ16 = VertexCover(6, ((0, 4), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)))

# Frozen expected values (brute-force verified during development).
MPS25_OPTIMA = (186, 837)          # {A,C} | {B,D,E}, makespan 11
MPS13_PAIR = (372, 651)            # {A,B,D} | {C,E}, makespan 13
MPS3_FEASIBLE = {21, 28, 35, 42}   # B and C on different processors
SETPACK4_OMEGA = list(range(10))
SETPACK6_OPTIMA = (39, 51)
VC_EQ16_OPTIMUM = 24               # vertices 3 and 4 (paper's 4 and 5)


def random_sparse_hermitian(rng, n, target_entries=None, with_diagonal=True) -> SparseHermitian:
    dim = 1 << n
    if target_entries is None:
        target_entries = 3 * dim
    pairs = {}
    for _ in range(target_entries):
        r, c = map(int, rng.integers(0, dim, 2))
        if r == c and not with_diagonal:
            continue
        key = (min(r, c), max(r, c))
        pairs[key] = float(rng.uniform(-1.0, 1.0))
    rows, cols, vals = [], [], []
    for (r, c), v in sorted(pairs.items()):
        if r == c:
            rows.append(r); cols.append(c); vals.append(v)
        else:
            rows += [r, c]; cols += [c, r]; vals += [v, v]
    return SparseHermitian(n, np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                           np.array(vals))


def random_state(rng, n) -> QuantumState:
    amp = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return QuantumState(n, amp / np.linalg.norm(amp))


def random_unique_pair_gp4(rng) -> GraphPartition:
    """Random 4-vertex graph partition instance with a unique optimal complementary pair."""
    from cqaoa import brute_force_optima
    possible = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    while True:
        edges = tuple(e for e in possible if rng.random() < 0.5)
        try:
            gp = GraphPartition(4, edges)
        except ValueError:
            continue
        if len(brute_force_optima(gp)) == 2:
            return gp


def random_qualifying_inequality(rng):
    """Random inequality constraint satisfying the distance-1 connectivity hypothesis."""
    from cqaoa import LinearConstraint
    n = int(rng.integers(4, 11))
    kappa = int(rng.integers(1, 4))
    coeffs = rng.integers(0, 4, size=(n, kappa)).astype(float)
    anchor = int(rng.integers(0, 1 << n))
    bits = np.array([(anchor >> k) & 1 for k in range(n)], dtype=float)
    f_anchor = bits @ coeffs
    maxc = coeffs.max(axis=0)
    lower = f_anchor - maxc - rng.integers(0, 3, size=kappa)
    upper = f_anchor + maxc + rng.integers(0, 3, size=kappa)
    return LinearConstraint("inequality", coeffs, lower, upper)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
