"""
Exact nearest-neighbour search over point sets.

The tree is a flat, array-based k-d tree: nodes split their points at the median of the
widest bounding-box axis until a node holds at most ``leaf_size`` points. Queries prune
whole nodes by the squared distance from the query to the node's bounding box, so every
result is exact. Squared distances are summed axis by axis in the same order as
``nearest_brute``; ties go to the lowest point index. Both properties make the indexed
and brute-force answers bitwise identical.
"""

from dataclasses import dataclass

import numba
import numpy as np

from plinterp.core.exceptions import EmptyCloudError, LimitExceededError
from plinterp.log import logger
from plinterp.schemas.geometry import PointCloud
from plinterp.settings import settings


@numba.njit(cache=True, nogil=True)
def _build_kernel(points, leaf_size):
    n, dim = points.shape
    max_nodes = 2 * n
    perm = np.arange(n)
    start = np.empty(max_nodes, dtype=np.int64)
    end = np.empty(max_nodes, dtype=np.int64)
    left = np.full(max_nodes, -1, dtype=np.int64)
    right = np.full(max_nodes, -1, dtype=np.int64)
    level = np.zeros(max_nodes, dtype=np.int64)
    lo = np.empty((max_nodes, dim), dtype=np.float64)
    hi = np.empty((max_nodes, dim), dtype=np.float64)
    stack = np.empty(max_nodes, dtype=np.int64)

    start[0] = 0
    end[0] = n
    n_nodes = 1
    stack[0] = 0
    sp = 1
    max_level = 0
    while sp > 0:
        sp -= 1
        node = stack[sp]
        s = start[node]
        e = end[node]
        for a in range(dim):
            lo[node, a] = np.inf
            hi[node, a] = -np.inf
        for t in range(s, e):
            i = perm[t]
            for a in range(dim):
                c = points[i, a]
                if c < lo[node, a]:
                    lo[node, a] = c
                if c > hi[node, a]:
                    hi[node, a] = c
        if level[node] > max_level:
            max_level = level[node]
        if e - s <= leaf_size:
            continue

        axis = 0
        widest = hi[node, 0] - lo[node, 0]
        for a in range(1, dim):
            w = hi[node, a] - lo[node, a]
            if w > widest:
                widest = w
                axis = a

        count = e - s
        seg = perm[s:e].copy()
        keys = np.empty(count, dtype=np.float64)
        for t in range(count):
            keys[t] = points[seg[t], axis]
        order = np.argsort(keys, kind="mergesort")
        for t in range(count):
            perm[s + t] = seg[order[t]]

        mid = s + count // 2
        lc = n_nodes
        rc = n_nodes + 1
        n_nodes += 2
        start[lc] = s
        end[lc] = mid
        start[rc] = mid
        end[rc] = e
        level[lc] = level[node] + 1
        level[rc] = level[node] + 1
        left[node] = lc
        right[node] = rc
        stack[sp] = lc
        stack[sp + 1] = rc
        sp += 2

    return (
        perm,
        start[:n_nodes].copy(),
        end[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        lo[:n_nodes].copy(),
        hi[:n_nodes].copy(),
        max_level,
    )


@numba.njit(cache=True, nogil=True)
def _box_dist2(lo, hi, node, q):
    md = 0.0
    for a in range(q.shape[0]):
        if q[a] < lo[node, a]:
            g = lo[node, a] - q[a]
        elif q[a] > hi[node, a]:
            g = q[a] - hi[node, a]
        else:
            g = 0.0
        md += g * g
    return md


@numba.njit(cache=True, nogil=True)
def _dist2(data, t, q):
    d = 0.0
    for a in range(q.shape[0]):
        diff = data[t, a] - q[a]
        d += diff * diff
    return d


@numba.njit(cache=True, nogil=True)
def _nearest_kernel(data, perm, start, end, left, right, lo, hi, q, stack, stack_d):
    best_d = np.inf
    best_i = -1
    stack[0] = 0
    stack_d[0] = _box_dist2(lo, hi, 0, q)
    sp = 1
    while sp > 0:
        sp -= 1
        node = stack[sp]
        if stack_d[sp] > best_d:
            continue
        if left[node] == -1:
            for t in range(start[node], end[node]):
                d = _dist2(data, t, q)
                i = perm[t]
                if d < best_d or (d == best_d and i < best_i):
                    best_d = d
                    best_i = i
        else:
            lc = left[node]
            rc = right[node]
            dl = _box_dist2(lo, hi, lc, q)
            dr = _box_dist2(lo, hi, rc, q)
            # nearer child on top of the stack
            if dl <= dr:
                stack[sp] = rc
                stack_d[sp] = dr
                stack[sp + 1] = lc
                stack_d[sp + 1] = dl
            else:
                stack[sp] = lc
                stack_d[sp] = dl
                stack[sp + 1] = rc
                stack_d[sp + 1] = dr
            sp += 2
    return best_i, best_d


@numba.njit(cache=True, nogil=True)
def _nearest_many_kernel(data, perm, start, end, left, right, lo, hi, queries):
    m = queries.shape[0]
    idx = np.empty(m, dtype=np.int64)
    dist = np.empty(m, dtype=np.float64)
    stack = np.empty(start.shape[0] + 1, dtype=np.int64)
    stack_d = np.empty(start.shape[0] + 1, dtype=np.float64)
    for j in range(m):
        i, d = _nearest_kernel(data, perm, start, end, left, right, lo, hi, queries[j], stack, stack_d)
        idx[j] = i
        dist[j] = d
    return idx, dist


@numba.njit(cache=True, nogil=True)
def _knn_kernel(data, perm, start, end, left, right, lo, hi, q, k, r2, stack, out_i, out_d):
    count = 0
    bound = r2
    stack[0] = 0
    sp = 1
    while sp > 0:
        sp -= 1
        node = stack[sp]
        if _box_dist2(lo, hi, node, q) > bound:
            continue
        if left[node] == -1:
            for t in range(start[node], end[node]):
                d = _dist2(data, t, q)
                if d > r2:
                    continue
                i = perm[t]
                if count < k:
                    pos = count
                    count += 1
                elif d < out_d[k - 1] or (d == out_d[k - 1] and i < out_i[k - 1]):
                    pos = k - 1
                else:
                    continue
                # insertion keeps (distance, index) ascending
                while pos > 0 and (out_d[pos - 1] > d or (out_d[pos - 1] == d and out_i[pos - 1] > i)):
                    out_d[pos] = out_d[pos - 1]
                    out_i[pos] = out_i[pos - 1]
                    pos -= 1
                out_d[pos] = d
                out_i[pos] = i
                if count == k:
                    bound = out_d[k - 1]
        else:
            stack[sp] = left[node]
            stack[sp + 1] = right[node]
            sp += 2
    return count


@numba.njit(cache=True, nogil=True)
def _knn_many_kernel(data, perm, start, end, left, right, lo, hi, queries, k, r2):
    m = queries.shape[0]
    out_i = np.full((m, k), -1, dtype=np.int64)
    out_d = np.full((m, k), np.inf, dtype=np.float64)
    counts = np.empty(m, dtype=np.int64)
    stack = np.empty(start.shape[0] + 1, dtype=np.int64)
    for j in range(m):
        counts[j] = _knn_kernel(
            data, perm, start, end, left, right, lo, hi, queries[j], k, r2, stack, out_i[j], out_d[j]
        )
    return out_i, out_d, counts


@numba.njit(cache=True, nogil=True)
def _brute_many_kernel(points, queries):
    m = queries.shape[0]
    n = points.shape[0]
    idx = np.empty(m, dtype=np.int64)
    dist = np.empty(m, dtype=np.float64)
    for j in range(m):
        q = queries[j]
        best_d = np.inf
        best_i = -1
        for i in range(n):
            d = _dist2(points, i, q)
            if d < best_d:
                best_d = d
                best_i = i
        idx[j] = best_i
        dist[j] = best_d
    return idx, dist


@numba.njit(cache=True, nogil=True)
def sequential_sum(values):
    """Sum in index order (numpy's sum is pairwise)."""
    total = 0.0
    for i in range(values.shape[0]):
        total += values[i]
    return total


def _readonly(*arrays):
    for arr in arrays:
        arr.setflags(write=False)


@dataclass(frozen=True, eq=False)
class KdTree:
    """
    Immutable k-d tree over an (n, dim) array. Safe for concurrent queries.
    ``data`` holds the points in tree order (``data[t] == points[perm[t]]``) so leaves scan contiguously.
    """

    points: np.ndarray
    data: np.ndarray
    leaf_size: int
    perm: np.ndarray
    start: np.ndarray
    end: np.ndarray
    left: np.ndarray
    right: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    depth: int

    @classmethod
    def from_array(cls, points: np.ndarray, leaf_size: int | None = None) -> "KdTree":
        leaf_size = settings.KDTREE_LEAF_SIZE if leaf_size is None else int(leaf_size)
        if leaf_size < 1:
            raise ValueError("leaf_size must be >= 1")
        points = np.ascontiguousarray(points, dtype=np.float64)
        if points.ndim != 2 or points.shape[0] == 0:
            raise EmptyCloudError("cannot build a k-d tree over an empty point set")
        perm, start, end, left, right, lo, hi, depth = _build_kernel(points, leaf_size)
        if points.flags.writeable:
            points = points.copy()
        data = np.ascontiguousarray(points[perm])
        _readonly(points, data, perm, start, end, left, right, lo, hi)
        logger.debug(f"k-d tree: {points.shape[0]} points, {start.shape[0]} nodes, depth {depth}")
        return cls(points, data, leaf_size, perm, start, end, left, right, lo, hi, int(depth))

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    @property
    def n_nodes(self) -> int:
        return int(self.start.shape[0])

    def _arrays(self):
        return self.data, self.perm, self.start, self.end, self.left, self.right, self.lo, self.hi

    def _queries(self, queries) -> np.ndarray:
        q = np.ascontiguousarray(queries, dtype=np.float64)
        if q.ndim == 1:
            q = q.reshape(1, -1)
        if q.shape[1] != self.dim:
            raise ValueError(f"queries must have {self.dim} columns, got shape {q.shape}")
        return q

    def nearest(self, q) -> tuple[int, float]:
        idx, dist = self.nearest_many(q)
        return int(idx[0]), float(dist[0])

    def nearest_many(self, queries) -> tuple[np.ndarray, np.ndarray]:
        """Nearest point index and squared distance for every query row."""
        return _nearest_many_kernel(*self._arrays(), self._queries(queries))

    def nearest_from(self, source: "KdTree") -> tuple[np.ndarray, np.ndarray]:
        """
        Nearest neighbour of every point of another tree, queried in that tree's order for
        locality and returned in its index order. Same answers as ``nearest_many(source.points)``.
        """
        if source.dim != self.dim:
            raise ValueError(f"source tree has {source.dim} dimensions, this one {self.dim}")
        idx_t, d2_t = _nearest_many_kernel(*self._arrays(), source.data)
        idx = np.empty_like(idx_t)
        d2 = np.empty_like(d2_t)
        idx[source.perm] = idx_t
        d2[source.perm] = d2_t
        return idx, d2

    def knn_many(self, queries, k: int, radius: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Up to ``k`` nearest points with distance <= ``radius`` per query, ordered by
        (squared distance, index). Missing slots hold index -1 and distance inf.
        Returns:
            (indices (m, k), squared distances (m, k), counts (m,))
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        if k > settings.DENSIFY_MAX_K:
            raise LimitExceededError(f"k={k} exceeds the supported maximum of {settings.DENSIFY_MAX_K}")
        return _knn_many_kernel(*self._arrays(), self._queries(queries), int(k), float(radius) ** 2)


def build(pc: PointCloud, leaf_size: int | None = None) -> KdTree:
    """k-d tree over the points of ``pc``; O(n log n) median splits on the widest axis."""
    if len(pc) == 0:
        raise EmptyCloudError("cannot build a k-d tree over an empty cloud")
    return KdTree.from_array(pc.points, leaf_size)


def nearest(tree: KdTree, q) -> tuple[int, float]:
    """Exact nearest stored point to ``q``: (index, squared distance), lowest index on ties."""
    return tree.nearest(q)


def nearest_brute(pc: PointCloud, q) -> tuple[int, float]:
    """Linear scan with the same distance summation and tie rule as ``nearest``."""
    if len(pc) == 0:
        raise EmptyCloudError("nearest_brute needs a non-empty cloud")
    q = np.asarray(q, dtype=np.float64)
    d2 = np.zeros(len(pc))
    for a in range(3):
        diff = pc.points[:, a] - q[a]
        d2 = d2 + diff * diff
    i = int(np.argmin(d2))
    return i, float(d2[i])


def nearest_brute_many(points: np.ndarray, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Compiled linear scan over all points for each query row."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.shape[0] == 0:
        raise EmptyCloudError("nearest_brute_many needs a non-empty point set")
    return _brute_many_kernel(points, np.ascontiguousarray(queries, dtype=np.float64))
