"""
Manifold Controller - Weighted PCA and Isomap

Two ways of turning raw states into coordinates:

- weighted_pca: linear modes from an economy SVD of the mean-subtracted,
  weight-scaled data. They are the inputs of the linear baselines.
- isomap: nonlinear eigen-coordinates. Steps:
    1. symmetrized k-nearest-neighbor graph with Euclidean edge lengths
    2. Dijkstra from every node (graph geodesic distances)
    3. classical MDS: double-center -D^2/2, keep the leading eigenpairs
    4. coordinates phi_k = v_k sqrt(lambda_k), sign-normalized
  The eigen-coordinates serve both as targets and as candidate sensors.
"""

import logging
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import eigh
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.sparse.linalg import eigsh
from sklearn.neighbors import kneighbors_graph
from sklearn.preprocessing import KernelCenterer

from secsel.exceptions import GraphDisconnectedError, InvalidArgumentError
from secsel.models.dataset import DataSet, SensorGroup
from secsel.models.manifold import IsomapEmbedding, PCAModel
from secsel.utils.parallel import chunk_bounds, map_chunks

logger = logging.getLogger(__name__)

# Eigenvalues at or below this fraction of the largest one count as zero
EIGEN_TOLERANCE = 1e-10

# Above this many states the MDS eigenpairs come from ARPACK instead of a dense solve
DENSE_EIGEN_LIMIT = 4000

# Dijkstra sources handled per worker task
DIJKSTRA_CHUNK = 64


def weighted_pca(data: np.ndarray, weights: Optional[np.ndarray] = None, r: Optional[int] = None) -> PCAModel:
    """
    Principal components under the inner product <a, b> = a^T W b.

    Args:
        data: N x n matrix, one state per row
        weights: positive length-n vector (the diagonal of W); ones if None
        r: number of modes to keep; min(N, n) if None

    Returns:
        PCAModel whose modes satisfy U^T W U = I
    """
    data = np.asarray(data, dtype=float)
    n_samples, n_dim = data.shape
    weights = np.ones(n_dim) if weights is None else np.asarray(weights, dtype=float)
    if weights.shape != (n_dim,):
        raise InvalidArgumentError(f"weights must have length {n_dim}")
    if np.any(weights <= 0):
        raise InvalidArgumentError("weights must be strictly positive")
    max_rank = min(n_samples, n_dim)
    r = max_rank if r is None else int(r)
    if not 1 <= r <= max_rank:
        raise InvalidArgumentError(f"r must be in 1..{max_rank}, got {r}")

    mean = data.mean(axis=0)
    root_w = np.sqrt(weights)
    scaled = (data - mean) * root_w
    # rows are samples here, so the spatial singular vectors are the rows of vt
    _, singular_values, vt = np.linalg.svd(scaled, full_matrices=False)
    modes = vt[:r].T / root_w[:, None]

    return PCAModel(
        mean=mean,
        modes=modes,
        singular_values=singular_values[:r].copy(),
        weights=weights,
        n_samples=n_samples,
    )


def variance_fraction_bound(model: PCAModel, d: int) -> float:
    """
    Largest R^2 any linear reconstruction from d measurements can reach.

    Returns (s_1^2 + ... + s_d^2) / (s_1^2 + ... + s_r^2).
    """
    if not 1 <= d <= model.rank:
        raise InvalidArgumentError(f"d must be in 1..{model.rank}, got {d}")
    energy = model.singular_values**2
    total = energy.sum()
    if total == 0:
        return 1.0
    return float(energy[:d].sum() / total)


def geodesic_distances(points: np.ndarray, k_neighbors: int) -> np.ndarray:
    """
    All-pairs shortest path lengths on the symmetrized k-NN graph.

    An edge is kept when either endpoint lists the other among its k nearest
    neighbors. Sources are split across the worker pool; each row is exact,
    so the stacked matrix is the same for any worker count.
    """
    points = np.asarray(points, dtype=float)
    n_states = points.shape[0]
    if not 1 <= k_neighbors < n_states:
        raise InvalidArgumentError(f"k_neighbors must be in 1..{n_states - 1}, got {k_neighbors}")

    graph = kneighbors_graph(points, n_neighbors=k_neighbors, mode="distance", include_self=False)
    graph = graph.maximum(graph.T).tocsr()
    components, _ = connected_components(graph, directed=False)
    if components > 1:
        raise GraphDisconnectedError(components, k_neighbors)
    logger.info("k-NN graph: %d nodes, %d edges", n_states, graph.nnz // 2)

    def run_sources(start: int, stop: int) -> np.ndarray:
        return dijkstra(graph, directed=False, indices=np.arange(start, stop))

    rows = map_chunks(run_sources, chunk_bounds(n_states, DIJKSTRA_CHUNK))
    return np.vstack(rows)


def double_center(squared_distances: np.ndarray) -> np.ndarray:
    """Classical MDS Gram matrix B = -J D^2 J / 2 (rows and columns sum to zero)."""
    gram = KernelCenterer().fit_transform(-0.5 * np.asarray(squared_distances, dtype=float))
    return 0.5 * (gram + gram.T)


def _leading_eigenpairs(gram: np.ndarray, rank: int, seed: int):
    n_states = gram.shape[0]
    if n_states > DENSE_EIGEN_LIMIT and rank < n_states:
        v0 = np.random.default_rng(seed).uniform(-1.0, 1.0, n_states)
        values, vectors = eigsh(gram, k=rank, which="LA", v0=v0)
    else:
        values, vectors = eigh(gram, subset_by_index=[n_states - rank, n_states - 1])
    order = np.argsort(values)[::-1]
    return values[order], vectors[:, order]


def sign_normalize(columns: np.ndarray) -> np.ndarray:
    """Flip each column so that its entry of largest magnitude is positive."""
    columns = np.array(columns, dtype=float, copy=True)
    if columns.size == 0:
        return columns
    largest = np.argmax(np.abs(columns), axis=0)
    signs = np.sign(columns[largest, np.arange(columns.shape[1])])
    signs[signs == 0] = 1.0
    return columns * signs


def isomap(points: np.ndarray, k_neighbors: int = 10, r: int = 2, seed: int = 0) -> IsomapEmbedding:
    """
    Isomap eigen-coordinates of a point cloud.

    Args:
        points: N x n states
        k_neighbors: neighbors per node in the graph
        r: number of coordinates requested
        seed: start vector seed for the iterative eigensolver (large N only)

    Returns:
        IsomapEmbedding; if fewer than r eigenvalues are positive the result
        keeps only those and sets ``truncated``

    Raises:
        GraphDisconnectedError: when the neighbor graph is not connected

    Example:
        emb = isomap(torus.points, k_neighbors=10, r=100)
        emb.coordinates[:, 0]   # phi_1
    """
    if r < 1:
        raise InvalidArgumentError(f"r must be >= 1, got {r}")
    distances = geodesic_distances(points, k_neighbors)
    gram = double_center(distances**2)
    n_states = gram.shape[0]

    values, vectors = _leading_eigenpairs(gram, min(r, n_states), seed)
    positive = int(np.sum(values > EIGEN_TOLERANCE * max(values[0], 0.0))) if values[0] > 0 else 0
    truncated = positive < r
    if truncated:
        logger.warning("isomap: only %d positive eigenvalues, %d requested; truncating", positive, r)

    values = values[:positive]
    coordinates = sign_normalize(vectors[:, :positive] * np.sqrt(values))
    logger.info("isomap: kept %d coordinates, leading eigenvalue %.4g", positive, values[0] if positive else 0.0)
    return IsomapEmbedding(
        coordinates=coordinates,
        eigenvalues=values.copy(),
        k_neighbors=k_neighbors,
        requested_rank=r,
        truncated=truncated,
    )


def assign_targets_from_embedding(
    ds: DataSet,
    emb: IsomapEmbedding,
    columns: Sequence[int],
    register_sensors: bool = False,
) -> DataSet:
    """
    Use embedding columns as the targets, and optionally as the sensors too.

    With register_sensors, sensor k is the scalar column columns[k]; its label
    is the 1-based coordinate name (phi1, phi2, ...).
    """
    columns = [int(c) for c in columns]
    if not columns:
        raise InvalidArgumentError("columns must not be empty")
    for c in columns:
        if not 0 <= c < emb.rank:
            raise InvalidArgumentError(f"column {c} outside 0..{emb.rank - 1}")
    if emb.coordinates.shape[0] != ds.n_states:
        raise InvalidArgumentError("embedding and dataset have different numbers of states")

    out = ds.with_targets(emb.coordinates[:, columns].copy())
    if register_sensors:
        out = out.with_sensors(
            [
                SensorGroup(id=k, values=emb.coordinates[:, [c]].copy(), label=f"phi{c + 1}")
                for k, c in enumerate(columns)
            ]
        )
    return out
