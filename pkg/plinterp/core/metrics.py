"""
Evaluation metrics.

Depth metrics follow the KITTI depth-completion protocol: errors over pixels with gt > 0,
RMSE/MAE in millimeters, iRMSE/iMAE on inverse depth in 1/km. Point-cloud metrics are
the Chamfer distance (squared distances, headline value per point) and the exact
Earth Mover's Distance (unsquared distances over an optimal bijection).
"""

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from plinterp.core.exceptions import EmptyCloudError, LimitExceededError, NoValidPixelsError, SizeMismatchError
from plinterp.core.geometry import check_same_shape
from plinterp.core.spatial_index import KdTree, build, nearest_brute_many, sequential_sum
from plinterp.log import logger
from plinterp.schemas.geometry import DepthMap, PointCloud
from plinterp.schemas.metrics import MetricsReport
from plinterp.settings import settings

M_TO_MM = 1000.0
# 1 / (d meters) expressed per kilometer
INV_M_TO_INV_KM = 1000.0


def depth_metrics(pred: DepthMap, gt: DepthMap) -> MetricsReport:
    """
    RMSE/MAE over pixels with gt > 0 (a missing prediction counts as 0 mm), and
    iRMSE/iMAE over the subset where the prediction is also valid.
    """
    check_same_shape(pred, gt)
    mask = gt.depths > 0
    n_valid = int(np.count_nonzero(mask))
    if n_valid == 0:
        raise NoValidPixelsError("ground truth has no valid pixel")

    p = pred.depths[mask]
    g = gt.depths[mask]
    err_mm = (p - g) * M_TO_MM
    rmse = float(np.sqrt(np.mean(err_mm * err_mm)))
    mae = float(np.mean(np.abs(err_mm)))

    both = p > 0
    n_inverse = int(np.count_nonzero(both))
    irmse = imae = None
    if n_inverse:
        inv_err = INV_M_TO_INV_KM / p[both] - INV_M_TO_INV_KM / g[both]
        irmse = float(np.sqrt(np.mean(inv_err * inv_err)))
        imae = float(np.mean(np.abs(inv_err)))
    depth_loss_mean = float(np.mean((p - g) ** 2))

    return MetricsReport(
        rmse=rmse,
        mae=mae,
        irmse=irmse,
        imae=imae,
        n_valid=n_valid,
        n_inverse_excluded=n_valid - n_inverse,
        depth_loss_mean=depth_loss_mean,
    )


def _require_points(*clouds: PointCloud) -> None:
    for pc in clouds:
        if len(pc) == 0:
            raise EmptyCloudError("Chamfer distance needs non-empty clouds")


def nearest_assignments(a: PointCloud, b: PointCloud, tree_b: KdTree | None = None) -> tuple[np.ndarray, np.ndarray]:
    """For each point of ``a``: index of and squared distance to its nearest point in ``b``."""
    _require_points(a, b)
    if tree_b is None:
        tree_b = build(b)
    return tree_b.nearest_many(a.points)


def chamfer_directional(a: PointCloud, b: PointCloud, tree_b: KdTree | None = None) -> float:
    """Sum over points of ``a`` of the squared distance to the nearest point of ``b``, in index order of ``a``."""
    _, d2 = nearest_assignments(a, b, tree_b)
    return float(sequential_sum(d2))


def chamfer_directional_brute(a: PointCloud, b: PointCloud) -> float:
    """Same as ``chamfer_directional`` through a linear scan; the reference for the indexed version."""
    _require_points(a, b)
    _, d2 = nearest_brute_many(b.points, a.points)
    return float(sequential_sum(d2))


def chamfer(a: PointCloud, b: PointCloud) -> tuple[float, float]:
    """
    Symmetric Chamfer distance.
    Returns:
        (cd_sum m^2, cd_mean m^2 per point); cd_mean averages each direction over its own cloud.
    """
    _require_points(a, b)
    tree_a, tree_b = build(a), build(b)
    ab = float(sequential_sum(tree_b.nearest_from(tree_a)[1]))
    ba = float(sequential_sum(tree_a.nearest_from(tree_b)[1]))
    cd_sum = ab + ba
    cd_mean = ab / len(a) + ba / len(b)
    logger.debug(f"chamfer |a|={len(a)} |b|={len(b)} sum={cd_sum:.6g} mean={cd_mean:.6g}")
    return cd_sum, cd_mean


def cloud_metrics(pred: PointCloud, gt: PointCloud) -> MetricsReport:
    cd_sum, cd_mean = chamfer(pred, gt)
    return MetricsReport(cd_sum=cd_sum, cd_mean=cd_mean, n_pred=len(pred), n_gt=len(gt))


def emd_assignment(a: PointCloud, b: PointCloud) -> tuple[float, np.ndarray]:
    """
    Exact EMD and its optimal bijection: ``phi[i]`` is the point of ``b`` matched to point ``i`` of ``a``.
    Cost is the sum of unsquared Euclidean distances.
    """
    if len(a) != len(b):
        raise SizeMismatchError(f"EMD needs equal-size clouds, got {len(a)} and {len(b)}")
    if len(a) > settings.EMD_MAX_POINTS:
        raise LimitExceededError(
            f"exact EMD is limited to {settings.EMD_MAX_POINTS} points, got {len(a)}; subsample the clouds first"
        )
    if len(a) == 0:
        return 0.0, np.zeros(0, dtype=np.int64)
    cost = cdist(a.points, b.points)
    rows, cols = linear_sum_assignment(cost)
    phi = np.empty(len(a), dtype=np.int64)
    phi[rows] = cols
    return float(sequential_sum(cost[rows, cols])), phi


def emd_exact(a: PointCloud, b: PointCloud) -> float:
    """Minimum over bijections of the summed point-to-point distances (meters)."""
    return emd_assignment(a, b)[0]
