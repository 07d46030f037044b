"""
Training objectives as plain functions: masked L2 depth loss, Chamfer reconstruction
loss with its analytic gradient, their weighted sum, and the sum over a batch.
All values are in m^2.
"""

from typing import Sequence

import numpy as np

from plinterp.core.exceptions import EmptyBatchError, EmptyCloudError
from plinterp.core.geometry import check_same_shape
from plinterp.core.metrics import chamfer
from plinterp.core.spatial_index import build
from plinterp.schemas.geometry import DepthMap, PointCloud
from plinterp.schemas.losses import LossWeights


def depth_loss(pred: DepthMap, gt: DepthMap) -> float:
    """Sum of squared depth errors over pixels where gt > 0; other pixels contribute nothing."""
    check_same_shape(pred, gt)
    mask = gt.depths > 0
    diff = pred.depths[mask] - gt.depths[mask]
    return float(np.sum(diff * diff))


def reconstruction_loss(pred: PointCloud, gt: PointCloud) -> float:
    """Chamfer distance summed once over both directions (equal to ``chamfer(pred, gt)[0]``)."""
    return chamfer(pred, gt)[0]


def reconstruction_loss_grad(pred: PointCloud, gt: PointCloud) -> np.ndarray:
    """
    Gradient of ``reconstruction_loss`` with respect to every predicted point, with the
    nearest-neighbour correspondences held fixed:
        2 (p - nn_gt(p)) + sum over gt points g whose nearest prediction is p of 2 (p - g).
    Ties resolve to the lowest index, so the result is a deterministic one-sided subgradient.
    Returns:
        (n_pred, 3) array, meters.
    """
    if len(pred) == 0 or len(gt) == 0:
        raise EmptyCloudError("reconstruction loss needs non-empty clouds")
    p = pred.points
    g = gt.points
    nn_gt, _ = build(gt).nearest_many(p)
    nn_pred, _ = build(pred).nearest_many(g)

    grad = 2.0 * (p - g[nn_gt])
    np.add.at(grad, nn_pred, 2.0 * (p[nn_pred] - g))
    return grad


def total_loss(
    pred_d: DepthMap,
    gt_d: DepthMap,
    pred_pc: PointCloud,
    gt_pc: PointCloud,
    w: LossWeights = LossWeights(),
) -> float:
    return w.w1 * depth_loss(pred_d, gt_d) + w.w2 * reconstruction_loss(pred_pc, gt_pc)


def batch_loss(samples: Sequence[tuple[PointCloud, PointCloud]]) -> float:
    """Reconstruction loss summed over (prediction, ground truth) samples."""
    if len(samples) == 0:
        raise EmptyBatchError("batch_loss needs at least one sample")
    return float(sum(reconstruction_loss(pred, gt) for pred, gt in samples))
