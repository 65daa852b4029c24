"""
Tree Module - voxmark
---------------------
Entropy decision tree: greedy binary splits at midpoints between distinct
sorted values, lowest feature then lowest threshold winning ties.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .data import LabeledSet
from .model import TrainedModel

MIN_GAIN = 1e-12


def entropy_bits(counts) -> float:
    """-sum p log2 p over the nonzero class proportions."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        return 0.0
    p = counts[counts > 0] / total
    h = float(-(p * np.log2(p)).sum())
    return 0.0 if h <= 0.0 else h


@dataclass(frozen=True)
class TreeNode:
    """Split when `feature` is set, leaf otherwise. Every node keeps its
    (negative, positive) counts and entropy."""

    counts: Tuple[int, int]
    entropy: float
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    @property
    def proba(self) -> float:
        neg, pos = self.counts
        return pos / (neg + pos) if neg + pos else 0.5

    def leaves(self):
        if self.is_leaf:
            yield self
        else:
            yield from self.left.leaves()
            yield from self.right.leaves()

    def depth(self) -> int:
        return 0 if self.is_leaf else 1 + max(self.left.depth(), self.right.depth())

    def to_dict(self) -> dict:
        doc = {"counts": list(self.counts), "entropy": self.entropy}
        if not self.is_leaf:
            doc.update(feature=self.feature, threshold=self.threshold,
                       left=self.left.to_dict(), right=self.right.to_dict())
        return doc

    @classmethod
    def from_dict(cls, doc) -> "TreeNode":
        if doc.get("feature") is None:
            return cls(tuple(doc["counts"]), float(doc["entropy"]))
        return cls(tuple(doc["counts"]), float(doc["entropy"]), int(doc["feature"]),
                   float(doc["threshold"]), cls.from_dict(doc["left"]), cls.from_dict(doc["right"]))


def _entropy_pairs(pos, total):
    """Vectorized binary entropy of pos out of total."""
    p = pos / total
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(np.where(p > 0, p * np.log2(p), 0.0) + np.where(p < 1, (1 - p) * np.log2(1 - p), 0.0))
    return np.maximum(h, 0.0)


def best_split(x, y, min_leaf) -> Optional[Tuple[int, float, float]]:
    """(feature, threshold, gain) of the best entropy split, or None."""
    n = y.size
    parent = entropy_bits([n - y.sum(), y.sum()])
    n_left = np.arange(1, n, dtype=np.float64)
    best = None
    for j in range(x.shape[1]):
        order = np.argsort(x[:, j], kind="stable")
        values = x[order, j]
        pos_left = np.cumsum(y[order])[:-1].astype(np.float64)
        valid = (values[:-1] != values[1:]) & (n_left >= min_leaf) & (n - n_left >= min_leaf)
        if not valid.any():
            continue
        gain = parent - (n_left / n) * _entropy_pairs(pos_left, n_left) \
            - ((n - n_left) / n) * _entropy_pairs(y.sum() - pos_left, n - n_left)
        gain = np.where(valid, gain, -np.inf)
        top = gain.max()
        i = int(np.flatnonzero(gain >= top - MIN_GAIN)[0])
        if best is None or gain[i] > best[2] + MIN_GAIN:
            best = (j, float((values[i] + values[i + 1]) / 2.0), float(gain[i]))
    if best is None or best[2] <= MIN_GAIN:
        return None
    return best


def grow_tree(x, y, max_depth=None, min_leaf=2, depth=0) -> TreeNode:
    pos = int(y.sum())
    counts = (int(y.size - pos), pos)
    node = TreeNode(counts, entropy_bits(counts))
    if node.entropy == 0.0 or (max_depth is not None and depth >= max_depth):
        return node
    split = best_split(x, y, max(1, min_leaf))
    if split is None:
        return node
    feature, threshold, _ = split
    mask = x[:, feature] <= threshold
    return TreeNode(
        counts, node.entropy, feature, float(threshold),
        grow_tree(x[mask], y[mask], max_depth, min_leaf, depth + 1),
        grow_tree(x[~mask], y[~mask], max_depth, min_leaf, depth + 1),
    )


def train_decision_tree(data: LabeledSet, max_depth: Optional[int] = None,
                        min_leaf: int = 2) -> TrainedModel:
    root = grow_tree(data.vectors, data.labels, max_depth, min_leaf)
    return TrainedModel("tree", {"root": root}, data.columns)


def _route(node: TreeNode, row) -> TreeNode:
    while not node.is_leaf:
        node = node.left if row[node.feature] <= node.threshold else node.right
    return node


def predict_proba(params, vectors) -> np.ndarray:
    root = params["root"]
    return np.array([_route(root, row).proba for row in vectors])
