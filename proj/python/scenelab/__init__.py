"""Semantic scene labelling: graph-based color segmentation plus a fuzzy
bag-of-visual-words signature classified by Gaussian naive Bayes."""

from ._scenelab import (
    CLASS_NAMES,
    GaussianNB,
    Model,
    SceneLabError,
    connected_components,
    detect_and_describe,
    evaluate,
    fuzzy_memberships,
    gaussian_smooth,
    render_overlay,
    segment,
    train,
    train_vocabulary,
    write_fixtures,
)

__all__ = [
    "CLASS_NAMES",
    "GaussianNB",
    "Model",
    "SceneLabError",
    "connected_components",
    "detect_and_describe",
    "evaluate",
    "fuzzy_memberships",
    "gaussian_smooth",
    "render_overlay",
    "segment",
    "train",
    "train_vocabulary",
    "write_fixtures",
]
