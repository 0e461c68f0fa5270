"""Lie-group path development layer with a full classification pipeline.

The core maps multichannel series to matrix-group elements through
trainable algebra generators (forward and backward passes included),
and the surrounding pipeline covers wavelet denoising, minority
oversampling, NPV-constrained threshold selection, coordinate-descent
hyperparameter search, and a command-line interface.
"""

from .algebra import (
    ALGEBRA_KINDS,
    bracket,
    group_check,
    in_algebra,
    project,
    symplectic_form,
)
from .config import RunConfig, load_config, parse_config
from .dataset import Dataset, Sample, load_dataset, write_dataset
from .development import (
    DevOutput,
    DevParams,
    apply_update,
    backward,
    backward_stack,
    forward,
    forward_stack,
    init_params,
    linear_embed,
)
from .estimators import PathDevelopmentClassifier, SmoteOversampler, WaveletDenoiser
from .linalg import (
    AccuracyWarning,
    DexpConfig,
    dexp,
    grad_through_exp,
    hs_inner,
    mat_mul,
    matrix_exp,
)
from .metrics import (
    ConfusionCounts,
    EvalReport,
    classify,
    confusion,
    metrics,
    select_threshold,
)
from .model import (
    Adam,
    DenseHead,
    TrainConfig,
    TrainResult,
    TrainingDivergedError,
    head_forward,
    init_head,
    loss,
    predict_proba_samples,
    train,
)
from .sampling import augment_training_split, smote, split, stratified_split
from .sweep import SweepSpec, coordinate_descent, parse_sweep
from .synthetic import make_arc_dataset
from .wavelet import WaveletSpec, dwt_denoise

__version__ = "0.1.0"

__all__ = [
    "ALGEBRA_KINDS",
    "AccuracyWarning",
    "Adam",
    "ConfusionCounts",
    "Dataset",
    "DenseHead",
    "DevOutput",
    "DevParams",
    "DexpConfig",
    "EvalReport",
    "PathDevelopmentClassifier",
    "RunConfig",
    "Sample",
    "SmoteOversampler",
    "SweepSpec",
    "TrainConfig",
    "TrainResult",
    "TrainingDivergedError",
    "WaveletDenoiser",
    "WaveletSpec",
    "apply_update",
    "augment_training_split",
    "backward",
    "backward_stack",
    "bracket",
    "classify",
    "confusion",
    "coordinate_descent",
    "dexp",
    "dwt_denoise",
    "forward",
    "forward_stack",
    "grad_through_exp",
    "group_check",
    "head_forward",
    "hs_inner",
    "in_algebra",
    "init_head",
    "init_params",
    "linear_embed",
    "load_config",
    "load_dataset",
    "loss",
    "make_arc_dataset",
    "mat_mul",
    "matrix_exp",
    "metrics",
    "parse_config",
    "parse_sweep",
    "predict_proba_samples",
    "project",
    "select_threshold",
    "smote",
    "split",
    "stratified_split",
    "symplectic_form",
    "train",
    "write_dataset",
]
