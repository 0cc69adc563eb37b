"""Similarity-pair data cleaning for multi-channel measurement systems.

Pipeline: label per-channel time series, pair channels within each shot,
classify pair similarity with an SMO-trained linear SVM, and map pair
verdicts back to incorrect channels.  The pairing step reshapes the class
structure of the training set; `class_structure` quantifies that exactly.
"""

from .class_structure import (
    ClassStructureReport,
    StructureSpec,
    class_ratios,
    dissimilar_count,
    similar_count,
    total_pairs,
    transformation_curve,
)
from .data_model import ChannelTrace, FaultSpec, Shot, load_shots, save_shots, synthesize
from .evaluation import ConfusionMatrix, EvalReport, confusion, flag_incorrect_channels, g_mean, grouped_assessment
from .pairing import FeatureConfig, PairSample, build_pairs, features
from .svm_smo import SvmModel, TrainConfig, decision_value, predict, train

__all__ = [
    "ChannelTrace",
    "ClassStructureReport",
    "ConfusionMatrix",
    "EvalReport",
    "FaultSpec",
    "FeatureConfig",
    "PairSample",
    "Shot",
    "StructureSpec",
    "SvmModel",
    "TrainConfig",
    "build_pairs",
    "class_ratios",
    "confusion",
    "decision_value",
    "dissimilar_count",
    "features",
    "flag_incorrect_channels",
    "g_mean",
    "grouped_assessment",
    "load_shots",
    "predict",
    "save_shots",
    "similar_count",
    "synthesize",
    "total_pairs",
    "train",
    "transformation_curve",
]
