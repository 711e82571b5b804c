"""Semi-supervised self-training and co-training for dual-view expression data.

The package turns labeled plus unlabeled miRNA/gene expression matrices
into enriched classifiers: single-view self-training promotes a model's
own confident pseudo-labels, and dual-view co-training exchanges
confident predictions between a miRNA-view and a gene-view classifier
through a many-to-many target-pair mapping.
"""

from .classifiers import ClassifierKind, ClassifierSpec, TrainedModel, predict_with_confidence, train
from .co_training import CoTrainConfig, CoTrainOutput, co_train
from .data_model import (
    ConfidentPrediction,
    ExpressionMatrix,
    LabeledDataset,
    UnlabeledDataset,
    ViewKind,
    align_features,
    append_samples,
    feature_overlap,
)
from .metrics import ConfusionMatrix, EvalReport, confusion, evaluate, f1_score, weighted_f1
from .self_training import SelfTrainConfig, TrainingHistory, choose_most_confident, self_train
from .synthetic import SyntheticData, SyntheticSpec, generate
from .view_mapping import TargetPairTable, convert_to_gene, convert_to_mirna

__version__ = "0.1.0"

__all__ = [
    "ClassifierKind",
    "ClassifierSpec",
    "CoTrainConfig",
    "CoTrainOutput",
    "ConfidentPrediction",
    "ConfusionMatrix",
    "EvalReport",
    "ExpressionMatrix",
    "LabeledDataset",
    "SelfTrainConfig",
    "SyntheticData",
    "SyntheticSpec",
    "TargetPairTable",
    "TrainedModel",
    "TrainingHistory",
    "UnlabeledDataset",
    "ViewKind",
    "align_features",
    "append_samples",
    "choose_most_confident",
    "co_train",
    "confusion",
    "convert_to_gene",
    "convert_to_mirna",
    "evaluate",
    "f1_score",
    "feature_overlap",
    "generate",
    "predict_with_confidence",
    "self_train",
    "train",
    "weighted_f1",
]
