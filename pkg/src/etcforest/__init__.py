"""Effort-To-Compress impurity, Permutation Decision Trees and Forests."""
from .data import Dataset, EvalReport, apply_order, eval_report, load_csv, macro_f1, train_test_split, write_csv
from .errors import DomainError, EtcForestError, ModelFormatError
from .etc_core import count_pairs, etc, etc_value, is_homogeneous, nsrps_step
from .forest import BaggingMode, ForestConfig, ForestModel, fit_forest, permute, predict_majority
from .impurity import ImpurityKind, gain, gini, shannon_entropy, structural_impurity, weighted_child_impurity
from .tree import DecisionTree, TrainConfig, best_split, fit, predict, to_dot

__version__ = "0.1.0"
