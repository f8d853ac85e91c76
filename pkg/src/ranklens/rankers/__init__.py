"""Surrogate ranker estimators and model artifact IO."""

from .base import BaseRanker, LearnedRanking, learned_ranking, rank, score
from .boosting import RankBoost
from .io import ALGORITHMS, load_ranker, make_ranker, ranker_from_text, ranker_to_text, save_ranker
from .linear import CoordinateAscent, ListNet, RankingSVM, listnet_loss_gradient
from .trees import MART, LambdaMART, RegressionTree, TreeEnsembleModel, lambda_gradients

__all__ = [
    "ALGORITHMS",
    "BaseRanker",
    "CoordinateAscent",
    "LambdaMART",
    "LearnedRanking",
    "ListNet",
    "MART",
    "RankBoost",
    "RankingSVM",
    "RegressionTree",
    "TreeEnsembleModel",
    "lambda_gradients",
    "learned_ranking",
    "listnet_loss_gradient",
    "load_ranker",
    "make_ranker",
    "rank",
    "ranker_from_text",
    "ranker_to_text",
    "save_ranker",
    "score",
]
