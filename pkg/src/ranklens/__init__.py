"""Learned surrogate rankers with itemized goodness-of-fit and local explanations."""

from .agreement import AgreementReport, agreement_histogram, agreement_report, pearson_agreement
from .dataset import (
    Candidate,
    ColumnMapping,
    QueryGroup,
    RankingTable,
    derive_relevance,
    from_letor,
    ingest_csv,
    split_leave_one_year_out,
    to_letor,
)
from .errors import (
    ArtifactFormatError,
    ConfigError,
    DataError,
    ExplainError,
    IngestionError,
    LetorFormatError,
    MissingArtifactError,
    RankLensError,
    SchemaError,
    TrainingError,
)
from .explain import (
    ExplainConfig,
    ExplanationMatrix,
    NormalizedExplanation,
    attribute_order,
    explain_range,
    ice_impact,
    lime_explain,
    normalize_importance,
)
from .metrics import (
    FitReport,
    fit_report,
    kendall_tau,
    mean_average_precision,
    ndcg_at_k,
    precision_at_k,
    rank_deviation,
)
from .rankers import (
    ALGORITHMS,
    BaseRanker,
    CoordinateAscent,
    LambdaMART,
    LearnedRanking,
    ListNet,
    MART,
    RankBoost,
    RankingSVM,
    learned_ranking,
    load_ranker,
    make_ranker,
    rank,
    save_ranker,
    score,
)
from .store import ArtifactKey, ArtifactStore

__version__ = "0.1.0"
