"""Shared fixtures: synthetic tables, linear rankers, the service store."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from ranklens.dataset import Candidate, QueryGroup, RankingTable, derive_relevance_table
from ranklens.rankers import RankingSVM, rank
from ranklens.synth import linear_fixture_table


def make_table(score_weights, *, n=30, years=(2011, 2012, 2013), seed=11,
               dataset_id="toy", means=None, scales=None):
    """Small noiseless table ranked by a known linear score."""
    w = np.asarray(score_weights, dtype=np.float64)
    p = w.size
    rng = np.random.default_rng(seed)
    means = np.zeros(p) if means is None else np.asarray(means, dtype=np.float64)
    scales = np.ones(p) if scales is None else np.asarray(scales, dtype=np.float64)
    ids = [f"c{i:03d}" for i in range(n)]
    groups = []
    for year in years:
        X = means + rng.standard_normal((n, p)) * scales
        ranks = rank(X @ w, ids)
        groups.append(
            QueryGroup(
                query_id=year,
                candidates=tuple(
                    Candidate(ids[i], tuple(float(v) for v in X[i]), int(ranks[i]))
                    for i in range(n)
                ),
            )
        )
    names = tuple(f"a{j}" for j in range(p))
    return derive_relevance_table(RankingTable(dataset_id, names, tuple(groups)))


def make_linear_ranker(weights, *, ranker_id="linear"):
    """A fitted ranker scoring exactly X @ weights (identity standardization)."""
    w = np.asarray(weights, dtype=np.float64)
    ranker = RankingSVM(ranker_id=ranker_id)
    ranker.n_features_in_ = w.size
    ranker.ranker_id_ = ranker_id
    ranker.feature_mean_ = np.zeros(w.size)
    ranker.feature_scale_ = np.ones(w.size)
    ranker.weights_ = w
    return ranker


@pytest.fixture(scope="session")
def fixture_table():
    return linear_fixture_table()


@pytest.fixture(scope="session")
def toy_table():
    return make_table([1.5, -0.7, 0.2])


@pytest.fixture(scope="session")
def service_store(tmp_path_factory):
    from golden_env import build_service_store

    root = tmp_path_factory.mktemp("service")
    config = build_service_store(root)
    return Path(config.store_path)


@pytest.fixture(scope="session")
def client(service_store):
    from fastapi.testclient import TestClient

    from ranklens.service import create_app

    app = create_app(store_path=str(service_store))
    with TestClient(app) as c:
        yield c
