"""Service contract: golden bodies, error shapes, caching and range anchoring."""

from __future__ import annotations

import hashlib
import os
from pathlib import Path

import pytest

from golden_env import GOLDEN_DIR, GOLDEN_REQUESTS

WRITE_GOLDEN = os.environ.get("RANKLENS_WRITE_GOLDEN") == "1"


def store_digest(root: Path) -> str:
    h = hashlib.sha256()
    for path in sorted(root.rglob("*")):
        if path.is_file():
            h.update(path.relative_to(root).as_posix().encode())
            h.update(path.read_bytes())
    return h.hexdigest()


class TestGoldenBodies:
    @pytest.mark.parametrize("name,path", GOLDEN_REQUESTS, ids=[n for n, _ in GOLDEN_REQUESTS])
    def test_endpoint_matches_golden(self, client, name, path):
        response = client.get(path)
        assert response.status_code == 200, response.text
        golden_path = GOLDEN_DIR / f"{name}.json"
        if WRITE_GOLDEN:
            GOLDEN_DIR.mkdir(exist_ok=True)
            golden_path.write_bytes(response.content)
        assert golden_path.is_file(), f"golden body missing: {golden_path}"
        assert response.content == golden_path.read_bytes()


class TestContract:
    def test_unknown_dataset_404(self, client):
        response = client.get("/datasets/nope/years")
        assert response.status_code == 404
        body = response.json()
        assert body["code"] == "not_found"
        assert "available" in (body["detail"] or {})

    def test_unknown_ranker_lists_available(self, client):
        response = client.get("/deviation?dataset=synthlin&year=2011&rankers=Mystery")
        assert response.status_code == 404
        body = response.json()
        assert body["detail"]["available_rankers"] == ["MART", "RankingSVM"]

    def test_empty_ranker_list_rejected(self, client):
        response = client.get("/correlation?dataset=synthlin&year=2011&rankers="
                              "&attribute=quality")
        assert response.status_code == 400
        assert response.json()["code"] == "bad_request"

    def test_compare_missing_counterpart(self, client):
        response = client.get("/compare?mode=range&dataset=synthlin&year=2011"
                              "&ranker=MART&lo=1&hi=10")
        assert response.status_code == 400
        assert "lo2" in response.json()["message"]

    def test_compare_unknown_mode(self, client):
        response = client.get("/compare?mode=blend&dataset=synthlin&year=2011"
                              "&rankers=MART")
        assert response.status_code == 400

    def test_rows_carry_linking_fields(self, client):
        body = client.get(
            "/deviation?dataset=synthlin&year=2011&rankers=MART&lo=1&hi=10"
        ).json()
        for row in body["rows"]:
            assert {"candidate_id", "truth_rank", "color_index", "deviations"} <= set(row)
        assert body["rows"][0]["color_index"] == 0

    def test_explanation_rows_carry_deviation_and_dot_size(self, client):
        body = client.get(
            "/explanations?dataset=synthlin&year=2011&rankers=MART&method=ICE&lo=1&hi=10"
        ).json()
        payload = body["rankers"][0]
        assert len(payload["attribute_order"]) == 5
        for row in payload["rows"]:
            assert row["dot_size"] == pytest.approx(1.0 / (1.0 + row["deviation"]))
            assert set(row["values"]) == set(payload["attribute_order"])

    def test_top8_truncation_not_applied_server_side(self, client):
        body = client.get(
            "/explanations?dataset=synthlin&year=2011&rankers=MART&method=LIME"
        ).json()
        assert len(body["rankers"][0]["attribute_order"]) == 5  # all attributes, no cut

    def test_attribute_filter_returns_subset(self, client):
        base = "/deviation?dataset=synthlin&year=2011&rankers=MART&lo=5&hi=20"
        unfiltered = {r["candidate_id"] for r in client.get(base).json()["rows"]}
        filtered = {
            r["candidate_id"]
            for r in client.get(base + "&filter=capacity:45:60").json()["rows"]
        }
        assert filtered < unfiltered

    def test_unknown_filter_attribute_rejected(self, client):
        response = client.get(
            "/deviation?dataset=synthlin&year=2011&rankers=MART&filter=bogus:0:1"
        )
        assert response.status_code == 400

    def test_range_is_ground_truth_anchored(self, client):
        sets = []
        for rankers in ("RankingSVM", "MART", "RankingSVM,MART"):
            body = client.get(
                f"/deviation?dataset=synthlin&year=2011&rankers={rankers}&lo=5&hi=20"
            ).json()
            sets.append({row["candidate_id"] for row in body["rows"]})
        assert sets[0] == sets[1] == sets[2]

    def test_correlation_point_count(self, client):
        body = client.get(
            "/correlation?dataset=synthlin&year=2011&rankers=MART&method=LIME"
            "&attribute=load&lo=1&hi=12"
        ).json()
        assert len(body["points"]) == 12
        both = client.get(
            "/correlation?dataset=synthlin&year=2011&rankers=MART,RankingSVM"
            "&method=LIME&attribute=load&lo=1&hi=12"
        ).json()
        assert len(both["points"]) == 24
        # one shared attribute value yields one point per ranker at the same y
        by_candidate = {}
        for point in both["points"]:
            by_candidate.setdefault(point["candidate_id"], []).append(point)
        for points in by_candidate.values():
            assert len(points) == 2
            assert points[0]["attribute_value"] == points[1]["attribute_value"]
            assert {p["ranker_id"] for p in points} == {"MART", "RankingSVM"}

    def test_agreement_histogram_sums_to_defined(self, client):
        body = client.get("/agreement?dataset=synthlin&ranker=MART&year=2011").json()
        assert sum(body["histogram"]) == body["n_defined"]

    def test_repeated_requests_byte_identical(self, client):
        path = "/explanations?dataset=synthlin&year=2011&rankers=MART&method=LIME&lo=1&hi=10"
        assert client.get(path).content == client.get(path).content

    def test_service_is_read_only(self, client, service_store):
        before = store_digest(service_store)
        for _, path in GOLDEN_REQUESTS:
            client.get(path)
        assert store_digest(service_store) == before

    def test_range_mode_group_sizes(self, client):
        body = client.get(
            "/compare?mode=range&dataset=synthlin&year=2011&ranker=RankingSVM"
            "&method=LIME&lo=1&hi=15&lo2=16&hi2=30"
        ).json()
        assert [g["key"] for g in body["groups"]] == ["1-15", "16-30"]
        assert all(len(g["deviation"]) <= 15 for g in body["groups"])

    def test_time_mode_groups_keyed_by_year(self, client):
        body = client.get(
            "/compare?mode=time&dataset=synthlin&year=2011&year2=2013&ranker=MART"
            "&method=ICE&lo=1&hi=10"
        ).json()
        assert [g["key"] for g in body["groups"]] == ["2011", "2013"]
        assert [g["year"] for g in body["groups"]] == [2011, 2013]

    def test_university_dataset_shape(self, client):
        years = client.get("/datasets/university/years").json()["years"]
        attrs = client.get("/datasets/university/attributes").json()["attributes"]
        assert years == list(range(2011, 2017))
        assert len(attrs) == 10
