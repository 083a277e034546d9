"""HTTP service: endpoints, anti-oracle responses, rotation, rate limits."""

from __future__ import annotations

import random
import sqlite3
from contextlib import closing

import pytest
from fastapi.testclient import TestClient

from suis.config import RateLimitConfig, SystemConfig
from suis.flows import verify_user
from suis.grid import Stroke
from suis.service import NEGATIVE_BODY, POSITIVE_BODY, FixedWindowLimiter, create_app
from suis.vault import Vault
from tests.conftest import (
    OTHER_CELLS,
    SIGNATURE_CELLS,
    jittered,
    strokes_for_cells,
)


def stroke_payload(strokes: list[Stroke]) -> list[list[dict]]:
    return [[{"x": p.x, "y": p.y} for p in s.points] for s in strokes]


def auth_body(username: str, strokes: list[Stroke], color_id: int) -> dict:
    return {
        "username": username,
        "strokes": stroke_payload(strokes),
        "color_id": color_id,
    }


@pytest.fixture
def service_config(tmp_path) -> SystemConfig:
    return SystemConfig(
        vault_path=str(tmp_path / "service.db"),
        rate_limit=RateLimitConfig(verify_per_window=1000),
    )


@pytest.fixture
def client(service_config, vault_key) -> TestClient:
    app = create_app(service_config, key=vault_key, rng=random.Random(42))
    return TestClient(app)


@pytest.fixture
def strokes(service_config) -> list[Stroke]:
    return strokes_for_cells(
        SIGNATURE_CELLS, service_config.grid, service_config.raster
    )


class TestConfigEndpoint:
    def test_shape(self, client):
        resp = client.get("/api/v1/config")
        assert resp.status_code == 200
        data = resp.json()
        assert set(data) == {"grid", "palette", "stroke_format_version"}
        assert data["grid"] == {"cols": 7, "rows": 7}
        assert data["stroke_format_version"] == 1

    def test_palette_ids_contiguous(self, client):
        palette = client.get("/api/v1/config").json()["palette"]
        assert [c["id"] for c in palette] == list(range(1, 9))
        for color in palette:
            assert set(color) == {"id", "name", "value"}

    def test_never_reveals_matching_parameters(self, client):
        text = client.get("/api/v1/config").text.lower()
        assert "technique" not in text
        assert "theta" not in text
        assert "threshold" not in text
        assert "margin" not in text


class TestRegister:
    def test_created(self, client, strokes):
        resp = client.post("/api/v1/register", json=auth_body("alice", strokes, 3))
        assert resp.status_code == 201
        assert resp.json() == {
            "created": True,
            "active_cells": len(SIGNATURE_CELLS),
        }

    def test_duplicate_conflicts(self, client, strokes):
        body = auth_body("alice", strokes, 3)
        assert client.post("/api/v1/register", json=body).status_code == 201
        resp = client.post("/api/v1/register", json=body)
        assert resp.status_code == 409

    def test_too_small_rejected_with_hint(self, client, service_config):
        small = strokes_for_cells(
            [(1, 1)], service_config.grid, service_config.raster
        )
        resp = client.post("/api/v1/register", json=auth_body("tiny", small, 3))
        assert resp.status_code == 400
        assert "at least 3" in resp.json()["hint"]

    def test_color_out_of_palette(self, client, strokes):
        resp = client.post("/api/v1/register", json=auth_body("alice", strokes, 9))
        assert resp.status_code == 422

    def test_malformed_bodies(self, client, strokes):
        no_strokes = {"username": "alice", "strokes": [], "color_id": 1}
        assert client.post("/api/v1/register", json=no_strokes).status_code == 422
        offgrid = {
            "username": "alice",
            "strokes": [[{"x": 1.5, "y": 0.2}, {"x": 0.3, "y": 0.4}]],
            "color_id": 1,
        }
        assert client.post("/api/v1/register", json=offgrid).status_code == 422
        long_name = auth_body("x" * 65, strokes, 1)
        assert client.post("/api/v1/register", json=long_name).status_code == 422


class TestVerify:
    def test_replay_authenticates(self, client, strokes):
        client.post("/api/v1/register", json=auth_body("alice", strokes, 3))
        resp = client.post("/api/v1/verify", json=auth_body("alice", strokes, 3))
        assert resp.status_code == 200
        assert resp.content == POSITIVE_BODY

    def test_jittered_strokes_authenticate(self, client, service_config, strokes):
        client.post("/api/v1/register", json=auth_body("alice", strokes, 3))
        wobbly = jittered(strokes, random.Random(17), service_config.grid)
        resp = client.post("/api/v1/verify", json=auth_body("alice", wobbly, 3))
        assert resp.content == POSITIVE_BODY

    def test_wrong_color_rejects(self, client, strokes):
        client.post("/api/v1/register", json=auth_body("alice", strokes, 3))
        resp = client.post("/api/v1/verify", json=auth_body("alice", strokes, 4))
        assert resp.status_code == 200
        assert resp.content == NEGATIVE_BODY

    def test_unknown_user_rejects_identically(self, client, strokes):
        client.post("/api/v1/register", json=auth_body("alice", strokes, 3))
        wrong_color = client.post(
            "/api/v1/verify", json=auth_body("alice", strokes, 4)
        )
        unknown = client.post(
            "/api/v1/verify", json=auth_body("ghost", strokes, 3)
        )
        assert unknown.status_code == wrong_color.status_code == 200
        assert unknown.content == wrong_color.content == NEGATIVE_BODY

    def test_wrong_drawing_rejects_identically(self, client, service_config, strokes):
        client.post("/api/v1/register", json=auth_body("alice", strokes, 3))
        other = strokes_for_cells(
            OTHER_CELLS, service_config.grid, service_config.raster
        )
        resp = client.post("/api/v1/verify", json=auth_body("alice", other, 3))
        assert resp.content == NEGATIVE_BODY

    def test_reverify_after_rotation(self, client, strokes):
        client.post("/api/v1/register", json=auth_body("alice", strokes, 3))
        for _ in range(8):
            resp = client.post(
                "/api/v1/verify", json=auth_body("alice", strokes, 3)
            )
            assert resp.content == POSITIVE_BODY

    def test_success_rotates_the_stored_technique(self, tmp_path, vault_key, strokes):
        config = SystemConfig(
            vault_path=str(tmp_path / "rotate.db"),
            rotate_avoid_repeat=True,
            rate_limit=RateLimitConfig(verify_per_window=1000),
        )
        client = TestClient(create_app(config, key=vault_key, rng=random.Random(1)))
        client.post("/api/v1/register", json=auth_body("alice", strokes, 3))

        def stored_technique() -> int:
            with closing(sqlite3.connect(config.vault_path)) as conn:
                return conn.execute(
                    "SELECT technique FROM profiles WHERE username='alice'"
                ).fetchone()[0]

        before = stored_technique()
        assert (
            client.post("/api/v1/verify", json=auth_body("alice", strokes, 3)).content
            == POSITIVE_BODY
        )
        assert stored_technique() != before

    def test_failed_verify_changes_no_state(self, client, service_config, strokes):
        client.post("/api/v1/register", json=auth_body("alice", strokes, 3))
        with closing(sqlite3.connect(service_config.vault_path)) as conn:
            row_before = conn.execute("SELECT * FROM profiles").fetchone()
        client.post("/api/v1/verify", json=auth_body("alice", strokes, 4))
        client.post("/api/v1/verify", json=auth_body("ghost", strokes, 3))
        with closing(sqlite3.connect(service_config.vault_path)) as conn:
            assert conn.execute("SELECT * FROM profiles").fetchone() == row_before
            assert conn.execute("SELECT COUNT(*) FROM profiles").fetchone()[0] == 1

    def test_corrupt_record_is_an_ordinary_rejection(
        self, client, service_config, strokes
    ):
        client.post("/api/v1/register", json=auth_body("alice", strokes, 3))
        with closing(sqlite3.connect(service_config.vault_path)) as conn, conn:
            blob = bytearray(
                conn.execute("SELECT envelope FROM profiles").fetchone()[0]
            )
            blob[-3] ^= 0x40
            conn.execute("UPDATE profiles SET envelope = ?", (bytes(blob),))
        resp = client.post("/api/v1/verify", json=auth_body("alice", strokes, 3))
        assert resp.status_code == 200
        assert resp.content == NEGATIVE_BODY

    def test_malformed_verify_body(self, client):
        resp = client.post(
            "/api/v1/verify",
            json={"username": "alice", "strokes": [], "color_id": 1},
        )
        assert resp.status_code == 422


class TestDecisionParityWithLocalPipeline:
    def test_service_and_direct_vault_agree(
        self, service_config, vault_key, strokes
    ):
        client = TestClient(
            create_app(service_config, key=vault_key, rng=random.Random(6))
        )
        client.post("/api/v1/register", json=auth_body("alice", strokes, 3))
        other = strokes_for_cells(
            OTHER_CELLS, service_config.grid, service_config.raster
        )
        cases = [
            ("alice", strokes, 3),
            ("alice", strokes, 4),
            ("alice", other, 3),
            ("ghost", strokes, 3),
            ("alice", jittered(strokes, random.Random(3), service_config.grid), 3),
        ]
        vault = Vault(service_config.vault_path, vault_key, service_config)
        for username, stroke_set, color in cases:
            local = verify_user(vault, username, stroke_set, color)
            remote = (
                client.post(
                    "/api/v1/verify", json=auth_body(username, stroke_set, color)
                ).content
                == POSITIVE_BODY
            )
            assert local == remote, (username, color)


class TestRateLimiting:
    @pytest.fixture
    def limited_client(self, tmp_path, vault_key) -> TestClient:
        config = SystemConfig(
            vault_path=str(tmp_path / "limited.db"),
            rate_limit=RateLimitConfig(verify_per_window=3, window_seconds=3600),
        )
        return TestClient(create_app(config, key=vault_key, rng=random.Random(2)))

    def test_user_budget_enforced(self, limited_client, strokes):
        limited_client.post("/api/v1/register", json=auth_body("alice", strokes, 3))
        for _ in range(3):
            resp = limited_client.post(
                "/api/v1/verify", json=auth_body("alice", strokes, 3)
            )
            assert resp.status_code == 200
        resp = limited_client.post(
            "/api/v1/verify", json=auth_body("alice", strokes, 3)
        )
        assert resp.status_code == 429

    def test_source_budget_spans_usernames(self, limited_client, strokes):
        for i in range(3):
            limited_client.post(
                "/api/v1/verify", json=auth_body(f"user-{i}", strokes, 3)
            )
        resp = limited_client.post(
            "/api/v1/verify", json=auth_body("fresh-user", strokes, 3)
        )
        assert resp.status_code == 429

    def test_window_rolls_over(self):
        now = [1000.0]
        limiter = FixedWindowLimiter(2, 60, clock=lambda: now[0])
        assert limiter.allow("k") and limiter.allow("k")
        assert not limiter.allow("k")
        now[0] += 60.0
        assert limiter.allow("k")


class TestStaticMount:
    def test_serves_files_when_configured(self, tmp_path, vault_key):
        static = tmp_path / "ui"
        static.mkdir()
        (static / "index.html").write_text("<!doctype html><title>draw</title>")
        config = SystemConfig(
            vault_path=str(tmp_path / "static.db"), static_dir=str(static)
        )
        client = TestClient(create_app(config, key=vault_key))
        resp = client.get("/")
        assert resp.status_code == 200
        assert "draw" in resp.text
        # API routes still win over the mount.
        assert client.get("/api/v1/config").status_code == 200
