"""Unit tests for scenario configuration loading and validation."""

import json

import pytest

from bcfl.config import (
    BASELINE_DIR,
    MAX_CLIENTS,
    MAX_SEED,
    HierarchyTopology,
    PowConsensus,
    ScenarioConfig,
    get_default_scenario,
    load_scenario,
    parse_json,
    parse_scenario,
    with_seed,
)
from bcfl.errors import ConfigurationError


class TestDefaultScenario:
    """Tests for the shipped default scenario."""

    def test_loads(self):
        """The default scenario validates."""
        config = get_default_scenario()
        assert config.name == "default"
        assert config.n_clients == 8
        assert config.rounds == 10

    def test_hierarchy_with_pow_ledger(self):
        """The default coordinates through a binary hierarchy and keeps a PoW ledger."""
        config = get_default_scenario()
        assert config.topology == HierarchyTopology(branching=2)
        assert config.consensus == PowConsensus(difficulty=2)
        assert config.ledger.enabled

    def test_empty_document_uses_defaults(self):
        """Every section has defaults."""
        assert parse_scenario({}) == ScenarioConfig()


class TestValidation:
    """Tests for error reporting."""

    def test_unknown_key_named(self):
        """Unknown keys are rejected by name."""
        with pytest.raises(ConfigurationError, match="bogus"):
            parse_scenario({"bogus": 1})

    def test_nested_key_named(self):
        """Nested violations carry the dotted path."""
        with pytest.raises(ConfigurationError, match="data.classes"):
            parse_scenario({"data": {"classes": 1}})

    def test_duplicate_key(self):
        """Duplicate keys at any depth are rejected."""
        with pytest.raises(ConfigurationError, match="duplicate key 'seed'"):
            parse_json('{"data": {}, "seed": 1, "seed": 2}')

    def test_invalid_json(self):
        """Syntax errors are configuration errors."""
        with pytest.raises(ConfigurationError):
            parse_json("{")

    def test_unknown_consensus(self):
        """Consensus kinds are a closed set."""
        with pytest.raises(ConfigurationError):
            parse_scenario({"consensus": {"kind": "raft"}})

    def test_pbft_quorum(self):
        """A PBFT committee must hold 3f + 1 members."""
        with pytest.raises(ConfigurationError, match="3f"):
            parse_scenario({"consensus": {"kind": "flpbft", "committee": 3, "f": 1}})

    def test_fanout_below_clients(self):
        """Gossip fanout must be below the client count."""
        with pytest.raises(ConfigurationError, match="fanout"):
            parse_scenario({"n_clients": 4, "topology": {"kind": "p2p", "fanout": 4}})

    def test_krum_needs_enough_clients(self):
        """Krum with f needs at least f + 3 clients."""
        with pytest.raises(ConfigurationError, match="krum"):
            parse_scenario({"n_clients": 4, "defenses": {"krum": {"f": 2}}})

    def test_centralized_has_no_ledger(self):
        """Centralized training keeps no ledger."""
        with pytest.raises(ConfigurationError, match="ledger"):
            parse_scenario({"training": "centralized", "ledger": {"enabled": True}})

    def test_centralized_needs_star(self):
        """Centralized training pools data at one server."""
        with pytest.raises(ConfigurationError, match="star"):
            parse_scenario(
                {
                    "training": "centralized",
                    "ledger": {"enabled": False},
                    "topology": {"kind": "hierarchy"},
                }
            )

    def test_seed_range(self):
        """Seeds are unsigned 64-bit integers."""
        with pytest.raises(ConfigurationError):
            parse_scenario({"seed": MAX_SEED + 1})

    def test_client_count_below_synthetic_range(self):
        """Honest client ids stay below the synthetic id range."""
        with pytest.raises(ConfigurationError, match="n_clients"):
            parse_scenario({"n_clients": MAX_CLIENTS})

    def test_sybil_credentials_fit_the_block_field(self):
        """Organization names must leave room for sybil credentials."""
        with pytest.raises(ConfigurationError, match="sybil"):
            parse_scenario(
                {
                    "trust": {"organizations": ["a-very-long-organization-name"]},
                    "attack": {"kind": {"kind": "sybil"}, "malicious_fraction": 0.25},
                }
            )

    def test_client_credentials_fit_the_block_field(self):
        """Organization names must leave room for client credentials."""
        with pytest.raises(ConfigurationError, match="client credentials"):
            parse_scenario({"trust": {"organizations": ["x" * 40]}})

    def test_not_an_object(self):
        """Scenarios are JSON objects."""
        with pytest.raises(ConfigurationError):
            parse_scenario([1, 2])


class TestLoading:
    """Tests for file loading and seed overrides."""

    def test_missing_file(self, tmp_path):
        """Unreadable files are configuration errors."""
        with pytest.raises(ConfigurationError):
            load_scenario(tmp_path / "missing.json")

    def test_round_trip_through_file(self, tmp_path):
        """A dumped scenario loads back equal."""
        config = get_default_scenario()
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(config.model_dump(mode="json")))
        assert load_scenario(path) == config

    def test_with_seed(self):
        """Seed overrides copy the scenario."""
        config = get_default_scenario()
        assert with_seed(config, 99).seed == 99
        assert config.seed != 99

    def test_with_seed_range(self):
        """Overrides are range-checked."""
        with pytest.raises(ConfigurationError):
            with_seed(ScenarioConfig(), -1)

    def test_baselines_are_paired(self):
        """Every shipped baseline shares seed, clients and data."""
        configs = [load_scenario(p) for p in sorted(BASELINE_DIR.glob("*.json"))]
        assert len(configs) == 5
        assert len({(c.seed, c.n_clients, c.dirichlet_alpha, c.data) for c in configs}) == 1

    def test_malicious_count(self):
        """floor(fraction * n) clients are malicious."""
        config = parse_scenario(
            {"attack": {"kind": {"kind": "sign_flip"}, "malicious_fraction": 0.25}}
        )
        assert config.n_malicious == 2
        assert config.attack_seed == config.seed
