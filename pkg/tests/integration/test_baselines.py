"""Integration tests for the paired baseline comparison."""

import csv
import json

import pytest

from bcfl.config import with_seed
from bcfl.errors import ConfigurationError
from bcfl.harness import BaselineSuite, compare_baselines
from bcfl.harness.baselines import COMPARISON_CSV, COMPARISON_JSON, METHODS, ROUNDS_CSV


@pytest.fixture(scope="module")
def comparison(tmp_path_factory):
    out = tmp_path_factory.mktemp("compare")
    rows = compare_baselines(BaselineSuite.shipped(), out, max_workers=2)
    return out, {row.method: row for row in rows}


class TestComparison:
    """Tests for the shipped five-way comparison."""

    def test_rows_in_canonical_order(self, comparison):
        """Rows follow the method list regardless of worker count."""
        _, rows = comparison
        assert tuple(rows) == METHODS

    def test_delay_ordering(self, comparison):
        """Mean delay ranks centralized < morflb < standard < blockchain-only < cloud."""
        _, rows = comparison
        delays = [
            rows[m].mean_delay
            for m in ("centralized", "morflb", "standard_fl", "bc_only_fl", "cloud_fl")
        ]
        assert delays == sorted(delays)
        assert len(set(delays)) == 5

    def test_security_column(self, comparison):
        """Security scores come from the calibrated rubric."""
        _, rows = comparison
        assert rows["morflb"].security == 1.0
        assert rows["bc_only_fl"].security == pytest.approx(0.9)
        assert rows["standard_fl"].security == 0.4
        assert rows["cloud_fl"].security == 0.3
        assert rows["centralized"].security == 0.2

    def test_shared_dataset(self, comparison):
        """Every method trains on the same partition."""
        _, rows = comparison
        assert len({row.dataset_digest for row in rows.values()}) == 1

    def test_only_ledgered_methods_mine(self, comparison):
        """Blocks are mined only where a ledger is kept."""
        _, rows = comparison
        assert rows["morflb"].blocks_mined == 10
        assert rows["bc_only_fl"].blocks_mined == 10
        assert rows["standard_fl"].blocks_mined == 0
        assert rows["centralized"].blocks_mined == 0

    def test_files_written(self, comparison):
        """The table, the combined rounds and per-method artifacts are written."""
        out, rows = comparison
        with (out / COMPARISON_CSV).open(newline="") as f:
            table = list(csv.DictReader(f))
        assert [r["method"] for r in table] == list(METHODS)
        assert len(json.loads((out / COMPARISON_JSON).read_text())) == 5
        lines = (out / ROUNDS_CSV).read_text().splitlines()
        assert len(lines) == 1 + 5 * 10
        for method in METHODS:
            assert (out / method / "metrics.csv").is_file()
        assert (out / "morflb" / "ledger.bcfl").is_file()
        assert not (out / "standard_fl" / "ledger.bcfl").exists()


class TestBaselineSuite:
    """Tests for suite pairing checks."""

    def test_missing_method(self):
        """All five methods are required."""
        configs = dict(BaselineSuite.shipped().configs)
        del configs["cloud_fl"]
        with pytest.raises(ConfigurationError, match="cloud_fl"):
            BaselineSuite(configs)

    def test_unpaired_seed(self):
        """Methods must share the seed."""
        configs = dict(BaselineSuite.shipped().configs)
        configs["standard_fl"] = with_seed(configs["standard_fl"], 7)
        with pytest.raises(ConfigurationError, match="seed"):
            BaselineSuite(configs)

    def test_with_seed_keeps_pairing(self):
        """Reseeding applies to every method."""
        suite = BaselineSuite.shipped().with_seed(11)
        assert {c.seed for c in suite.configs.values()} == {11}

    def test_invalid_worker_count(self):
        """At least one worker is needed."""
        with pytest.raises(ConfigurationError):
            compare_baselines(BaselineSuite.shipped(), max_workers=0)
