"""The five paired baseline methods and their comparison."""

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from bcfl.config import BASELINE_DIR, ScenarioConfig, load_scenario, with_seed
from bcfl.errors import BCFLError, ComparisonError, ConfigurationError
from bcfl.harness.engine import run_scenario
from bcfl.harness.export import metrics_csv, metrics_rows, write_run_artifacts
from bcfl.harness.results import RunResult

logger = logging.getLogger(__name__)

METHODS = ("morflb", "standard_fl", "centralized", "bc_only_fl", "cloud_fl")

COMPARISON_CSV = "comparison.csv"
COMPARISON_JSON = "comparison.json"
ROUNDS_CSV = "rounds.csv"


class BaselineSuite:
    """Five named scenarios sharing seed, clients and dataset parameters.

    Attributes:
        configs: Scenario per method, in canonical order
    """

    def __init__(self, configs: dict[str, ScenarioConfig]):
        missing = [m for m in METHODS if m not in configs]
        extra = sorted(set(configs) - set(METHODS))
        if missing or extra:
            raise ConfigurationError(
                f"baseline suite needs exactly {list(METHODS)}; "
                f"missing {missing}, unexpected {extra}"
            )
        reference = configs[METHODS[0]]
        for method in METHODS[1:]:
            config = configs[method]
            for key in ("seed", "n_clients", "dirichlet_alpha", "data"):
                if getattr(config, key) != getattr(reference, key):
                    raise ConfigurationError(
                        f"{method}.{key} differs from {METHODS[0]}; baselines must be paired"
                    )
        self.configs = {m: configs[m] for m in METHODS}

    @classmethod
    def load(cls, directory: str | Path) -> "BaselineSuite":
        """Read ``<method>.json`` for every method from ``directory``."""
        directory = Path(directory)
        return cls({m: load_scenario(directory / f"{m}.json") for m in METHODS})

    @classmethod
    def shipped(cls) -> "BaselineSuite":
        return cls.load(BASELINE_DIR)

    def with_seed(self, seed: int) -> "BaselineSuite":
        return BaselineSuite({m: with_seed(c, seed) for m, c in self.configs.items()})


@dataclass(frozen=True)
class ComparisonRow:
    method: str
    mean_delay: float
    security: float
    compliance: float
    final_accuracy: float
    accuracy_improvement: float
    blocks_mined: int
    dataset_digest: str


def _run_method(method: str, config: ScenarioConfig) -> RunResult:
    try:
        return run_scenario(config)
    except BCFLError as exc:
        raise ComparisonError(method, exc) from exc


def _table_csv(rows: list[ComparisonRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["method", "mean_delay", "security", "compliance", "final_accuracy", "accuracy_improvement"]
    )
    for row in rows:
        writer.writerow(
            [
                row.method,
                format(row.mean_delay, ".9g"),
                format(row.security, ".9g"),
                format(row.compliance, ".9g"),
                format(row.final_accuracy, ".9g"),
                format(row.accuracy_improvement, ".9g"),
            ]
        )
    return buffer.getvalue()


def compare_baselines(
    suite: BaselineSuite,
    output_dir: str | Path | None = None,
    max_workers: int = 1,
) -> list[ComparisonRow]:
    """Run all five methods and tabulate mean delay, security, compliance and accuracy.

    Rows come back in canonical method order whatever the worker count.
    With ``output_dir`` each method's artifacts land in ``<output_dir>/<method>/``
    next to the comparison table and a combined per-round CSV.

    Raises:
        ComparisonError: Naming the first method (canonical order) that failed
    """
    if max_workers < 1:
        raise ConfigurationError(f"max_workers must be >= 1, got {max_workers}")
    logger.info("comparing %d baselines with %d worker(s)", len(METHODS), max_workers)

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = {m: pool.submit(_run_method, m, c) for m, c in suite.configs.items()}
    # result() re-raises in canonical order
    results = {m: futures[m].result() for m in METHODS}

    digests = {r.summary.dataset_digest for r in results.values()}
    if len(digests) != 1:
        raise ConfigurationError("baseline runs did not share one dataset")

    rows = [
        ComparisonRow(
            method=method,
            mean_delay=result.summary.mean_delay,
            security=result.summary.security_score,
            compliance=result.summary.compliance_score,
            final_accuracy=result.summary.final_accuracy,
            accuracy_improvement=result.summary.accuracy_improvement,
            blocks_mined=result.summary.blocks_mined,
            dataset_digest=result.summary.dataset_digest,
        )
        for method, result in results.items()
    ]
    for row in rows:
        logger.info(
            "%-12s delay %.3f s, security %.2f, compliance %.1f%%, accuracy %.4f",
            row.method,
            row.mean_delay,
            row.security,
            row.compliance,
            row.final_accuracy,
        )

    if output_dir is not None:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        all_rounds = []
        for method, result in results.items():
            write_run_artifacts(result, out / method)
            all_rounds.extend(metrics_rows(method, result.metrics))
        (out / ROUNDS_CSV).write_text(metrics_csv(all_rounds), encoding="utf-8", newline="")
        (out / COMPARISON_CSV).write_text(_table_csv(rows), encoding="utf-8", newline="")
        (out / COMPARISON_JSON).write_text(
            json.dumps([asdict(r) for r in rows], indent=2) + "\n", encoding="utf-8"
        )
    return rows
