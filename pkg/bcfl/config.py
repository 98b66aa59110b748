"""Scenario configuration.

A scenario is a JSON document validated against the models below. Every
section has defaults matching the shipped calibration, so a scenario file
only needs to state what differs. Unknown keys, duplicate keys and violated
invariants are errors that name the offending key.
"""

import json
import logging
import math
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from bcfl.core.encoding import CREDENTIAL_FIELD
from bcfl.errors import ConfigurationError
from bcfl.ledger.contracts import TrustModel

logger = logging.getLogger(__name__)

MAX_SEED = 2**64 - 1
MAX_CLIENTS = 2**32  # ids at or above this are synthetic (Sybil) identities


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# --- delay calibration -------------------------------------------------------


class LinkConfig(_Section):
    """One link class."""

    bandwidth: float = Field(gt=0)  # [bit/s]
    propagation: float = Field(default=0.0, ge=0)  # [s]


class LinkClasses(_Section):
    """Link classes of the three-tier network.

    access: client to its first aggregator
    fog: fog to fog between hierarchy levels
    backhaul: fog to cloud
    wan: client to a distant cloud
    peer: client to client gossip
    """

    access: LinkConfig = LinkConfig(bandwidth=6.5e7, propagation=0.005)
    fog: LinkConfig = LinkConfig(bandwidth=2e8, propagation=0.002)
    backhaul: LinkConfig = LinkConfig(bandwidth=1e8, propagation=0.01)
    wan: LinkConfig = LinkConfig(bandwidth=2.6e7, propagation=0.08)
    peer: LinkConfig = LinkConfig(bandwidth=9.5e6, propagation=0.005)


class DelayCalibration(_Section):
    """Delay model constants."""

    cpu_client: float = Field(default=1e9, gt=0)  # [cycles/s]
    cpu_fog: float = Field(default=1e10, gt=0)  # [cycles/s]
    cpu_cloud: float = Field(default=2e10, gt=0)  # [cycles/s]
    links: LinkClasses = LinkClasses()

    consensus_overhead_s: float = Field(default=0.85, ge=0)  # Z [s]
    message_seconds: float = Field(default=0.01, ge=0)  # per consensus message [s]
    hash_seconds: float = Field(default=1e-5, ge=0)  # per PoW trial [s]
    eval_seconds: float = Field(default=0.002, ge=0)  # per PoFL candidate [s]

    task_size_bits: float = Field(default=4e6, gt=0)
    task_cycles: float = Field(default=1e9, gt=0)
    task_size_spread: float = Field(default=0.5, ge=0, lt=1)  # factor ~ U(1-s, 1+s)
    train_cycles_per_sample_epoch: float = Field(default=2.5e6, gt=0)
    aggregate_cycles_per_update: float = Field(default=5e7, gt=0)
    max_utilization: float = Field(default=0.5, ge=0, lt=1)  # background load bound
    clients_per_fog: int = Field(default=2, ge=1)
    raw_sample_bits: float = Field(default=2.15e5, gt=0)  # centralized raw upload


# --- coordination and consensus ----------------------------------------------


class StarTopology(_Section):
    kind: Literal["star"] = "star"
    link: Literal["access", "wan"] = "access"  # link class clients use to reach the root


class HierarchyTopology(_Section):
    kind: Literal["hierarchy"] = "hierarchy"
    branching: int = Field(default=2, ge=2)


class P2PTopology(_Section):
    kind: Literal["p2p"] = "p2p"
    fanout: int = Field(default=3, ge=1)


TopologyConfig = Annotated[
    StarTopology | HierarchyTopology | P2PTopology, Field(discriminator="kind")
]


class PowConsensus(_Section):
    kind: Literal["pow"] = "pow"
    difficulty: int = Field(default=2, ge=0, le=64)  # leading zero hex digits


class PoqConsensus(_Section):
    kind: Literal["poq"] = "poq"


class PoflConsensus(_Section):
    kind: Literal["pofl"] = "pofl"


class PbftConsensus(_Section):
    kind: Literal["flpbft"] = "flpbft"
    committee: int = Field(default=4, ge=1)
    f: int = Field(default=1, ge=0)

    @model_validator(mode="after")
    def _quorum(self) -> "PbftConsensus":
        if self.committee < 3 * self.f + 1:
            raise ValueError(
                f"committee {self.committee} is smaller than 3f+1 = {3 * self.f + 1}"
            )
        return self


ConsensusConfig = Annotated[
    PowConsensus | PoqConsensus | PoflConsensus | PbftConsensus, Field(discriminator="kind")
]


class TrustConfig(_Section):
    """Admission policy.

    Client i carries the credential ``{org}/client-{i}/token-{i}`` where org
    cycles through ``organizations``.
    """

    model: TrustModel = TrustModel.PERMISSIONLESS
    organizations: tuple[str, ...] = ("org-a",)
    consortium: tuple[str, ...] = ()
    authorized: tuple[str, ...] = ()
    authorize_clients: bool = True  # pre-authorize every real client when permissioned

    @model_validator(mode="after")
    def _organizations(self) -> "TrustConfig":
        if not self.organizations:
            raise ValueError("at least one organization is required")
        for org in self.organizations:
            if not org or "/" in org:
                raise ValueError(f"invalid organization name {org!r}")
        return self


# --- defenses and attacks ----------------------------------------------------


class KrumDefense(_Section):
    f: int = Field(default=1, ge=0)
    select: int = Field(default=1, ge=1)  # multi-Krum m


class DPDefense(_Section):
    sigma: float = Field(default=0.01, ge=0)
    clip: float = Field(default=1.0, gt=0)


class TopkDefense(_Section):
    k: int = Field(ge=1)


class Defenses(_Section):
    krum: KrumDefense | None = None
    foolsgold: bool = False
    dp: DPDefense | None = None
    topk: TopkDefense | None = None


class SignFlipAttack(_Section):
    kind: Literal["sign_flip"] = "sign_flip"
    scale: float = Field(default=1.0, ge=0)


class NoiseAttack(_Section):
    kind: Literal["noise"] = "noise"
    sigma: float = Field(default=1.0, ge=0)


class SybilAttack(_Section):
    kind: Literal["sybil"] = "sybil"
    clones: int = Field(default=2, ge=1)
    jitter_sigma: float = Field(default=0.0, ge=0)


AttackKind = Annotated[
    SignFlipAttack | NoiseAttack | SybilAttack, Field(discriminator="kind")
]


class AttackConfig(_Section):
    kind: AttackKind
    malicious_fraction: float = Field(ge=0, lt=1)
    seed: int | None = Field(default=None, ge=0, le=MAX_SEED)  # defaults to the scenario seed


# --- learning, ledger, scheduler ---------------------------------------------


class DataConfig(_Section):
    samples_per_client: int = Field(default=200, ge=1)
    input_dim: int = Field(default=16, ge=1)
    classes: int = Field(default=10, ge=2)
    mean_scale: float = Field(default=0.5, gt=0)
    validation_samples: int = Field(default=500, ge=1)


class LedgerConfig(_Section):
    enabled: bool = True
    reward_pool: float = Field(default=1.0, ge=0)


class RewardConfig(_Section):
    w_acc: float = Field(default=1.0, ge=0)
    w_delay: float = Field(default=1.0, ge=0)
    gamma: float = Field(default=0.5, ge=0, lt=1)
    alpha: float = Field(default=0.1, gt=0, le=1)
    epsilon: float = Field(default=0.05, ge=0, le=1)


class RLConfig(_Section):
    enabled: bool = False
    reward: RewardConfig = RewardConfig()
    pretrain_episodes: int = Field(default=300, ge=0)
    utilization_thresholds: tuple[float, float] = (1 / 6, 1 / 3)
    size_thresholds: tuple[float, float] = (5 / 6, 7 / 6)  # task size factor buckets
    anomaly_rollback: bool = False
    anomaly_tolerance: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def _thresholds(self) -> "RLConfig":
        for name in ("utilization_thresholds", "size_thresholds"):
            low, high = getattr(self, name)
            if not low < high:
                raise ValueError(f"{name} must be strictly increasing")
        return self


class ScenarioConfig(_Section):
    """Full experiment description."""

    name: str = "scenario"
    seed: int = Field(default=2024, ge=0, le=MAX_SEED)
    n_clients: int = Field(default=8, ge=1, lt=MAX_CLIENTS)
    rounds: int = Field(default=10, ge=1)
    local_epochs: int = Field(default=2, ge=1)
    lr: float = Field(default=0.05, gt=0)
    dirichlet_alpha: float = Field(default=0.5, gt=0)
    training: Literal["federated", "centralized"] = "federated"
    topology: TopologyConfig = StarTopology()
    consensus: ConsensusConfig = PowConsensus()
    trust: TrustConfig = TrustConfig()
    defenses: Defenses = Defenses()
    attack: AttackConfig | None = None
    delay_calibration: DelayCalibration = DelayCalibration()
    update_size_bits: int = Field(default=8_000_000, ge=1)
    data: DataConfig = DataConfig()
    ledger: LedgerConfig = LedgerConfig()
    rl: RLConfig = RLConfig()
    offload: Literal["client", "fog", "cloud"] = "client"  # static placement without RL
    validate_updates: bool = True
    security_profile: str | None = None

    @model_validator(mode="after")
    def _cross_checks(self) -> "ScenarioConfig":
        n = self.n_clients
        if isinstance(self.topology, P2PTopology) and self.topology.fanout >= n:
            raise ValueError(f"topology.fanout {self.topology.fanout} must be < n_clients {n}")
        if isinstance(self.consensus, PbftConsensus) and self.consensus.committee > n:
            raise ValueError(f"consensus.committee {self.consensus.committee} exceeds n_clients")
        if self.defenses.krum is not None:
            krum = self.defenses.krum
            if n < krum.f + 3:
                raise ValueError(f"defenses.krum.f={krum.f} needs n_clients >= {krum.f + 3}")
            if krum.select > n - krum.f:
                raise ValueError(f"defenses.krum.select must be <= n_clients - f = {n - krum.f}")
        if self.defenses.topk is not None:
            dim = self.data.input_dim * self.data.classes + self.data.classes
            if self.defenses.topk.k > dim:
                raise ValueError(f"defenses.topk.k exceeds the parameter dimension {dim}")
        if self.training == "centralized":
            defenses = self.defenses
            if not isinstance(self.topology, StarTopology):
                raise ValueError("centralized training needs a star topology")
            if self.ledger.enabled:
                raise ValueError("centralized training keeps no ledger (set ledger.enabled false)")
            if self.attack is not None or defenses.krum or defenses.foolsgold:
                raise ValueError("centralized training has no client updates to attack or filter")
            if defenses.dp is not None or defenses.topk is not None:
                raise ValueError("centralized training has no client updates to noise or compress")
        longest = max(len(org) for org in self.trust.organizations)
        if longest + 2 * len(str(n - 1)) + len("/client-/token-") > CREDENTIAL_FIELD:
            raise ValueError(
                f"trust.organizations names leave no room for {CREDENTIAL_FIELD}-byte "
                "client credentials"
            )
        if self.attack is not None and isinstance(self.attack.kind, SybilAttack):
            last_id = MAX_CLIENTS + self.n_malicious * self.attack.kind.clones
            if longest + 2 * len(str(last_id)) + len("/sybil-/token-") > CREDENTIAL_FIELD:
                raise ValueError(
                    f"trust.organizations names leave no room for {CREDENTIAL_FIELD}-byte "
                    "sybil credentials"
                )
        if self.attack is not None and self.n_malicious == 0:
            logger.warning("attack configured but malicious_fraction selects no client")
        return self

    @property
    def n_malicious(self) -> int:
        """Clients controlled by the attacker."""
        if self.attack is None:
            return 0
        return math.floor(self.attack.malicious_fraction * self.n_clients + 1e-9)

    @property
    def attack_seed(self) -> int:
        if self.attack is not None and self.attack.seed is not None:
            return self.attack.seed
        return self.seed


# --- loading -----------------------------------------------------------------

SCENARIO_DIR = Path(__file__).parent.parent / "scenarios"
DEFAULT_SCENARIO_PATH = SCENARIO_DIR / "default.json"
BASELINE_DIR = SCENARIO_DIR / "baselines"
CALIBRATION_PATH = SCENARIO_DIR / "security_calibration.json"


def _reject_duplicates(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    result: dict[str, Any] = {}
    for key, value in pairs:
        if key in result:
            raise ConfigurationError(f"duplicate key '{key}'")
        result[key] = value
    return result


def parse_json(text: str) -> Any:
    """Parse JSON, rejecting duplicate keys at any depth."""
    try:
        return json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON: {exc}") from exc


def _describe(error: ValidationError) -> str:
    messages = []
    for item in error.errors():
        # discriminated unions insert the tag into the location
        loc = ".".join(str(part) for part in item["loc"]) or "<root>"
        messages.append(f"{loc}: {item['msg']}")
    return "; ".join(messages)


def parse_scenario(data: Any) -> ScenarioConfig:
    """Validate a mapping into a ScenarioConfig.

    Raises:
        ConfigurationError: Naming the dotted key of every violation
    """
    if not isinstance(data, dict):
        raise ConfigurationError("scenario must be a JSON object")
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(_describe(exc)) from exc


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Load and validate a scenario file.

    Raises:
        ConfigurationError: If the file is missing, malformed or invalid
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read scenario {path}: {exc}") from exc
    config = parse_scenario(parse_json(text))
    logger.debug("loaded scenario '%s' from %s", config.name, path)
    return config


def get_default_scenario() -> ScenarioConfig:
    """The shipped default scenario."""
    return load_scenario(DEFAULT_SCENARIO_PATH)


def with_seed(config: ScenarioConfig, seed: int) -> ScenarioConfig:
    """Copy of ``config`` with a different scenario seed.

    Raises:
        ConfigurationError: If the seed is not an unsigned 64-bit integer
    """
    if not 0 <= seed <= MAX_SEED:
        raise ConfigurationError(f"seed: {seed} is not an unsigned 64-bit integer")
    return config.model_copy(update={"seed": seed})
