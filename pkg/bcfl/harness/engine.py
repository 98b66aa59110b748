"""End-to-end orchestration of a scenario.

Round pipeline: admission, task offloading, local training, attack
injection, privacy noise, compression, Sybil identities, defense filtering,
validation, consensus, aggregation, anomaly rollback, block append, reward
allocation, delay accounting, scheduler learning, metrics.
"""

import hashlib
import logging
import math
import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from bcfl.adversary.attacks import SYBIL_ID_BASE, poison, spawn_sybils
from bcfl.adversary.security import ScenarioFeatures, detection_rate, security_score
from bcfl.config import (
    HierarchyTopology,
    P2PTopology,
    PbftConsensus,
    PoflConsensus,
    PoqConsensus,
    PowConsensus,
    ScenarioConfig,
    SignFlipAttack,
    SybilAttack,
)
from bcfl.consensus import (
    ConsensusCosts,
    ConsensusOutcome,
    pbft_commit,
    pofl_round,
    poq_select,
    pow_outcome,
    select_committee,
)
from bcfl.core.data import SyntheticTask, dataset_digest
from bcfl.core.encoding import UpdateRecord, update_digest
from bcfl.core.rng import Stream, substream
from bcfl.core.runlog import RunLog, UpdateLogEntry
from bcfl.core.types import ClientDataset, ModelParams, RoundMetrics
from bcfl.errors import BCFLError, RoundError
from bcfl.harness.compliance import compliance_score
from bcfl.harness.results import RunResult, RunSummary, mean_delay
from bcfl.learning import (
    UpdateVector,
    apply_dp,
    compress_topk,
    decompress,
    evaluate,
    fedavg,
    foolsgold,
    local_train,
    multi_krum,
)
from bcfl.ledger import (
    Chain,
    ParticipantRegistry,
    TrustModel,
    admit_participant,
    allocate_rewards,
    validate_chain,
)
from bcfl.netsim import (
    ROOT,
    DelayEvent,
    EventQueue,
    OffloadNetwork,
    RoundDelayModel,
    Tier,
    Topology,
    TopologyKind,
    breakdown_from_events,
    build_topology,
    client_node,
    round_messages,
)
from bcfl.netsim.network import NetworkState
from bcfl.scheduler import (
    ACTION_TIER,
    DelayEnvironment,
    OffloadAgent,
    OffloadDecision,
    RewardParams,
    StateDiscretizer,
    reward,
    system_state_for,
)

logger = logging.getLogger(__name__)


@contextmanager
def _phase(round_index: int, phase: str) -> Iterator[None]:
    """Attach round and phase to any simulator error raised inside."""
    try:
        yield
    except RoundError:
        raise
    except BCFLError as exc:
        raise RoundError(round_index, phase, exc) from exc


@dataclass(frozen=True)
class _Placement:
    tier: Tier
    seconds: float
    decision: OffloadDecision | None


def make_topology(config: ScenarioConfig) -> Topology:
    """Topology of a scenario, drawn from its topology substream."""
    topo = config.topology
    return build_topology(
        TopologyKind(topo.kind),
        config.n_clients,
        branching=topo.branching if isinstance(topo, HierarchyTopology) else 2,
        fanout=topo.fanout if isinstance(topo, P2PTopology) else 1,
        rng=substream(config.seed, Stream.TOPOLOGY),
    )


def client_credential(config: ScenarioConfig, client_id: int) -> str:
    orgs = config.trust.organizations
    return f"{orgs[client_id % len(orgs)]}/client-{client_id}/token-{client_id}"


def sybil_credential(config: ScenarioConfig, attacker: int, sybil_id: int) -> str:
    """Sybils claim the attacker's organization with fresh subjects."""
    orgs = config.trust.organizations
    return f"{orgs[attacker % len(orgs)]}/sybil-{sybil_id}/token-{sybil_id}"


class ScenarioRunner:
    """Runs one scenario round by round over virtual time.

    Attributes:
        config: Scenario being run
        global_model: Current global model
        accuracy: Shared-validation accuracy of the current global model
        chain: Ledger, None when the scenario keeps none
        run_log: Per-update audit trail
        queue: Virtual-time event queue carrying all delay accounting
    """

    def __init__(self, config: ScenarioConfig):
        self.config = config
        cfg = config
        data = cfg.data

        with _phase(0, "setup"):
            task = SyntheticTask.generate(cfg.seed, data.input_dim, data.classes, data.mean_scale)
            self.datasets = task.client_datasets(
                cfg.n_clients, cfg.dirichlet_alpha, data.samples_per_client
            )
            self.validation = task.validation_set(data.validation_samples)
            self.topology = make_topology(cfg)

            # Participants
            self.credentials = {i: client_credential(cfg, i) for i in range(cfg.n_clients)}
            authorized = set(cfg.trust.authorized)
            if cfg.trust.model is TrustModel.PERMISSIONED and cfg.trust.authorize_clients:
                authorized.update(self.credentials.values())
            self.registry = ParticipantRegistry(
                cfg.trust.model, frozenset(cfg.trust.consortium), frozenset(authorized)
            )
            self.malicious: frozenset[int] = frozenset()
            if cfg.n_malicious:
                rng = substream(cfg.attack_seed, Stream.ATTACK)
                chosen = rng.choice(cfg.n_clients, size=cfg.n_malicious, replace=False)
                self.malicious = frozenset(int(i) for i in chosen)

            # Ledger
            self.chain: Chain | None = None
            if cfg.ledger.enabled:
                difficulty = (
                    cfg.consensus.difficulty if isinstance(cfg.consensus, PowConsensus) else 0
                )
                self.chain = Chain.genesis(difficulty)
            cal = cfg.delay_calibration
            self.costs = ConsensusCosts(
                overhead_s=cal.consensus_overhead_s,
                message_seconds=cal.message_seconds,
                hash_seconds=cal.hash_seconds,
                eval_seconds=cal.eval_seconds,
            )

            # Network and delay model
            upload_bits = float(cfg.update_size_bits)
            if cfg.defenses.topk is not None:
                dim = data.input_dim * data.classes + data.classes
                # indices and values
                upload_bits *= min(1.0, 2 * cfg.defenses.topk.k / dim)
            self.network = OffloadNetwork(cal, cfg.n_clients, cfg.seed)
            self.delay_model = RoundDelayModel(
                cal,
                self.topology,
                update_bits=float(cfg.update_size_bits),
                upload_bits=upload_bits,
                star_link=getattr(cfg.topology, "link", "access"),
            )

            # Offloading scheduler
            self.reward_params = RewardParams(**cfg.rl.reward.model_dump())
            self.agent: OffloadAgent | None = None
            self.pretrain_rewards: list[float] = []
            if cfg.rl.enabled:
                discretizer = StateDiscretizer(
                    cfg.rl.utilization_thresholds, cfg.rl.size_thresholds
                )
                self.agent = OffloadAgent(
                    self.reward_params, substream(cfg.seed, Stream.RL, 1), discretizer
                )
                env = DelayEnvironment(self.network, self.reward_params, discretizer, cfg.seed)
                self.pretrain_rewards = self.agent.train(env, cfg.rl.pretrain_episodes)

            self.global_model = ModelParams.zeros(data.input_dim, data.classes)
            self.initial_accuracy = evaluate(self.global_model, self.validation).accuracy

        self.accuracy = self.initial_accuracy
        self.histories: dict[int, np.ndarray] = {}
        self.pooled: ClientDataset | None = None
        self.queue = EventQueue()
        self.events: list[DelayEvent] = []
        self.metrics: list[RoundMetrics] = []
        self.rewards: list[dict[int, float]] = []
        self.mining_seconds: list[float] = []
        attack = cfg.attack
        self.run_log = RunLog(
            attack_enabled=attack is not None,
            sybil_attack=attack is not None and isinstance(attack.kind, SybilAttack),
            defense_enabled=cfg.defenses.krum is not None or cfg.defenses.foolsgold,
        )

    # --- run ---------------------------------------------------------------

    def run(self) -> RunResult:
        """Execute every round and summarize."""
        cfg = self.config
        started = time.perf_counter()
        logger.info(
            "running scenario '%s': %d clients, %d rounds, %s topology",
            cfg.name,
            cfg.n_clients,
            cfg.rounds,
            cfg.topology.kind,
        )
        for round_index in range(1, cfg.rounds + 1):
            if cfg.training == "centralized":
                metrics = self._centralized_round(round_index)
            else:
                metrics = self._federated_round(round_index)
            self.metrics.append(metrics)
            logger.info(
                "round %d/%d: accuracy %.4f, delay %.3f s, rejected %d",
                round_index,
                cfg.rounds,
                metrics.global_accuracy,
                metrics.delay.total,
                metrics.updates_rejected,
            )
        return self._finish(time.perf_counter() - started)

    def _finish(self, runtime: float) -> RunResult:
        cfg = self.config
        validation = validate_chain(self.chain) if self.chain is not None else None
        ledger_valid = validation.ok if validation is not None else None
        self.run_log.ledger_valid = bool(ledger_valid)
        if validation is not None and not validation.ok:
            logger.warning(
                "ledger invalid at block %s: %s", validation.first_invalid_index, validation.reason
            )

        features = ScenarioFeatures(
            ledger_present=cfg.ledger.enabled,
            ledger_valid=bool(ledger_valid),
            consensus_validation=cfg.ledger.enabled and cfg.validate_updates,
            robust_aggregation=cfg.defenses.krum is not None or cfg.defenses.foolsgold,
            dp_noise=cfg.defenses.dp is not None,
            rl_anomaly=cfg.rl.enabled and cfg.rl.anomaly_rollback,
            profile=cfg.security_profile,
        )
        with _phase(cfg.rounds, "summary"):
            score = security_score(features)

        summary = RunSummary(
            name=cfg.name,
            rounds=tuple(self.metrics),
            initial_accuracy=self.initial_accuracy,
            final_accuracy=self.accuracy,
            mean_delay=mean_delay(self.metrics),
            security_score=score,
            compliance_score=compliance_score(self.run_log),
            blocks_mined=sum(m.blocks_mined for m in self.metrics),
            chain_length=len(self.chain) if self.chain is not None else 0,
            ledger_valid=ledger_valid,
            tip_hash=self.chain.tip_hash.hex() if self.chain is not None else None,
            dataset_digest=dataset_digest(self.datasets),
            detection=detection_rate(self.run_log),
            rewards_paid=math.fsum(sum(r.values()) for r in self.rewards),
            mean_mining_seconds=(
                math.fsum(self.mining_seconds) / len(self.mining_seconds)
                if self.mining_seconds
                else 0.0
            ),
            runtime_seconds=runtime,
        )
        return RunResult(
            config=cfg,
            summary=summary,
            metrics=self.metrics,
            chain=self.chain,
            validation=validation,
            run_log=self.run_log,
            events=self.events,
            qtable=self.agent.q if self.agent is not None else None,
            pretrain_rewards=self.pretrain_rewards,
            rewards=self.rewards,
        )

    # --- shared phases -----------------------------------------------------

    def _admit(self, round_index: int) -> dict[int, UpdateLogEntry]:
        entries = {}
        for i, credential in self.credentials.items():
            admission = admit_participant(self.config.trust.model, credential, self.registry)
            entries[i] = UpdateLogEntry(
                round=round_index,
                client_id=i,
                malicious=i in self.malicious,
                admitted=admission.admitted,
                reason=admission.reason,
            )
        return entries

    def _place_tasks(self, net_state: NetworkState) -> list[_Placement]:
        """Offloading decision and task delay of every client."""
        placements = []
        for i in range(self.config.n_clients):
            task = self.network.task_for(i, net_state)
            decision = None
            if self.agent is not None:
                decision = self.agent.decide(task, system_state_for(self.network, i, net_state))
                tier = ACTION_TIER[decision.action]
            else:
                tier = Tier(self.config.offload)
            seconds = self.network.task_delay(task, tier, net_state)
            placements.append(_Placement(tier, seconds, decision))
        return placements

    def _task_events(self, round_index: int, placements: list[_Placement]) -> list[DelayEvent]:
        share = 1.0 / self.config.n_clients
        return [
            DelayEvent(round_index, f"task@{p.tier}", Tier.CLIENT, client_node(i), p.seconds, share)
            for i, p in enumerate(placements)
        ]

    def _maybe_rollback(self, candidate: ModelParams) -> tuple[ModelParams, float, bool]:
        """Discard an aggregate that lowers validation accuracy beyond tolerance."""
        accuracy = evaluate(candidate, self.validation).accuracy
        rl = self.config.rl
        if rl.anomaly_rollback and accuracy < self.accuracy - rl.anomaly_tolerance:
            logger.info(
                "rolling back aggregate: accuracy %.4f < %.4f", accuracy, self.accuracy
            )
            return self.global_model, self.accuracy, True
        return candidate, accuracy, False

    def _account(self, groups: list[list[DelayEvent]]) -> list[DelayEvent]:
        """Schedule phase groups back to back and process them; returns the round's events."""
        at = self.queue.clock
        for group in groups:
            for event in group:
                self.queue.schedule(event, at)
            at += breakdown_from_events(group).total
        processed = [entry.payload for entry in self.queue.run_until(at)]
        self.events.extend(processed)
        return processed

    def _learn_offloading(self, placements: list[_Placement], gain: float) -> None:
        if self.agent is None:
            return
        for i, placement in enumerate(placements):
            decision = placement.decision
            assert decision is not None
            following = placements[i + 1].decision if i + 1 < len(placements) else None
            self.agent.learn(
                decision.state,
                decision.action,
                reward(gain, placement.seconds, self.reward_params),
                following.state if following is not None else None,
            )

    # --- federated round ---------------------------------------------------

    def _federated_round(self, r: int) -> RoundMetrics:
        cfg = self.config
        n = cfg.n_clients
        accuracy_before = self.accuracy

        with _phase(r, "admission"):
            entries = self._admit(r)
        with _phase(r, "offload"):
            placements = self._place_tasks(self.network.draw_state(r))

        samples = {i: self.datasets[i].n for i in range(n)}
        credentials = dict(self.credentials)
        updates: dict[int, UpdateVector] = {}

        with _phase(r, "training"):
            for i in range(n):
                if entries[i].admitted:
                    updates[i] = local_train(
                        self.global_model,
                        self.datasets[i],
                        cfg.local_epochs,
                        cfg.lr,
                        substream(cfg.seed, Stream.TRAINING, r, i),
                        client_id=i,
                        round_index=r,
                    )

        with _phase(r, "attack"):
            if cfg.attack is not None:
                kind = cfg.attack.kind
                # sybil attackers submit sign-flipped updates and clone them
                flip = SignFlipAttack(scale=1.0) if isinstance(kind, SybilAttack) else kind
                for i in sorted(self.malicious & updates.keys()):
                    rng = substream(cfg.attack_seed, Stream.ATTACK, r, i)
                    updates[i] = poison(updates[i], flip, rng)
                    entries[i].poisoned = True

        with _phase(r, "privacy"):
            dp = cfg.defenses.dp
            if dp is not None:
                for i in sorted(updates.keys() - self.malicious):
                    rng = substream(cfg.seed, Stream.DP, r, i)
                    updates[i] = apply_dp(updates[i], dp.clip, dp.sigma, rng)
                    entries[i].dp_applied = True

        with _phase(r, "compression"):
            topk = cfg.defenses.topk
            if topk is not None:
                for i in sorted(updates):
                    sparse = compress_topk(updates[i], topk.k)
                    updates[i] = updates[i].replace_delta(decompress(sparse))

        with _phase(r, "sybil"):
            kind = cfg.attack.kind if cfg.attack is not None else None
            if isinstance(kind, SybilAttack):
                for i in sorted(self.malicious & updates.keys()):
                    sybils = spawn_sybils(
                        updates[i],
                        kind.clones,
                        kind.jitter_sigma,
                        substream(cfg.attack_seed, Stream.SYBIL, r, i),
                        first_id=SYBIL_ID_BASE + i * kind.clones,
                    )
                    for sybil in sybils:
                        sid = sybil.client_id
                        credentials[sid] = sybil_credential(cfg, i, sid)
                        admission = admit_participant(
                            cfg.trust.model, credentials[sid], self.registry
                        )
                        entries[sid] = UpdateLogEntry(
                            round=r,
                            client_id=sid,
                            synthetic=True,
                            malicious=True,
                            poisoned=True,
                            admitted=admission.admitted,
                            reason=admission.reason,
                        )
                        if admission.admitted:
                            updates[sid] = sybil
                            samples[sid] = samples[i]

        candidates = [updates[i] for i in sorted(updates)]

        with _phase(r, "defense"):
            weights = self._defend(candidates, samples, entries)

        with _phase(r, "validation"):
            validation_acc: dict[int, float] = {}
            needs_scores = isinstance(cfg.consensus, PoqConsensus | PoflConsensus)
            if cfg.validate_updates or (cfg.ledger.enabled and needs_scores):
                for update in candidates:
                    model = self.global_model.apply(update.delta)
                    validation_acc[update.client_id] = evaluate(model, self.validation).accuracy
                    entries[update.client_id].validation_recorded = cfg.validate_updates

        with _phase(r, "aggregation"):
            accepted = [updates[i] for i in sorted(weights)]
            if accepted:
                aggregate = fedavg(accepted, [weights[u.client_id] for u in accepted])
            else:
                aggregate = np.zeros(self.global_model.dim)

        # Client and relay phases precede consensus
        client_events = self._task_events(r, placements)
        share = 1.0 / n
        training_seconds = {
            i: self.delay_model.training_seconds(self.datasets[i].n, cfg.local_epochs)
            for i in range(n)
        }
        for i in range(n):
            if entries[i].admitted:
                node = client_node(i)
                client_events.append(
                    DelayEvent(r, "training", Tier.CLIENT, node, training_seconds[i], share)
                )
                client_events.append(
                    DelayEvent(
                        r, "upload", Tier.CLIENT, node, self.delay_model.upload_seconds(i), share
                    )
                )
        relay_events = self.delay_model.relay_events(r)
        consensus_start = (
            self.queue.clock + breakdown_from_events([*client_events, *relay_events]).total
        )

        outcome: ConsensusOutcome | None = None
        with _phase(r, "consensus"):
            if self.chain is not None:
                outcome = self._consensus(r, accepted, aggregate, validation_acc, entries)
                if not outcome.committed:
                    logger.info("round %d: proposal not committed, aggregate discarded", r)
                    for i in weights:
                        entries[i].reason = "proposal not committed"
                    weights = {}
                    accepted = []
                    aggregate = np.zeros(self.global_model.dim)

        with _phase(r, "rollback"):
            candidate = self.global_model.apply(aggregate) if accepted else self.global_model
            new_model, accuracy_after, rolled_back = self._maybe_rollback(candidate)

        for i, weight in weights.items():
            entries[i].accepted = True
            entries[i].aggregation_weight = weight

        payouts: dict[int, float] = {}
        blocks = 0
        with _phase(r, "ledger"):
            if self.chain is not None:
                records = [
                    UpdateRecord(
                        client_id=i,
                        round=r,
                        update_digest=updates[i].digest(),
                        reported_l2_norm=updates[i].l2_norm,
                        validation_accuracy=(
                            validation_acc.get(i, 0.0) if cfg.validate_updates else 0.0
                        ),
                        credential=credentials[i],
                    )
                    for i in sorted(weights)
                ]
                mined = self.chain.mine_next(records, round(consensus_start * 1000))
                self.mining_seconds.append(mined.seconds)
                blocks = 1
                for i in weights:
                    entries[i].on_ledger = True
                if isinstance(cfg.consensus, PowConsensus):
                    outcome = pow_outcome(
                        self._miner(entries), mined.trials, self.topology.edge_count, self.costs
                    )
                logger.debug(
                    "round %d: block %d with %d records after %d trials",
                    r,
                    mined.block.index,
                    len(records),
                    mined.trials,
                )
                payouts = allocate_rewards(
                    records, accuracy_before, accuracy_after, cfg.ledger.reward_pool
                )
        self.rewards.append(payouts)

        consensus_events = []
        if outcome is not None:
            consensus_events.append(
                DelayEvent(
                    r,
                    f"consensus@{cfg.consensus.kind}",
                    Tier.FOG,
                    outcome.leader or ROOT,
                    outcome.consensus_virtual_delay,
                )
            )
        round_events = self._account(
            [client_events, relay_events, consensus_events, self.delay_model.cloud_events(r)]
        )
        breakdown = breakdown_from_events(round_events)

        gain = accuracy_after - accuracy_before
        self._learn_offloading(placements, gain)

        self.global_model = new_model
        self.accuracy = accuracy_after
        for i in sorted(entries):
            self.run_log.add(entries[i])

        messages = round_messages(self.topology)
        consensus_messages = outcome.consensus_messages if outcome is not None else 0
        return RoundMetrics(
            round=r,
            global_accuracy=accuracy_after,
            delay=breakdown,
            messages_root=messages.messages_root,
            messages_total=messages.messages_total + consensus_messages,
            blocks_mined=blocks,
            updates_rejected=sum(1 for e in entries.values() if not e.accepted),
            reward=reward(gain, breakdown.total, self.reward_params),
            rolled_back=rolled_back,
            leader=outcome.leader if outcome is not None else "",
        )

    def _defend(
        self,
        candidates: list[UpdateVector],
        samples: dict[int, int],
        entries: dict[int, UpdateLogEntry],
    ) -> dict[int, float]:
        """Aggregation weight of every surviving update, normalized to 1."""
        defenses = self.config.defenses
        accepted = {u.client_id for u in candidates}
        if defenses.krum is not None and candidates:
            select = min(defenses.krum.select, len(candidates))
            chosen = multi_krum(candidates, defenses.krum.f, select)
            accepted = {u.client_id for u in chosen}
            for update in candidates:
                if update.client_id not in accepted:
                    entries[update.client_id].reason = "rejected by krum"

        similarity = {u.client_id: 1.0 for u in candidates}
        if defenses.foolsgold and candidates:
            for update in candidates:
                previous = self.histories.get(update.client_id)
                self.histories[update.client_id] = (
                    update.delta.copy() if previous is None else previous + update.delta
                )
            scores = foolsgold([self.histories[u.client_id] for u in candidates])
            similarity = {u.client_id: float(s) for u, s in zip(candidates, scores, strict=True)}

        raw = {i: samples[i] * similarity[i] for i in sorted(accepted)}
        for i, value in raw.items():
            if value <= 0:
                entries[i].reason = "zero foolsgold weight"
        total = math.fsum(raw.values())
        if total <= 0:
            return {}
        return {i: value / total for i, value in raw.items() if value > 0}

    def _consensus(
        self,
        r: int,
        accepted: list[UpdateVector],
        aggregate: np.ndarray,
        validation_acc: dict[int, float],
        entries: dict[int, UpdateLogEntry],
    ) -> ConsensusOutcome:
        """Non-PoW consensus on the round's proposal; PoW is resolved by mining."""
        cfg = self.config
        consensus = cfg.consensus
        empty = ConsensusOutcome(ROOT, True, 0, self.costs.delay(0))
        match consensus:
            case PoqConsensus():
                if not accepted:
                    return empty
                scores = {u.client_id: validation_acc[u.client_id] for u in accepted}
                return poq_select(scores, self.costs)
            case PoflConsensus():
                if not accepted:
                    return empty
                return pofl_round(accepted, self.validation, self.global_model, self.costs)
            case PbftConsensus(committee=size, f=f):
                members = [i for i in range(cfg.n_clients) if entries[i].admitted]
                committee = select_committee(
                    members, size, substream(cfg.seed, Stream.COMMITTEE, r)
                )
                proposal = update_digest(0, r, aggregate)
                conflict = hashlib.sha256(b"conflict" + proposal).digest()
                votes = {m: conflict if m in self.malicious else proposal for m in committee}
                return pbft_commit(proposal, committee, votes, f, self.costs)
        # PoW: placeholder until the block is mined
        return empty

    def _miner(self, entries: dict[int, UpdateLogEntry]) -> str:
        if self.topology.root is not None:
            return self.topology.root
        admitted = [i for i in range(self.config.n_clients) if entries[i].admitted]
        return client_node(admitted[0]) if admitted else client_node(0)

    # --- centralized round -------------------------------------------------

    def _centralized_round(self, r: int) -> RoundMetrics:
        cfg = self.config
        n = cfg.n_clients
        accuracy_before = self.accuracy

        with _phase(r, "admission"):
            entries = self._admit(r)
        with _phase(r, "offload"):
            placements = self._place_tasks(self.network.draw_state(r))

        members = [i for i in range(n) if entries[i].admitted]
        with _phase(r, "training"):
            if self.pooled is None:
                self.pooled = ClientDataset.pool([self.datasets[i] for i in members])
            update = local_train(
                self.global_model,
                self.pooled,
                cfg.local_epochs,
                cfg.lr,
                substream(cfg.seed, Stream.TRAINING, r, n),
                client_id=n,
                round_index=r,
            )
        with _phase(r, "rollback"):
            new_model, accuracy_after, rolled_back = self._maybe_rollback(
                self.global_model.apply(update.delta)
            )

        total_samples = sum(self.datasets[i].n for i in members)
        for i in members:
            entries[i].accepted = True
            entries[i].aggregation_weight = self.datasets[i].n / total_samples

        client_events = self._task_events(r, placements)
        if r == 1:
            share = 1.0 / n
            upload = self.delay_model.raw_upload_seconds(cfg.data.samples_per_client)
            client_events.extend(
                DelayEvent(r, "raw_upload", Tier.CLIENT, client_node(i), upload, share)
                for i in members
            )
        training = self.delay_model.central_training_seconds(total_samples, cfg.local_epochs)
        cloud_events = [DelayEvent(r, "central_training", Tier.CLOUD, ROOT, training)]
        breakdown = breakdown_from_events(self._account([client_events, cloud_events]))

        gain = accuracy_after - accuracy_before
        self._learn_offloading(placements, gain)
        self.global_model = new_model
        self.accuracy = accuracy_after
        self.rewards.append({})
        for i in sorted(entries):
            self.run_log.add(entries[i])

        uploads = len(members) if r == 1 else 0
        return RoundMetrics(
            round=r,
            global_accuracy=accuracy_after,
            delay=breakdown,
            messages_root=uploads,
            messages_total=uploads,
            blocks_mined=0,
            updates_rejected=n - len(members),
            reward=reward(gain, breakdown.total, self.reward_params),
            rolled_back=rolled_back,
            leader=ROOT,
        )


def run_scenario(config: ScenarioConfig) -> RunResult:
    """Run a validated scenario; deterministic given the config.

    Raises:
        RoundError: Naming the round and phase of any failure
    """
    return ScenarioRunner(config).run()
