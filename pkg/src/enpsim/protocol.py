"""Recorder/tag state machines and the per-epoch simulation loop.

An epoch is one sync period: a flooding-sync window (no radio traffic
modeled inside it) followed by back-to-back query rounds.  Each round is one
probe emission plus ``slot_count`` reply slots.  All recorder pairs share the
identical schedule; the two recorders of a pair transmit byte-identical
probes simultaneously, and every tag that decodes a probe answers in the
slot its registration number hashes to.  Reception is resolved independently
at every receiver under the capture rule.

The per-epoch loop computes positions directly from the epoch-start fleet
snapshot at each schedule event, so ground-truth sampling and decode
decisions see bit-identical geometry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frames import PROBE_KIND, ProbeFrame, ReplyFrame
from .metrics import RecordEntry
from .mobility import Fleet, RoadGeometry, advance, positions_at
from .radio import RadioParams, ReceptionOutcome, Verdict, capture_verdicts
from .slot_hash import HashParams, round_seed, slot_for


@dataclass(frozen=True)
class TimingParams:
    """Schedule constants, all in microseconds."""

    glossy_period_us: int = 512_000
    sync_window_us: int = 20_000
    probe_len_us: int = 2_000
    slot_len_us: int = 2_000

    def __post_init__(self) -> None:
        for name in ("glossy_period_us", "sync_window_us", "probe_len_us", "slot_len_us"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.sync_window_us >= self.glossy_period_us:
            raise ValueError("sync_window_us must be smaller than glossy_period_us")


@dataclass(frozen=True)
class EpochSchedule:
    """Absolute event times of one epoch; rounds are packed back-to-back
    after the sync window and the whole schedule fits within the period."""

    epoch_index: int
    epoch_start_us: int
    glossy_period_us: int
    sync_window_us: int
    probe_len_us: int
    slot_len_us: int
    slot_count: int
    round_count: int

    @property
    def round_len_us(self) -> int:
        return self.probe_len_us + self.slot_count * self.slot_len_us

    def round_start_us(self, round_index: int) -> int:
        return self.epoch_start_us + self.sync_window_us + round_index * self.round_len_us

    def probe_tx_time_us(self, round_index: int) -> int:
        return self.round_start_us(round_index)

    def slot_start_us(self, round_index: int, slot: int) -> int:
        return self.round_start_us(round_index) + self.probe_len_us + slot * self.slot_len_us

    def sample_times_us(self) -> np.ndarray:
        """Every probe and slot start time of the epoch, ascending."""
        times = []
        for r in range(self.round_count):
            times.append(self.probe_tx_time_us(r))
            times.extend(self.slot_start_us(r, s) for s in range(self.slot_count))
        return np.asarray(times, dtype=np.int64)


def build_epoch_schedule(
    timing: TimingParams, slot_count: int, epoch_index: int
) -> EpochSchedule:
    """Pack as many whole rounds as fit between the sync window and the end
    of the period.  Rejects configurations where not even one round fits."""
    if slot_count < 1:
        raise ValueError(f"slot_count must be >= 1, got {slot_count}")
    round_len = timing.probe_len_us + slot_count * timing.slot_len_us
    round_count = (timing.glossy_period_us - timing.sync_window_us) // round_len
    if round_count < 1:
        raise ValueError(
            "no room for a single round: "
            f"period {timing.glossy_period_us} us, sync {timing.sync_window_us} us, "
            f"round length {round_len} us"
        )
    return EpochSchedule(
        epoch_index=epoch_index,
        epoch_start_us=epoch_index * timing.glossy_period_us,
        glossy_period_us=timing.glossy_period_us,
        sync_window_us=timing.sync_window_us,
        probe_len_us=timing.probe_len_us,
        slot_len_us=timing.slot_len_us,
        slot_count=slot_count,
        round_count=round_count,
    )


@dataclass
class VrState:
    """One roadside recorder: fixed position, per-epoch record set."""

    vr_id: str
    pair_id: int
    side: int
    position: tuple[float, float]
    records: dict[int, RecordEntry] = field(default_factory=dict)
    malformed_frames: int = 0


@dataclass
class EnpState:
    """One in-vehicle tag; remembers the probe it decoded this round."""

    vrn: int
    last_probe: ProbeFrame | None = None


def enp_on_probe(
    enp: EnpState, probe: ProbeFrame, schedule: EpochSchedule, round_index: int
) -> tuple[int, int]:
    """Plan the tag's reply after it decoded ``probe``: hash the registration
    number to a slot and return (slot, absolute tx time).  A tag that decodes
    no probe in a round simply is not asked and stays silent."""
    enp.last_probe = probe
    slot = slot_for(enp.vrn, probe.hash_params())
    return slot, schedule.slot_start_us(round_index, slot)


def vr_on_slot_outcome(
    vr: VrState, outcome: ReceptionOutcome, epoch: int, round_index: int, slot: int
) -> VrState:
    """Fold one reply-slot verdict into the recorder's epoch records.

    Decoded replies are recorded once per registration number per epoch;
    collisions and silence change nothing.  A probe frame showing up in a
    reply slot is malformed traffic: discarded and counted."""
    if outcome.verdict is Verdict.RECEIVED:
        assert outcome.frame is not None
        if outcome.frame[0] == PROBE_KIND:
            vr.malformed_frames += 1
            return vr
        reply = ReplyFrame.decode(outcome.frame)
        vr.records.setdefault(
            reply.vrn,
            RecordEntry(vrn=reply.vrn, vr_id=vr.vr_id, epoch=epoch, round=round_index, slot=slot),
        )
    return vr


def make_vr_states(geometry: RoadGeometry) -> list[VrState]:
    """Recorders in pair-major order, sides named a/b."""
    states = []
    for pair in range(geometry.n_pairs):
        for side, pos in enumerate(geometry.vr_positions(pair)):
            states.append(
                VrState(
                    vr_id=f"vr{pair}{'ab'[side]}",
                    pair_id=pair,
                    side=side,
                    position=pos,
                )
            )
    return states


class World:
    """Mutable simulation state: the fleet plus recorder and channel context.

    The fleet's composition (identities, speeds) is fixed for the world's
    lifetime; reply slots are therefore hashed once up front."""

    def __init__(
        self,
        fleet: Fleet,
        geometry: RoadGeometry,
        radio: RadioParams,
        hash_params: HashParams,
        timing: TimingParams,
        rng: np.random.Generator | None = None,
    ):
        if radio.shadowing_sigma_db > 0 and rng is None:
            raise ValueError("rng is required when shadowing is on")
        self.fleet = fleet
        self.geometry = geometry
        self.radio = radio
        self.hash_params = hash_params
        self.timing = timing
        self.rng = rng
        self.vr_states = make_vr_states(geometry)
        self.enp_slots = np.array(
            [slot_for(int(v), hash_params) for v in fleet.vrn], dtype=np.intp
        )
        # recorder coordinates as (2P,) column arrays for the batch paths
        self._vr_x = np.array([vr.position[0] for vr in self.vr_states])
        self._vr_y = np.array([vr.position[1] for vr in self.vr_states])


@dataclass
class EpochResult:
    """Everything one epoch produced: the schedule it ran on, the fleet
    snapshot it started from, and each recorder's deduplicated records."""

    epoch_index: int
    schedule: EpochSchedule
    fleet_start: Fleet
    records_by_vr: dict[str, dict[int, RecordEntry]]
    events: list[str] | None = None

    def pair_record_sets(self, pair_id: int) -> tuple[set[int], set[int]]:
        a = self.records_by_vr[f"vr{pair_id}a"]
        b = self.records_by_vr[f"vr{pair_id}b"]
        return set(a), set(b)


def _link_powers_dbm(
    road_x: np.ndarray,
    y: np.ndarray,
    rx_x: np.ndarray,
    rx_y: np.ndarray,
    radio: RadioParams,
    tx_power_dbm: float | None = None,
) -> np.ndarray:
    """Zero-shadow received power for every (receiver, source) link.

    ``road_x``/``y`` are source coordinates (V,), ``rx_x``/``rx_y`` receiver
    coordinates (R,); result is (R, V)."""
    tx = radio.tx_power_dbm if tx_power_dbm is None else tx_power_dbm
    d = np.hypot(road_x[None, :] - rx_x[:, None], y[None, :] - rx_y[:, None])
    return tx - radio.pl0_db - 10.0 * radio.exponent * np.log10(np.maximum(d, 1.0))


def run_epoch(world: World, epoch_index: int, record_events: bool = False) -> EpochResult:
    """Run one full epoch and advance the world's fleet to its end.

    Per round: the fleet is moved to the probe time and every tag resolves
    probe reception against all pairs' concurrent probes (pair replicas
    merged, cross-pair probes contending); then, slot by slot, the fleet is
    moved to the slot start and all replies scheduled there are resolved
    independently at every recorder.  Event ordering is fully determined by
    the schedule.
    """
    sched = build_epoch_schedule(world.timing, world.hash_params.slot_count, epoch_index)
    fleet = world.fleet
    geom = world.geometry
    radio = world.radio
    rng = world.rng
    sigma = radio.shadowing_sigma_db
    n_pairs = geom.n_pairs
    n_enp = len(fleet)
    events: list[str] | None = [] if record_events else None

    for vr in world.vr_states:
        vr.records = {}

    def log(time_us, event, node, pair, rnd, slot, vrn):
        events.append(
            f"{time_us}\t{event}\t{node}\t{pair}\t{epoch_index}\t{rnd}\t{slot}\t{vrn}"
        )

    for r in range(sched.round_count):
        if world.hash_params.reseed_per_round:
            seed_r = round_seed(world.hash_params.seed, epoch_index, r)
            params_r = HashParams(
                hash_id=world.hash_params.hash_id,
                seed=seed_r,
                slot_count=sched.slot_count,
            )
            enp_slots = np.array(
                [slot_for(int(v), params_r) for v in fleet.vrn], dtype=np.intp
            )
        else:
            seed_r = world.hash_params.seed
            enp_slots = world.enp_slots
        probes = [
            ProbeFrame(
                pair_id=p,
                epoch=epoch_index,
                round=r,
                slot_count=sched.slot_count,
                hash_id=world.hash_params.hash_id,
                seed=seed_r,
            )
            for p in range(n_pairs)
        ]

        # ---- probe phase: every tag resolves the concurrent probes ----
        t_probe = sched.probe_tx_time_us(r)
        dt = (t_probe - sched.epoch_start_us) * 1e-6
        road_x = geom.road_x(positions_at(fleet, dt))

        if events is not None:
            for vr in world.vr_states:
                log(t_probe, "PROBE", vr.vr_id, vr.pair_id, r, "-", "-")

        decoded_pair = np.full(n_enp, -1, dtype=np.intp)
        if n_enp and n_pairs:
            link_pw = _link_powers_dbm(
                road_x, fleet.y, world._vr_x, world._vr_y, radio,
                tx_power_dbm=radio.probe_tx_power_dbm,
            )
            if sigma > 0:
                link_pw = link_pw + rng.normal(0.0, sigma, size=link_pw.shape)
            # the two recorders of a pair send byte-identical probes:
            # non-destructive replicas, strongest link counts
            group_pw = link_pw.reshape(n_pairs, 2, n_enp).max(axis=1)
            codes, winners = capture_verdicts(group_pw, radio)
            decoded_pair = np.where(codes == Verdict.RECEIVED, winners, -1)
            if events is not None:
                for i in range(n_enp):
                    if decoded_pair[i] >= 0:
                        log(t_probe, "RX", f"enp{i}", int(decoded_pair[i]), r, "-", "-")
                    elif codes[i] == Verdict.COLLISION:
                        log(t_probe, "COLL", f"enp{i}", "-", r, "-", "-")

        # ---- reply slots: tags that decoded a probe answer in their slot ----
        repliers = np.flatnonzero(decoded_pair >= 0)
        by_slot: dict[int, np.ndarray] = {}
        if repliers.size:
            slots = enp_slots[repliers]
            for s in np.unique(slots):
                by_slot[int(s)] = repliers[slots == s]

        for s in sorted(by_slot):
            idx = by_slot[s]
            t_slot = sched.slot_start_us(r, s)
            dt = (t_slot - sched.epoch_start_us) * 1e-6
            tx_road_x = geom.road_x(
                np.mod(fleet.x[idx] + fleet.speed_mps[idx] * dt, fleet.ring_length_m)
            )
            if events is not None:
                for i in idx:
                    log(t_slot, "REPLY", f"enp{i}", "-", r, s, int(fleet.vrn[i]))

            pw = _link_powers_dbm(tx_road_x, fleet.y[idx], world._vr_x, world._vr_y, radio)
            if sigma > 0:
                pw = pw + rng.normal(0.0, sigma, size=pw.shape)
            codes, winners = capture_verdicts(pw.T, radio)
            for j, vr in enumerate(world.vr_states):
                if codes[j] == Verdict.RECEIVED:
                    vi = int(idx[winners[j]])
                    vrn = int(fleet.vrn[vi])
                    vr.records.setdefault(
                        vrn,
                        RecordEntry(vrn=vrn, vr_id=vr.vr_id, epoch=epoch_index, round=r, slot=s),
                    )
                    if events is not None:
                        log(t_slot, "RX", vr.vr_id, vr.pair_id, r, s, vrn)
                elif codes[j] == Verdict.COLLISION and events is not None:
                    log(t_slot, "COLL", vr.vr_id, vr.pair_id, r, s, "-")

    world.fleet = advance(fleet, sched.glossy_period_us * 1e-6)
    return EpochResult(
        epoch_index=epoch_index,
        schedule=sched,
        fleet_start=fleet,
        records_by_vr={vr.vr_id: dict(vr.records) for vr in world.vr_states},
        events=events,
    )
