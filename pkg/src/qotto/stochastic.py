"""Stochastic engine cycles, their violation statistics, and the measured daemon.

Bath contacts are full thermalisations: the post-contact state is a fresh
Bernoulli draw that does not remember the state going in.  Only the heat
drawn from the hot bath (and the strict violation flag) depend on how one
cycle chains into the next through the bath-2 exit state.

Sampling is chunked by cycle index, one child RNG stream per chunk derived
from (master seed, chunk index), and chunk summaries are integer counts
merged in index order.  A fixed seed therefore gives bit-identical results
for any worker count.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import BathSpec, GapSchedule, gibbs_upper

CHUNK_SIZE = 1 << 16
LN2 = math.log(2.0)


@dataclass(frozen=True)
class RngSeed:
    """Master seed; identical seed plus parameters means identical outputs."""

    seed: int

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


def _seed_value(seed) -> int:
    if isinstance(seed, RngSeed):
        return int(seed.seed)
    return int(RngSeed(int(seed)).seed)


def _valid_bit(value) -> int:
    bit = int(value)
    if bit not in (0, 1):
        raise ValueError(f"state bit must be 0 or 1, got {value!r}")
    return bit


@dataclass(frozen=True)
class CycleParams:
    """Transition probabilities of one four-stage cycle.

    p_excite is the upper-state probability after the bath-1 contact,
    p_deexcite_complement the upper-state probability remaining after the
    bath-2 contact.  Either supply them directly or derive both from bath
    temperatures via the Gibbs weights.
    """

    gaps: GapSchedule
    p_excite: float
    p_deexcite_complement: float

    def __post_init__(self):
        for name in ("p_excite", "p_deexcite_complement"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")

    @classmethod
    def from_baths(cls, gaps: GapSchedule, bath1: BathSpec, bath2: BathSpec) -> "CycleParams":
        return cls(
            gaps=gaps,
            p_excite=float(gibbs_upper(gaps.delta1, bath1)),
            p_deexcite_complement=float(gibbs_upper(gaps.delta2, bath2)),
        )

    @property
    def mean_work(self) -> float:
        """Expected extracted work per cycle."""
        return (self.p_excite - self.p_deexcite_complement) * (
            self.gaps.delta1 - self.gaps.delta2
        )

    @property
    def work_cycle_probability(self) -> float:
        """Probability that a single cycle produces positive work."""
        return self.p_excite * (1.0 - self.p_deexcite_complement)


@dataclass(frozen=True)
class TrajectoryRecord:
    """One sampled cycle with its exact energy bookkeeping.

    `violation` flags the strict second-law-violating event: the cycle
    started in the lower state, absorbed a full gap from bath 1 and dumped
    the smaller gap into bath 2, returning the system to where it began.
    """

    start_upper: int
    after_bath1_upper: int
    after_bath2_upper: int
    heat_from_bath1: float
    heat_to_bath2: float
    work_extracted: float
    violation: int


@dataclass(frozen=True)
class EnsembleStats:
    """Aggregates of a chained cycle ensemble.

    violation_frequency is the fraction of work-producing cycles, the
    events whose long-run rate is p_excite * (1 - p_deexcite_complement).
    """

    n_cycles: int
    mean_work: float
    stderr_work: float
    violation_frequency: float
    mean_heat1: float
    mean_heat2: float


@dataclass(frozen=True)
class DaemonLedger:
    """Outcome of a measurement-gated run, including the erasure charge."""

    attempts: int
    completed_cycles: int
    measurement_bits: int
    gross_work: float
    erasure_heat: float
    net_work: float
    erase_temperature: float


def _record(params: CycleParams, start: int, a1: int, a2: int) -> TrajectoryRecord:
    d1, d2 = params.gaps.delta1, params.gaps.delta2
    return TrajectoryRecord(
        start_upper=start,
        after_bath1_upper=a1,
        after_bath2_upper=a2,
        heat_from_bath1=d1 * (a1 - start),
        heat_to_bath2=d2 * (a1 - a2),
        work_extracted=(a1 - a2) * (d1 - d2),
        violation=int(start == 0 and a1 == 1 and a2 == 0),
    )


def run_cycle(rng: np.random.Generator, params: CycleParams, start_upper: int) -> TrajectoryRecord:
    """Sample one four-stage cycle from the given generator.

    Both contacts are memoryless: the post-contact states are independent
    Bernoulli draws at the configured probabilities.
    """
    start = _valid_bit(start_upper)
    a1 = int(rng.random() < params.p_excite)
    a2 = int(rng.random() < params.p_deexcite_complement)
    return _record(params, start, a1, a2)


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _chunk_sizes(n: int) -> list:
    sizes = [CHUNK_SIZE] * (n // CHUNK_SIZE)
    if n % CHUNK_SIZE:
        sizes.append(n % CHUNK_SIZE)
    return sizes


def _chunk_bits(seed: int, index: int, size: int, params: CycleParams):
    rng = _chunk_rng(seed, index)
    a1 = rng.random(size) < params.p_excite
    a2 = rng.random(size) < params.p_deexcite_complement
    return a1, a2


def _map_chunks(fn, n_chunks: int, n_workers: int) -> list:
    if n_workers <= 1 or n_chunks <= 1:
        return [fn(i) for i in range(n_chunks)]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(fn, range(n_chunks)))


def run_trajectories(seed, n_cycles: int, params: CycleParams, start_upper: int = 0) -> list:
    """Materialise the chained cycle records; intended for modest n_cycles.

    Uses the same per-chunk streams as run_ensemble, so aggregating these
    records reproduces the ensemble statistics exactly.
    """
    if n_cycles < 1:
        raise ValueError("n_cycles must be at least 1")
    s = _seed_value(seed)
    start = _valid_bit(start_upper)
    records = []
    for index, size in enumerate(_chunk_sizes(n_cycles)):
        a1, a2 = _chunk_bits(s, index, size, params)
        for k in range(size):
            records.append(_record(params, start, int(a1[k]), int(a2[k])))
            start = int(a2[k])
    return records


def run_ensemble(
    seed,
    n_cycles: int,
    params: CycleParams,
    start_upper: int = 0,
    n_workers: int = 1,
) -> EnsembleStats:
    """Chain n_cycles cycles (each start state is the previous bath-2 exit)
    and aggregate work, heats and the work-producing frequency.

    The first cycle starts from `start_upper` (lower state by default).
    Deterministic for a fixed seed and independent of n_workers.
    """
    if n_cycles < 1:
        raise ValueError("n_cycles must be at least 1")
    s = _seed_value(seed)
    start0 = _valid_bit(start_upper)
    sizes = _chunk_sizes(n_cycles)

    def summarise(index):
        a1, a2 = _chunk_bits(s, index, sizes[index], params)
        return (
            int(np.count_nonzero(a1)),
            int(np.count_nonzero(a2)),
            int(np.count_nonzero(a1 & ~a2)),
            int(np.count_nonzero(~a1 & a2)),
            int(a2[-1]),
        )

    chunks = _map_chunks(summarise, len(sizes), n_workers)
    sum_a1 = sum(c[0] for c in chunks)
    sum_a2 = sum(c[1] for c in chunks)
    n_plus = sum(c[2] for c in chunks)
    n_minus = sum(c[3] for c in chunks)
    last_a2 = chunks[-1][4]

    n = n_cycles
    d1, d2 = params.gaps.delta1, params.gaps.delta2
    dw = d1 - d2
    mean_work = (n_plus - n_minus) * dw / n
    if n > 1:
        sum_sq = (n_plus + n_minus) * dw * dw
        variance = max(sum_sq - n * mean_work * mean_work, 0.0) / (n - 1)
        stderr = math.sqrt(variance / n)
    else:
        stderr = 0.0
    # Sum of chained start states telescopes to start0 + sum(a2) - last a2.
    sum_start = start0 + sum_a2 - last_a2
    return EnsembleStats(
        n_cycles=n,
        mean_work=mean_work,
        stderr_work=stderr,
        violation_frequency=n_plus / n,
        mean_heat1=d1 * (sum_a1 - sum_start) / n,
        mean_heat2=d2 * (sum_a1 - sum_a2) / n,
    )


def work_cycle_flags(seed, n_cycles: int, params: CycleParams, n_workers: int = 1) -> np.ndarray:
    """Boolean flag per cycle marking the work-producing outcomes.

    Drawn from the same streams as run_ensemble, so the flag average equals
    the reported violation_frequency exactly.
    """
    if n_cycles < 1:
        raise ValueError("n_cycles must be at least 1")
    s = _seed_value(seed)
    sizes = _chunk_sizes(n_cycles)

    def flags(index):
        a1, a2 = _chunk_bits(s, index, sizes[index], params)
        return a1 & ~a2

    return np.concatenate(_map_chunks(flags, len(sizes), n_workers))


def violation_run_probability(p1: float, p2: float, n_c: int) -> float:
    """Probability of n_c consecutive work-producing cycles, (p1 (1 - p2))**n_c."""
    if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0):
        raise ValueError(f"probabilities must lie in [0, 1], got ({p1!r}, {p2!r})")
    if n_c < 1:
        raise ValueError(f"run length must be at least 1, got {n_c!r}")
    return (p1 * (1.0 - p2)) ** n_c


def observed_run_frequency(flags, n_c: int) -> tuple:
    """Empirical estimate of the n_c-cycle run probability from sampled flags.

    Splits the flag sequence into disjoint length-n_c blocks and returns
    (fraction of blocks that are all work-producing, number of blocks).
    The blocks are independent, so the fraction is an unbiased estimator of
    the product law with binomial error bars.
    """
    if n_c < 1:
        raise ValueError(f"run length must be at least 1, got {n_c!r}")
    arr = np.asarray(flags, dtype=bool)
    n_blocks = arr.size // n_c
    if n_blocks == 0:
        raise ValueError(f"need at least {n_c} flags, got {arr.size}")
    blocks = arr[: n_blocks * n_c].reshape(n_blocks, n_c)
    return float(np.count_nonzero(blocks.all(axis=1)) / n_blocks), n_blocks


def run_daemon(
    seed,
    n_attempts: int,
    params: CycleParams,
    erase_temperature: float,
    max_tries: int | None = None,
    n_workers: int = 1,
) -> DaemonLedger:
    """Measurement-gated engine: prepare lower, re-contact each bath until
    the wanted outcome is measured, and charge kT ln 2 per register bit.

    Every contact ends in one energy measurement and logs one bit, so the
    number of measurements per stage is geometric.  The measurements
    themselves are free; the whole cost sits in erasing the register at
    `erase_temperature` afterwards.  `max_tries` caps the retries of either
    stage, and a capped-out attempt is abandoned without completing a
    cycle; without a cap the boundary probabilities that would retry
    forever are rejected.
    """
    if erase_temperature <= 0.0:
        raise ValueError(f"erase temperature must be positive, got {erase_temperature!r}")
    if n_attempts < 1:
        raise ValueError("n_attempts must be at least 1")
    p_up = params.p_excite
    p_down = 1.0 - params.p_deexcite_complement
    if max_tries is None:
        if p_up <= 0.0 or p_down <= 0.0:
            raise ValueError(
                "daemon would retry forever at these probabilities; set max_tries"
            )
    elif max_tries < 1:
        raise ValueError(f"max_tries must be at least 1, got {max_tries!r}")

    s = _seed_value(seed)
    sizes = _chunk_sizes(n_attempts)

    def summarise(index):
        rng = _chunk_rng(s, index)
        m = sizes[index]
        tries1 = rng.geometric(p_up, m) if p_up > 0.0 else None
        tries2 = rng.geometric(p_down, m) if p_down > 0.0 else None
        if max_tries is None:
            bits = int(tries1.sum()) + int(tries2.sum())
            return m, bits
        cap = max_tries
        if tries1 is None:
            # Stage 1 can never succeed: every attempt burns cap bits.
            return 0, m * cap
        reached_stage3 = tries1 <= cap
        bits = int(np.minimum(tries1, cap).sum())
        if tries2 is None:
            bits += int(np.count_nonzero(reached_stage3)) * cap
            return 0, bits
        bits += int(np.minimum(tries2, cap)[reached_stage3].sum())
        completed = int(np.count_nonzero(reached_stage3 & (tries2 <= cap)))
        return completed, bits

    chunks = _map_chunks(summarise, len(sizes), n_workers)
    completed = sum(c[0] for c in chunks)
    bits = sum(c[1] for c in chunks)
    gross = completed * (params.gaps.delta1 - params.gaps.delta2)
    erasure = bits * erase_temperature * LN2
    return DaemonLedger(
        attempts=n_attempts,
        completed_cycles=completed,
        measurement_bits=bits,
        gross_work=gross,
        erasure_heat=erasure,
        net_work=gross - erasure,
        erase_temperature=erase_temperature,
    )
