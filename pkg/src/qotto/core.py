"""Two-level engine thermodynamics in units where k = hbar = 1.

The working medium keeps its lower level pinned at energy zero, so a gap
value fixes the whole spectrum and the internal energy is the upper-state
probability times the gap.  Bath contacts move probability at a fixed gap
(pure heat); adiabatic gap changes move the upper level at a fixed
probability (pure work).  The public API reports work as positive when
extracted by the engine, while StrokeRecord keeps the signed on-system
bookkeeping so that stroke sums close the first law exactly.

All functions here are pure and safe to call from any number of workers.
"""

import math
from dataclasses import dataclass


class Occupation(float):
    """Upper-state occupation probability, validated to lie in [0, 1]."""

    __slots__ = ()

    def __new__(cls, value):
        v = float(value)
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"occupation probability must lie in [0, 1], got {value!r}")
        return super().__new__(cls, v)

    @property
    def p_upper(self) -> float:
        return float(self)


@dataclass(frozen=True)
class GapSchedule:
    """The two energy gaps of a cycle: hot contact at delta1, cold at delta2."""

    delta1: float
    delta2: float

    def __post_init__(self):
        if not (self.delta1 > self.delta2 > 0.0):
            raise ValueError(
                "gap schedule requires delta1 > delta2 > 0, "
                f"got ({self.delta1!r}, {self.delta2!r})"
            )


@dataclass(frozen=True)
class BathSpec:
    """Heat bath characterised by kT > 0 in energy units (k absorbed)."""

    temperature: float

    def __post_init__(self):
        if not self.temperature > 0.0:
            raise ValueError(f"bath temperature must be positive, got {self.temperature!r}")


@dataclass(frozen=True)
class StrokeRecord:
    """Heat absorbed by and work done on the system during a single stroke."""

    heat_in: float
    work_on: float


def internal_energy(p: float, delta: float) -> float:
    """Mean energy p * delta, with the lower level fixed at zero."""
    if delta < 0.0:
        raise ValueError(f"gap must be nonnegative, got {delta!r}")
    return float(Occupation(p)) * delta


def stroke_heat(delta: float, p_before: float, p_after: float) -> float:
    """Heat absorbed by the system while its occupation relaxes at fixed gap."""
    if delta < 0.0:
        raise ValueError(f"gap must be nonnegative, got {delta!r}")
    return delta * (float(Occupation(p_after)) - float(Occupation(p_before)))


def stroke_work_on(p: float, delta_before: float, delta_after: float) -> float:
    """Work done on the system while the gap moves at fixed occupation."""
    if delta_before < 0.0 or delta_after < 0.0:
        raise ValueError(
            f"gaps must be nonnegative, got ({delta_before!r}, {delta_after!r})"
        )
    return float(Occupation(p)) * (delta_after - delta_before)


def thermal_stroke(delta: float, p_before: float, p_after: float) -> StrokeRecord:
    """Bath-contact stroke: pure heat, zero work."""
    return StrokeRecord(heat_in=stroke_heat(delta, p_before, p_after), work_on=0.0)


def adiabatic_stroke(p: float, delta_before: float, delta_after: float) -> StrokeRecord:
    """Gap-change stroke: pure work, zero heat."""
    return StrokeRecord(heat_in=0.0, work_on=stroke_work_on(p, delta_before, delta_after))


def gibbs_upper(delta: float, bath: BathSpec) -> Occupation:
    """Thermal upper-state probability 1 / (1 + exp(delta / kT)).

    Evaluated as exp(-x) / (1 + exp(-x)) with x = delta / kT >= 0, so a
    nearly frozen bath underflows smoothly to exactly 0.0 instead of
    overflowing the exponential.
    """
    if delta < 0.0:
        raise ValueError(f"gap must be nonnegative, got {delta!r}")
    e = math.exp(-delta / bath.temperature)
    return Occupation(e / (1.0 + e))


def net_extracted_work(p1: float, p2: float, gaps: GapSchedule) -> float:
    """Work done by the engine per cycle, (p1 - p2) * (delta1 - delta2).

    p1 is the occupation leaving the hot contact and p2 the one leaving the
    cold contact.  The work done on the system is the negative of this.
    """
    return (float(Occupation(p1)) - float(Occupation(p2))) * (gaps.delta1 - gaps.delta2)


def extraction_condition(bath1: BathSpec, bath2: BathSpec, gaps: GapSchedule) -> bool:
    """True when thermalised cycles extract positive work: T1 > T2 * delta1/delta2.

    Strictly greater; at the threshold the mean work is exactly zero.
    """
    return bath1.temperature > bath2.temperature * (gaps.delta1 / gaps.delta2)


def otto_efficiency(gaps: GapSchedule) -> float:
    """Extracted work over hot-contact heat, 1 - delta2/delta1.

    A pure gap ratio; no bath temperature enters.
    """
    return 1.0 - gaps.delta2 / gaps.delta1


def carnot_efficiency(bath1: BathSpec, bath2: BathSpec) -> float:
    """Ideal-reservoir efficiency 1 - T2/T1; requires T1 > T2."""
    if not bath1.temperature > bath2.temperature:
        raise ValueError(
            "carnot efficiency requires T1 > T2, got "
            f"T1={bath1.temperature!r}, T2={bath2.temperature!r}"
        )
    return 1.0 - bath2.temperature / bath1.temperature
