"""Resonant two-level/single-mode cavity contacts and their work geometry.

A thermal single-mode field resonant with the gap drives the upper-state
occupation through an affine map p(t) = a(t) p0 + b(t) whose coefficients
follow from the photon-number average of cos^2(g sqrt(n+1) t).  The map's
fixed point reproduces the two-level Gibbs weight, its range gives the
reachable exit band for each entry occupation, and composing a hot and a
cold contact yields the engine's operating point, the per-cycle work
bound, and the contact-time optimisation.

Everything is pure; grid scans can be sharded by cell without coordination.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import BathSpec, GapSchedule, Occupation, gibbs_upper, net_extracted_work

# exp argument beyond which the mean photon number flushes to exactly zero
_EXP_ARG_MAX = 709.0

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CavityParams:
    """Single mode resonant with `delta`, thermal at `temperature`, coupled at `coupling`.

    trunc_eps bounds the probability mass dropped when the photon series is
    truncated; it must stay well below any tolerance the results feed into.
    """

    delta: float
    temperature: float
    coupling: float = 1.0
    trunc_eps: float = 1e-12

    def __post_init__(self):
        if not self.delta > 0.0:
            raise ValueError(f"gap must be positive, got {self.delta!r}")
        if not self.temperature > 0.0:
            raise ValueError(f"temperature must be positive, got {self.temperature!r}")
        if not self.coupling > 0.0:
            raise ValueError(f"coupling must be positive, got {self.coupling!r}")
        if not 0.0 < self.trunc_eps < 1e-6:
            raise ValueError(f"trunc_eps must lie in (0, 1e-6), got {self.trunc_eps!r}")

    @classmethod
    def from_mean_photon(
        cls,
        n_bar: float,
        delta: float = 1.0,
        coupling: float = 1.0,
        trunc_eps: float = 1e-12,
    ) -> "CavityParams":
        """Parameters whose thermal mode holds `n_bar` photons on average."""
        if not n_bar > 0.0:
            raise ValueError(f"mean photon number must be positive, got {n_bar!r}")
        return cls(delta, delta / math.log1p(1.0 / n_bar), coupling, trunc_eps)


def mean_photon(params: CavityParams) -> float:
    """Thermal mean photon number 1 / (exp(delta/kT) - 1).

    expm1 keeps small gap/temperature ratios accurate; very large ratios
    flush to exactly 0.0.
    """
    x = params.delta / params.temperature
    if x > _EXP_ARG_MAX:
        return 0.0
    return 1.0 / math.expm1(x)


def photon_dist(n: int, params: CavityParams) -> float:
    """Probability of finding exactly n photons in the thermal mode."""
    if n < 0:
        raise ValueError(f"photon number must be nonnegative, got {n!r}")
    nbar = mean_photon(params)
    ratio = nbar / (1.0 + nbar)
    if ratio == 0.0:
        return 1.0 if n == 0 else 0.0
    return (1.0 - ratio) * ratio**n


def truncation_level(n_bar: float, eps: float) -> int:
    """Smallest N whose geometric photon tail (n_bar/(1+n_bar))**(N+1) < eps."""
    if not eps > 0.0:
        raise ValueError(f"tolerance must be positive, got {eps!r}")
    if n_bar < 0.0:
        raise ValueError(f"mean photon number must be nonnegative, got {n_bar!r}")
    ratio = n_bar / (1.0 + n_bar)
    if ratio == 0.0:
        return 0
    n = max(0, math.ceil(math.log(eps) / math.log(ratio)) - 1)
    while ratio ** (n + 1) >= eps:
        n += 1
    while n > 0 and ratio**n < eps:
        n -= 1
    return n


_MAX_SERIES_TERMS = 10_000_000


def _photon_weights(params: CavityParams):
    nbar = mean_photon(params)
    n_max = truncation_level(nbar, params.trunc_eps)
    if n_max >= _MAX_SERIES_TERMS:
        raise ValueError(
            f"photon series needs {n_max + 1} terms at this temperature/gap "
            "ratio; lower the ratio or loosen trunc_eps"
        )
    n = np.arange(n_max + 1)
    ratio = nbar / (1.0 + nbar)
    weights = (1.0 - ratio) * ratio**n
    return weights, params.coupling * np.sqrt(n + 1.0)


def rabi_sum(t, params: CavityParams):
    """Photon-averaged cos^2 factor S(t) controlling the contact map.

    The truncated series undershoots the exact value by at most trunc_eps
    (the dropped tail is a sum of nonnegative terms bounded by the
    geometric tail mass).  Accepts a scalar or an array of times.
    """
    weights, omegas = _photon_weights(params)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0):
        raise ValueError("contact time must be nonnegative")
    phases = np.multiply.outer(omegas, t_arr)
    s = np.tensordot(weights, np.cos(phases) ** 2, axes=(0, 0))
    if t_arr.ndim == 0:
        return float(s)
    return s


def evolve_occupation(p0: float, t, params: CavityParams):
    """Exit occupation of a contact of duration t starting from p0."""
    p0 = float(Occupation(p0))
    nbar = mean_photon(params)
    s = rabi_sum(t, params)
    return ((1.0 + 2.0 * nbar) * p0 - nbar) / (1.0 + nbar) * s + nbar * (1.0 - p0) / (
        1.0 + nbar
    )


def occupation_bounds(p0: float, params: CavityParams) -> tuple:
    """Reachable exit-occupation interval (lo, hi) for entry occupation p0.

    One endpoint is p0 itself (t = 0), the other the fully mixed limit
    n_bar (1 - p0) / (1 + n_bar); which is larger flips at the Gibbs weight.
    """
    p0 = float(Occupation(p0))
    nbar = mean_photon(params)
    far = nbar * (1.0 - p0) / (1.0 + nbar)
    return (min(p0, far), max(p0, far))


@dataclass(frozen=True)
class AffineOccupationMap:
    """Occupation update p -> slope * p + offset for one cavity contact."""

    slope: float
    offset: float

    def __post_init__(self):
        # Affine maps are monotone between endpoints, so checking the images
        # of 0 and 1 suffices for [0, 1] -> [0, 1].
        if not 0.0 <= self.offset <= 1.0 or not 0.0 <= self.slope + self.offset <= 1.0:
            raise ValueError(
                f"map must send [0, 1] into itself, got slope={self.slope!r}, "
                f"offset={self.offset!r}"
            )

    def __call__(self, p: float) -> float:
        return self.slope * p + self.offset

    def fixed_point(self) -> float:
        """offset / (1 - slope); rejects the identity map."""
        if self.slope >= 1.0:
            raise ValueError("identity map has no unique fixed point")
        return self.offset / (1.0 - self.slope)


def _affine_coeffs(nbar: float, s):
    slope = ((1.0 + 2.0 * nbar) * s - nbar) / (1.0 + nbar)
    offset = nbar * (1.0 - s) / (1.0 + nbar)
    return slope, offset


def cavity_affine_map(t: float, params: CavityParams) -> AffineOccupationMap:
    """Affine coefficients of the contact of duration t."""
    slope, offset = _affine_coeffs(mean_photon(params), float(rabi_sum(t, params)))
    return AffineOccupationMap(slope=slope, offset=offset)


def cycle_fixed_point(
    map_hot: AffineOccupationMap, map_cold: AffineOccupationMap
) -> tuple:
    """Unique (p_a, p_b) with p_b = hot(p_a) and p_a = cold(p_b).

    Closed form for the fixed point of the composed affine contraction;
    iterating the two contacts from any start converges to it.  Rejects the
    degenerate cycle whose composition is the identity (both times zero).
    """
    a1, b1 = map_hot.slope, map_hot.offset
    a2, b2 = map_cold.slope, map_cold.offset
    if abs(a1 * a2) >= 1.0:
        raise ValueError("degenerate cycle: composed contact map is the identity")
    p_a = (a2 * b1 + b2) / (1.0 - a1 * a2)
    return p_a, a1 * p_a + b1


@dataclass(frozen=True)
class ReachableRegion:
    """Entry/exit occupation pairs reachable through one cavity.

    The closed set between the diagonal exit = entry and the boundary line
    exit = n_bar (1 - entry) / (1 + n_bar); the two cross at the Gibbs
    weight n_bar / (1 + 2 n_bar).
    """

    n_bar: float

    def __post_init__(self):
        if self.n_bar < 0.0:
            raise ValueError(f"mean photon number must be nonnegative, got {self.n_bar!r}")

    @classmethod
    def from_params(cls, params: CavityParams) -> "ReachableRegion":
        return cls(mean_photon(params))

    @property
    def gibbs_point(self) -> float:
        return self.n_bar / (1.0 + 2.0 * self.n_bar)

    def boundary_exit(self, entry):
        """Exit occupation on the far boundary line for the given entry."""
        return self.n_bar * (1.0 - np.asarray(entry, dtype=float)) / (1.0 + self.n_bar)

    def contains(self, entry: float, exit_p: float, tol: float = 0.0) -> bool:
        far = float(self.boundary_exit(entry))
        lo, hi = min(entry, far), max(entry, far)
        return lo - tol <= exit_p <= hi + tol

    def upper_polygon(self) -> tuple:
        """Triangle of pairs with exit above entry (useful for heating)."""
        q = self.gibbs_point
        return ((0.0, 0.0), (q, q), (0.0, float(self.boundary_exit(0.0))))

    def lower_polygon(self) -> tuple:
        """Triangle of pairs with exit below entry (useful for cooling)."""
        q = self.gibbs_point
        return ((q, q), (1.0, 1.0), (1.0, float(self.boundary_exit(1.0))))

    def lower_polygon_reflected(self) -> tuple:
        """The cooling triangle mirrored across the diagonal."""
        return tuple((y, x) for (x, y) in self.lower_polygon())


@dataclass(frozen=True)
class CycleOperatingPoint:
    """Self-consistent occupations at the cavity handoffs of a closed cycle.

    p_a enters the hot cavity and exits the cold one; p_b exits the hot
    cavity and enters the cold one.
    """

    p_a: float
    p_b: float
    tau1: float
    tau2: float


@dataclass(frozen=True)
class ContactTimeOptimum:
    """Best contact-time pair found, its work, and the reachable-band bound."""

    point: CycleOperatingPoint
    work: float
    bound: float

    @property
    def tau1(self) -> float:
        return self.point.tau1

    @property
    def tau2(self) -> float:
        return self.point.tau2

    @property
    def gap_to_bound(self) -> float:
        return self.bound - self.work


def _require_matched_gaps(hot: CavityParams, cold: CavityParams, gaps: GapSchedule):
    if hot.delta != gaps.delta1 or cold.delta != gaps.delta2:
        raise ValueError(
            "cavity gaps must match the schedule: hot carries delta1 and cold delta2"
        )


def bound_operating_point(hot: CavityParams, cold: CavityParams) -> tuple:
    """Crossing (p_a, p_b) of the two boundary lines.

    This is the corner of the feasible set where the hot contact heats as
    far as its band allows and the cold contact cools as far as its band
    allows; p_b > p_a exactly when the hot mode is the more populated one.
    """
    nb1 = mean_photon(hot)
    nb2 = mean_photon(cold)
    r1 = nb1 / (1.0 + nb1)
    r2 = nb2 / (1.0 + nb2)
    denom = 1.0 - r1 * r2
    return r2 * (1.0 - r1) / denom, r1 * (1.0 - r2) / denom


def max_cycle_work_bound(hot: CavityParams, cold: CavityParams, gaps: GapSchedule) -> float:
    """Largest per-cycle work allowed by the two reachable bands.

    Maximises (p_b - p_a)(delta1 - delta2) subject to p_b lying inside the
    hot band above p_a and p_a inside the cold band below p_b.  The
    objective is linear, so the optimum sits at the boundary-line crossing;
    when the bands do not overlap the bound is zero.
    """
    _require_matched_gaps(hot, cold, gaps)
    p_a, p_b = bound_operating_point(hot, cold)
    return max(0.0, (p_b - p_a) * (gaps.delta1 - gaps.delta2))


def thermal_baseline_work(bath1: BathSpec, bath2: BathSpec, gaps: GapSchedule) -> float:
    """Work per cycle when both contacts fully thermalise."""
    return net_extracted_work(
        gibbs_upper(gaps.delta1, bath1), gibbs_upper(gaps.delta2, bath2), gaps
    )


def _golden_section_max(f, lo: float, hi: float, tol: float) -> tuple:
    """Maximise a unimodal scalar function on [lo, hi] to width tol."""
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    return x, f(x)


def optimize_contact_times(
    hot: CavityParams,
    cold: CavityParams,
    gaps: GapSchedule,
    t_max: float | None = None,
    grid: int = 512,
    refine_tol: float | None = None,
) -> ContactTimeOptimum:
    """Search contact times (tau1, tau2) for the most extractable work.

    S(t) has quasi-periodic collapse/revival structure, so a dense grid does
    the global exploration and coordinate-wise golden-section only polishes
    the best cell.  The returned work never exceeds the reachable-band
    bound, and the polish never falls below the coarse-grid optimum.
    """
    if grid < 2:
        raise ValueError(f"time grid needs at least 2 points per axis, got {grid!r}")
    if t_max is not None and not t_max > 0.0:
        raise ValueError(f"t_max must be positive, got {t_max!r}")
    _require_matched_gaps(hot, cold, gaps)
    dw = gaps.delta1 - gaps.delta2
    t1_max = (50.0 / hot.coupling) if t_max is None else t_max
    t2_max = (50.0 / cold.coupling) if t_max is None else t_max
    ts1 = np.linspace(0.0, t1_max, grid)
    ts2 = np.linspace(0.0, t2_max, grid)
    a1, b1 = _affine_coeffs(mean_photon(hot), np.asarray(rabi_sum(ts1, hot)))
    a2, b2 = _affine_coeffs(mean_photon(cold), np.asarray(rabi_sum(ts2, cold)))

    denom = 1.0 - np.multiply.outer(a1, a2)
    with np.errstate(divide="ignore", invalid="ignore"):
        p_a = (np.multiply.outer(b1, a2) + b2[np.newaxis, :]) / denom
        p_b = a1[:, np.newaxis] * p_a + b1[:, np.newaxis]
        work = (p_b - p_a) * dw
    work = np.where(denom > 1e-15, work, -np.inf)
    i, j = np.unravel_index(int(np.argmax(work)), work.shape)
    if not np.isfinite(work[i, j]):
        raise RuntimeError("every sampled time pair composes to the identity map")

    def work_at(t1, t2):
        m1 = cavity_affine_map(t1, hot)
        m2 = cavity_affine_map(t2, cold)
        if abs(m1.slope * m2.slope) >= 1.0 - 1e-15:
            return 0.0
        pa, pb = cycle_fixed_point(m1, m2)
        return (pb - pa) * dw

    best = (float(work[i, j]), float(ts1[i]), float(ts2[j]))
    tol1 = (1e-6 / hot.coupling) if refine_tol is None else refine_tol
    tol2 = (1e-6 / cold.coupling) if refine_tol is None else refine_tol
    lo1, hi1 = ts1[max(i - 1, 0)], ts1[min(i + 1, grid - 1)]
    lo2, hi2 = ts2[max(j - 1, 0)], ts2[min(j + 1, grid - 1)]
    t1, t2 = best[1], best[2]
    for _ in range(3):
        t1, w1 = _golden_section_max(lambda x: work_at(x, t2), lo1, hi1, tol1)
        if w1 > best[0]:
            best = (w1, t1, t2)
        t2, w2 = _golden_section_max(lambda y: work_at(t1, y), lo2, hi2, tol2)
        if w2 > best[0]:
            best = (w2, t1, t2)

    w_best, t1_best, t2_best = best
    m1 = cavity_affine_map(t1_best, hot)
    m2 = cavity_affine_map(t2_best, cold)
    if abs(m1.slope * m2.slope) >= 1.0 - 1e-15:
        pa_best, pb_best = float("nan"), float("nan")
    else:
        pa_best, pb_best = cycle_fixed_point(m1, m2)
    return ContactTimeOptimum(
        point=CycleOperatingPoint(p_a=pa_best, p_b=pb_best, tau1=t1_best, tau2=t2_best),
        work=w_best,
        bound=max_cycle_work_bound(hot, cold, gaps),
    )


@dataclass(frozen=True)
class RegionGeometry:
    """Plain coordinates for the entry/exit-probability figure.

    Consumers draw these; nothing downstream should recompute geometry.
    Coordinates live in the unit square with x the entry occupation and y
    the exit occupation.
    """

    n_bar_hot: float
    n_bar_cold: float
    gibbs_hot: float
    gibbs_cold: float
    hot_boundary: tuple
    cold_boundary: tuple
    hot_upper_polygon: tuple
    cold_lower_polygon: tuple
    cold_reflected_polygon: tuple
    operating_point: tuple | None
    work_arrow: tuple | None
    overlap_polygon: tuple
    overlap_area: float


def _polygon_area(points) -> float:
    area = 0.0
    m = len(points)
    for k in range(m):
        x1, y1 = points[k]
        x2, y2 = points[(k + 1) % m]
        area += x1 * y2 - x2 * y1
    return abs(area) / 2.0


def region_geometry(hot: CavityParams, cold: CavityParams) -> RegionGeometry:
    """Assemble every coordinate the region figure and summary need.

    The overlap of the hot heating triangle with the mirrored cold cooling
    triangle is again a triangle: two Gibbs points on the diagonal plus the
    boundary-line crossing.  It is empty unless the hot mode is the more
    populated one, which is exactly the positive-work condition.
    """
    region_hot = ReachableRegion.from_params(hot)
    region_cold = ReachableRegion.from_params(cold)
    p_a, p_b = bound_operating_point(hot, cold)
    if p_b > p_a:
        operating_point = (p_a, p_b)
        work_arrow = ((p_a, p_a), (p_a, p_b))
        overlap = (
            (region_cold.gibbs_point, region_cold.gibbs_point),
            (region_hot.gibbs_point, region_hot.gibbs_point),
            (p_a, p_b),
        )
        overlap_area = _polygon_area(overlap)
    else:
        operating_point = None
        work_arrow = None
        overlap = ()
        overlap_area = 0.0
    return RegionGeometry(
        n_bar_hot=region_hot.n_bar,
        n_bar_cold=region_cold.n_bar,
        gibbs_hot=region_hot.gibbs_point,
        gibbs_cold=region_cold.gibbs_point,
        hot_boundary=(
            (0.0, float(region_hot.boundary_exit(0.0))),
            (1.0, float(region_hot.boundary_exit(1.0))),
        ),
        cold_boundary=(
            (0.0, float(region_cold.boundary_exit(0.0))),
            (1.0, float(region_cold.boundary_exit(1.0))),
        ),
        hot_upper_polygon=region_hot.upper_polygon(),
        cold_lower_polygon=region_cold.lower_polygon(),
        cold_reflected_polygon=region_cold.lower_polygon_reflected(),
        operating_point=operating_point,
        work_arrow=work_arrow,
        overlap_polygon=overlap,
        overlap_area=overlap_area,
    )
