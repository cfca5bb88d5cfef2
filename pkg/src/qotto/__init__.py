"""Two-level quantum Otto engine toolkit.

Analytic stroke bookkeeping, stochastic cycle ensembles with a
measurement-gated daemon and its erasure ledger, exact thermal-cavity
contact dynamics with reachable-band work bounds, and a config-driven
experiment CLI.
"""

from .cavity import (
    AffineOccupationMap,
    CavityParams,
    ContactTimeOptimum,
    CycleOperatingPoint,
    ReachableRegion,
    RegionGeometry,
    bound_operating_point,
    cavity_affine_map,
    cycle_fixed_point,
    evolve_occupation,
    max_cycle_work_bound,
    mean_photon,
    occupation_bounds,
    optimize_contact_times,
    photon_dist,
    rabi_sum,
    region_geometry,
    thermal_baseline_work,
    truncation_level,
)
from .core import (
    BathSpec,
    GapSchedule,
    Occupation,
    StrokeRecord,
    adiabatic_stroke,
    carnot_efficiency,
    extraction_condition,
    gibbs_upper,
    internal_energy,
    net_extracted_work,
    otto_efficiency,
    stroke_heat,
    stroke_work_on,
    thermal_stroke,
)
from .stochastic import (
    CycleParams,
    DaemonLedger,
    EnsembleStats,
    RngSeed,
    TrajectoryRecord,
    observed_run_frequency,
    run_cycle,
    run_daemon,
    run_ensemble,
    run_trajectories,
    violation_run_probability,
    work_cycle_flags,
)

__version__ = "0.1.0"
