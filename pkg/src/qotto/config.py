"""TOML experiment configurations with strict schemas.

One experiment per file.  Unknown keys are hard errors so a typo cannot
silently fall back to a default and skew the physics; value-level physics
violations (such as delta2 >= delta1) surface as ValueError from the
domain types and are reported separately from schema problems.
"""

from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .cavity import CavityParams, max_cycle_work_bound, thermal_baseline_work
from .core import (
    BathSpec,
    GapSchedule,
    carnot_efficiency,
    extraction_condition,
    otto_efficiency,
)

KINDS = ("thermal", "montecarlo", "daemon", "cavity", "region", "sweep")

AXIS_PARAMETERS = ("T1", "T2", "delta1", "delta2")


class ConfigError(Exception):
    """Schema-level configuration problem; the message names the field."""


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    lo: float
    hi: float
    steps: int

    def values(self) -> list:
        step = (self.hi - self.lo) / (self.steps - 1)
        return [self.lo + k * step for k in range(self.steps)]


@dataclass
class ExperimentConfig:
    """Validated experiment description; unset fields do not apply to the kind."""

    kind: str
    csv_name: str
    svg_name: str | None = None
    gaps: GapSchedule | None = None
    bath1: BathSpec | None = None
    bath2: BathSpec | None = None
    probabilities: tuple | None = None
    seed: int | None = None
    n_cycles: int | None = None
    n_attempts: int | None = None
    erase_temperature: float | None = None
    cavity: CavityParams | None = None
    p0: float | None = None
    t_max: float | None = None
    n_times: int | None = None
    hot_cavity: CavityParams | None = None
    cold_cavity: CavityParams | None = None
    observable: str | None = None
    axes: tuple = ()
    sweep_base: dict = field(default_factory=dict)


@dataclass(frozen=True)
class _Observable:
    needs_baths: bool
    fn: object


def _bound_from_baths(gaps, bath1, bath2):
    hot = CavityParams(delta=gaps.delta1, temperature=bath1.temperature)
    cold = CavityParams(delta=gaps.delta2, temperature=bath2.temperature)
    return max_cycle_work_bound(hot, cold, gaps)


OBSERVABLES = {
    "thermal_work": _Observable(True, lambda gaps, b1, b2: thermal_baseline_work(b1, b2, gaps)),
    "efficiency": _Observable(False, lambda gaps, b1, b2: otto_efficiency(gaps)),
    "carnot_efficiency": _Observable(True, lambda gaps, b1, b2: carnot_efficiency(b1, b2)),
    "extraction_condition": _Observable(True, lambda gaps, b1, b2: extraction_condition(b1, b2, gaps)),
    "max_work_bound": _Observable(True, _bound_from_baths),
}


def _take(table: dict, key: str, path: str, required: bool = True, default=None):
    if key not in table:
        if required:
            raise ConfigError(f"{_join(path, key)}: required key is missing")
        return default
    return table.pop(key)


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _as_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    return value


def _as_str(value, path: str) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"{path}: expected a string, got {value!r}")
    return value


def _as_table(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a table")
    return dict(value)


def _unknown_key_error(table: dict, path: str):
    extras = sorted(table)
    if extras:
        raise ConfigError(f"{_join(path, extras[0])}: unknown key")


def _gaps_from(data: dict) -> GapSchedule:
    table = _as_table(_take(data, "gaps", ""), "gaps")
    delta1 = _as_number(_take(table, "delta1", "gaps"), "gaps.delta1")
    delta2 = _as_number(_take(table, "delta2", "gaps"), "gaps.delta2")
    _unknown_key_error(table, "gaps")
    return GapSchedule(delta1, delta2)


def _bath_from(data: dict, key: str) -> BathSpec:
    table = _as_table(_take(data, key, ""), key)
    temperature = _as_number(_take(table, "temperature", key), f"{key}.temperature")
    _unknown_key_error(table, key)
    return BathSpec(temperature)


def _seed_from(data: dict) -> int | None:
    if "seed" not in data:
        return None
    seed = _as_int(data.pop("seed"), "seed")
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed: must be a 64-bit unsigned integer, got {seed}")
    return seed


def _count_from(data: dict, key: str) -> int:
    count = _as_int(_take(data, key, ""), key)
    if count < 1:
        raise ConfigError(f"{key}: must be at least 1, got {count}")
    return count


def _output_names(data: dict, kind: str) -> tuple:
    csv_name = f"{kind}.csv"
    svg_name = f"{kind}.svg" if kind in ("region", "cavity") else None
    if "output" in data:
        table = _as_table(data.pop("output"), "output")
        if "csv" in table:
            csv_name = _as_str(table.pop("csv"), "output.csv")
        if "svg" in table:
            if svg_name is None:
                raise ConfigError(f"output.svg: the {kind} experiment writes no figure")
            svg_name = _as_str(table.pop("svg"), "output.svg")
        _unknown_key_error(table, "output")
    return csv_name, svg_name


def _cavity_from(table: dict, path: str, delta: float) -> CavityParams:
    has_temperature = "temperature" in table
    has_n_bar = "n_bar" in table
    if has_temperature == has_n_bar:
        raise ConfigError(f"{path}: give exactly one of temperature or n_bar")
    coupling = _as_number(_take(table, "coupling", path, required=False, default=1.0),
                          f"{path}.coupling")
    trunc_eps = _as_number(_take(table, "trunc_eps", path, required=False, default=1e-12),
                           f"{path}.trunc_eps")
    if has_n_bar:
        n_bar = _as_number(table.pop("n_bar"), f"{path}.n_bar")
        _unknown_key_error(table, path)
        return CavityParams.from_mean_photon(n_bar, delta=delta, coupling=coupling,
                                             trunc_eps=trunc_eps)
    temperature = _as_number(table.pop("temperature"), f"{path}.temperature")
    _unknown_key_error(table, path)
    return CavityParams(delta, temperature, coupling, trunc_eps)


def _stochastic_sources(data: dict, config: ExperimentConfig):
    has_baths = "bath1" in data or "bath2" in data
    has_probs = "probabilities" in data
    if has_baths and has_probs:
        raise ConfigError("probabilities: give either bath tables or probabilities, not both")
    if not has_baths and not has_probs:
        raise ConfigError("bath1: transition source is missing (bath tables or probabilities)")
    if has_baths:
        config.bath1 = _bath_from(data, "bath1")
        config.bath2 = _bath_from(data, "bath2")
    else:
        table = _as_table(data.pop("probabilities"), "probabilities")
        p_up = _as_number(_take(table, "p_excite", "probabilities"), "probabilities.p_excite")
        p_stay = _as_number(
            _take(table, "p_deexcite_complement", "probabilities"),
            "probabilities.p_deexcite_complement",
        )
        _unknown_key_error(table, "probabilities")
        config.probabilities = (p_up, p_stay)


def _load_thermal(data: dict, config: ExperimentConfig):
    config.gaps = _gaps_from(data)
    config.bath1 = _bath_from(data, "bath1")
    config.bath2 = _bath_from(data, "bath2")


def _load_montecarlo(data: dict, config: ExperimentConfig):
    config.gaps = _gaps_from(data)
    config.seed = _seed_from(data)
    config.n_cycles = _count_from(data, "n_cycles")
    _stochastic_sources(data, config)


def _load_daemon(data: dict, config: ExperimentConfig):
    config.gaps = _gaps_from(data)
    config.seed = _seed_from(data)
    config.n_attempts = _count_from(data, "n_attempts")
    _stochastic_sources(data, config)
    if "erase_temperature" in data:
        config.erase_temperature = _as_number(data.pop("erase_temperature"), "erase_temperature")
    elif config.bath2 is not None:
        config.erase_temperature = config.bath2.temperature
    else:
        raise ConfigError(
            "erase_temperature: required when probabilities are given directly"
        )


def _load_cavity(data: dict, config: ExperimentConfig):
    table = _as_table(_take(data, "cavity", ""), "cavity")
    delta = _as_number(_take(table, "delta", "cavity"), "cavity.delta")
    config.cavity = _cavity_from(table, "cavity", delta)
    config.p0 = _as_number(_take(data, "p0", ""), "p0")
    if "t_max" in data:
        t_max = _as_number(data.pop("t_max"), "t_max")
        if t_max <= 0.0:
            raise ConfigError(f"t_max: must be positive, got {t_max}")
        config.t_max = t_max
    config.n_times = _as_int(_take(data, "n_times", "", required=False, default=501), "n_times")
    if config.n_times < 2:
        raise ConfigError(f"n_times: must be at least 2, got {config.n_times}")


def _load_region(data: dict, config: ExperimentConfig):
    config.gaps = _gaps_from(data)
    table1 = _as_table(_take(data, "cavity1", ""), "cavity1")
    table2 = _as_table(_take(data, "cavity2", ""), "cavity2")
    config.hot_cavity = _cavity_from(table1, "cavity1", config.gaps.delta1)
    config.cold_cavity = _cavity_from(table2, "cavity2", config.gaps.delta2)


def _load_sweep(data: dict, config: ExperimentConfig):
    name = _as_str(_take(data, "observable", ""), "observable")
    if name not in OBSERVABLES:
        known = ", ".join(sorted(OBSERVABLES))
        raise ConfigError(f"observable: unknown observable {name!r} (expected one of {known})")
    config.observable = name
    observable = OBSERVABLES[name]

    raw_axes = _take(data, "axes", "")
    if not isinstance(raw_axes, list) or not raw_axes:
        raise ConfigError("axes: expected an array of one or two axis tables")
    if len(raw_axes) > 2:
        raise ConfigError(f"axes: at most two sweep axes are supported, got {len(raw_axes)}")
    axes = []
    for idx, raw_axis in enumerate(raw_axes):
        path = f"axes[{idx}]"
        table = _as_table(raw_axis, path)
        parameter = _as_str(_take(table, "parameter", path), f"{path}.parameter")
        if parameter not in AXIS_PARAMETERS:
            known = ", ".join(AXIS_PARAMETERS)
            raise ConfigError(
                f"{path}.parameter: cannot sweep {parameter!r} (expected one of {known}); "
                "derived quantities are not sweepable"
            )
        if not observable.needs_baths and parameter in ("T1", "T2"):
            raise ConfigError(
                f"{path}.parameter: observable {name!r} does not depend on {parameter}"
            )
        lo = _as_number(_take(table, "min", path), f"{path}.min")
        hi = _as_number(_take(table, "max", path), f"{path}.max")
        steps = _as_int(_take(table, "steps", path), f"{path}.steps")
        _unknown_key_error(table, path)
        if steps < 2:
            raise ConfigError(f"{path}.steps: need at least 2 steps, got {steps}")
        if not hi > lo:
            raise ConfigError(f"{path}.max: axis must have positive width, got [{lo}, {hi}]")
        axes.append(SweepAxis(parameter, lo, hi, steps))
    swept = [axis.parameter for axis in axes]
    if len(set(swept)) != len(swept):
        raise ConfigError("axes: each parameter may be swept only once")
    config.axes = tuple(axes)

    base = {}
    gaps_table = _as_table(_take(data, "gaps", ""), "gaps")
    for key in ("delta1", "delta2"):
        if key in swept:
            if key in gaps_table:
                raise ConfigError(f"gaps.{key}: conflicts with the sweep axis over {key}")
        else:
            base[key] = _as_number(_take(gaps_table, key, "gaps"), f"gaps.{key}")
    _unknown_key_error(gaps_table, "gaps")

    for axis_name, table_name in (("T1", "bath1"), ("T2", "bath2")):
        if not observable.needs_baths:
            if table_name in data:
                raise ConfigError(
                    f"{table_name}: observable {name!r} does not use bath temperatures"
                )
            continue
        if axis_name in swept:
            if table_name in data:
                raise ConfigError(
                    f"{table_name}.temperature: conflicts with the sweep axis over {axis_name}"
                )
        else:
            base[axis_name] = _bath_from(data, table_name).temperature
    config.sweep_base = base


_LOADERS = {
    "thermal": _load_thermal,
    "montecarlo": _load_montecarlo,
    "daemon": _load_daemon,
    "cavity": _load_cavity,
    "region": _load_region,
    "sweep": _load_sweep,
}


def load_config(path) -> ExperimentConfig:
    """Parse and validate one experiment file.

    Raises ConfigError for schema problems (unknown keys, missing keys,
    wrong types, bad enums); lets ValueError from the domain types escape
    for physically unsatisfiable values.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    kind = _as_str(_take(data, "kind", ""), "kind")
    if kind not in KINDS:
        known = ", ".join(KINDS)
        raise ConfigError(f"kind: unknown experiment kind {kind!r} (expected one of {known})")
    csv_name, svg_name = _output_names(data, kind)
    config = ExperimentConfig(kind=kind, csv_name=csv_name, svg_name=svg_name)
    _LOADERS[kind](data, config)
    _unknown_key_error(data, "")
    return config
