"""Deterministic cycle and energy model for slab-partitioned
output-stationary systolic arrays, with monolithic and reshapeable
baselines and LLM-derived workload sweeps."""

from .baselines import (
    DEFAULT_REDAS_SHAPES,
    ArchModel,
    ArchRun,
    monolithic_plan,
    redas_select_shape,
    simulate_arch,
)
from .config import RunSetup, default_config_path, load_config
from .energymodel import (
    EnergyBreakdown,
    EnergyConfig,
    compare,
    dynamic_energy,
    edp,
    static_energy,
)
from .errors import CapacityError, ConfigError, GeometryError
from .geometry import (
    ArrayGeometry,
    DataFormat,
    ExecutionMode,
    LogicalUnit,
    MemoryConfig,
    ModeKind,
    select_mode,
    units_for_mode,
    validate_geometry,
    validate_mode,
)
from .microsim import UnitRun, oracle_sweep, predicted_cycles, run_unit
from .perfmodel import (
    SimResult,
    TrafficCounters,
    compute_cycles,
    drain_cycles,
    dram_traffic_lower_bound,
    load_cycles,
    result_to_json_dict,
    round_latency,
    simulate,
)
from .scheduler import (
    GemmShape,
    Phase,
    Schedule,
    Tile,
    check_capacity,
    dump_schedule,
    plan_gemm,
    split_balanced,
)
from .workloads import (
    GemmTemplate,
    ModelDescriptor,
    SweepPoint,
    aggregate,
    bundled_model_names,
    expand,
    load_bundled_model,
    load_model,
    parse_model,
)

__version__ = "0.1.0"

__all__ = [
    "ArchModel",
    "ArchRun",
    "ArrayGeometry",
    "CapacityError",
    "ConfigError",
    "DataFormat",
    "DEFAULT_REDAS_SHAPES",
    "EnergyBreakdown",
    "EnergyConfig",
    "ExecutionMode",
    "GemmShape",
    "GemmTemplate",
    "GeometryError",
    "LogicalUnit",
    "MemoryConfig",
    "ModeKind",
    "ModelDescriptor",
    "Phase",
    "RunSetup",
    "Schedule",
    "SimResult",
    "SweepPoint",
    "Tile",
    "TrafficCounters",
    "UnitRun",
    "aggregate",
    "bundled_model_names",
    "check_capacity",
    "compare",
    "compute_cycles",
    "default_config_path",
    "drain_cycles",
    "dram_traffic_lower_bound",
    "dump_schedule",
    "dynamic_energy",
    "edp",
    "expand",
    "load_bundled_model",
    "load_config",
    "load_cycles",
    "load_model",
    "microsim",
    "monolithic_plan",
    "oracle_sweep",
    "parse_model",
    "plan_gemm",
    "predicted_cycles",
    "redas_select_shape",
    "result_to_json_dict",
    "round_latency",
    "run_unit",
    "select_mode",
    "simulate",
    "simulate_arch",
    "split_balanced",
    "static_energy",
    "units_for_mode",
    "validate_geometry",
    "validate_mode",
]

from . import microsim  # noqa: E402  (re-export the oracle module wholesale)
