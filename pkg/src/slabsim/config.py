"""Architecture configuration files: strict schema, explicit constants.

Every modeling constant lives in one YAML document; nothing numeric is
silently defaulted at load time, so a committed config file is a complete
record of a run's parameters. Precedence for finding the file: explicit
path argument, then the SLABSIM_CONFIG environment variable, then the
packaged default.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .baselines import ArchModel
from .energymodel import EnergyConfig
from .errors import ConfigError
from .geometry import ArrayGeometry, DataFormat, MemoryConfig, validate_geometry
from .workloads import _require_keys

ENV_VAR = "SLABSIM_CONFIG"
SCHEMA_VERSION = 1

_GEOMETRY_FIELDS = {"rows", "cols", "slab_height", "num_slabs"}
_MEMORY_FIELDS = {
    "global_buffer_bytes",
    "output_buffer_bytes",
    "slab_act_buffer_bytes",
    "slab_wgt_buffer_bytes",
    "dram_bytes_per_cycle",
    "global_bank_port_elems",
}
_ENERGY_FIELDS = {
    "pe_array_total_nj",
    "global_buffer_nj",
    "output_buffer_nj",
    "slab_buffers_total_nj",
    "gating_energy_overhead_frac",
    "gated_leak_frac",
    "e_mac_nj",
    "e_global_sram_access_nj",
    "e_slab_sram_access_nj",
    "e_output_sram_access_nj",
    "e_dram_per_byte_nj",
}


@dataclass(frozen=True)
class RunSetup:
    """Everything a simulation run needs, as parsed from one config file."""

    geometry: ArrayGeometry
    memory: MemoryConfig
    fmt: DataFormat
    archs: dict[str, ArchModel]
    source: str

    def arch(self, name: str) -> ArchModel:
        if name not in self.archs:
            raise ConfigError(
                f"unknown architecture {name!r}; configured: {', '.join(sorted(self.archs))}"
            )
        return self.archs[name]


def _number(mapping: dict, key: str, where: str, kind=int):
    v = mapping[key]
    if kind is int and (not isinstance(v, int) or isinstance(v, bool)):
        raise ConfigError(f"{where}.{key}: expected an integer, got {v!r}")
    if kind is float and not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {v!r}")
    return kind(v)


def _energy_config(doc: dict, where: str, clock_hz: float) -> EnergyConfig:
    _require_keys(doc, allowed=_ENERGY_FIELDS, required=_ENERGY_FIELDS, where=where)
    kwargs = {k: _number(doc, k, where, float) for k in _ENERGY_FIELDS}
    return EnergyConfig(clock_hz=clock_hz, **kwargs)


def parse_config(doc, where: str) -> RunSetup:
    top = {
        "schema_version",
        "geometry",
        "data_format",
        "memory",
        "clock_hz",
        "energy",
        "redas",
    }
    _require_keys(doc, allowed=top, required=top, where=where)
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(
            f"{where}.schema_version: expected {SCHEMA_VERSION}, got {doc['schema_version']!r}"
        )

    gd = doc["geometry"]
    _require_keys(gd, allowed=_GEOMETRY_FIELDS, required=_GEOMETRY_FIELDS, where=f"{where}.geometry")
    geometry = validate_geometry(
        ArrayGeometry(**{k: _number(gd, k, f"{where}.geometry") for k in _GEOMETRY_FIELDS})
    )

    fd = doc["data_format"]
    _require_keys(
        fd, allowed={"bytes_per_element"}, required={"bytes_per_element"},
        where=f"{where}.data_format",
    )
    fmt = DataFormat(bytes_per_element=_number(fd, "bytes_per_element", f"{where}.data_format"))

    md = doc["memory"]
    _require_keys(md, allowed=_MEMORY_FIELDS, required=_MEMORY_FIELDS, where=f"{where}.memory")
    mem_kwargs = {k: _number(md, k, f"{where}.memory") for k in _MEMORY_FIELDS}
    for k, v in mem_kwargs.items():
        if v < 1:
            raise ConfigError(f"{where}.memory.{k}: must be >= 1, got {v}")
    memory = MemoryConfig(**mem_kwargs)

    clock_hz = _number(doc, "clock_hz", where, float)
    if clock_hz <= 0:
        raise ConfigError(f"{where}.clock_hz: must be positive")

    ed = doc["energy"]
    _require_keys(
        ed, allowed={"sisa", "tpu", "redas"}, required={"sisa", "tpu", "redas"},
        where=f"{where}.energy",
    )

    rd = doc["redas"]
    _require_keys(
        rd, allowed={"shape_set", "power_factor"}, required={"shape_set", "power_factor"},
        where=f"{where}.redas",
    )
    raw_shapes = rd["shape_set"]
    if not isinstance(raw_shapes, list) or not raw_shapes:
        raise ConfigError(f"{where}.redas.shape_set: expected a non-empty list")
    shape_set = []
    for i, pair in enumerate(raw_shapes):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ConfigError(f"{where}.redas.shape_set[{i}]: expected [height, width]")
        h, w = pair
        for v in (h, w):
            if not isinstance(v, int) or v < 1:
                raise ConfigError(f"{where}.redas.shape_set[{i}]: extents must be positive integers")
        shape_set.append((h, w))
    power_factor = _number(rd, "power_factor", f"{where}.redas", float)

    archs = {
        "sisa": ArchModel(variant="sisa", energy=_energy_config(ed["sisa"], f"{where}.energy.sisa", clock_hz)),
        "tpu": ArchModel(variant="tpu", energy=_energy_config(ed["tpu"], f"{where}.energy.tpu", clock_hz)),
        "redas": ArchModel(
            variant="redas",
            energy=_energy_config(ed["redas"], f"{where}.energy.redas", clock_hz),
            shape_set=tuple(shape_set),
            redas_power_factor=power_factor,
        ),
    }
    return RunSetup(geometry=geometry, memory=memory, fmt=fmt, archs=archs, source=where)


def default_config_path() -> Path:
    return Path(str(resources.files("slabsim") / "configs" / "default.yaml"))


def load_config(path: str | Path | None = None) -> RunSetup:
    """Explicit path > SLABSIM_CONFIG env var > packaged default."""
    if path is None:
        path = os.environ.get(ENV_VAR) or default_config_path()
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: not valid YAML: {e}")
    return parse_config(doc, where=str(path))
