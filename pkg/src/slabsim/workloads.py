"""LLM workload descriptors and sweep-point aggregation.

A model descriptor lists the distinct linear-layer GEMM templates of one
transformer model as (n, k) pairs with per-model occurrence counts; the
row extent m stays free so the same descriptor serves any prompt length
or batch size. Four descriptors ship with the package under models/.
Aggregation weights each template's simulated cost by its occurrence
count; the aggregate EDP is recomputed from total energy times total
delay rather than summing per-template EDPs.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .energymodel import EnergyBreakdown
from .errors import ConfigError
from .perfmodel import SimResult, TrafficCounters
from .scheduler import GemmShape

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class GemmTemplate:
    id: str
    n: int
    k: int
    occurrences_per_model: int


@dataclass(frozen=True)
class ModelDescriptor:
    name: str
    num_blocks: int
    gemm_templates: tuple[GemmTemplate, ...]


def _require_keys(mapping: dict, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(mapping, dict):
        raise ConfigError(f"{where}: expected a mapping, got {type(mapping).__name__}")
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(mapping)
    if missing:
        raise ConfigError(f"{where}: missing field(s) {sorted(missing)}")


def _positive_int(value, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ConfigError(f"{where}: expected a positive integer, got {value!r}")
    return value


def parse_model(doc, where: str = "descriptor") -> ModelDescriptor:
    """Validate a parsed descriptor document. Unknown fields are errors."""
    _require_keys(
        doc,
        allowed={"schema_version", "name", "num_blocks", "gemm_templates"},
        required={"schema_version", "name", "num_blocks", "gemm_templates"},
        where=where,
    )
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(
            f"{where}.schema_version: expected {SCHEMA_VERSION}, got {doc['schema_version']!r}"
        )
    if not isinstance(doc["name"], str) or not doc["name"]:
        raise ConfigError(f"{where}.name: expected a non-empty string")
    num_blocks = _positive_int(doc["num_blocks"], f"{where}.num_blocks")
    raw = doc["gemm_templates"]
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{where}.gemm_templates: expected a non-empty list")
    templates = []
    for i, entry in enumerate(raw):
        here = f"{where}.gemm_templates[{i}]"
        _require_keys(
            entry,
            allowed={"id", "n", "k", "occurrences_per_model"},
            required={"id", "n", "k", "occurrences_per_model"},
            where=here,
        )
        templates.append(
            GemmTemplate(
                id=str(entry["id"]),
                n=_positive_int(entry["n"], f"{here}.n"),
                k=_positive_int(entry["k"], f"{here}.k"),
                occurrences_per_model=_positive_int(
                    entry["occurrences_per_model"], f"{here}.occurrences_per_model"
                ),
            )
        )
    ids = [t.id for t in templates]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise ConfigError(f"{where}.gemm_templates: duplicate template ids {dupes}")
    return ModelDescriptor(
        name=doc["name"], num_blocks=num_blocks, gemm_templates=tuple(templates)
    )


def load_model(path: str | Path) -> ModelDescriptor:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"model descriptor not found: {path}")
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: not valid YAML: {e}")
    return parse_model(doc, where=str(path))


def bundled_model_names() -> list[str]:
    root = resources.files("slabsim") / "models"
    return sorted(p.name[: -len(".yaml")] for p in root.iterdir() if p.name.endswith(".yaml"))


def load_bundled_model(name: str) -> ModelDescriptor:
    path = resources.files("slabsim") / "models" / f"{name}.yaml"
    if not path.is_file():
        raise ConfigError(
            f"no bundled model {name!r}; available: {', '.join(bundled_model_names())}"
        )
    return parse_model(yaml.safe_load(path.read_text()), where=f"models/{name}.yaml")


def expand(model: ModelDescriptor, m: int) -> list[tuple[GemmShape, int]]:
    """Instantiate every template at row extent m, carrying its weight."""
    if m < 1:
        raise ConfigError(f"m must be >= 1, got {m}")
    return [
        (GemmShape(m, t.n, t.k), t.occurrences_per_model) for t in model.gemm_templates
    ]


@dataclass(frozen=True)
class SweepPoint:
    """Weighted aggregate of one model's templates at one m."""

    m: int
    cycles: int
    energy_j: float
    delay_s: float
    edp_js: float
    counters: TrafficCounters
    active_slab_cycles: int
    gated_slab_cycles: int
    per_template: tuple[tuple[SimResult, EnergyBreakdown, int], ...]

    @property
    def macs(self) -> int:
        return self.counters.mac_count


def aggregate(
    items: list[tuple[SimResult, EnergyBreakdown, int]], m: int = 0
) -> SweepPoint:
    """Weighted sums over (result, breakdown, weight) triples.

    Linear in the weights and order-independent. Models sequential
    execution of all occurrences: delays add, so the aggregate EDP uses
    the total delay, not a sum of per-template EDPs.
    """
    if not items:
        raise ConfigError("aggregate() needs at least one result")
    cycles = 0
    energy = 0.0
    delay = 0.0
    active = 0
    gated = 0
    counters = TrafficCounters()
    for result, breakdown, weight in items:
        if weight < 1:
            raise ConfigError(f"weights must be >= 1, got {weight}")
        cycles += weight * result.cycles
        energy += weight * breakdown.total_j
        delay += weight * breakdown.delay_s
        active += weight * result.total_active_slab_cycles
        gated += weight * result.total_gated_slab_cycles
        counters.merge_scaled(result.counters, weight)
    return SweepPoint(
        m=m,
        cycles=cycles,
        energy_j=energy,
        delay_s=delay,
        edp_js=energy * delay,
        counters=counters,
        active_slab_cycles=active,
        gated_slab_cycles=gated,
        per_template=tuple(items),
    )
