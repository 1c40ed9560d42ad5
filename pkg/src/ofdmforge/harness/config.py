"""Experiment configuration: one strict JSON document per experiment.

Unknown keys are rejected everywhere, and each experiment kind checks that
its required sections are present before any compute starts.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..design import ScenarioSpec
from ..errors import ConfigError
from ..evolve import GAConfig
from ..waveform import PulseSpec

KINDS = (
    "dimension",
    "synthesize",
    "evaluate",
    "baseline",
    "optimize-pmepr",
    "optimize-moo",
    "optimize-constrained",
    "illuminate",
)

BASELINES = ("noncoded", "random", "newman")

_MISSING = object()


class _Section:
    """Dict wrapper that tracks consumed keys and rejects leftovers."""

    def __init__(self, data: object, name: str):
        if not isinstance(data, dict):
            raise ConfigError(f"'{name}' must be a JSON object")
        self._d = dict(data)
        self._name = name

    def take(self, key: str, default: object = _MISSING) -> object:
        if key in self._d:
            return self._d.pop(key)
        if default is _MISSING:
            raise ConfigError(f"missing required key '{key}' in {self._name}")
        return default

    def finish(self) -> None:
        if self._d:
            raise ConfigError(
                f"unknown keys in {self._name}: {sorted(self._d)}"
            )


def _as_int(value: object, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{name}' must be an integer, got {value!r}")
    return value


def _as_number(value: object, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{name}' must be a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class TargetSection:
    """Synthetic extended target description.

    Either explicit scatterers [[reflectivity, range_m], ...] or a random box
    (n_scatterers uniform over the along-range extent).  A fixed ``seed``
    pins the draw across runs; without one each run draws its own target.
    """

    n_scatterers: int = 50
    center_range_m: float = 10_000.0
    extent_m: float = 10.0
    reflectivity: float = 1.0
    seed: int | None = None
    scatterers: tuple[tuple[float, float], ...] | None = None


def _parse_pulse(data: object) -> PulseSpec:
    s = _Section(data, "pulse")
    spec = PulseSpec(
        n_subcarriers=_as_int(s.take("n_subcarriers"), "pulse.n_subcarriers"),
        n_symbols=_as_int(s.take("n_symbols", 1), "pulse.n_symbols"),
        subcarrier_spacing_hz=_as_number(
            s.take("subcarrier_spacing_hz", 1.0e5), "pulse.subcarrier_spacing_hz"
        ),
        oversampling=_as_int(s.take("oversampling", 20), "pulse.oversampling"),
    )
    s.finish()
    return spec


def _parse_ga(data: object, name: str) -> GAConfig:
    s = _Section(data, name)
    try:
        cfg = GAConfig(
            population_size=_as_int(s.take("population_size"), f"{name}.population_size"),
            generations=_as_int(s.take("generations"), f"{name}.generations"),
            elitism_fraction=_as_number(
                s.take("elitism_fraction", 0.5), f"{name}.elitism_fraction"
            ),
            mutation_every=_as_int(s.take("mutation_every", 1), f"{name}.mutation_every"),
            mutation_per_offspring=_as_number(
                s.take("mutation_per_offspring", 1.0), f"{name}.mutation_per_offspring"
            ),
            mutation_rate=_as_number(s.take("mutation_rate", 0.2), f"{name}.mutation_rate"),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid {name}: {exc}") from exc
    s.finish()
    return cfg


def _parse_scenario(data: object) -> ScenarioSpec:
    s = _Section(data, "scenario")
    try:
        spec = ScenarioSpec(
            target_extent_m=_as_number(s.take("target_extent_m"), "scenario.target_extent_m"),
            margin_m=_as_number(s.take("margin_m", 0.0), "scenario.margin_m"),
            min_range_m=_as_number(s.take("min_range_m"), "scenario.min_range_m"),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid scenario: {exc}") from exc
    s.finish()
    return spec


def _parse_target(data: object) -> TargetSection:
    s = _Section(data, "target")
    scatterers = s.take("scatterers", None)
    if scatterers is not None:
        try:
            scatterers = tuple(
                (float(sig), float(rng_m)) for sig, rng_m in scatterers
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(
                "target.scatterers must be [[reflectivity, range_m], ...]"
            ) from exc
    seed = s.take("seed", None)
    if seed is not None:
        seed = _as_int(seed, "target.seed")
    section = TargetSection(
        n_scatterers=_as_int(s.take("n_scatterers", 50), "target.n_scatterers"),
        center_range_m=_as_number(s.take("center_range_m", 1.0e4), "target.center_range_m"),
        extent_m=_as_number(s.take("extent_m", 10.0), "target.extent_m"),
        reflectivity=_as_number(s.take("reflectivity", 1.0), "target.reflectivity"),
        seed=seed,
        scatterers=scatterers,
    )
    s.finish()
    return section


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description (one JSON document)."""

    kind: str
    seed: int = 0
    runs: int = 1
    workers: int = 1
    out_dir: str = "results"
    pulse: PulseSpec | None = None
    scenario: ScenarioSpec | None = None
    ga: GAConfig | None = None
    weight_ga: GAConfig | None = None
    phase_ga: GAConfig | None = None
    target: TargetSection | None = None
    baseline: str = "random"
    alphabet: int | None = None
    bits_per_var: int = 18
    sparsity: float = 1.0
    pmepr_max: float | None = None
    threshold_samples: int = 1000
    snapshot_every: int = 100
    n_random: int | None = None
    carrier_hz: float = 0.0
    weight_bounds: tuple[float, float] = (0.01, 10.0)

    def out_path(self) -> Path:
        return Path(self.out_dir) / self.kind


_REQUIRED_SECTIONS = {
    "dimension": ("scenario",),
    "synthesize": ("pulse",),
    "evaluate": ("pulse",),
    "baseline": ("pulse",),
    "optimize-pmepr": ("pulse", "ga"),
    "optimize-moo": ("pulse", "ga"),
    "optimize-constrained": ("pulse", "ga"),
    "illuminate": ("pulse", "weight_ga", "phase_ga"),
}


def parse_config(data: dict, kind_override: str | None = None) -> ExperimentConfig:
    """Parse and validate a config dict; every unknown key is an error."""
    s = _Section(data, "config")
    kind = s.take("kind", kind_override)
    if kind is None:
        raise ConfigError("config needs a 'kind' (or pass one via the CLI subcommand)")
    if kind_override is not None and kind != kind_override:
        raise ConfigError(
            f"config kind '{kind}' does not match requested '{kind_override}'"
        )
    if kind not in KINDS:
        raise ConfigError(f"unknown kind '{kind}'; expected one of {list(KINDS)}")

    runs = _as_int(s.take("runs", 1), "runs")
    if runs < 1:
        raise ConfigError("runs must be >= 1")
    workers = _as_int(s.take("workers", 1), "workers")
    if workers < 1:
        raise ConfigError("workers must be >= 1")

    baseline = s.take("baseline", "random")
    if baseline not in BASELINES:
        raise ConfigError(f"baseline must be one of {list(BASELINES)}")

    alphabet = s.take("alphabet", None)
    if alphabet is not None:
        alphabet = _as_int(alphabet, "alphabet")
        if alphabet < 2:
            raise ConfigError("alphabet must be >= 2")

    sparsity = _as_number(s.take("sparsity", 1.0), "sparsity")
    if not 0 < sparsity <= 1:
        raise ConfigError("sparsity must be in (0, 1]")

    pmepr_max = s.take("pmepr_max", None)
    if pmepr_max is not None:
        pmepr_max = _as_number(pmepr_max, "pmepr_max")

    bounds = s.take("weight_bounds", [0.01, 10.0])
    if (
        not isinstance(bounds, (list, tuple))
        or len(bounds) != 2
        or not all(isinstance(b, (int, float)) and not isinstance(b, bool) for b in bounds)
        or not 0 < bounds[0] < bounds[1]
    ):
        raise ConfigError("weight_bounds must be [v_l, v_u] with 0 < v_l < v_u")

    n_random = s.take("n_random", None)
    if n_random is not None:
        n_random = _as_int(n_random, "n_random")

    pulse = s.take("pulse", None)
    scenario = s.take("scenario", None)
    ga = s.take("ga", None)
    weight_ga = s.take("weight_ga", None)
    phase_ga = s.take("phase_ga", None)
    target = s.take("target", None)

    cfg = ExperimentConfig(
        kind=kind,
        seed=_as_int(s.take("seed", 0), "seed"),
        runs=runs,
        workers=workers,
        out_dir=str(s.take("out_dir", "results")),
        pulse=_parse_pulse(pulse) if pulse is not None else None,
        scenario=_parse_scenario(scenario) if scenario is not None else None,
        ga=_parse_ga(ga, "ga") if ga is not None else None,
        weight_ga=_parse_ga(weight_ga, "weight_ga") if weight_ga is not None else None,
        phase_ga=_parse_ga(phase_ga, "phase_ga") if phase_ga is not None else None,
        target=_parse_target(target) if target is not None else None,
        baseline=baseline,
        alphabet=alphabet,
        bits_per_var=_as_int(s.take("bits_per_var", 18), "bits_per_var"),
        sparsity=sparsity,
        pmepr_max=pmepr_max,
        threshold_samples=_as_int(s.take("threshold_samples", 1000), "threshold_samples"),
        snapshot_every=_as_int(s.take("snapshot_every", 100), "snapshot_every"),
        n_random=n_random,
        carrier_hz=_as_number(s.take("carrier_hz", 0.0), "carrier_hz"),
        weight_bounds=(float(bounds[0]), float(bounds[1])),
    )
    s.finish()

    for section in _REQUIRED_SECTIONS[kind]:
        if getattr(cfg, section) is None:
            raise ConfigError(f"kind '{kind}' requires a '{section}' section")
    if cfg.kind == "illuminate" and cfg.target is None:
        raise ConfigError("kind 'illuminate' requires a 'target' section")
    if cfg.bits_per_var < 1 or cfg.bits_per_var > 30:
        raise ConfigError("bits_per_var must be in 1..30")
    return cfg


def load_config(path: str | Path, kind_override: str | None = None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return parse_config(data, kind_override)
