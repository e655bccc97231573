"""Run configuration: a flat, diffable ``key = value`` text format.

Every knob of the simulator is one top-level key typed by the
:class:`ScenarioConfig` field it fills.  ``auto`` selects the documented
default for the optional keys (thermal noise, snapshot spacing, gain
correlation).
"""

from __future__ import annotations

import types
import typing
from dataclasses import dataclass, fields
from pathlib import Path

from .arrays import ArrayPair, PlanarArray
from .geometry import SPEED_OF_LIGHT, LinkGeometry
from .propagation import SCENARIOS
from .pulse import PulseSpec
from .timevariant import MobilitySpec

__all__ = ["ScenarioConfig", "parse_config", "serialize_config"]

_AUTO = ("auto", "none")


@dataclass
class ScenarioConfig:
    """All run parameters, one field per configuration key."""

    # deployment
    scenario: str = "umi-street-canyon"
    carrier_frequency_hz: float = 73e9
    distance_m: float = 30.0
    tx_height_m: float = 7.0
    rx_height_m: float = 1.0
    # arrays
    rx_horizontal: int = 5
    rx_vertical: int = 4
    tx_horizontal: int = 6
    tx_vertical: int = 5
    spacing_wavelengths: float = 0.5
    rx_orientation_rad: float = 0.0
    # clustering
    cluster_rate: float = 1.9
    angle_spread_deg: float = 5.0
    max_distance_factor: float = 1.75
    shadow_per_cluster: bool = False
    scattered_pathloss: str = "nlos"  # or "follow-los"
    # pulse / sampling
    rolloff: float = 0.22
    bandwidth_hz: float = 500e6
    truncation_half_length: int = 8
    oversampling: int = 1
    energy_threshold: float = 1e-4
    # randomness
    seed: int = 0
    # mobility
    v_rx_mps: float = 0.0
    v_tx_mps: float = 0.0
    gain_correlation: float | None = None
    snapshot_period_s: float | None = None
    n_snapshots: int = 10
    # link evaluation
    n_streams: int = 4
    tx_power_w: float = 1.0
    noise_figure_db: float = 5.0
    noise_temperature_k: float = 290.0
    noise_variance_w: float | None = None
    n_trials: int = 500
    se_normalization: str = "excess-bandwidth"  # or "none"

    # -- derived quantities ------------------------------------------------

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency_hz

    @property
    def symbol_period(self) -> float:
        """Symbol period filling the configured bandwidth: (1+rolloff)/W."""
        return (1.0 + self.rolloff) / self.bandwidth_hz

    def geometry(self) -> LinkGeometry:
        return LinkGeometry(self.distance_m, self.tx_height_m, self.rx_height_m)

    def arrays(self) -> ArrayPair:
        return ArrayPair(
            tx=PlanarArray(self.tx_horizontal, self.tx_vertical, self.spacing_wavelengths),
            rx=PlanarArray(self.rx_horizontal, self.rx_vertical, self.spacing_wavelengths),
        )

    def pulse(self) -> PulseSpec:
        return PulseSpec(
            symbol_period=self.symbol_period,
            rolloff=self.rolloff,
            truncation_half_length=self.truncation_half_length,
        )

    def mobility(self) -> MobilitySpec:
        period = self.snapshot_period_s
        if period is None:
            period = self.symbol_period
        return MobilitySpec(
            v_rx=self.v_rx_mps,
            v_tx=self.v_tx_mps,
            snapshot_period=period,
            n_snapshots=self.n_snapshots,
            gain_correlation=self.gain_correlation,
        )

    def noise_variance(self) -> float:
        if self.noise_variance_w is not None:
            return self.noise_variance_w
        from .link import thermal_noise_variance

        return thermal_noise_variance(
            self.bandwidth_hz, self.noise_figure_db, self.noise_temperature_k
        )

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        """Raise ValueError naming the offending key on any bad setting."""
        def positive(key):
            if getattr(self, key) <= 0:
                raise ValueError(f"'{key}' must be positive, got {getattr(self, key)!r}")

        if self.scenario not in SCENARIOS:
            raise ValueError(
                f"'scenario' must be one of {', '.join(SCENARIOS)}, got {self.scenario!r}"
            )
        for key in (
            "carrier_frequency_hz",
            "distance_m",
            "tx_height_m",
            "rx_height_m",
            "spacing_wavelengths",
            "cluster_rate",
            "max_distance_factor",
            "bandwidth_hz",
            "tx_power_w",
            "noise_temperature_k",
        ):
            positive(key)
        for key in ("rx_horizontal", "rx_vertical", "tx_horizontal", "tx_vertical"):
            if getattr(self, key) < 1:
                raise ValueError(f"'{key}' must be >= 1, got {getattr(self, key)!r}")
        if self.angle_spread_deg < 0:
            raise ValueError(
                f"'angle_spread_deg' must be nonnegative, got {self.angle_spread_deg!r}"
            )
        if self.scattered_pathloss not in ("nlos", "follow-los"):
            raise ValueError(
                f"'scattered_pathloss' must be 'nlos' or 'follow-los', "
                f"got {self.scattered_pathloss!r}"
            )
        if not 0.0 < self.rolloff <= 1.0:
            raise ValueError(f"'rolloff' must lie in (0, 1], got {self.rolloff!r}")
        if self.truncation_half_length < 1:
            raise ValueError(
                f"'truncation_half_length' must be >= 1, "
                f"got {self.truncation_half_length!r}"
            )
        if self.oversampling < 1:
            raise ValueError(f"'oversampling' must be >= 1, got {self.oversampling!r}")
        if not 0.0 < self.energy_threshold < 1.0:
            raise ValueError(
                f"'energy_threshold' must lie in (0, 1), got {self.energy_threshold!r}"
            )
        if self.seed < 0:
            raise ValueError(f"'seed' must be nonnegative, got {self.seed!r}")
        if self.gain_correlation is not None and not 0.0 <= self.gain_correlation <= 1.0:
            raise ValueError(
                f"'gain_correlation' must lie in [0, 1] or auto, "
                f"got {self.gain_correlation!r}"
            )
        if self.snapshot_period_s is not None and self.snapshot_period_s <= 0:
            raise ValueError(
                f"'snapshot_period_s' must be positive or auto, "
                f"got {self.snapshot_period_s!r}"
            )
        if self.n_snapshots < 1:
            raise ValueError(f"'n_snapshots' must be >= 1, got {self.n_snapshots!r}")
        limit = min(self.rx_horizontal * self.rx_vertical, self.tx_horizontal * self.tx_vertical)
        if not 1 <= self.n_streams <= limit:
            raise ValueError(
                f"'n_streams' must lie in [1, {limit}] for these arrays, "
                f"got {self.n_streams!r}"
            )
        if self.noise_variance_w is not None and self.noise_variance_w <= 0:
            raise ValueError(
                f"'noise_variance_w' must be positive or auto, "
                f"got {self.noise_variance_w!r}"
            )
        if self.n_trials < 1:
            raise ValueError(f"'n_trials' must be >= 1, got {self.n_trials!r}")
        if self.se_normalization not in ("excess-bandwidth", "none"):
            raise ValueError(
                f"'se_normalization' must be 'excess-bandwidth' or 'none', "
                f"got {self.se_normalization!r}"
            )


def _field_types() -> dict[str, object]:
    return typing.get_type_hints(ScenarioConfig)


def _convert(key: str, text: str, target) -> object:
    origin = typing.get_origin(target)
    if origin in (typing.Union, types.UnionType):
        args = [a for a in typing.get_args(target) if a is not type(None)]
        if text.strip().lower() in _AUTO:
            return None
        return _convert(key, text, args[0])
    if target is bool:
        lowered = text.strip().lower()
        if lowered in ("true", "yes", "1", "on"):
            return True
        if lowered in ("false", "no", "0", "off"):
            return False
        raise ValueError(f"key '{key}': expected a boolean, got {text!r}")
    if target is int:
        try:
            return int(text.strip())
        except ValueError:
            raise ValueError(f"key '{key}': expected an integer, got {text!r}") from None
    if target is float:
        try:
            return float(text.strip())
        except ValueError:
            raise ValueError(f"key '{key}': expected a number, got {text!r}") from None
    return text.strip()


def parse_config(path=None, overrides=None) -> ScenarioConfig:
    """Build a validated configuration from a file and/or override pairs.

    ``path`` points to a flat ``key = value`` text file ('#' starts a
    comment); ``overrides`` maps keys to value strings and wins over the
    file.  Unknown keys and malformed values raise ValueError naming the
    key; omitted keys take their defaults.
    """
    known = _field_types()
    raw: dict[str, str] = {}
    if path is not None:
        for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(
                    f"{path}:{lineno}: expected 'key = value', got {line!r}"
                )
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown configuration key '{key}'")
            raw[key] = value.strip()
    for key, value in (overrides or {}).items():
        if key not in known:
            raise ValueError(f"unknown configuration key '{key}'")
        raw[key] = value
    values = {key: _convert(key, text, known[key]) for key, text in raw.items()}
    config = ScenarioConfig(**values)
    config.validate()
    return config


def serialize_config(config: ScenarioConfig) -> str:
    """Render a configuration back to the flat text format (exact
    round-trip: floats are written with full precision)."""
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if value is None:
            text = "auto"
        elif isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            # plain-float repr round-trips exactly, numpy scalar repr not
            text = repr(float(value))
        else:
            text = str(value)
        lines.append(f"{f.name} = {text}")
    return "\n".join(lines) + "\n"
