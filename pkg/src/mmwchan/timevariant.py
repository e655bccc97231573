"""Time-variant channel snapshots: gain aging and Doppler rotation.

Per-path gains follow a stationary AR(1) process seeded at the static
realization's draw, each path additionally rotating at its geometric
Doppler frequency.  The direct path keeps unit gain magnitude; only its
phase wanders.  Snapshot 0 reproduces the static channel exactly, and so
does every snapshot in the static limit (zero velocity, coefficient 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import ArrayPair
from .channel import ChannelRealization, _assemble_grid, _path_table, _select_window
from .geometry import SPEED_OF_LIGHT, RayAngles
from .pulse import PulseSpec
from .sampling import ar1_complex_sequence

__all__ = [
    "MobilitySpec",
    "TimeVariantChannel",
    "doppler_shift",
    "default_gain_correlation",
    "evolve_channel",
]


@dataclass(frozen=True)
class MobilitySpec:
    """Terminal speeds, snapshot spacing, and gain-aging coefficient.

    ``gain_correlation`` is the per-snapshot AR(1) coefficient; ``None``
    selects :func:`default_gain_correlation`.
    """

    v_rx: float = 0.0
    v_tx: float = 0.0
    snapshot_period: float = 1e-6
    n_snapshots: int = 1
    gain_correlation: float | None = None

    def __post_init__(self):
        if self.snapshot_period <= 0:
            raise ValueError(
                f"snapshot period must be positive, got {self.snapshot_period!r}"
            )
        if self.n_snapshots < 1:
            raise ValueError(f"need at least one snapshot, got {self.n_snapshots!r}")
        if self.gain_correlation is not None and not 0.0 <= self.gain_correlation <= 1.0:
            raise ValueError(
                f"gain correlation must lie in [0, 1], got {self.gain_correlation!r}"
            )


@dataclass(eq=False)
class TimeVariantChannel:
    """Sequence of tap tensors sharing one grid and tap window."""

    snapshots: np.ndarray  # (n_snapshots, P, N_R, N_T)
    sample_period: float
    tap_offset: int
    snapshot_period: float

    @property
    def n_snapshots(self) -> int:
        return self.snapshots.shape[0]

    @property
    def n_taps(self) -> int:
        return self.snapshots.shape[1]


def doppler_shift(angles: RayAngles, v_rx, v_tx, carrier_frequency: float):
    """Doppler frequency (Hz) of a path under radial terminal motion.

    ``-(f/c) (v_rx cos(aoa_el) cos(aoa_az) + v_tx cos(aod_el) cos(aod_az))``;
    motion along each terminal's azimuth reference direction.  Angle fields
    may be arrays for vectorized evaluation.
    """
    radial = v_rx * np.cos(angles.aoa_elevation) * np.cos(angles.aoa_azimuth)
    radial = radial + v_tx * np.cos(angles.aod_elevation) * np.cos(angles.aod_azimuth)
    return -(carrier_frequency / SPEED_OF_LIGHT) * radial


def default_gain_correlation(mob: MobilitySpec, carrier_frequency: float) -> float:
    """AR(1) coefficient tied to the worst-case Doppler of the drop:
    ``exp(-2 pi nu_max T)`` with ``nu_max = (f/c)(|v_rx| + |v_tx|)``."""
    nu_max = (carrier_frequency / SPEED_OF_LIGHT) * (abs(mob.v_rx) + abs(mob.v_tx))
    return float(np.clip(np.exp(-2.0 * np.pi * nu_max * mob.snapshot_period), 0.0, 1.0))


def evolve_channel(
    real: ChannelRealization,
    arrays: ArrayPair,
    spec: PulseSpec,
    mob: MobilitySpec,
    rng: np.random.Generator,
    energy_threshold: float = 1e-4,
    oversampling: int = 1,
) -> TimeVariantChannel:
    """Render a realization as a sequence of tap-tensor snapshots.

    Per-path AR(1) innovation draws run in path order (direct path last);
    nothing is drawn at coefficient 1.  The tap window is selected once from
    snapshot 0 — which equals the static sampling of the same realization —
    and shared by all snapshots.
    """
    rho = mob.gain_correlation
    if rho is None:
        rho = default_gain_correlation(mob, real.carrier_frequency)
    table = _path_table(real, arrays)
    n_snap = mob.n_snapshots

    gains = np.empty((n_snap, table.n_paths), dtype=np.complex128)
    for p in range(table.n_paths):
        gains[:, p] = ar1_complex_sequence(
            rho, n_snap, 1.0, rng, initial=table.base_gain[p]
        )
    if table.los_index is not None and rho < 1.0 and n_snap > 1:
        # Direct path: phase-only aging.  Snapshot 0 is exp(j*phase), already
        # on the unit circle; later samples are projected back onto it.  At
        # coefficient 1 the process is frozen and projection is a no-op.
        z = gains[1:, table.los_index]
        gains[1:, table.los_index] = z / np.abs(z)

    if mob.v_rx != 0.0 or mob.v_tx != 0.0:
        path_angles = RayAngles(
            aod_azimuth=table.aod_azimuth,
            aod_elevation=table.aod_elevation,
            aoa_azimuth=table.aoa_azimuth,
            aoa_elevation=table.aoa_elevation,
        )
        nu = doppler_shift(path_angles, mob.v_rx, mob.v_tx, real.carrier_frequency)
        t = np.arange(n_snap) * mob.snapshot_period
        gains = gains * np.exp(-2j * np.pi * nu[None, :] * t[:, None])

    snapshots = None
    start = width = 0
    for k in range(n_snap):
        grid, n_lo = _assemble_grid(
            table, table.static_scale * gains[k], spec, int(oversampling)
        )
        if k == 0:
            start, width = _select_window(grid, energy_threshold)
            snapshots = np.empty(
                (n_snap, width) + grid.shape[1:], dtype=np.complex128
            )
        snapshots[k] = grid[start : start + width]
    return TimeVariantChannel(
        snapshots=snapshots,
        sample_period=spec.symbol_period / oversampling,
        tap_offset=n_lo + start,
        snapshot_period=mob.snapshot_period,
    )
