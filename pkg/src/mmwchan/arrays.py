"""Uniform planar arrays and their steering vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["PlanarArray", "ArrayPair", "steering_vector"]


@dataclass(frozen=True)
class PlanarArray:
    """Uniform planar array with ``horizontal x vertical`` elements.

    Elements are indexed horizontal-major: element ``(m, n)`` (m-th column,
    n-th row) sits at flat index ``m * vertical + n``.  ``spacing_wavelengths``
    is the inter-element spacing as a fraction of the carrier wavelength.
    """

    horizontal: int
    vertical: int
    spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if self.horizontal < 1 or self.vertical < 1:
            raise ValueError(
                f"array needs at least one element per axis, got "
                f"{self.horizontal}x{self.vertical}"
            )
        if self.spacing_wavelengths <= 0:
            raise ValueError(
                f"element spacing must be positive, got {self.spacing_wavelengths!r}"
            )

    @property
    def n_elements(self) -> int:
        return self.horizontal * self.vertical


@dataclass(frozen=True)
class ArrayPair:
    """Transmit and receive arrays of one link."""

    tx: PlanarArray
    rx: PlanarArray


def steering_vector(
    array: PlanarArray,
    azimuth: float,
    elevation: float,
    wavelength: float,
) -> np.ndarray:
    """Unit-norm array response for a plane wave from (azimuth, elevation).

    Element ``(m, n)`` contributes the phase
    ``-k * d * (m * sin(azimuth) * sin(elevation) + n * cos(elevation))``
    with ``k = 2 pi / wavelength`` and ``d`` the element spacing; elevation is
    measured from the horizontal plane (positive up).  Because the spacing is
    specified in wavelengths, ``k * d`` reduces to
    ``2 pi * spacing_wavelengths`` for any carrier.
    """
    del wavelength  # cancels against the spacing expressed in wavelengths
    kd = 2.0 * np.pi * array.spacing_wavelengths
    m = np.arange(array.horizontal)
    n = np.arange(array.vertical)
    a_h = np.exp(-1j * kd * m * (np.sin(azimuth) * np.sin(elevation)))
    a_v = np.exp(-1j * kd * n * np.cos(elevation))
    return np.kron(a_h, a_v) / np.sqrt(array.n_elements)
