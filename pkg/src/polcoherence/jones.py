"""Jones-calculus primitives for the HWP/PBS analyzer chain.

Vectors and matrices wrap numpy arrays with optional leading batch
dimensions, so a whole grid of analyzer angles can be pushed through the
pipeline in one call.  Amplitudes are plain Python/numpy complex numbers.

Angle conventions
-----------------
``rotation_matrix(a)`` is the active rotation ``[[cos a, -sin a], [sin a, cos a]]``.
A half-wave plate at physical angle ``alpha`` is ``rotation_matrix(2*alpha)``
composed with the plate's own retarder ``diag(1, -1)``::

    hwp(alpha) = [[cos 2a,  sin 2a],
                  [sin 2a, -cos 2a]]

Everything outside this module talks in the net rotation ``theta = 2*alpha``
(see :func:`analyzer`).  With the source field ``(H - V)/sqrt(2)`` the
transmitted port then carries ``cos(theta) - sin(theta)`` and the reflected
port ``sin(theta) + cos(theta)``, with the H-origin and V-origin
contributions in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "JonesVector",
    "JonesMatrix",
    "Port",
    "H",
    "V",
    "rotation_matrix",
    "retarder",
    "hwp",
    "analyzer",
    "qwp_relative_phase",
    "pbs_project",
    "intensity",
]


def _check_finite(name: str, value) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return arr


@dataclass(frozen=True, eq=False)
class JonesVector:
    """Two-component complex field on the (H, V) basis.

    ``data`` has shape ``(..., 2)``.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=complex)
        if arr.shape[-1:] != (2,):
            raise ValueError(f"JonesVector needs trailing dimension 2, got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_components(cls, h, v) -> "JonesVector":
        h, v = np.broadcast_arrays(np.asarray(h, dtype=complex), np.asarray(v, dtype=complex))
        return cls(np.stack([h, v], axis=-1))

    @property
    def h(self):
        return self.data[..., 0]

    @property
    def v(self):
        return self.data[..., 1]

    def __add__(self, other: "JonesVector") -> "JonesVector":
        return JonesVector(self.data + other.data)

    def __sub__(self, other: "JonesVector") -> "JonesVector":
        return JonesVector(self.data - other.data)

    def __mul__(self, scalar) -> "JonesVector":
        return JonesVector(self.data * np.asarray(scalar)[..., None])

    __rmul__ = __mul__

    def conj(self) -> "JonesVector":
        return JonesVector(self.data.conj())

    def intensity(self):
        return np.sum(np.abs(self.data) ** 2, axis=-1)

    def allclose(self, other: "JonesVector", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.data, other.data, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        return f"JonesVector(h={self.h!r}, v={self.v!r})"


@dataclass(frozen=True, eq=False)
class JonesMatrix:
    """2x2 complex operator, row-major ``[[hh, hv], [vh, vv]]``; shape ``(..., 2, 2)``."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=complex)
        if arr.shape[-2:] != (2, 2):
            raise ValueError(f"JonesMatrix needs trailing shape (2, 2), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    hh = property(lambda self: self.data[..., 0, 0])
    hv = property(lambda self: self.data[..., 0, 1])
    vh = property(lambda self: self.data[..., 1, 0])
    vv = property(lambda self: self.data[..., 1, 1])

    @classmethod
    def identity(cls) -> "JonesMatrix":
        return cls(np.eye(2))

    def __matmul__(self, other):
        if isinstance(other, JonesMatrix):
            return JonesMatrix(self.data @ other.data)
        if isinstance(other, JonesVector):
            return JonesVector(np.einsum("...ij,...j->...i", self.data, other.data))
        return NotImplemented

    def dagger(self) -> "JonesMatrix":
        return JonesMatrix(np.swapaxes(self.data, -1, -2).conj())

    def allclose(self, other: "JonesMatrix", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.data, other.data, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        return f"JonesMatrix({self.data!r})"


class Port(str, Enum):
    """PBS output: transmitted horizontal or reflected vertical."""

    TRANSMIT_H = "transmit_H"
    REFLECT_V = "reflect_V"


H = JonesVector(np.array([1.0, 0.0]))
V = JonesVector(np.array([0.0, 1.0]))


def rotation_matrix(angle) -> JonesMatrix:
    """Active rotation of the polarization plane by ``angle`` radians."""
    a = _check_finite("angle", angle)
    c, s = np.cos(a), np.sin(a)
    return JonesMatrix(np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2))


def retarder(phase) -> JonesMatrix:
    """Wave plate with fast axis along H: ``diag(1, exp(i*phase))``."""
    p = _check_finite("phase", phase)
    one = np.ones_like(p, dtype=complex)
    zero = np.zeros_like(p, dtype=complex)
    return JonesMatrix(
        np.stack([np.stack([one, zero], -1), np.stack([zero, np.exp(1j * p)], -1)], -2)
    )


# Half-wave retarder with the global phase chosen to keep the matrix real.
_HALF_WAVE = JonesMatrix(np.diag([1.0, -1.0]))


def hwp(physical_angle) -> JonesMatrix:
    """Half-wave plate whose fast axis sits at ``physical_angle`` from H.

    Rotates linear polarization by twice the physical angle.
    """
    a = _check_finite("physical_angle", physical_angle)
    return rotation_matrix(2.0 * a) @ _HALF_WAVE


def analyzer(theta) -> JonesMatrix:
    """HWP set for a net polarization rotation ``theta`` (plate at ``theta/2``)."""
    return hwp(0.5 * _check_finite("theta", theta))


def qwp_relative_phase(tilt_setting: float) -> float:
    """Pair-state phase psi produced by a QWP tilt setting.

    Only the existence of a deterministic tilt-to-phase map is known, so
    the map is the identity.
    """
    return float(tilt_setting)


def pbs_project(field: JonesVector, port: Port | str):
    """Amplitude leaving the given PBS port."""
    port = Port(port)
    if port is Port.TRANSMIT_H:
        return field.h
    return field.v


def intensity(field: JonesVector):
    return field.intensity()
