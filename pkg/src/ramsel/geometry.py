"""Scene description: base-station array, radiation-mode patterns, user motion.

The propagation scene is deliberately simple and fully deterministic: a
planar array at the base station, an optional line-of-sight path, and a
fixed set of point scatterers.  Each radiation mode is a cos^q lobe around
a pointing direction, so the useful mode depends on where the user is.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class ModePattern:
    """Radiation pattern of one mode: amplitude gain max(cos angle, 0)^q
    around a pointing direction given in radians."""

    azimuth: float
    elevation: float = 0.0
    lobe_exponent: float = 2.0

    def __post_init__(self):
        if self.lobe_exponent < 0:
            raise ConfigError("lobe_exponent must be >= 0")

    def pointing_vector(self) -> np.ndarray:
        ce = math.cos(self.elevation)
        return np.array(
            [ce * math.cos(self.azimuth), ce * math.sin(self.azimuth), math.sin(self.elevation)]
        )

    def gain(self, directions) -> np.ndarray:
        """Amplitude gain in [0, 1] toward unit direction vectors (..., 3)."""
        c = np.asarray(directions) @ self.pointing_vector()
        return np.where(c > 0.0, np.maximum(c, 0.0) ** self.lobe_exponent, 0.0)


@dataclass(frozen=True)
class Scatterer:
    """Fixed point scatterer with an amplitude scale for its reflected path."""

    position: tuple[float, float, float]
    gain: float = 1.0


@dataclass(frozen=True)
class PathSpec:
    """Propagation paths: optional line of sight plus fixed scatterers.

    ``rician_k`` is the linear power ratio of the LOS path to the total
    scattered power; it only matters when both kinds of path are present.
    """

    los: bool = True
    scatterers: tuple[Scatterer, ...] = ()
    rician_k: float = 5.0

    def __post_init__(self):
        if self.rician_k <= 0:
            raise ConfigError("rician_k must be > 0")
        object.__setattr__(self, "scatterers", tuple(self.scatterers))


def default_mode_patterns(
    n_modes: int, lobe_exponent: float = 2.0, elevation: float = 0.0
) -> tuple[ModePattern, ...]:
    """Patterns that differ only by pointing direction, evenly spread in azimuth."""
    if n_modes < 1:
        raise ConfigError("n_modes must be >= 1")
    return tuple(
        ModePattern(azimuth=2.0 * math.pi * i / n_modes, elevation=elevation, lobe_exponent=lobe_exponent)
        for i in range(n_modes)
    )


_DEFAULT_SCATTERERS = (
    Scatterer((35.0, 45.0, 5.0)),
    Scatterer((-50.0, 28.0, 5.0)),
    Scatterer((48.0, -38.0, 5.0)),
    Scatterer((-25.0, -55.0, 5.0)),
)


@dataclass(frozen=True)
class GeometrySpec:
    """Base-station array, carrier, propagation paths and per-mode patterns.

    The transmit array is an ``array_shape = (n_x, n_y)`` planar grid in the
    x-y plane (n_tx = n_x * n_y elements), the receiver a uniform linear
    array along x.  Path amplitudes follow a plain distance power law
    normalized to 1 at ``reference_distance_m``.
    """

    bs_position: tuple[float, float, float] = (0.0, 0.0, 10.0)
    array_shape: tuple[int, int] = (2, 2)
    element_spacing_wl: float = 0.5
    carrier_hz: float = 3.5e9
    paths: PathSpec = PathSpec()
    mode_patterns: tuple[ModePattern, ...] = field(default_factory=lambda: default_mode_patterns(3))
    rx_antennas: int = 2
    rx_spacing_wl: float = 0.5
    pathloss_exponent: float = 2.0
    reference_distance_m: float = 50.0
    n_subcarriers: int = 1
    subcarrier_spacing_hz: float = 0.0

    def __post_init__(self):
        nx, ny = self.array_shape
        if nx < 1 or ny < 1:
            raise ConfigError("array_shape entries must be >= 1")
        if self.carrier_hz <= 0:
            raise ConfigError("carrier_hz must be > 0")
        if self.rx_antennas < 1:
            raise ConfigError("rx_antennas must be >= 1")
        if self.n_subcarriers < 1:
            raise ConfigError("n_subcarriers must be >= 1")
        if len(self.mode_patterns) < 1:
            raise ConfigError("at least one mode pattern required")
        if self.reference_distance_m <= 0:
            raise ConfigError("reference_distance_m must be > 0")
        object.__setattr__(self, "bs_position", tuple(float(v) for v in self.bs_position))
        object.__setattr__(self, "array_shape", (int(nx), int(ny)))
        object.__setattr__(self, "mode_patterns", tuple(self.mode_patterns))

    @property
    def n_tx(self) -> int:
        return self.array_shape[0] * self.array_shape[1]

    @property
    def n_modes(self) -> int:
        return len(self.mode_patterns)

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz

    def tx_element_offsets(self) -> np.ndarray:
        """Element positions in meters relative to the array reference, (n_tx, 3).

        Element ``m`` sits at grid cell ``(m // n_y, m % n_y)`` in the x-y plane.
        """
        nx, ny = self.array_shape
        d = self.element_spacing_wl * self.wavelength
        ix, iy = np.divmod(np.arange(self.n_tx), ny)
        return np.column_stack([ix * d, iy * d, np.zeros(self.n_tx)])

    def rx_element_offsets(self) -> np.ndarray:
        """Receiver ULA element positions in meters, (rx_antennas, 3)."""
        d = self.rx_spacing_wl * self.wavelength
        r = np.arange(self.rx_antennas)
        return np.column_stack([r * d, np.zeros_like(r, dtype=float), np.zeros_like(r, dtype=float)])

    def subcarrier_frequencies(self) -> np.ndarray:
        """Absolute subcarrier frequencies in Hz, centered on the carrier."""
        f = np.arange(self.n_subcarriers, dtype=float)
        f -= (self.n_subcarriers - 1) / 2.0
        return self.carrier_hz + f * self.subcarrier_spacing_hz


def default_geometry(
    n_modes: int = 3,
    array_shape: tuple[int, int] = (2, 2),
    rx_antennas: int = 2,
    lobe_exponent: float = 2.0,
    rician_k: float = 5.0,
) -> GeometrySpec:
    """Desk-scale scene: 2x2 planar array, four scatterers, LOS on."""
    return GeometrySpec(
        array_shape=array_shape,
        rx_antennas=rx_antennas,
        paths=PathSpec(los=True, scatterers=_DEFAULT_SCATTERERS, rician_k=rician_k),
        mode_patterns=default_mode_patterns(n_modes, lobe_exponent=lobe_exponent),
    )


@dataclass(frozen=True)
class LinearTrajectory:
    """Piecewise-linear path through waypoints, traversed at constant speed.

    The user stops at the final waypoint if the path runs out before
    ``num_steps`` are exhausted.
    """

    waypoints: tuple[tuple[float, float, float], ...]
    speed_mps: float
    time_step_s: float
    num_steps: int

    def __post_init__(self):
        if self.speed_mps <= 0:
            raise ConfigError("speed_mps must be > 0")
        if self.time_step_s <= 0:
            raise ConfigError("time_step_s must be > 0")
        if self.num_steps < 1:
            raise ConfigError("num_steps must be >= 1")
        if len(self.waypoints) < 2:
            raise ConfigError("linear trajectory needs at least 2 waypoints")
        object.__setattr__(
            self, "waypoints", tuple(tuple(float(v) for v in w) for w in self.waypoints)
        )

    def positions(self) -> np.ndarray:
        """User position at each time step, (num_steps, 3)."""
        pts = np.asarray(self.waypoints, dtype=float)
        seg = np.diff(pts, axis=0)
        seg_len = np.linalg.norm(seg, axis=1)
        if np.any(seg_len == 0):
            raise ConfigError("repeated consecutive waypoints")
        cum = np.concatenate([[0.0], np.cumsum(seg_len)])
        s = np.minimum(self.speed_mps * self.time_step_s * np.arange(self.num_steps), cum[-1])
        i = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(seg_len) - 1)
        frac = (s - cum[i]) / seg_len[i]
        return pts[i] + frac[:, None] * seg[i]


@dataclass(frozen=True)
class CircularTrajectory:
    """Circle of ``radius_m`` around ``center``, traversed at constant speed."""

    center: tuple[float, float, float]
    radius_m: float
    speed_mps: float
    time_step_s: float
    num_steps: int
    start_angle_rad: float = 0.0

    def __post_init__(self):
        if self.speed_mps <= 0:
            raise ConfigError("speed_mps must be > 0")
        if self.time_step_s <= 0:
            raise ConfigError("time_step_s must be > 0")
        if self.num_steps < 1:
            raise ConfigError("num_steps must be >= 1")
        if self.radius_m <= 0:
            raise ConfigError("radius_m must be > 0")
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))

    def positions(self) -> np.ndarray:
        omega = self.speed_mps / self.radius_m
        ang = self.start_angle_rad + omega * self.time_step_s * np.arange(self.num_steps)
        c = np.asarray(self.center)
        return np.column_stack(
            [
                c[0] + self.radius_m * np.cos(ang),
                c[1] + self.radius_m * np.sin(ang),
                np.full(self.num_steps, c[2]),
            ]
        )


Trajectory = LinearTrajectory | CircularTrajectory
