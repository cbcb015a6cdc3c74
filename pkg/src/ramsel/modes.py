"""Per-antenna radiation-mode assignments and their integer state encoding.

A "state" is the joint choice of one radiation mode per transmit antenna.
States are numbered by a mixed-radix code with antenna 0 as the most
significant digit, so the lexicographic order of mode vectors equals the
numeric order of state indices.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ModeAssignment:
    """One radiation mode per transmit antenna.

    Modes are 1-based: ``modes[m]`` is in ``1..n_modes`` and selects the
    pattern used by antenna ``m``.
    """

    modes: tuple[int, ...]
    n_modes: int

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("n_modes must be >= 1")
        if len(self.modes) == 0:
            raise ValueError("mode vector must not be empty")
        for nu in self.modes:
            if not 1 <= int(nu) <= self.n_modes:
                raise ValueError(f"mode {nu} outside 1..{self.n_modes}")
        object.__setattr__(self, "modes", tuple(int(nu) for nu in self.modes))

    @property
    def n_antennas(self) -> int:
        return len(self.modes)

    @property
    def state_index(self) -> int:
        """Mixed-radix encoding of the mode vector (antenna 0 most significant)."""
        idx = 0
        for nu in self.modes:
            idx = idx * self.n_modes + (nu - 1)
        return idx

    def one_hot(self) -> np.ndarray:
        """Binary selection matrix of shape (n_antennas, n_modes), one 1 per row."""
        w = np.zeros((self.n_antennas, self.n_modes), dtype=np.int8)
        w[np.arange(self.n_antennas), np.asarray(self.modes) - 1] = 1
        return w

    @classmethod
    def from_state_index(cls, index: int, n_antennas: int, n_modes: int) -> "ModeAssignment":
        total = n_modes**n_antennas
        if not 0 <= index < total:
            raise ValueError(f"state index {index} outside [0, {total})")
        digits = []
        rem = int(index)
        for _ in range(n_antennas):
            digits.append(rem % n_modes + 1)
            rem //= n_modes
        return cls(tuple(reversed(digits)), n_modes)

    @classmethod
    def from_one_hot(cls, w) -> "ModeAssignment":
        w = np.asarray(w)
        if (
            w.ndim != 2
            or w.shape[0] < 1
            or not np.isin(w, (0, 1)).all()
            or not (w.sum(axis=1) == 1).all()
        ):
            raise ValueError("invalid one-hot assignment")
        modes = tuple(int(m) + 1 for m in w.argmax(axis=1))
        return cls(modes, int(w.shape[1]))


def num_states(n_antennas: int, n_modes: int) -> int:
    """Size of the joint mode-selection space."""
    return n_modes**n_antennas


def enumerate_mode_digits(n_antennas: int, n_modes: int) -> np.ndarray:
    """0-based mode digits of every state, shape (n_modes**n_antennas, n_antennas).

    Row ``s`` holds the per-antenna digits of state index ``s`` in the same
    mixed-radix convention as :class:`ModeAssignment`.
    """
    total = num_states(n_antennas, n_modes)
    idx = np.arange(total)
    digits = np.empty((total, n_antennas), dtype=np.int64)
    for m in range(n_antennas):
        place = n_modes ** (n_antennas - 1 - m)
        digits[:, m] = (idx // place) % n_modes
    return digits
