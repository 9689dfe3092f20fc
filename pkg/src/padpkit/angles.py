"""Small angle helpers shared across modules (radians everywhere)."""

import numpy as np


def wrap_pm_pi(angle):
    """Wrap angle(s) to [-pi, pi)."""
    return np.mod(np.asarray(angle, dtype=np.float64) + np.pi, 2.0 * np.pi) - np.pi


def wrap_two_pi(angle):
    """Wrap angle(s) to [0, 2*pi)."""
    return np.mod(np.asarray(angle, dtype=np.float64), 2.0 * np.pi)


def circular_delta(a, b):
    """Signed smallest difference a - b on the circle, in (-pi, pi]."""
    d = np.mod(np.asarray(a, dtype=np.float64) - b, 2.0 * np.pi)
    return np.where(d > np.pi, d - 2.0 * np.pi, d)
