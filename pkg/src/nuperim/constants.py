"""Dimensional constants: unit-ball volumes, sphere areas, directional averages.

Everything downstream (normalization constants, classical-limit targets)
funnels through these three quantities, so they are kept in one tiny module
with closed forms rather than scattered literals.
"""

import math

from scipy.special import gamma


def unit_ball_volume(d):
    """Volume of the unit ball in R^d (d = 0 gives 1, d = 1 gives 2, ...).

    pi^(d/2) / Gamma(d/2 + 1).
    """
    if d < 0:
        raise ValueError("dimension must be >= 0")
    return math.pi ** (d / 2.0) / float(gamma(d / 2.0 + 1.0))


def sphere_area(d):
    """Surface measure of the unit sphere S^{d-1} in R^d, i.e. d * ball volume.

    d = 1 gives 2 (two points), d = 2 gives 2*pi, d = 3 gives 4*pi.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return d * unit_ball_volume(d)


def directional_average(d):
    """Integral of |e . theta| over S^{d-1} (any unit vector e).

    Equals twice the volume of the unit ball one dimension down:
    2 in d = 1, 4 in d = 2, 2*pi in d = 3.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return 2.0 * unit_ball_volume(d - 1)
