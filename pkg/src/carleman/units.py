"""Degree/radian conversions. Degrees at interfaces, radians everywhere else."""

import math


def deg2rad(deg: float) -> float:
    return math.radians(deg)


def rad2deg(rad: float) -> float:
    return math.degrees(rad)


def half_angle(theta_deg: float) -> float:
    """Half of a full opening angle given in degrees, in radians."""
    return 0.5 * math.radians(theta_deg)


def full_angle_deg(half_angle_rad: float) -> float:
    return 2.0 * math.degrees(half_angle_rad)
