"""Deterministic synthetic stand-in profiles for demos and tests.

These are shaped like a residential load curve and a south-facing PV array
but are not measured data. Same arguments always give the same arrays.
"""

from __future__ import annotations

import numpy as np

from .core import HOURS_PER_YEAR, EnergySeries


def _hours(step_hours):
    n = int(round(HOURS_PER_YEAR / step_hours))
    t = np.arange(n) * step_hours
    return t, t % 24.0, np.floor(t / 24.0)


def synthetic_load(annual_kwh: float = 2000.0, step_hours: float = 1.0, seed: int = 0,
                   noise: float = 0.15) -> EnergySeries:
    """Household load with morning and evening peaks and a winter bump."""
    t, hod, day = _hours(step_hours)
    base = 0.35
    morning = 0.6 * np.exp(-0.5 * ((hod - 8.0) / 1.2) ** 2)
    evening = 1.2 * np.exp(-0.5 * ((hod - 20.5) / 1.8) ** 2)
    midday = 0.25 * np.exp(-0.5 * ((hod - 13.0) / 1.5) ** 2)
    seasonal = 1.0 + 0.25 * np.cos(2 * np.pi * (day - 15) / 365.0)
    rng = np.random.default_rng(seed)
    jitter = np.clip(1.0 + noise * rng.standard_normal(len(t)), 0.2, None)
    shape = (base + morning + evening + midday) * seasonal * jitter
    return EnergySeries(step_hours, shape * (annual_kwh / shape.sum()))


def synthetic_generation(annual_kwh_per_kwp: float = 1600.0, latitude_deg: float = 38.5,
                         step_hours: float = 1.0, seed: int = 1, cloudiness: float = 0.3) -> EnergySeries:
    """AC output per kWp: a sine-shaped day between sunrise and sunset with random daily clouds."""
    t, hod, day = _hours(step_hours)
    lat = np.radians(latitude_deg)
    decl = np.radians(23.44) * np.sin(2 * np.pi * (day + 284) / 365.0)
    cos_ws = np.clip(-np.tan(lat) * np.tan(decl), -1.0, 1.0)
    half_day = np.degrees(np.arccos(cos_ws)) / 15.0
    sunrise, sunset = 12.0 - half_day, 12.0 + half_day
    mid = hod + 0.5 * step_hours
    frac = (mid - sunrise) / (sunset - sunrise)
    daylight = (frac > 0) & (frac < 1)
    elevation_peak = np.sin(np.pi / 2 - lat + decl)
    shape = np.where(daylight, np.sin(np.pi * np.clip(frac, 0, 1)), 0.0) * elevation_peak

    rng = np.random.default_rng(seed)
    n_days = int(day[-1]) + 1
    clear = 1.0 - cloudiness * rng.beta(0.8, 1.6, n_days)
    shape = shape * clear[day.astype(int)]
    return EnergySeries(step_hours, shape * (annual_kwh_per_kwp / shape.sum()))
