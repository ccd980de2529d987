"""Time-of-use retail pricing, annual bills and surplus remuneration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .core import HOURS_PER_YEAR, EnergySeries

DAYS_PER_YEAR = 365
MONTH_DAYS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
_MONTH_START_HOURS = np.cumsum((0,) + MONTH_DAYS[:-1]) * 24

# Share of the monthly wholesale price paid for injected surplus.
SURPLUS_PRICE_SHARE = 0.9

FLAT = "flat"
BI_HOURLY = "bi-hourly-daily"


@dataclass(frozen=True)
class TariffSchedule:
    kind: str
    energy_prices: Mapping[str, float]
    contracted_power_price: float
    offpeak_window: tuple = (22, 8)

    def __post_init__(self):
        prices = dict(self.energy_prices)
        if self.kind == FLAT:
            if set(prices) != {"normal"}:
                raise ValueError("flat tariff needs exactly a 'normal' price")
        elif self.kind == BI_HOURLY:
            if set(prices) != {"peak", "off-peak"}:
                raise ValueError("bi-hourly tariff needs exactly 'peak' and 'off-peak' prices")
        else:
            raise ValueError(f"unknown tariff kind {self.kind!r}")
        for label, p in prices.items():
            if not (math.isfinite(p) and p > 0):
                raise ValueError(f"price {label!r} must be positive")
        if not (math.isfinite(self.contracted_power_price) and self.contracted_power_price >= 0):
            raise ValueError("contracted_power_price must be non-negative")
        start, end = self.offpeak_window
        if not (0 <= start <= 24 and 0 <= end <= 24) or start % 24 == end % 24:
            raise ValueError(f"invalid off-peak window {self.offpeak_window}")
        object.__setattr__(self, "energy_prices", prices)
        object.__setattr__(self, "offpeak_window", (start, end))

    def is_offpeak(self, hour_of_day: float) -> bool:
        start, end = self.offpeak_window
        if start < end:
            return start <= hour_of_day < end
        return hour_of_day >= start or hour_of_day < end


@dataclass(frozen=True)
class MarketPrices:
    """Average monthly wholesale prices, €/kWh, January first."""

    monthly: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.monthly, dtype=float)
        if arr.shape != (12,):
            raise ValueError("exactly 12 monthly prices required")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise ValueError("monthly prices must be positive and finite")
        arr.setflags(write=False)
        object.__setattr__(self, "monthly", arr)


def energy_price_at(tariff: TariffSchedule, hour_of_day: int) -> float:
    if not 0 <= hour_of_day < 24:
        raise ValueError(f"hour_of_day must be in [0, 24), got {hour_of_day}")
    if tariff.kind == FLAT:
        return tariff.energy_prices["normal"]
    if tariff.is_offpeak(hour_of_day):
        return tariff.energy_prices["off-peak"]
    return tariff.energy_prices["peak"]


def hour_of_day(n_steps: int, step_hours: float) -> np.ndarray:
    """Integer clock hour of each step of the year."""
    return (np.floor(np.arange(n_steps) * step_hours).astype(int)) % 24


def price_vector(tariff: TariffSchedule, n_steps: int = HOURS_PER_YEAR, step_hours: float = 1.0) -> np.ndarray:
    """Energy price (€/kWh) applied to each step of the year."""
    hourly = np.array([energy_price_at(tariff, h) for h in range(24)])
    return hourly[hour_of_day(n_steps, step_hours)]


def annual_bill(consumption_from_grid: EnergySeries, tariff: TariffSchedule) -> float:
    """Energy charges at time-of-use prices plus a full year of contracted power."""
    prices = price_vector(tariff, len(consumption_from_grid), consumption_from_grid.step_hours)
    energy = float(np.dot(consumption_from_grid.values, prices))
    return energy + DAYS_PER_YEAR * tariff.contracted_power_price


def surplus_revenue(injected_by_month, prices: MarketPrices) -> float:
    injected = np.asarray(injected_by_month, dtype=float)
    if injected.shape != (12,):
        raise ValueError("exactly 12 monthly energies required")
    if np.any(injected < 0):
        raise ValueError("injected energy must be non-negative")
    return float(np.sum(injected * prices.monthly * SURPLUS_PRICE_SHARE))


def month_of_step(step_index: int, step_hours: float = 1.0) -> int:
    """Calendar month (1-12) of a step in a non-leap year starting January 1."""
    hour = step_index * step_hours
    if not 0 <= hour < HOURS_PER_YEAR:
        raise ValueError(f"step {step_index} lies outside the year")
    return int(np.searchsorted(_MONTH_START_HOURS, hour, side="right"))


def month_index(n_steps: int, step_hours: float = 1.0) -> np.ndarray:
    """Zero-based month of every step; vectorised form of :func:`month_of_step`."""
    hours = np.arange(n_steps) * step_hours
    return np.searchsorted(_MONTH_START_HOURS, hours, side="right") - 1
