"""Domain types, profile ingestion and year-dependent degradation factors."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

HOURS_PER_YEAR = 8760
ALLOWED_STEP_HOURS = (0.25, 1.0)
CASES = ("I", "II", "III", "IV")
BATTERY_CASES = ("III", "IV")
GRID_CASES = ("II", "IV")

PROFILE_HEADERS = {
    "load": ("step", "kwh"),
    "generation_per_kwp": ("step", "kwh_per_kwp"),
}


class ProfileError(ValueError):
    """Raised when a profile file or series fails validation."""


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class EnergySeries:
    """Energy per step (kWh) covering exactly one non-leap year."""

    step_hours: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.step_hours not in ALLOWED_STEP_HOURS:
            raise ProfileError(f"step_hours must be one of {ALLOWED_STEP_HOURS}, got {self.step_hours}")
        arr = _frozen_array(self.values)
        if arr.ndim != 1:
            raise ProfileError("values must be one-dimensional")
        if len(arr) * self.step_hours != HOURS_PER_YEAR:
            raise ProfileError(
                f"wrong row count: {len(arr)} steps of {self.step_hours} h do not cover {HOURS_PER_YEAR} h"
            )
        if not np.all(np.isfinite(arr)):
            raise ProfileError("values must be finite")
        if np.any(arr < 0):
            raise ProfileError(f"negative value at step {int(np.argmax(arr < 0))}")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def total(self) -> float:
        return float(np.sum(self.values))

    def scaled(self, factor: float) -> "EnergySeries":
        return EnergySeries(self.step_hours, self.values * factor)


@dataclass(frozen=True)
class PvSystemSpec:
    capacity_kwp: float
    module_unit_wp: float = 250.0
    year25_power_fraction: float = 0.80

    def __post_init__(self):
        if not self.capacity_kwp > 0:
            raise ValueError("capacity_kwp must be positive")
        if not self.module_unit_wp > 0:
            raise ValueError("module_unit_wp must be positive")
        if not 0 < self.year25_power_fraction <= 1:
            raise ValueError("year25_power_fraction must be in (0, 1]")

    @property
    def module_count(self) -> float:
        return self.capacity_kwp * 1000.0 / self.module_unit_wp

    @property
    def whole_modules(self) -> bool:
        n = self.module_count
        return math.isclose(n, round(n), abs_tol=1e-9)


@dataclass(frozen=True)
class BatterySpec:
    nominal_capacity_kwh: float
    nominal_power_kw: float
    depth_of_discharge: float = 0.90
    charge_efficiency: float = 0.95
    discharge_efficiency: float = 0.95
    degradation_per_year: float = 0.02
    replacement_year: Optional[int] = 13
    name: str = "B"

    def __post_init__(self):
        if not self.nominal_capacity_kwh > 0:
            raise ValueError("nominal_capacity_kwh must be positive")
        if not self.nominal_power_kw > 0:
            raise ValueError("nominal_power_kw must be positive")
        if not 0 < self.depth_of_discharge <= 1:
            raise ValueError("depth_of_discharge must be in (0, 1]")
        for name in ("charge_efficiency", "discharge_efficiency"):
            if not 0 < getattr(self, name) <= 1:
                raise ValueError(f"{name} must be in (0, 1]")
        if not 0 <= self.degradation_per_year < 1:
            raise ValueError("degradation_per_year must be in [0, 1)")
        if self.replacement_year is not None and self.replacement_year <= 1:
            raise ValueError("replacement_year must be after year 1")


@dataclass(frozen=True)
class ScenarioSpec:
    """One configuration cell of the study matrix."""

    case: str
    pv: PvSystemSpec
    load: EnergySeries
    generation_per_kwp: EnergySeries
    tariff_id: str
    battery: Optional[BatterySpec] = None
    site_label: str = ""
    generation_multiplier: float = 1.0

    def __post_init__(self):
        if self.case not in CASES:
            raise ValueError(f"unknown case {self.case!r}")
        if (self.case in BATTERY_CASES) != (self.battery is not None):
            raise ValueError(f"case {self.case} {'requires' if self.case in BATTERY_CASES else 'forbids'} a battery")
        if self.load.step_hours != self.generation_per_kwp.step_hours:
            raise ValueError("load and generation profiles must share step_hours")
        if not self.generation_multiplier >= 0:
            raise ValueError("generation_multiplier must be non-negative")

    @property
    def grid_connected(self) -> bool:
        return self.case in GRID_CASES

    @property
    def name(self) -> str:
        batt = self.battery.name if self.battery is not None else "none"
        parts = [self.site_label or "site", self.tariff_id, self.case, f"{self.pv.capacity_kwp:g}kWp", batt]
        return "__".join(parts)


def load_profile_csv(path, kind: str = "load") -> EnergySeries:
    """Read a ``step,<value>`` profile CSV and return a validated series.

    The step length is inferred from the row count (8760 hourly rows or
    35040 quarter-hour rows). Errors carry the 1-based file line number.
    """
    if kind not in PROFILE_HEADERS:
        raise ValueError(f"kind must be one of {sorted(PROFILE_HEADERS)}")
    path = Path(path)
    if not path.is_file():
        raise ProfileError(f"{path}: file not found")

    values = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        expected = PROFILE_HEADERS[kind]
        if header is None or tuple(h.strip() for h in header) != expected:
            raise ProfileError(f"{path}: line 1: header must be {','.join(expected)}, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise ProfileError(f"{path}: line {lineno}: malformed row {row}")
            try:
                step = int(row[0])
                value = float(row[1])
            except ValueError:
                raise ProfileError(f"{path}: line {lineno}: malformed row {row}") from None
            if step != len(values):
                raise ProfileError(f"{path}: line {lineno}: non-monotonic step index {step}, expected {len(values)}")
            if not math.isfinite(value):
                raise ProfileError(f"{path}: line {lineno}: non-finite value")
            if value < 0:
                raise ProfileError(f"{path}: line {lineno}: negative value {value}")
            values.append(value)

    n = len(values)
    if n == HOURS_PER_YEAR:
        step_hours = 1.0
    elif n == 4 * HOURS_PER_YEAR:
        step_hours = 0.25
    else:
        raise ProfileError(f"{path}: wrong row count {n}, expected {HOURS_PER_YEAR} or {4 * HOURS_PER_YEAR}")
    return EnergySeries(step_hours, np.asarray(values))


def write_profile_csv(path, series: EnergySeries, kind: str = "load") -> None:
    header = PROFILE_HEADERS[kind]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i, v in enumerate(series.values):
            writer.writerow([i, repr(float(v))])


def resample_to_hourly(series: EnergySeries) -> EnergySeries:
    """Sum quarter-hour steps into hourly steps. Hourly input passes through."""
    if series.step_hours == 1.0:
        return series
    return EnergySeries(1.0, series.values.reshape(-1, 4).sum(axis=1))


def pv_year_factor(year: int, pv: PvSystemSpec, horizon: int = 25) -> float:
    """Remaining PV output fraction, linear from 1.0 at year 1 to the year-25 value."""
    if not 1 <= year <= horizon:
        raise ValueError(f"year must be in [1, {horizon}], got {year}")
    if year == 1:
        return 1.0
    if year == 25:
        return pv.year25_power_fraction
    slope = (1.0 - pv.year25_power_fraction) / 24.0
    return max(0.0, 1.0 - slope * (year - 1))


def battery_age(year: int, battery: BatterySpec) -> int:
    """Years since install or last replacement (0 in the install year)."""
    if year < 1:
        raise ValueError("year must be >= 1")
    r = battery.replacement_year
    if r is not None and year >= r:
        return year - r
    return year - 1


def battery_year_capacity(year: int, battery: BatterySpec) -> float:
    age = battery_age(year, battery)
    if age == 0:
        return battery.nominal_capacity_kwh
    return max(0.0, battery.nominal_capacity_kwh * (1.0 - battery.degradation_per_year * age))
