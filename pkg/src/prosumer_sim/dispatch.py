"""Rule-based energy-flow simulation of the four prosumer cases.

Every step runs the same waterfall: PV serves the load first, the surplus
goes to the battery (Cases III/IV) and then to the grid (II/IV) or is
curtailed (I/III); the deficit is covered by the battery, then by the grid
(II/IV) or left unmet (I/III). The battery never charges from the grid.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .core import (
    BATTERY_CASES,
    CASES,
    BatterySpec,
    EnergySeries,
    ScenarioSpec,
    battery_year_capacity,
    pv_year_factor,
)
from .tariff import month_index

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

CASE_CODE = {c: i + 1 for i, c in enumerate(CASES)}

FLOW_FIELDS = (
    "self_consumed",
    "charged_from_pv",
    "discharged_to_load",
    "injected",
    "curtailed",
    "imported",
    "unmet",
)
TRACE_HEADER = ("step", "gen", "load", "self", "charge", "discharge", "inject", "curtail", "import", "unmet", "soc")


@dataclass(frozen=True)
class BatteryState:
    stored_kwh: float = 0.0
    usable_capacity_kwh: float = 0.0

    def __post_init__(self):
        if self.stored_kwh < 0 or self.stored_kwh > self.usable_capacity_kwh + 1e-12:
            raise ValueError(f"stored energy {self.stored_kwh} outside [0, {self.usable_capacity_kwh}]")


@dataclass(frozen=True)
class StepFlows:
    self_consumed: float = 0.0
    charged_from_pv: float = 0.0
    discharged_to_load: float = 0.0
    injected: float = 0.0
    curtailed: float = 0.0
    imported: float = 0.0
    unmet: float = 0.0


@njit(cache=True)
def _waterfall(case, gen, load, stored, usable, p_step, eta_c, eta_d):
    self_used = min(gen, load)
    surplus = gen - self_used
    deficit = load - self_used
    charge = 0.0
    discharge = 0.0
    inject = 0.0
    curtail = 0.0
    imp = 0.0
    unmet = 0.0

    if case >= 3:
        if surplus > 0.0:
            charge = min(surplus, p_step, (usable - stored) / eta_c)
            if charge < 0.0:
                charge = 0.0
            stored = min(stored + charge * eta_c, usable)
            surplus = surplus - charge
        if deficit > 0.0:
            discharge = min(deficit, p_step, stored * eta_d)
            stored = max(stored - discharge / eta_d, 0.0)
            deficit = deficit - discharge

    if case == 1 or case == 3:
        curtail = surplus
        unmet = deficit
    else:
        inject = surplus
        imp = deficit
    return self_used, charge, discharge, inject, curtail, imp, unmet, stored


@njit(cache=True)
def _dispatch_year(case, gen, load, stored, usable, p_step, eta_c, eta_d, out):
    for i in range(gen.shape[0]):
        s, c, d, inj, cur, imp, un, stored = _waterfall(case, gen[i], load[i], stored, usable, p_step, eta_c, eta_d)
        out[0, i] = s
        out[1, i] = c
        out[2, i] = d
        out[3, i] = inj
        out[4, i] = cur
        out[5, i] = imp
        out[6, i] = un
        out[7, i] = stored
    return stored


def step_dispatch(case, gen, load, state: BatteryState, battery: Optional[BatterySpec] = None, step_hours=1.0):
    """Dispatch one step. Returns ``(StepFlows, BatteryState)``."""
    if case not in CASE_CODE:
        raise ValueError(f"unknown case {case!r}")
    if gen < 0 or load < 0:
        raise ValueError("gen and load must be non-negative")
    if (case in BATTERY_CASES) != (battery is not None):
        raise ValueError(f"battery spec inconsistent with case {case}")
    if battery is None:
        p_step, eta_c, eta_d = 0.0, 1.0, 1.0
    else:
        p_step = battery.nominal_power_kw * step_hours
        eta_c, eta_d = battery.charge_efficiency, battery.discharge_efficiency
    *flows, stored = _waterfall(
        CASE_CODE[case], float(gen), float(load), state.stored_kwh, state.usable_capacity_kwh, p_step, eta_c, eta_d
    )
    return StepFlows(*flows), BatteryState(stored, state.usable_capacity_kwh)


@dataclass(frozen=True, eq=False)
class DispatchYearResult:
    year: int
    generation: float
    load: float
    self_consumed: float
    charged_from_pv: float
    discharged_to_load: float
    injected: float
    curtailed: float
    imported: float
    unmet: float
    injected_by_month: np.ndarray = field(repr=False)
    grid_import_series: EnergySeries = field(repr=False)
    avoided_series: EnergySeries = field(repr=False)
    initial_stored: float = 0.0
    final_stored: float = 0.0
    trace: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def pv_consumption(self) -> float:
        """Load served from PV, directly or through the battery."""
        return self.self_consumed + self.discharged_to_load

    def totals(self) -> dict:
        return {name: getattr(self, name) for name in ("generation", "load") + FLOW_FIELDS}


def initial_state(spec: ScenarioSpec) -> BatteryState:
    """Empty battery sized for year 1 (zero-capacity placeholder without battery)."""
    if spec.battery is None:
        return BatteryState(0.0, 0.0)
    return BatteryState(0.0, battery_year_capacity(1, spec.battery) * spec.battery.depth_of_discharge)


def year_generation(spec: ScenarioSpec, year: int, horizon: int = 25) -> np.ndarray:
    factor = pv_year_factor(year, spec.pv, max(horizon, year))
    return spec.generation_per_kwp.values * (spec.pv.capacity_kwp * spec.generation_multiplier * factor)


def simulate_year(spec: ScenarioSpec, year: int, carry_state: Optional[BatteryState] = None, *,
                  horizon: int = 25, keep_trace: bool = False):
    """Run one year of dispatch. Returns ``(DispatchYearResult, BatteryState)``.

    The carried charge is clipped to this year's usable capacity before the
    first step.
    """
    step_hours = spec.load.step_hours
    gen = year_generation(spec, year, horizon)
    load = spec.load.values
    n = len(load)

    battery = spec.battery
    if battery is None:
        usable, p_step, eta_c, eta_d = 0.0, 0.0, 1.0, 1.0
        stored = 0.0
    else:
        usable = battery_year_capacity(year, battery) * battery.depth_of_discharge
        p_step = battery.nominal_power_kw * step_hours
        eta_c, eta_d = battery.charge_efficiency, battery.discharge_efficiency
        stored = 0.0 if carry_state is None else min(carry_state.stored_kwh, usable)

    out = np.empty((8, n))
    stored0 = stored
    stored = _dispatch_year(CASE_CODE[spec.case], gen, load, stored, usable, p_step, eta_c, eta_d, out)

    flows = dict(zip(FLOW_FIELDS, (float(np.sum(out[k])) for k in range(7))))
    months = month_index(n, step_hours)
    injected_by_month = np.bincount(months, weights=out[3], minlength=12)
    injected_by_month.setflags(write=False)

    result = DispatchYearResult(
        year=year,
        generation=float(np.sum(gen)),
        load=spec.load.total,
        injected_by_month=injected_by_month,
        grid_import_series=EnergySeries(step_hours, out[5]),
        avoided_series=EnergySeries(step_hours, out[0] + out[2]),
        initial_stored=stored0,
        final_stored=stored,
        trace=np.vstack([gen, load, out]) if keep_trace else None,
        **flows,
    )
    return result, BatteryState(stored, usable)


def simulate_horizon(spec: ScenarioSpec, horizon: int = 25, *, trace_year: Optional[int] = None):
    """Simulate years 1..horizon with degradation, carrying battery charge across years."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    results = []
    state = initial_state(spec)
    for year in range(1, horizon + 1):
        res, state = simulate_year(spec, year, state, horizon=horizon, keep_trace=(year == trace_year))
        results.append(res)
    return results


def write_trace_csv(path, result: DispatchYearResult) -> None:
    """Per-step flows of one simulated year; requires ``keep_trace=True``."""
    if result.trace is None:
        raise ValueError("result was simulated without keep_trace")
    tr = result.trace
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for i in range(tr.shape[1]):
            writer.writerow([i] + [f"{v:.6f}" for v in tr[:, i]])
