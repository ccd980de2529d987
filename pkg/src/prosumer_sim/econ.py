"""Cash-flow construction and discounted economic indicators."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .core import BATTERY_CASES, ScenarioSpec
from .dispatch import DispatchYearResult
from .tariff import DAYS_PER_YEAR, MarketPrices, TariffSchedule, price_vector, surplus_revenue

CAPEX_ITEMS = ("structures", "inverter", "cables_other", "installation", "registration_fee")
CASHFLOW_HEADER = ("year", "investment", "savings", "revenue", "om", "net", "discounted_net", "cumulative_nondiscounted")

IRR_LOWER = -0.9999
IRR_UPPER = 10.0
IRR_NPV_TOL = 1e-6
IRR_RATE_TOL = 1e-9

# Registration fee bands (upper bound kW inclusive, with injection €, without injection €).
# ``None`` marks a band where the regime does not apply.
UPAC_FEE_BANDS = (
    (1.5, 30.0, None),
    (5.0, 100.0, 70.0),
    (100.0, 250.0, 175.0),
    (250.0, 500.0, 300.0),
    (1000.0, 750.0, 500.0),
)


class UndefinedResultError(ArithmeticError):
    """An indicator whose denominator vanishes."""


class PriceTableError(KeyError):
    pass


def upac_registration_fee(installed_kw: float, grid_injection: bool) -> Optional[float]:
    """Self-consumption registration fee band for an installed power.

    Returns ``None`` where no fee is defined (no-injection units below 1.5 kW).
    """
    if installed_kw <= 0:
        raise ValueError("installed power must be positive")
    for upper, with_inj, without_inj in UPAC_FEE_BANDS:
        if installed_kw <= upper:
            return with_inj if grid_injection else without_inj
    raise ValueError(f"{installed_kw} kW exceeds the self-consumption regime")


@dataclass(frozen=True)
class PriceTable:
    """Component prices per case and PV size, plus battery unit prices.

    ``items[case][item]`` is a list aligned with ``pv_sizes``.
    """

    module_eur_per_wp: float
    pv_sizes: tuple
    items: Mapping[str, Mapping[str, Sequence[float]]]
    battery_units: Mapping[str, float] = field(default_factory=dict)

    def cell(self, case: str, capacity_kwp: float) -> dict:
        try:
            col = next(i for i, s in enumerate(self.pv_sizes) if math.isclose(s, capacity_kwp, rel_tol=0, abs_tol=1e-9))
        except StopIteration:
            raise PriceTableError(f"no price column for {capacity_kwp} kWp") from None
        if case not in self.items:
            raise PriceTableError(f"no prices for case {case}")
        row = self.items[case]
        missing = [k for k in CAPEX_ITEMS if k not in row]
        if missing:
            raise PriceTableError(f"case {case} lacks price rows {missing}")
        return {k: float(row[k][col]) for k in CAPEX_ITEMS}


@dataclass(frozen=True)
class CostBreakdown:
    modules_cost: float
    structures: float
    inverter: float
    cables_other: float
    installation: float
    battery_unit: float
    registration_fee: float

    @property
    def capex_total(self) -> float:
        return (self.modules_cost + self.structures + self.inverter + self.cables_other
                + self.installation + self.battery_unit + self.registration_fee)


@dataclass(frozen=True)
class EconConfig:
    horizon_years: int = 25
    discount_rate: float = 0.03
    inflation_rate: float = 0.025
    om_fraction_per_year: float = 0.0
    escalate_prices_with_inflation: bool = True
    count_contracted_power_savings_offgrid: bool = False

    def __post_init__(self):
        if self.horizon_years < 1:
            raise ValueError("horizon_years must be >= 1")
        if not self.discount_rate > -1:
            raise ValueError("discount_rate must exceed -1")
        if self.inflation_rate < 0:
            raise ValueError("inflation_rate must be non-negative")
        if self.om_fraction_per_year < 0:
            raise ValueError("om_fraction_per_year must be non-negative")


@dataclass(frozen=True)
class CashFlowSchedule:
    """Yearly streams for years 0..N; year 0 carries only the initial investment."""

    investment: np.ndarray
    savings: np.ndarray
    revenue: np.ndarray
    om: np.ndarray

    def __post_init__(self):
        arrays = [np.array(getattr(self, k), dtype=float) for k in ("investment", "savings", "revenue", "om")]
        n = len(arrays[0])
        if n < 1 or any(len(a) != n for a in arrays):
            raise ValueError("streams must share a non-zero length")
        for name, a in zip(("investment", "savings", "revenue", "om"), arrays):
            if not np.all(np.isfinite(a)):
                raise ValueError(f"{name} stream must be finite")
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @classmethod
    def from_net(cls, net) -> "CashFlowSchedule":
        """Schedule whose negative flows are investments and positive flows savings."""
        net = np.asarray(net, dtype=float)
        return cls(np.maximum(-net, 0.0), np.maximum(net, 0.0), np.zeros_like(net), np.zeros_like(net))

    @property
    def horizon(self) -> int:
        return len(self.investment) - 1

    @property
    def net(self) -> np.ndarray:
        return self.savings + self.revenue - self.om - self.investment

    @property
    def net_savings(self) -> np.ndarray:
        """Savings plus revenue minus O&M, per year."""
        return self.savings + self.revenue - self.om


@dataclass(frozen=True)
class EnergyBasis:
    """Energy per year 1..N (kWh) for the levelised-cost denominator."""

    q: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        if np.any(q < 0) or not np.all(np.isfinite(q)):
            raise ValueError("energy basis must be finite and non-negative")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)


def discount_factors(d: float, n_years: int) -> np.ndarray:
    """``1/(1+d)**n`` for n = 0..n_years."""
    if not d > -1:
        raise ValueError("discount rate must exceed -1")
    return (1.0 + d) ** -np.arange(n_years + 1, dtype=float)


def build_capex(spec: ScenarioSpec, price_table: PriceTable) -> CostBreakdown:
    cell = price_table.cell(spec.case, spec.pv.capacity_kwp)
    battery_unit = 0.0
    if spec.battery is not None:
        try:
            battery_unit = float(price_table.battery_units[spec.battery.name])
        except KeyError:
            raise PriceTableError(f"no price for battery {spec.battery.name!r}") from None
    modules = spec.pv.capacity_kwp * 1000.0 * price_table.module_eur_per_wp
    return CostBreakdown(modules_cost=modules, battery_unit=battery_unit, **cell)


def build_cashflows(spec: ScenarioSpec, dispatch: Sequence[DispatchYearResult], tariff: TariffSchedule,
                    prices: MarketPrices, capex: CostBreakdown, cfg: EconConfig) -> CashFlowSchedule:
    n_years = cfg.horizon_years
    if len(dispatch) != n_years:
        raise ValueError(f"expected {n_years} dispatch years, got {len(dispatch)}")

    investment = np.zeros(n_years + 1)
    savings = np.zeros(n_years + 1)
    revenue = np.zeros(n_years + 1)
    om = np.zeros(n_years + 1)

    investment[0] = capex.capex_total
    step_prices = None
    fixed_savings = 0.0
    if not spec.grid_connected and cfg.count_contracted_power_savings_offgrid:
        fixed_savings = DAYS_PER_YEAR * tariff.contracted_power_price

    for n, res in enumerate(dispatch, start=1):
        esc = (1.0 + cfg.inflation_rate) ** (n - 1) if cfg.escalate_prices_with_inflation else 1.0
        if step_prices is None:
            avoided = res.avoided_series
            step_prices = price_vector(tariff, len(avoided), avoided.step_hours)
        savings[n] = (float(np.dot(res.avoided_series.values, step_prices)) + fixed_savings) * esc
        if spec.grid_connected:
            revenue[n] = surplus_revenue(res.injected_by_month, prices) * esc
        om[n] = cfg.om_fraction_per_year * capex.capex_total * esc

    battery = spec.battery
    if battery is not None and battery.replacement_year is not None and battery.replacement_year <= n_years:
        r = battery.replacement_year
        esc = (1.0 + cfg.inflation_rate) ** (r - 1) if cfg.escalate_prices_with_inflation else 1.0
        investment[r] += capex.battery_unit * esc

    return CashFlowSchedule(investment, savings, revenue, om)


def energy_basis(spec: ScenarioSpec, dispatch: Sequence[DispatchYearResult]) -> EnergyBasis:
    """Yearly PV generation, plus battery energy delivered to the load in storage cases."""
    if spec.case in BATTERY_CASES:
        return EnergyBasis([r.generation + r.discharged_to_load for r in dispatch])
    return EnergyBasis([r.generation for r in dispatch])


def npv(cf: CashFlowSchedule, d: float) -> float:
    return float(np.dot(cf.net, discount_factors(d, cf.horizon)))


def tlcc(capex: CostBreakdown, cf: CashFlowSchedule, d: float) -> float:
    """Initial investment plus discounted O&M and later investments (battery replacement)."""
    df = discount_factors(d, cf.horizon)
    recurring = (cf.om + cf.investment)[1:]
    return capex.capex_total + float(np.dot(recurring, df[1:]))


def lcoe(tlcc_value: float, basis: EnergyBasis, d: float) -> float:
    df = discount_factors(d, len(basis.q))[1:]
    denom = float(np.dot(basis.q, df))
    if not denom > 0:
        raise UndefinedResultError("discounted energy basis is zero")
    return tlcc_value / denom


def _npv_many(net: np.ndarray, rates: np.ndarray) -> np.ndarray:
    exps = np.arange(len(net), dtype=float)
    with np.errstate(over="ignore"):
        return ((1.0 + rates[:, None]) ** -exps[None, :]) @ net


def _irr_grid() -> np.ndarray:
    return np.unique(np.concatenate([
        np.linspace(IRR_LOWER, -0.2, 161),
        np.linspace(-0.2, 0.5, 1401),
        np.linspace(0.5, IRR_UPPER, 381),
    ]))


_GRID = _irr_grid()


def irr(cf: CashFlowSchedule) -> Optional[float]:
    """Rate in (-0.9999, 10] at which NPV vanishes, or ``None``.

    Sign changes of NPV are located on a fixed rate grid; the bracket whose
    root lies nearest zero is refined by bisection.
    """
    net = cf.net
    if not (np.any(net > 0) and np.any(net < 0)):
        return None

    def f(r):
        return float(np.dot(net, (1.0 + r) ** -np.arange(len(net), dtype=float)))

    values = _npv_many(net, _GRID)
    exact = np.flatnonzero(values == 0.0)
    roots = [float(_GRID[i]) for i in exact]
    finite = np.isfinite(values)
    sign = np.sign(values)
    brackets = np.flatnonzero(finite[:-1] & finite[1:] & (sign[:-1] * sign[1:] < 0))

    for i in brackets:
        lo, hi = float(_GRID[i]), float(_GRID[i + 1])
        flo = values[i]
        while True:
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if (abs(fm) < IRR_NPV_TOL and hi - lo < IRR_RATE_TOL) or mid in (lo, hi):
                break
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
        roots.append(mid)

    if not roots:
        return None
    return min(roots, key=lambda r: (abs(r), r))


def simple_payback(cf: CashFlowSchedule) -> Optional[int]:
    """First year whose cumulative undiscounted savings cover cumulative investment."""
    cum_s = np.cumsum(cf.net_savings)
    cum_i = np.cumsum(cf.investment)
    for y in range(1, cf.horizon + 1):
        if cum_s[y] >= cum_i[y]:
            return y
    return None


def discounted_payback(cf: CashFlowSchedule, d: float) -> Optional[int]:
    df = discount_factors(d, cf.horizon)
    cum_s = np.cumsum(cf.net_savings * df)
    cum_i = np.cumsum(cf.investment * df)
    for y in range(1, cf.horizon + 1):
        if cum_s[y] >= cum_i[y]:
            return y
    return None


def bc_ratio(cf: CashFlowSchedule, d: float) -> float:
    """Present value of savings and revenue over present value of investment and O&M."""
    df = discount_factors(d, cf.horizon)
    benefits = float(np.dot(cf.savings + cf.revenue, df))
    costs = float(np.dot(cf.investment + cf.om, df))
    if not costs > 0:
        raise UndefinedResultError("present value of costs is zero")
    return benefits / costs


def write_cashflow_csv(path, cf: CashFlowSchedule, d: float) -> None:
    net = cf.net
    disc = net * discount_factors(d, cf.horizon)
    cum = np.cumsum(net)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CASHFLOW_HEADER)
        for n in range(cf.horizon + 1):
            writer.writerow([n] + [f"{v:.2f}" for v in (
                cf.investment[n], cf.savings[n], cf.revenue[n], cf.om[n], net[n], disc[n], cum[n])])
