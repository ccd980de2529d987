"""One-year energy and savings indicators."""

from __future__ import annotations

from dataclasses import dataclass

_RATIO_SLACK = 1e-9


@dataclass(frozen=True)
class KpiReport:
    scr: float
    ssr: float
    bu: float
    smr: float


def _check_fraction(name, value):
    if not -_RATIO_SLACK <= value <= 1 + _RATIO_SLACK:
        raise ValueError(f"{name} = {value} outside [0, 1]")
    return min(max(value, 0.0), 1.0)


def scr(pv_consumption: float, pv_generation: float) -> float:
    """Self-consumption rate: share of PV generation used on site."""
    if not pv_generation > 0:
        raise ZeroDivisionError("self-consumption rate undefined for zero generation")
    return _check_fraction("scr", pv_consumption / pv_generation)


def ssr(pv_consumption: float, load_total: float) -> float:
    """Self-supply rate: share of the load met by PV."""
    if not load_total > 0:
        raise ZeroDivisionError("self-supply rate undefined for zero load")
    return _check_fraction("ssr", pv_consumption / load_total)


def bu(battery_sent: float, load_total: float) -> float:
    if not load_total > 0:
        raise ZeroDivisionError("battery use undefined for zero load")
    if battery_sent < 0:
        raise ValueError("battery_sent must be non-negative")
    return battery_sent / load_total


def smr(savings_year: float, bill_year: float) -> float:
    """Saved money rate. Values above 1 mean the system earns more than the bill."""
    if not bill_year > 0:
        raise ZeroDivisionError("saved money rate undefined for a zero bill")
    if savings_year < 0:
        raise ValueError("savings_year must be non-negative")
    return savings_year / bill_year


def compute_kpis(year_result, savings_year: float, bill_year: float) -> KpiReport:
    """Indicators for one dispatch year given its unescalated savings and the reference bill."""
    used = year_result.pv_consumption
    return KpiReport(
        scr=scr(used, year_result.generation),
        ssr=ssr(used, year_result.load),
        bu=bu(year_result.charged_from_pv, year_result.load),
        smr=smr(savings_year, bill_year),
    )
