"""Run configuration, scenario-matrix expansion and CSV report emission."""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .core import BATTERY_CASES, CASES, BatterySpec, ProfileError, PvSystemSpec, ScenarioSpec, load_profile_csv
from .dispatch import simulate_horizon, write_trace_csv
from .econ import (
    CashFlowSchedule,
    EconConfig,
    PriceTable,
    PriceTableError,
    UndefinedResultError,
    bc_ratio,
    build_capex,
    build_cashflows,
    energy_basis,
    irr,
    lcoe,
    npv,
    simple_payback,
    tlcc,
    write_cashflow_csv,
)
from .kpi import bu, compute_kpis, smr, ssr
from .tariff import MarketPrices, TariffSchedule, annual_bill

logger = logging.getLogger(__name__)

RESULTS_HEADER = (
    "scenario", "site", "tariff", "case", "pv_kwp", "battery",
    "npv", "tlcc", "lcoe", "irr", "spb", "bc", "scr", "ssr", "bu", "smr",
)
SUMMARY_HEADER = (
    "site", "case", "scenarios", "paid_back", "mean_payback_years",
    "site_best_npv_scenario", "site_best_npv", "site_payback_ratio_ii_vs_i",
)


class ConfigError(ValueError):
    """Invalid or unresolvable run configuration."""


class ScenarioError(RuntimeError):
    def __init__(self, scenario: str, cause: BaseException):
        super().__init__(f"scenario {scenario} failed: {cause}")
        self.scenario = scenario


@dataclass(frozen=True)
class SiteProfiles:
    load: Path
    generation_per_kwp: Path
    tariffs: Optional[tuple] = None


@dataclass(frozen=True)
class Matrix:
    cases: tuple = CASES
    pv_sizes: tuple = ()
    batteries: tuple = ()
    tariffs: tuple = ()
    sites: Optional[tuple] = None


@dataclass(frozen=True)
class RunConfig:
    econ: EconConfig
    tariffs: Dict[str, TariffSchedule]
    market_prices: MarketPrices
    price_table: PriceTable
    sites: Dict[str, SiteProfiles]
    batteries: Dict[str, BatterySpec]
    matrix: Matrix
    output_dir: Path = Path("out")
    trace_year: Optional[int] = None
    module_unit_wp: float = 250.0
    year25_power_fraction: float = 0.80
    generation_multiplier: float = 1.0


@dataclass(frozen=True)
class EconReport:
    scenario: str
    site: str
    tariff: str
    case: str
    pv_kwp: float
    battery: str
    npv: float
    tlcc: float
    lcoe: Optional[float]
    irr: Optional[float]
    spb: Optional[int]
    bc: Optional[float]
    scr: Optional[float]
    ssr: float
    bu: float
    smr: float
    capex: float = 0.0
    cashflows: Optional[CashFlowSchedule] = field(default=None, repr=False, compare=False)


def _require(d, key, where):
    try:
        return d[key]
    except (KeyError, TypeError):
        raise ConfigError(f"{where}: missing {key!r}") from None


def _parse_tariff(tid, raw) -> TariffSchedule:
    try:
        return TariffSchedule(
            kind=_require(raw, "kind", f"tariff {tid}"),
            energy_prices={k: float(v) for k, v in _require(raw, "energy_prices", f"tariff {tid}").items()},
            contracted_power_price=float(_require(raw, "contracted_power_price", f"tariff {tid}")),
            offpeak_window=tuple(raw.get("offpeak_window", (22, 8))),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"tariff {tid}: {exc}") from exc


def _parse_battery(bid, raw) -> BatterySpec:
    allowed = {"nominal_capacity_kwh", "nominal_power_kw", "depth_of_discharge", "charge_efficiency",
               "discharge_efficiency", "degradation_per_year", "replacement_year"}
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"battery {bid}: unknown fields {sorted(unknown)}")
    try:
        return BatterySpec(name=bid, **raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"battery {bid}: {exc}") from exc


def parse_config(raw: dict, base_dir=".") -> RunConfig:
    """Build a :class:`RunConfig` from decoded JSON; relative paths resolve against ``base_dir``."""
    base_dir = Path(base_dir)
    try:
        econ = EconConfig(**raw.get("econ", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"econ: {exc}") from exc

    tariffs = {tid: _parse_tariff(tid, t) for tid, t in _require(raw, "tariffs", "config").items()}
    try:
        market = MarketPrices(_require(_require(raw, "market_prices", "config"), "monthly", "market_prices"))
    except ValueError as exc:
        raise ConfigError(f"market_prices: {exc}") from exc

    pt = _require(raw, "price_table", "config")
    try:
        price_table = PriceTable(
            module_eur_per_wp=float(_require(pt, "module_eur_per_wp", "price_table")),
            pv_sizes=tuple(float(s) for s in _require(pt, "pv_sizes", "price_table")),
            items={c: dict(rows) for c, rows in _require(pt, "cases", "price_table").items()},
            battery_units={k: float(v) for k, v in pt.get("battery_units", {}).items()},
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"price_table: {exc}") from exc
    for case, rows in price_table.items.items():
        for item, values in rows.items():
            if len(values) != len(price_table.pv_sizes):
                raise ConfigError(f"price_table: case {case} row {item} has {len(values)} entries, "
                                  f"expected {len(price_table.pv_sizes)}")

    batteries = {bid: _parse_battery(bid, b) for bid, b in raw.get("batteries", {}).items()}

    sites = {}
    for name, s in _require(raw, "sites", "config").items():
        site_tariffs = s.get("tariffs")
        sites[name] = SiteProfiles(
            load=base_dir / _require(s, "load", f"site {name}"),
            generation_per_kwp=base_dir / _require(s, "generation_per_kwp", f"site {name}"),
            tariffs=tuple(site_tariffs) if site_tariffs is not None else None,
        )

    m = _require(raw, "matrix", "config")
    matrix = Matrix(
        cases=tuple(m.get("cases", CASES)),
        pv_sizes=tuple(float(x) for x in m.get("pv_sizes", ())),
        batteries=tuple(m.get("batteries", ())),
        tariffs=tuple(m.get("tariffs", ())),
        sites=tuple(m["sites"]) if m.get("sites") is not None else None,
    )
    for c in matrix.cases:
        if c not in CASES:
            raise ConfigError(f"matrix: unknown case {c!r}")
    for b in matrix.batteries:
        if b not in batteries:
            raise ConfigError(f"matrix: unknown battery {b!r}")
    for s in matrix.sites or ():
        if s not in sites:
            raise ConfigError(f"matrix: unknown site {s!r}")
    for site_name, site in sites.items():
        for t in site.tariffs if site.tariffs is not None else matrix.tariffs:
            if t not in tariffs:
                raise ConfigError(f"unknown tariff id {t!r} (site {site_name})")

    pv = raw.get("pv", {})
    trace_year = raw.get("trace_year")
    if trace_year is not None and not 1 <= int(trace_year) <= econ.horizon_years:
        raise ConfigError(f"trace_year {trace_year} outside the horizon")
    return RunConfig(
        econ=econ,
        tariffs=tariffs,
        market_prices=market,
        price_table=price_table,
        sites=sites,
        batteries=batteries,
        matrix=matrix,
        output_dir=base_dir / raw.get("output_dir", "out"),
        trace_year=int(trace_year) if trace_year is not None else None,
        module_unit_wp=float(pv.get("module_unit_wp", 250.0)),
        year25_power_fraction=float(pv.get("year25_power_fraction", 0.80)),
        generation_multiplier=float(raw.get("generation_multiplier", 1.0)),
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(raw, path.parent)


def _site_profiles(cfg: RunConfig, names) -> Dict[str, tuple]:
    profiles = {}
    for name in names:
        site = cfg.sites[name]
        try:
            load = load_profile_csv(site.load, "load")
            gen = load_profile_csv(site.generation_per_kwp, "generation_per_kwp")
        except ProfileError as exc:
            raise ConfigError(f"site {name}: {exc}") from exc
        if load.step_hours != gen.step_hours:
            raise ConfigError(f"site {name}: load and generation step lengths differ")
        profiles[name] = (load, gen)
    return profiles


def expand_matrix(cfg: RunConfig) -> List[ScenarioSpec]:
    """Cartesian product of the matrix, ordered by site, tariff, case, PV size, battery.

    Battery options only combine with storage cases; storage cases need a battery.
    """
    m = cfg.matrix
    site_names = list(m.sites) if m.sites is not None else list(cfg.sites)
    profiles = _site_profiles(cfg, site_names)
    specs = []
    for site in site_names:
        load, gen = profiles[site]
        site_tariffs = cfg.sites[site].tariffs
        for tid in site_tariffs if site_tariffs is not None else m.tariffs:
            if tid not in cfg.tariffs:
                raise ConfigError(f"unknown tariff id {tid!r}")
            for case in m.cases:
                for size in m.pv_sizes:
                    pv = PvSystemSpec(size, cfg.module_unit_wp, cfg.year25_power_fraction)
                    options = [cfg.batteries[b] for b in m.batteries] if case in BATTERY_CASES else [None]
                    for battery in options:
                        specs.append(ScenarioSpec(
                            case=case, pv=pv, load=load, generation_per_kwp=gen, tariff_id=tid,
                            battery=battery, site_label=site, generation_multiplier=cfg.generation_multiplier,
                        ))
    return specs


def evaluate_scenario(spec: ScenarioSpec, cfg: RunConfig, trace_year: Optional[int] = None):
    """Dispatch, cash flows and indicators for one scenario.

    Returns ``(EconReport, trace_result)`` where ``trace_result`` is the
    dispatch year carrying per-step flows, or ``None``.
    """
    econ = cfg.econ
    d = econ.discount_rate
    tariff = cfg.tariffs[spec.tariff_id]
    dispatch = simulate_horizon(spec, econ.horizon_years, trace_year=trace_year)
    capex = build_capex(spec, cfg.price_table)
    cf = build_cashflows(spec, dispatch, tariff, cfg.market_prices, capex, econ)
    total_cost = tlcc(capex, cf, d)
    try:
        lcoe_value = lcoe(total_cost, energy_basis(spec, dispatch), d)
    except UndefinedResultError:
        lcoe_value = None
    try:
        bc = bc_ratio(cf, d)
    except UndefinedResultError:
        bc = None

    # Year-1 savings at base-year prices; escalation is 1 in year 1.
    year1 = dispatch[0]
    bill = annual_bill(spec.load, tariff)
    kpis = compute_kpis_safe(year1, cf.savings[1] + cf.revenue[1], bill)

    report = EconReport(
        scenario=spec.name,
        site=spec.site_label,
        tariff=spec.tariff_id,
        case=spec.case,
        pv_kwp=spec.pv.capacity_kwp,
        battery=spec.battery.name if spec.battery is not None else "",
        npv=npv(cf, d),
        tlcc=total_cost,
        lcoe=lcoe_value,
        irr=irr(cf),
        spb=simple_payback(cf),
        bc=bc,
        capex=capex.capex_total,
        cashflows=cf,
        **kpis,
    )
    trace = dispatch[trace_year - 1] if trace_year is not None else None
    return report, trace


def compute_kpis_safe(year_result, savings, bill) -> dict:
    """KPI fields for a report; SCR is left undefined when there is no generation."""
    if year_result.generation > 0:
        k = compute_kpis(year_result, savings, bill)
        return {"scr": k.scr, "ssr": k.ssr, "bu": k.bu, "smr": k.smr}
    return {
        "scr": None,
        "ssr": ssr(year_result.pv_consumption, year_result.load),
        "bu": bu(year_result.charged_from_pv, year_result.load),
        "smr": smr(savings, bill),
    }


def _worker(args):
    spec, cfg, trace_year = args
    try:
        return evaluate_scenario(spec, cfg, trace_year)
    except Exception as exc:  # noqa: BLE001 - reported with the scenario name
        raise ScenarioError(spec.name, exc) from exc


def _fmt(value, digits):
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return ""
    return f"{value:.{digits}f}"


def report_row(r: EconReport) -> list:
    return [
        r.scenario, r.site, r.tariff, r.case, f"{r.pv_kwp:g}", r.battery,
        _fmt(r.npv, 2), _fmt(r.tlcc, 2), _fmt(r.lcoe, 4), _fmt(r.irr, 6),
        "" if r.spb is None else str(r.spb),
        _fmt(r.bc, 4), _fmt(r.scr, 4), _fmt(r.ssr, 4), _fmt(r.bu, 4), _fmt(r.smr, 4),
    ]


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def emit_summary(results: Sequence[EconReport], path) -> Path:
    """Per-(site, case) mean payback, best-NPV scenario per site and Case II / Case I payback ratio."""
    if not results:
        raise ValueError("no results to summarise")
    path = Path(path)
    sites = list(dict.fromkeys(r.site for r in results))
    rows = []
    for site in sites:
        site_results = [r for r in results if r.site == site]
        best = max(site_results, key=lambda r: r.npv)
        means = {}
        for case in CASES:
            paybacks = [r.spb for r in site_results if r.case == case and r.spb is not None]
            means[case] = sum(paybacks) / len(paybacks) if paybacks else None
        ratio = None
        if means["I"] and means["II"] is not None:
            ratio = means["II"] / means["I"]
        for case in CASES:
            case_results = [r for r in site_results if r.case == case]
            if not case_results:
                continue
            paid = sum(r.spb is not None for r in case_results)
            rows.append([site, case, len(case_results), paid, _fmt(means[case], 4),
                         best.scenario, _fmt(best.npv, 2), _fmt(ratio, 4)])
    _write_csv(path, SUMMARY_HEADER, rows)
    return path


def run_sweep(cfg: RunConfig, out_dir=None, jobs: int = 1, trace_year: Optional[int] = None) -> List[EconReport]:
    """Evaluate every matrix cell and write results, cash-flow and trace CSVs.

    Output is ordered by scenario index and is byte-identical for any
    ``jobs``.
    """
    out = Path(out_dir) if out_dir is not None else cfg.output_dir
    trace_year = trace_year if trace_year is not None else cfg.trace_year
    if trace_year is not None and not 1 <= trace_year <= cfg.econ.horizon_years:
        raise ConfigError(f"trace_year {trace_year} outside the horizon")
    specs = expand_matrix(cfg)
    for spec in specs:
        try:
            build_capex(spec, cfg.price_table)
        except PriceTableError as exc:
            raise ConfigError(f"scenario {spec.name}: {exc}") from exc

    out.mkdir(parents=True, exist_ok=True)
    (out / "cashflows").mkdir(exist_ok=True)
    if trace_year is not None:
        (out / "trace").mkdir(exist_ok=True)

    tasks = [(spec, cfg, trace_year) for spec in specs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outputs = pool.map(_worker, tasks, chunksize=max(1, len(tasks) // (4 * jobs)))
            outputs = list(outputs)
    else:
        outputs = [_worker(t) for t in tasks]

    reports = []
    for report, trace in outputs:
        reports.append(report)
        write_cashflow_csv(out / "cashflows" / f"{report.scenario}.csv", report.cashflows, cfg.econ.discount_rate)
        if trace is not None:
            write_trace_csv(out / "trace" / f"{report.scenario}.csv", trace)
    _write_csv(out / "results.csv", RESULTS_HEADER, [report_row(r) for r in reports])
    if reports:
        emit_summary(reports, out / "summary.csv")
    logger.info("wrote %d scenarios to %s", len(reports), out)
    return reports
