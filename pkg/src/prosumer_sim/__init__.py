"""Techno-economic simulation of residential PV and PV+battery self-consumption."""

from .core import (
    BatterySpec,
    EnergySeries,
    ProfileError,
    PvSystemSpec,
    ScenarioSpec,
    battery_year_capacity,
    load_profile_csv,
    pv_year_factor,
    resample_to_hourly,
)
from .dispatch import (
    BatteryState,
    DispatchYearResult,
    StepFlows,
    simulate_horizon,
    simulate_year,
    step_dispatch,
)
from .econ import (
    CashFlowSchedule,
    CostBreakdown,
    EconConfig,
    EnergyBasis,
    PriceTable,
    bc_ratio,
    build_capex,
    build_cashflows,
    energy_basis,
    irr,
    lcoe,
    npv,
    simple_payback,
    tlcc,
)
from .kpi import KpiReport, bu, compute_kpis, scr, smr, ssr
from .runner import ConfigError, EconReport, RunConfig, emit_summary, expand_matrix, load_config, run_sweep
from .tariff import MarketPrices, TariffSchedule, annual_bill, energy_price_at, month_of_step, surplus_revenue

__version__ = "0.1.0"
