# %% [markdown]
# # Cash flows and economic indicators
#
# One scenario from the shipped configuration, followed from investment to
# the indicator bundle.

# %%
from prosumer_sim.core import PvSystemSpec, ScenarioSpec, load_profile_csv
from prosumer_sim.dispatch import simulate_horizon
from prosumer_sim.econ import (
    bc_ratio, build_capex, build_cashflows, discounted_payback, energy_basis, irr, lcoe, npv,
    simple_payback, tlcc,
)
from prosumer_sim.runner import load_config

cfg = load_config("configs/study_2019.json")
load = load_profile_csv("configs/profiles/load_btn_c.csv", "load")
gen = load_profile_csv("configs/profiles/pv_evora.csv", "generation_per_kwp")
d = cfg.econ.discount_rate

# %%
spec = ScenarioSpec("II", PvSystemSpec(1.5), load, gen, "continent_bihourly", site_label="evora")
capex = build_capex(spec, cfg.price_table)
print(capex)
print(f"capex total {capex.capex_total:.2f} EUR")

# %%
dispatch = simulate_horizon(spec, cfg.econ.horizon_years)
cf = build_cashflows(spec, dispatch, cfg.tariffs[spec.tariff_id], cfg.market_prices, capex, cfg.econ)
for n in (0, 1, 2, 10, 25):
    print(f"year {n:2d}: savings {cf.savings[n]:7.2f}  revenue {cf.revenue[n]:6.2f}  net {cf.net[n]:9.2f}")

# %%
total = tlcc(capex, cf, d)
print(f"NPV  {npv(cf, d):9.2f} EUR")
print(f"TLCC {total:9.2f} EUR")
print(f"LCOE {lcoe(total, energy_basis(spec, dispatch), d):9.4f} EUR/kWh")
print(f"IRR  {irr(cf)}")
print(f"SPB  {simple_payback(cf)} years, discounted {discounted_payback(cf, d)} years")
print(f"B/C  {bc_ratio(cf, d):9.4f}")

# %% [markdown]
# Adding the largest battery to the same array. The battery saves a little
# more energy but its price, and the replacement halfway through, dominate.

# %%
spec_b = ScenarioSpec("IV", PvSystemSpec(1.5), load, gen, "continent_bihourly",
                      battery=cfg.batteries["B3"], site_label="evora")
capex_b = build_capex(spec_b, cfg.price_table)
dispatch_b = simulate_horizon(spec_b, cfg.econ.horizon_years)
cf_b = build_cashflows(spec_b, dispatch_b, cfg.tariffs[spec_b.tariff_id], cfg.market_prices, capex_b, cfg.econ)
print(f"NPV {npv(cf_b, d):.2f} EUR, payback {simple_payback(cf_b)}, IRR {irr(cf_b)}")
print("replacement outlay in year 13:", round(cf_b.investment[13], 2))
