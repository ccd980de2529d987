# %% [markdown]
# # Self-consumption indicators against PV size
#
# Larger arrays cover more of the load (SSR rises) but use a smaller share
# of what they produce (SCR falls). A battery shifts both upward.

# %%
import dataclasses

from prosumer_sim.core import PvSystemSpec, ScenarioSpec, load_profile_csv
from prosumer_sim.runner import evaluate_scenario, load_config

cfg = load_config("configs/study_2019.json")
cfg = dataclasses.replace(cfg, econ=dataclasses.replace(cfg.econ, horizon_years=1))
load = load_profile_csv("configs/profiles/load_btn_c.csv", "load")
gen = load_profile_csv("configs/profiles/pv_porto.csv", "generation_per_kwp")

# %%
print("case  kWp   batt    SCR     SSR     BU      SMR")
for case, batt in (("II", None), ("IV", "B1"), ("IV", "B3")):
    for kwp in cfg.price_table.pv_sizes:
        battery = cfg.batteries[batt] if batt else None
        spec = ScenarioSpec(case, PvSystemSpec(kwp), load, gen, "continent_flat", battery=battery, site_label="porto")
        r, _ = evaluate_scenario(spec, cfg)
        print(f"{case:>4} {kwp:5.2f} {batt or '-':>5} {r.scr:7.4f} {r.ssr:7.4f} {r.bu:7.4f} {r.smr:7.4f}")

# %% [markdown]
# At 0.5 kWp the daily surplus is smaller than even the smallest battery,
# so B1 and B3 give identical indicators.
