# %% [markdown]
# # One week of dispatch in each case
#
# Same house, same 1.5 kWp array, same summer week. The four cases only
# differ in where surplus goes and what covers the deficit.

# %%
from prosumer_sim.core import PvSystemSpec, ScenarioSpec, load_profile_csv
from prosumer_sim.dispatch import simulate_year
from prosumer_sim.runner import load_config

cfg = load_config("configs/study_2019.json")
load = load_profile_csv("configs/profiles/load_btn_c.csv", "load")
gen = load_profile_csv("configs/profiles/pv_evora.csv", "generation_per_kwp")

week = slice(24 * 180, 24 * 187)
names = ["gen", "load", "self", "charge", "discharge", "inject", "curtail", "import", "unmet", "soc"]

# %%
for case in ("I", "II", "III", "IV"):
    battery = cfg.batteries["B1"] if case in ("III", "IV") else None
    spec = ScenarioSpec(case, PvSystemSpec(1.5), load, gen, "continent_flat", battery=battery, site_label="evora")
    res, _ = simulate_year(spec, 1, keep_trace=True)
    week_totals = res.trace[:, week].sum(axis=1)
    flows = "  ".join(f"{n} {v:6.1f}" for n, v in zip(names[2:9], week_totals[2:9]))
    print(f"case {case:>3}: {flows}")

# %% [markdown]
# The battery state over one day, hour by hour, in Case IV.

# %%
spec = ScenarioSpec("IV", PvSystemSpec(1.5), load, gen, "continent_flat", battery=cfg.batteries["B1"])
res, _ = simulate_year(spec, 1, keep_trace=True)
day = res.trace[:, 24 * 180:24 * 181]
for h in range(24):
    g, l, s, c, d, inj, cur, imp, un, soc = day[:, h]
    bar = "#" * int(round(soc / 3.3 * 40))
    print(f"{h:02d}h gen {g:4.2f} load {l:4.2f} soc {soc:4.2f} {bar}")

# %% [markdown]
# Year totals across the 25-year horizon shrink as the panels age and the
# battery loses capacity until its replacement.

# %%
from prosumer_sim.dispatch import simulate_horizon

years = simulate_horizon(spec, 25)
for r in years[::4]:
    print(f"year {r.year:2d}: gen {r.generation:7.1f}  to battery {r.charged_from_pv:6.1f}  "
          f"from battery {r.discharged_to_load:6.1f}  injected {r.injected:6.1f}")
