# %% [markdown]
# # Stand-in input profiles
#
# The study's measured inputs (a BTN C household load curve and hourly PV
# output for three Portuguese sites) are not public. This script writes
# synthetic substitutes with plausible magnitudes into `configs/profiles/`,
# so the shipped configuration runs end to end.
#
# Run from the repository root: `python notebooks/00_standin_profiles.py`

# %%
from pathlib import Path

import numpy as np

from prosumer_sim.core import resample_to_hourly, write_profile_csv
from prosumer_sim.synthetic import synthetic_generation, synthetic_load

out = Path("configs/profiles")
out.mkdir(parents=True, exist_ok=True)

# %% [markdown]
# The load is generated at 15-minute resolution, like the distributor's
# published profiles, then summed to hourly steps.

# %%
load_qh = synthetic_load(annual_kwh=1950.0, step_hours=0.25, seed=2019)
load = resample_to_hourly(load_qh)
print(f"quarter-hour total {load_qh.total:.3f} kWh, hourly total {load.total:.3f} kWh")
write_profile_csv(out / "load_btn_c.csv", load, "load")

# %% [markdown]
# Site yields (kWh per kWp per year) decrease from the south of the
# mainland to the north and to the islands.

# %%
sites = {
    "evora": dict(annual_kwh_per_kwp=1650.0, latitude_deg=38.6, cloudiness=0.30, seed=11),
    "porto": dict(annual_kwh_per_kwp=1480.0, latitude_deg=41.1, cloudiness=0.38, seed=12),
    "azores": dict(annual_kwh_per_kwp=1250.0, latitude_deg=37.8, cloudiness=0.45, seed=13),
}
for name, kw in sites.items():
    gen = synthetic_generation(**kw)
    write_profile_csv(out / f"pv_{name}.csv", gen, "generation_per_kwp")
    peak = float(np.max(gen.values))
    print(f"{name:>7}: {gen.total:7.1f} kWh/kWp, peak {peak:.3f} kWh/kWp in one hour")
