# %% [markdown]
# # Tariffs and the household bill
#
# A flat tariff charges one energy price around the clock. The bi-hourly
# daily tariff is cheaper from 22:00 to 08:00. Both add a daily charge for
# contracted power.

# %%
import numpy as np

from prosumer_sim.core import EnergySeries, load_profile_csv
from prosumer_sim.runner import load_config
from prosumer_sim.tariff import annual_bill, energy_price_at, price_vector

cfg = load_config("configs/study_2019.json")
load = load_profile_csv("configs/profiles/load_btn_c.csv", "load")

# %%
for tid, tariff in cfg.tariffs.items():
    day = [energy_price_at(tariff, h) for h in range(24)]
    print(f"{tid:>20}: min {min(day):.4f}  max {max(day):.4f} EUR/kWh, "
          f"power {tariff.contracted_power_price:.4f} EUR/day")

# %% [markdown]
# Annual bill for the reference household under each tariff. The share
# billed off-peak decides whether bi-hourly pays off.

# %%
for tid, tariff in cfg.tariffs.items():
    prices = price_vector(tariff, len(load), load.step_hours)
    cheap = prices < prices.max()
    share = load.values[cheap].sum() / load.total if cheap.any() else 0.0
    print(f"{tid:>20}: {annual_bill(load, tariff):8.2f} EUR/yr, off-peak share {share:.1%}")

# %% [markdown]
# Moving 10% of every peak hour into the first off-peak hour of the same
# evening lowers the bi-hourly bill and leaves the flat bill unchanged.

# %%
shifted = load.values.copy()
hod = np.arange(len(shifted)) % 24
peak = (hod >= 8) & (hod < 22)
moved = 0.1 * shifted * peak
shifted -= moved
daily = moved.reshape(-1, 24).sum(axis=1)
shifted[22::24] += daily
shifted = EnergySeries(1.0, shifted)
for tid in ("continent_flat", "continent_bihourly"):
    t = cfg.tariffs[tid]
    print(f"{tid:>20}: {annual_bill(load, t):8.2f} -> {annual_bill(shifted, t):8.2f} EUR/yr")
