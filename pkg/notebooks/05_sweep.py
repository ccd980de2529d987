# %% [markdown]
# # The full scenario sweep
#
# Three sites, two tariffs each, four cases, four PV sizes and three
# batteries: 192 scenarios over 25 years at hourly resolution. Same as
# `prosumer-sim simulate --config configs/study_2019.json --out out/study_2019`.

# %%
import csv
import time
from collections import defaultdict

from prosumer_sim.runner import load_config, run_sweep

cfg = load_config("configs/study_2019.json")
start = time.perf_counter()
reports = run_sweep(cfg, "out/study_2019")
print(f"{len(reports)} scenarios in {time.perf_counter() - start:.1f} s")

# %% [markdown]
# Best NPV per site, and how many scenarios pay back within the horizon.

# %%
by_site = defaultdict(list)
for r in reports:
    by_site[r.site].append(r)
for site, rs in by_site.items():
    best = max(rs, key=lambda r: r.npv)
    paid = sum(r.spb is not None for r in rs)
    print(f"{site:>7}: best {best.scenario} NPV {best.npv:.2f} EUR; {paid}/{len(rs)} pay back")

# %% [markdown]
# Per-case mean payback and the grid-connected / isolated payback ratio.

# %%
with open("out/study_2019/summary.csv", newline="") as fh:
    for row in csv.DictReader(fh):
        print(f"{row['site']:>7} {row['case']:>3}: mean payback {row['mean_payback_years'] or '-':>8}  "
              f"ratio II/I {row['site_payback_ratio_ii_vs_i'] or '-'}")
