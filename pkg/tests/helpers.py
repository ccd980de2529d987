from pathlib import Path

import numpy as np

from prosumer_sim.core import EnergySeries, PvSystemSpec, ScenarioSpec

ROOT = Path(__file__).resolve().parents[1]
STUDY_CONFIG = ROOT / "configs" / "study_2019.json"


def make_spec(case, load, gen, kwp=1.5, battery=None, tariff_id="flat", site="test"):
    return ScenarioSpec(case=case, pv=PvSystemSpec(kwp), load=load, generation_per_kwp=gen,
                        tariff_id=tariff_id, battery=battery, site_label=site)


def padded_series(head, total_steps=8760):
    values = np.zeros(total_steps)
    values[: len(head)] = head
    return EnergySeries(1.0, values)


def study_raw():
    import json
    return json.loads(STUDY_CONFIG.read_text(encoding="utf-8"))


def write_toy_config(tmp_path, load, gen, matrix=None, **overrides):
    """Published study prices with one site backed by the given profiles; returns the config path."""
    import json

    from prosumer_sim.core import write_profile_csv

    write_profile_csv(tmp_path / "load.csv", load, "load")
    write_profile_csv(tmp_path / "gen.csv", gen, "generation_per_kwp")
    raw = study_raw()
    raw["sites"] = {"toy": {"load": "load.csv", "generation_per_kwp": "gen.csv"}}
    raw["matrix"] = matrix or {"cases": ["I"], "pv_sizes": [1.5], "batteries": [],
                               "tariffs": ["continent_flat"]}
    raw["output_dir"] = "out"
    raw.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw), encoding="utf-8")
    return path
