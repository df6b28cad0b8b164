"""Two-arm case study: how much do simple plans cost, and when?

Uses the bundled illustrative calibration. With both arms certain to be
available, the exact interim likelihood-ratio plan edges out the
registered Wald test. With uncertain availability, the LP optimum beats
arm-specific cutoffs, which beat the best fixed-subset Wald plan.
"""

import json
from pathlib import Path

from papkit.casestudy import best_arms_map, case_study_power
from papkit.model import AvailabilityModel
from papkit.schemas import parse_casestudy

config = json.loads(
    (Path(__file__).resolve().parents[1] / "src/papkit/configs/casestudy_illustrative.json")
    .read_text()
)
config.update({"reps": 100_000, "eval_reps": 100_000})
parsed = parse_casestudy(config)
design, alpha, seed = parsed["design"], parsed["alpha"], parsed["seed"]

print("== both arms available ==")
known = AvailabilityModel.degenerate(2, 0b11)
for family in ("lr-known-j", "wald-fixed-subset"):
    r = case_study_power(design, known, family, alpha, reps=100_000, seed=seed)
    print(f"{family:22} power {r.power:.3f} (se {r.power_se:.4f}) size {r.size:.4f}")

print("\n== arms available with probability (0.5, 0.7) ==")
avail = parsed["availability"]
for family in ("optimal-lp", "arm-specific-cutoffs", "wald-fixed-subset"):
    r = case_study_power(
        design, avail, family, alpha, cells=16, reps=100_000, seed=seed
    )
    if "arms" in r.spec:
        note = " registers arm(s) " + ",".join(str(a + 1) for a in r.spec["arms"])
    elif "t_cutoffs" in r.spec:
        note = f" t-cutoffs {r.spec['t_cutoffs']}"
    else:
        note = f" grid {r.spec['cells']} cells/axis"
    print(f"{family:22} power {r.power:.3f} size {r.size:.4f}{note}")

print("\n== which arms should be registered? ==")
grid = [0.1, 0.5, 0.9]
labels = {1: "{1}", 2: "{2}", 3: "{1,2}"}
rows = best_arms_map(design, alpha, grid, grid, reps=100_000, seed=seed)
print("p1\\p2 " + " ".join(f"{p:>6}" for p in grid))
for p1 in grid:
    winners = [labels[m] for q1, q2, m in rows if q1 == p1]
    print(f"{p1:5} " + " ".join(f"{w:>6}" for w in winners))
