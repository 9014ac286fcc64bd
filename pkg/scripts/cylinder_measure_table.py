"""Cylinder masses of an epsilon-perturbed Lebesgue measure.

For each word up to the given depth, tabulate the cylinder interval, its
mass nu0, the mass of its preimage and the invariance gap, then run the
randomized set battery against the equivalent density.
"""
import argparse
import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from epsinv import (
    CylinderMeasure,
    IntervalSet,
    Transformation,
    check_set_criterion,
    cylinder_interval,
    density_equivalent,
    io,
    nu0,
    s_preimage,
)
from epsinv.measures import random_battery, words


@dataclass
class Config:
    alphas: tuple = (Fraction(1, 5), Fraction(1, 2), Fraction(3, 10))
    epsilon: Fraction = Fraction(3, 4)
    p: int = 3
    q: int = 1
    depth: int = 4
    seed: int = 0
    sets: int = 100
    out: Path = Path("out/cylinder_measure")


def run(cfg: Config) -> dict:
    cfg.out.mkdir(parents=True, exist_ok=True)
    m = CylinderMeasure(cfg.alphas, cfg.epsilon, cfg.p, cfg.q)
    system = m.system
    T = Transformation(system)
    nu = density_equivalent(m)
    worst = Fraction(0)
    with open(cfg.out / "cylinders.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["word", "lo", "hi", "nu0", "nu_preimage", "gap", "gap_over_length"])
        for k in range(1, cfg.depth + 1):
            for word in words(m.N, k):
                I = cylinder_interval(system, word)
                A = IntervalSet((I,))
                pre = nu(s_preimage(T, A))
                gap = abs(pre - nu0(m, word))
                worst = max(worst, gap / I.length)
                w.writerow(["".join(map(str, word)), I.lo, I.hi, nu0(m, word), pre, gap, gap / I.length])
    report = check_set_criterion(nu, T, cfg.epsilon, random_battery(cfg.seed, cfg.sets))
    summary = {
        "spec": io.cylinder_spec_to_json(m),
        "worst_cylinder_ratio": worst,
        "battery": io.set_report_to_json(report),
    }
    io.write_json(summary, cfg.out / "summary.json")
    return summary


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--sets", type=int, default=100)
    ap.add_argument("--out", type=Path, default=Config.out)
    a = ap.parse_args()
    cfg = Config(depth=a.depth, seed=a.seed, sets=a.sets, out=a.out)
    print(io.dumps(run(cfg)), end="")
