"""Dyadic equation phi(x) = phi(x/2)/2 + phi((x+1)/2)/2 + g(x).

Runs the Neumann and Cesaro solvers on g = (eps, -eps) halves in both scalar
modes and writes one JSON summary plus the solution as CSV.
"""
import argparse
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from epsinv import SolveOptions, StepFunction, build_full_affine, fp_operator, solve
from epsinv import io
from epsinv.solvers import CESARO, NEUMANN


@dataclass
class Config:
    epsilon: Fraction = Fraction(1, 4)
    tol: float = 1e-10
    out: Path = Path("out/dyadic_equation")


def run(cfg: Config) -> dict:
    cfg.out.mkdir(parents=True, exist_ok=True)
    rows = {}
    for mode, cast in (("rational", Fraction), ("float", float)):
        system = build_full_affine([cast(1) / 2, cast(1) / 2])
        eps = cast(cfg.epsilon)
        g = StepFunction((cast(0), cast(1) / 2, cast(1)), (eps, -eps))
        P = fp_operator(system)
        for method in (NEUMANN, CESARO):
            res = solve(P, g, SolveOptions(method=method, tol=cfg.tol))
            rows[f"{mode}/{method}"] = {
                "status": res.status,
                "iterations": res.iterations,
                "residual": res.residual,
                "phi_minus_g": (res.phi - g).l1_norm(),
            }
            if mode == "rational" and method == NEUMANN:
                res.phi.to_csv(cfg.out / "phi.csv")
    io.write_json(rows, cfg.out / "summary.json")
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--epsilon", default="1/4")
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--out", type=Path, default=Config.out)
    a = ap.parse_args()
    summary = run(Config(Fraction(a.epsilon), a.tol, a.out))
    print(io.dumps(summary), end="")
