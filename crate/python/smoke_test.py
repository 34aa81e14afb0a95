#!/usr/bin/env python3
"""Smoke test for the credit_py extension module.

Builds the cdylib with cargo if needed, loads it, and exercises the main
types and operations end to end. Run from the repository root:

    python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import sysconfig
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    subprocess.run(
        ["cargo", "build", "-p", "credit-py", "--release"], cwd=ROOT, check=True
    )
    built = ROOT / "target" / "release" / "libcredit_py.so"
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    target = Path(__file__).resolve().parent / f"credit_py{suffix}"
    shutil.copyfile(built, target)
    return target


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    module_path = build_extension()
    sys.path.insert(0, str(module_path.parent))
    import credit_py as cp

    # curves
    disc = cp.DiscountCurve.flat(0.04)
    approx(disc.discount_factor(2.0), math.exp(-0.08))
    haz = cp.HazardCurve([(2.0, 0.01), (10.0, 0.03)])
    approx(haz.survival_prob(2.0), math.exp(-0.02))

    # pricing and calibration round trip
    bond = cp.Bond(coupon=0.05, frequency=2, maturity=5.0, recovery_principal=0.4)
    assert len(bond.schedule()) == 10
    p = cp.price_exact(bond, disc, haz, oasf=0.0)
    assert 0.5 < p < 1.5
    oasf = cp.calibrate_oasf(bond, disc, haz, p)
    approx(oasf, 0.0, 1e-10)
    assert cp.price_exact(bond, disc, haz, oasf=0.01) < p

    # continuous approximation stays close to the exact price
    pc = cp.price_continuous(bond, disc, haz)
    assert abs(pc - p) < 0.01

    # credit triangle on flat curves
    flat_h = cp.HazardCurve.flat(0.02)
    approx(cp.bcds(disc, flat_h, 5.0, 0.4), 0.02 * 0.6, 1e-12)

    # risk report sanity
    report = cp.risk_report(bond, disc, haz)
    assert set(report) >= {"price", "d_r", "d_h", "d_recovery", "vod", "rpv01", "bcds"}
    approx(report["price"], p)
    assert 0 < report["d_h"] < report["d_r"] < 5.0
    approx(report["vod"], 1.0 - 0.4 / p)

    # published three-bond hedge
    hedge = cp.solve_hedge(
        [[2.22, 6.24, 11.64], [1.32, 3.60, 6.76], [0.61, 0.62, 0.60]],
        [0.1, 0.1, 0.01],
    )
    for got, ref in zip(hedge["weights"], [-0.5923, 0.9744, -0.4077]):
        assert abs(got - ref) < 0.01, hedge
    assert abs(hedge["cash"] - 0.0256) < 0.005
    assert not hedge["rank_deficient"]

    # treasury factors
    shift, twist = cp.treasury_factors([2.0, 5.0, 10.0, 20.0, 30.0])
    approx(shift, 13.4, 1e-12)
    approx(twist, -7.1, 1e-12)

    # error mapping
    try:
        cp.Bond(coupon=-0.01, frequency=2, maturity=5.0, recovery_principal=0.4)
    except ValueError:
        pass
    else:
        raise AssertionError("negative coupon should raise ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
