#!/usr/bin/env python3
"""Smoke test for the distill_py extension module.

Expects `cargo build -p distill-py` to have produced the cdylib under
target/. Copies it into a temp directory as distill_py.so, imports it,
and exercises one entry point from each area of the library.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def locate_cdylib():
    names = ["libdistill_py.so", "distill_py.so", "libdistill_py.dylib"]
    for profile in ("release", "debug"):
        for name in names:
            p = ROOT / "target" / profile / name
            if p.exists():
                return p
    sys.exit("extension not found; run `cargo build -p distill-py` first")


def staged_import():
    staging = Path(tempfile.mkdtemp(prefix="distill_py_"))
    shutil.copy2(locate_cdylib(), staging / "distill_py.so")
    sys.path.insert(0, str(staging))
    import distill_py

    return distill_py


def main():
    dp = staged_import()

    inj = dp.injection_error(0.001, 0.001, 0.01, 0.08)
    assert math.isclose(inj, 0.01 + 19 / 7500, abs_tol=1e-15), inj
    assert math.isclose(dp.bell_injection_reject(0.08), 0.1536, abs_tol=1e-15)

    assert dp.surface_code_distance(0.001, 1e-12) == (19, 721)
    assert dp.lattice_surgery_overhead(0.001, 0.01, 1e-12) == (19, 1369, False)

    dist = dp.depolarizing(0.1)
    assert math.isclose(sum(dist), 1.0, abs_tol=1e-12)
    accept, out = dp.repetition_step(dist, 2, "z")
    assert math.isclose(accept, 197 / 225, abs_tol=1e-15), accept
    assert math.isclose(out[0], 365 / 394, abs_tol=1e-15), out

    accept4, joint4 = dp.exact_parity_stats(4, dp.depolarizing(0.01))
    assert math.isclose(accept4, 0.9607929125925926, abs_tol=1e-12)
    assert joint4 < 2.5e-4

    assert dp.parse_sequence("r2z,q4.2.2") == [("r2z", 2, 1, 2), ("q4.2.2", 4, 2, 2)]

    m = dp.evaluate_sequence("r3x,r2y,r2x,q4.2.2", dp.depolarizing(inj))
    assert m["memory"] == 8, m
    assert abs(m["overhead"] - 25.0) / 25.0 <= 0.05, m
    assert len(m["levels"]) == 4 and m["batch_outputs"] == 2

    best = dp.optimize(dp.depolarizing(0.01), 0.0, 1e-12, 30)
    assert best is not None
    assert best["metrics"]["overhead"] <= 8.418, best
    assert best["metrics"]["memory"] <= 30

    sim = dp.simulate_sequence("r2z,q4.2.2", dp.depolarizing(0.05), seed=7, trials=20000)
    assert sim["trials"] == 20000 and sim["aborted"] == 0
    assert sim["consumed_per_output"] >= 4.0
    again = dp.simulate_sequence("r2z,q4.2.2", dp.depolarizing(0.05), seed=7, trials=20000)
    assert sim == again

    for bad in (lambda: dp.depolarizing(1.5), lambda: dp.repetition_step(dist, 2, "q")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
