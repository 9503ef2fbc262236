"""Smoke tests for the python bindings."""
import math
import sys

import mobilemaps as mm


def test_constants():
    p = mm.solve_constants({4: 1.0})
    assert abs(p["Zplus"] - 2.0) < 1e-3, p
    assert p["Zzero"] < 1e-9, p
    assert abs(p["spectral_radius"] - 1.0) < 1e-3, p


def test_sample_and_processes():
    out = mm.sample_map({5: 1.0}, 8, "plus", seed=7)
    assert out["vertices"] == 8
    assert all(d == 5 for d in out["face_degrees"]), out["face_degrees"]
    C = mm.contour_process(out["mobile"])
    assert C[0] == 0.0 and C[-1] == 0.0 and min(C) >= 0.0


def test_roundtrip():
    out = mm.sample_map({5: 1.0}, 8, "plus", seed=11)
    assert mm.bdg_roundtrip_ok(out["map"])


def test_snake():
    e, z = mm.brownian_snake(grid=64, seed=3)
    assert len(e) == 65 and len(z) == 65
    assert e[0] == 0.0 and e[-1] == 0.0 and min(e) >= 0.0
    assert z[0] == 0.0


def test_gh():
    d1 = [[0.0, 2.0], [2.0, 0.0]]
    d2 = [[0.0, 5.0], [5.0, 0.0]]
    assert abs(mm.gh_distance(d1, d2) - 1.5) < 1e-12


def test_verify_centering():
    reports = mm.verify("centering")
    assert all(r["pass"] for r in reports), reports


if __name__ == "__main__":
    fails = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"ok   {name}")
            except Exception as exc:  # noqa: BLE001
                print(f"FAIL {name}: {exc}")
                fails += 1
    sys.exit(1 if fails else 0)
