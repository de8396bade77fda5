import math

import numpy as np
import pytest

import relaxcat


def test_registry_lists_builtin_cases():
    names = relaxcat.list_cases()
    assert len(names) >= 6
    assert "XinJin-smooth" in names
    assert "Broadwell-RP1" in names


def test_initial_field_is_well_prepared():
    f = relaxcat.initial_field("XinJin-smooth", 64)
    assert f["x"].shape == (64,)
    np.testing.assert_array_equal(f["v"], 0.7 * f["u"])


def test_run_returns_columns_and_conserves_mass():
    f0 = relaxcat.initial_field("XinJin-square", 100)
    out = relaxcat.run("XinJin-square", "catmood2_tay", 100, eps=1.0)
    assert set(["x", "u", "v", "steps", "dt"]).issubset(out.keys())
    assert out["u"].shape == (100,)
    assert math.isclose(out["t"], 0.35)
    assert abs(out["u"].sum() - f0["u"].sum()) / f0["u"].sum() < 1e-12


def test_run_is_deterministic():
    a = relaxcat.run("Broadwell-RP2", "catmood2_tay", 50, eps=1e-8)
    b = relaxcat.run("Broadwell-RP2", "catmood2_tay", 50, eps=1e-8)
    np.testing.assert_array_equal(a["rho"], b["rho"])
    assert (a["rho"] > 0).all()


def test_unknown_scheme_raises_value_error():
    with pytest.raises(ValueError, match="unknown scheme"):
        relaxcat.run("XinJin-smooth", "leapfrog", 32, eps=1.0)


def test_ode_amplification_limits():
    assert relaxcat.ode_amplification("cat2_trap", 0.0) == 1.0
    assert abs(relaxcat.ode_amplification("cat2_trap", -1e8) + 1.0) < 1e-6
    assert abs(relaxcat.ode_amplification("cat2_tay", -1e8)) < 1e-6


def test_fourier_symbol_is_identity_without_a_step():
    g = relaxcat.fourier_symbol("cat2_tay", 0.0, 0.5, 1.0, 1.0)
    assert abs(g[0][0] - 1) < 1e-14 and abs(g[1][1] - 1) < 1e-14
    assert abs(g[0][1]) < 1e-14 and abs(g[1][0]) < 1e-14


def test_stability_region_bounded():
    rows = relaxcat.stability_region("cat2_tay", [0.3, 0.6], 1.0, k_samples=16, mu_tol=1e-2)
    assert len(rows) == 2
    assert all(0.0 < mu <= 1.6 for _, mu in rows)


def test_convergence_rows_and_second_order():
    rows = relaxcat.convergence(
        "XinJin-smooth", ["cat2_tay"], [50, 100, 200], [1e-8],
        n_fine=800, self_reference=True, use_cache=False,
    )
    assert len(rows) == 3
    assert rows[0]["eoc"] is None
    assert all(1.7 < r["eoc"] < 2.4 for r in rows[1:])
