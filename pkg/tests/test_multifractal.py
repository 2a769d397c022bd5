import math
from itertools import repeat

import numpy as np
import pytest

from pvconv import multifractal as MF

MODELS = {
    "mu_star": lambda: MF.mu_star_net(2, 0.3),
    "mu": lambda: MF.multinacci_mu_net(2, 0.3),
    "erdos": lambda: MF.erdos_net(0.3),
    "erdos_tilde_star": lambda: MF.erdos_net(0.3, "tilde_star"),
    "lebesgue": lambda: MF.lebesgue_net([2, 3, 2], MF.GOLDEN, MF.GOLDEN),
}


@pytest.fixture(scope="module")
def levels():
    return {k: (f(), MF.stopping_time_partitions(f(), 12)) for k, f in MODELS.items()}


@pytest.mark.parametrize("name", list(MODELS))
def test_partitions_tile(levels, name):
    nm, lev = levels[name]
    assert MF.check_tiling(nm, lev)


@pytest.mark.parametrize("name", list(MODELS))
def test_tau_identities(levels, name):
    _, lev = levels[name]
    tau1, _ = MF.tau_from_levels(lev, 1.0)
    tau0, _ = MF.tau_from_levels(lev, 0.0)
    assert abs(tau1) < 1e-9
    assert abs(tau0 + 1) < 0.02


@pytest.mark.parametrize("q", [-3.0, 0.5, 2.0, 4.0])
def test_lebesgue_tau(levels, q):
    _, lev = levels["lebesgue"]
    tau, _ = MF.tau_from_levels(lev, q)
    assert abs(tau - (q - 1)) < 0.02


def test_upper_hull():
    x = np.arange(5.0)
    y = np.array([0.0, 1.0, 0.5, 2.5, 3.0])
    h = MF.upper_hull(x, y)
    assert np.all(h >= y - 1e-15)
    assert np.all(np.diff(h, 2) <= 1e-12)
    assert h[2] == pytest.approx(1.75)


def test_spectrum_concave_and_legendre_roundtrip():
    est = MF.spectrum(MF.mu_star_net(2, 0.3), depth=12, qs=MF.q_grid(-6, 6, 0.5))
    assert np.all(np.diff(est.hull_tau, 2) <= 1e-9)
    back = MF.inverse_legendre(est.alpha, est.f, est.q)
    assert np.max(np.abs(back - est.hull_tau)) < 1e-9
    assert est.alpha_min < 1 < est.alpha_max
    assert max(est.f) == pytest.approx(1.0, abs=0.03)


@pytest.mark.parametrize("p,expected", [(0.3, math.log(0.3) / math.log(1 / MF.GOLDEN)),
                                        (0.5, math.log(0.5) / math.log(1 / MF.GOLDEN))])
def test_local_dimension_at_zero_stream(p, expected):
    slopes = MF.local_dimension(MF.erdos_net(p), repeat(0), 200)
    assert abs(slopes[-1] - expected) < 0.01


def test_local_dimension_rejects_null_cylinder():
    nm = MF.erdos_net(0.3)
    nm.measure.matrices[1] = nm.measure.matrices[1] * 0
    with pytest.raises(ValueError):
        MF.local_dimension(nm, repeat(1), 3)


def test_box_count_agrees_with_partition_tau():
    part, _ = MF.tau_estimate(MF.erdos_net(0.5), 2.0, levels=14)
    box = MF.box_count_tau(0.5, 2.0)
    assert abs(part - box) < 0.01


def test_domain_check_exact_gap():
    assert MF.erdos_domain_check(0.5, estimate=False)["verdict"] == "connected"
    for p in (0.3, 0.7, 0.1):
        out = MF.erdos_domain_check(p, estimate=False)
        assert out["strict_gap"] and out["verdict"] == "disconnected"
        assert out["alpha_star"] > out["bound"]
    a, b = MF.erdos_domain_check(0.3, estimate=False), MF.erdos_domain_check(0.7, estimate=False)
    assert a["alpha_star"] == pytest.approx(b["alpha_star"])
    assert a["bound"] == pytest.approx(b["bound"])


def test_domain_check_estimate():
    out = MF.erdos_domain_check(0.3, depth=14)
    assert out["alpha_max_estimate"] < out["bound"] < out["alpha_star"]
    assert out["verdict"] == "disconnected"


def test_kink_scan_shape():
    est = MF.spectrum(MF.erdos_net(0.5), depth=10, qs=MF.q_grid(-8, -2, 0.5))
    ks = MF.kink_scan(est)
    assert len(ks["q"]) == len(ks["d2tau"]) == len(est.q) - 2
