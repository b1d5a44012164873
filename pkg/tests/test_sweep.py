import math

import numpy as np
import pytest

from dotci.basis import ParticleParams
from dotci.errors import NoCrossingError, NumericalError
from dotci.manybody import NO_EXCHANGE, ExchangeParams
from dotci.sweep import (
    PAPER_EPS_R, Model, bare_stark_shift, field_grid, find_crossing, paper_model, power_law_exponent,
    quadratic_fit, run_sweep, stark_report, xx_binding,
)

TWIN = ParticleParams("electron", 12.0, 0.055), ParticleParams("hole", 12.0, 0.055)


def test_zero_field_binding_calibrated():
    assert xx_binding(paper_model(), 0.0) == pytest.approx(510.0, abs=0.05)


def test_paper_eps_value():
    assert PAPER_EPS_R == pytest.approx(32.4577, abs=1e-4)


def test_single_shell_hidden_symmetry_exact():
    for f in (0.0,):
        m = Model(*TWIN, n_shells=1, exchange=NO_EXCHANGE)
        assert abs(xx_binding(m, f)) < 1e-9


def test_single_shell_identical_binding_vanishes_only_at_zero_field():
    # opposite displacements separate the carriers once F != 0
    m = Model(*TWIN, n_shells=1, exchange=NO_EXCHANGE)
    assert xx_binding(m, 5.0) < -100.0


def test_field_grid():
    g = field_grid(0.0, 4.0, 41)
    assert g[0] == 0.0 and g[-1] == 4.0 and np.allclose(np.diff(g), 0.1)
    with pytest.raises(ValueError):
        field_grid(0.0, 1.0, 1)


def _synthetic(root):
    calls = []

    def b(f):
        calls.append(f)
        return 400.0 * (root - f) * (1 + 0.1 * f)

    return b, calls


def test_find_crossing_synthetic():
    b, calls = _synthetic(3.2578)
    c = find_crossing(None, 0.0, 8.0, 1.0, binding=b)
    assert abs(c.binding) <= 1.0
    assert c.field == pytest.approx(3.2578, abs=1.0 / 400)
    assert c.iterations <= 60


def test_find_crossing_reversed_bracket():
    b, _ = _synthetic(2.0)
    c1 = find_crossing(None, 0.0, 5.0, 0.1, binding=b)
    c2 = find_crossing(None, 5.0, 0.0, 0.1, binding=b)
    assert c1.field == c2.field


def test_find_crossing_endpoint_root():
    b, calls = _synthetic(0.0)
    c = find_crossing(None, 0.0, 4.0, 1.0, binding=b)
    assert c.field == 0.0 and c.iterations == 0 and len(calls) == 1


def test_find_crossing_no_sign_change():
    with pytest.raises(NoCrossingError) as info:
        find_crossing(None, 0.0, 1.0, 1.0, binding=lambda f: 100.0 + f)
    assert info.value.f_lo == 0.0 and info.value.binding_hi == 101.0


def test_find_crossing_iteration_limit():
    with pytest.raises(NumericalError):
        find_crossing(None, 0.0, 1.0, 0.0, max_iter=5, binding=lambda f: 0.3 - f + 1e-13)


def test_find_crossing_model():
    c = find_crossing(paper_model(), 2.0, 4.0, 1.0)
    assert abs(c.binding) <= 1.0
    assert c.field == pytest.approx(3.2578, abs=5e-3)


@pytest.fixture(scope="module")
def coarse_sweep():
    return run_sweep(paper_model(), 0.0, 4.0, 9)


def test_sweep_records(coarse_sweep):
    f = [r.field for r in coarse_sweep]
    assert f == sorted(f) and len(f) == 9
    aes = np.array([r.AES for r in coarse_sweep])
    assert aes[0] == pytest.approx(108.0, rel=1e-9)
    assert np.all(np.diff(aes) <= 1e-9)
    s1 = np.array([r.strength_X1 for r in coarse_sweep])
    assert np.all(np.diff(s1) <= 1e-12)
    b = np.array([r.binding for r in coarse_sweep])
    assert b[0] > 0 > b[-1]
    for r in coarse_sweep:
        assert r.E_A1 == pytest.approx(r.E_XX_total - r.E_X1, abs=1e-12)
        assert r.strength_A1 == pytest.approx(r.strength_B1, rel=1e-6)
        assert set(r.as_dict()) >= {"field", "AES", "binding"}


def test_sweep_threads_deterministic(coarse_sweep):
    again = run_sweep(paper_model(), 0.0, 4.0, 9, threads=2)
    assert [r.as_dict() for r in again] == [r.as_dict() for r in coarse_sweep]


def test_single_shell_sweep_has_no_sp():
    recs = run_sweep(Model(n_shells=1), 0.0, 1.0, 2)
    assert all(math.isnan(r.E_sp) and r.strength_sp == 0.0 for r in recs)


def test_stark_report(coarse_sweep):
    m = paper_model()
    rep = stark_report(coarse_sweep, m)
    assert rep["single_particle_shift_total"] == pytest.approx(bare_stark_shift(m, 4.0))
    assert rep["X_shift_total"] < 0
    assert rep["ratio"] == pytest.approx(rep["X_shift_total"] / rep["single_particle_shift_total"])
    with pytest.raises(ValueError):
        stark_report(coarse_sweep[:1], m)


def test_bare_stark_value():
    # electron 0.5 (eF)^2 / (m w^2) at 10 kV/cm is 4.81 meV, hole twice that
    assert bare_stark_shift(Model(), 10.0) == pytest.approx(-3 * 4.81, abs=0.02)


def test_quadratic_fit_and_exponent():
    x = np.linspace(0, 2, 11)
    coef, rms = quadratic_fit(x, 1 + 2 * x + 3 * x**2)
    assert np.allclose(coef, [1, 2, 3]) and rms < 1e-12
    assert power_law_exponent(x[1:], 5 * x[1:] ** 2) == pytest.approx(2.0)


def test_solve_point_residual_guard(monkeypatch):
    from dotci import sweep
    real = sweep.solve_sector

    def noisy(*a, **k):
        sol = real(*a, **k)
        sol.residual = 1e-6
        return sol

    monkeypatch.setattr(sweep, "solve_sector", noisy)
    with pytest.raises(NumericalError):
        Model(n_shells=1).solve_point(0.0)
