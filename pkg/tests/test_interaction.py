import math

import numpy as np
import pytest

from dotci import interaction
from dotci.basis import ParticleParams, build_basis, electron_params, hole_params
from dotci.errors import NumericalError
from dotci.interaction import (
    build_tensors, coulomb_displaced, coulomb_oracle, coulomb_same_center, eh_tensor,
    form_factor_1d, same_species_tensor,
)
from dotci.units import COULOMB_CONSTANT

L = electron_params().length
S, PX, PY, DXX, DXY, DYY = (0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)
V_SSSS = math.sqrt(math.pi / 2) * COULOMB_CONSTANT / (12.5 * L)


def test_ssss_closed_form():
    v = coulomb_same_center(S, S, S, S, L, 12.5)
    assert v == pytest.approx(V_SSSS, rel=1e-8)
    assert v == pytest.approx(13.4368, abs=1e-4)


def test_s_px_direct():
    v = coulomb_same_center(S, PX, PX, S, L, 12.5)
    # analytic: 3/4 of the s-s direct term
    assert v == pytest.approx(0.75 * V_SSSS, rel=1e-8)
    assert 0 < v < V_SSSS


def test_parity_forbidden_zero():
    assert abs(coulomb_same_center(S, S, S, PX, L)) < 1e-12
    assert abs(coulomb_same_center(S, PY, S, S, L)) < 1e-12
    assert abs(coulomb_displaced(S, S, S, PY, L, L, 20.0)) < 1e-12


def test_displaced_reduces_to_same_center():
    for p, q, r, s in [(S, S, S, S), (S, PX, PX, S), (PX, S, PX, S), (DXY, PX, PY, S)]:
        a = coulomb_displaced(p, q, r, s, L, L, 0.0)
        b = coulomb_same_center(p, q, r, s, L)
        assert a == pytest.approx(b, abs=1e-12)


def test_displaced_direct_decreases():
    vals = [coulomb_displaced(S, S, S, S, L, L, d) for d in (0.0, 0.5 * L, L, 2 * L, 4 * L)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    # far field approaches the point-charge limit
    far = coulomb_displaced(S, S, S, S, L, L, 20 * L)
    assert far == pytest.approx(COULOMB_CONSTANT / 12.5 / (20 * L), rel=1e-2)


def test_displacement_opens_x_odd_channel():
    assert abs(coulomb_displaced(S, S, S, PX, L, L, 0.0)) < 1e-12
    assert abs(coulomb_displaced(S, S, S, PX, L, L, L)) > 1e-3


def test_scaling_law():
    # V scales as 1/l at fixed d/l
    a = coulomb_displaced(PX, S, PX, DXX, L, L, 0.7 * L)
    b = coulomb_displaced(PX, S, PX, DXX, 2 * L, 2 * L, 1.4 * L)
    assert b == pytest.approx(a / 2, rel=1e-8)


def test_eps_scaling():
    a = coulomb_same_center(S, PX, PX, S, L, 10.0)
    b = coulomb_same_center(S, PX, PX, S, L, 20.0)
    assert b == pytest.approx(a / 2, rel=1e-12)
    with pytest.raises(ValueError):
        coulomb_same_center(S, S, S, S, L, 0.0)


@pytest.mark.parametrize("m,n", [(0, 0), (1, 0), (2, 1), (2, 0), (3, 1)])
def test_form_factor_against_quadrature(m, n):
    from dotci.basis import hermite_function
    x = np.linspace(-15 * L, 15 * L, 20001)
    for k in (0.0, 0.05, 0.2):
        ref = np.trapezoid(hermite_function(m, x, L, 0.0) * np.exp(1j * k * x) * hermite_function(n, x, L, 0.0), x)
        assert form_factor_1d(m, n, k, L) == pytest.approx(ref, abs=1e-10)


@pytest.mark.parametrize("orbs", [
    (S, S, S, S), (S, PX, PX, S), (PX, PX, S, S), (DXX, S, PX, PX), (DXY, PY, PX, S), (DYY, DXX, DXY, DXY),
])
@pytest.mark.parametrize("geom", [(1.0, 1.0, 0.0), (1.0, 1.0, 1.3), (0.6, 1.5, 0.5), (1.5, 0.6, 2.0)])
def test_oracle_agreement(orbs, geom):
    wa, wb, dd = geom
    val, err = coulomb_oracle(*orbs, wa * L, wb * L, dd * L)
    fast = coulomb_displaced(*orbs, wa * L, wb * L, dd * L)
    assert err < 1e-9
    assert fast == pytest.approx(val, rel=1e-7, abs=1e-10)


@pytest.fixture(scope="module")
def tensors_f3():
    be = build_basis(electron_params(), 3, 3.0)
    bh = build_basis(hole_params(), 3, 3.0)
    return build_tensors(be, bh, 12.5)


def test_same_species_symmetry_closure(tensors_f3):
    for key in ("ee", "hh"):
        v = tensors_f3[key].elements
        assert np.array_equal(v, v.transpose(1, 0, 3, 2))  # particle swap
        assert np.array_equal(v, v.transpose(3, 2, 1, 0))  # hermiticity (real orbitals)
        assert np.array_equal(v, v.transpose(3, 1, 2, 0))  # p<->s on particle 1


def test_eh_symmetry_closure(tensors_f3):
    v = tensors_f3["eh"].elements
    assert np.array_equal(v, v.transpose(3, 1, 2, 0))
    assert np.array_equal(v, v.transpose(0, 2, 1, 3))


def test_direct_terms_positive(tensors_f3):
    for key in ("ee", "hh", "eh"):
        v = tensors_f3[key].elements
        n = v.shape[0]
        direct = np.array([[v[p, q, q, p] for q in range(n)] for p in range(n)])
        assert np.all(direct > 0)


def test_tensor_shapes_and_metadata(tensors_f3):
    assert tensors_f3["ee"].elements.shape == (6, 6, 6, 6)
    assert tensors_f3["eh"].species_pair == "eh"
    assert tensors_f3["eh"].field == 3.0
    assert tensors_f3["hh"].n == 6


def test_eh_field_zero_matches_same_species():
    # equal oscillator lengths: at F=0 the eh tensor equals the ee tensor
    be, bh = build_basis(electron_params(), 2), build_basis(hole_params(), 2)
    assert np.allclose(eh_tensor(be, bh).elements, same_species_tensor(be).elements, atol=1e-12)


def test_eh_ssss_at_10_kv():
    be = build_basis(electron_params(), 1, 10.0)
    bh = build_basis(hole_params(), 1, 10.0)
    assert eh_tensor(be, bh).elements[0, 0, 0, 0] == pytest.approx(4.41308, abs=1e-5)


def test_eh_depends_on_field_sign_only_through_parity():
    p = ParticleParams("electron", 10.0, 0.07)
    h = ParticleParams("hole", 5.0, 0.2)
    vp = eh_tensor(build_basis(p, 2, 2.0), build_basis(h, 2, 2.0)).elements
    vm = eh_tensor(build_basis(p, 2, -2.0), build_basis(h, 2, -2.0)).elements
    sx = np.array([(-1) ** nx for nx, _ in build_basis(p, 2).spatial])
    sign = sx[:, None, None, None] * sx[None, :, None, None] * sx[None, None, :, None] * sx[None, None, None, :]
    assert np.allclose(vm, sign * vp, atol=1e-12)


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        build_tensors(build_basis(electron_params(), 1, 0.0), build_basis(hole_params(), 1, 1.0))


def test_quadrature_failure_raises(monkeypatch):
    monkeypatch.setattr(interaction, "MAX_REFINEMENTS", 0)
    with pytest.raises(NumericalError):
        coulomb_displaced(S, S, S, S, L, L, 3.0, 7.0)
