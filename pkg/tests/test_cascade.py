import pytest

from dotci.cascade import (
    CascadeTransitions, cascade_report, cascade_transitions, degeneracy_report, from_energies,
    spectral_overlap,
)
from dotci.basis import ParticleParams
from dotci.manybody import ExchangeParams
from dotci.sweep import Model, run_sweep

TWIN = ParticleParams("electron", 12.0, 0.055), ParticleParams("hole", 12.0, 0.055)


def test_transition_identities():
    t = from_energies(10.0, 10.1, 19.7)  # binding 400 micro-eV
    assert t.A1 == pytest.approx(9.7) and t.A2 == 10.0
    assert t.B1 == pytest.approx(9.6) and t.B2 == 10.1
    assert t.A1 + t.A2 == pytest.approx(t.E_XX) and t.B1 + t.B2 == pytest.approx(t.E_XX)
    d = degeneracy_report(t)
    assert d["delta_A1B2"] == pytest.approx(-400.0) and d["delta_A2B1"] == pytest.approx(-400.0)
    assert d["AES"] == pytest.approx(100.0)


def test_degenerate_when_unbound():
    t = from_energies(10.0, 10.1, 20.1)
    d = degeneracy_report(t)
    assert d["delta_A1B2"] == pytest.approx(0.0, abs=1e-9) and d["delta_A2B1"] == pytest.approx(0.0, abs=1e-9)
    assert d["AES"] == pytest.approx(100.0)


def test_spectral_overlap_values():
    assert spectral_overlap(0.0, 50.0) == 1.0
    assert spectral_overlap(510.0, 50.0) == pytest.approx(0.0095, abs=5e-5)
    assert spectral_overlap(50.0, 50.0) == 0.5
    with pytest.raises(ValueError):
        spectral_overlap(1.0, 0.0)


def test_polarization_labels():
    t = CascadeTransitions(1, 2, 3, 4, 5)
    assert (t.polarization_A, t.polarization_B) == ("V", "H")


def test_forced_exchange_hidden_symmetry():
    # identical carriers in a single shell at F=0: XX = 2X exactly, yet the doublet is split
    p = Model(*TWIN, n_shells=1, exchange=ExchangeParams(108.0)).solve_point(0.0)
    d = degeneracy_report(cascade_transitions(p.x, p.xx))
    assert d["AES"] == pytest.approx(108.0, rel=1e-9)
    assert abs(d["delta_A1B2"]) < 1e-9 and abs(d["delta_A2B1"]) < 1e-9


def test_cascade_transitions_rejects_wrong_sectors():
    p = Model(n_shells=1).solve_point(0.0)
    with pytest.raises(ValueError):
        cascade_transitions(p.x, p.x)
    with pytest.raises(ValueError):
        cascade_transitions(None, p.xx)


def test_cascade_report_rows():
    recs = run_sweep(Model(n_shells=2, eps_r=32.0), 0.0, 2.0, 3)
    rows = cascade_report(recs, gammas=(50.0, 100.0))
    assert len(rows) == 3
    for r, rec in zip(rows, recs):
        assert r["delta_A1B2_ueV"] == pytest.approx(-rec.binding, abs=1e-6)
        assert r["delta_A2B1_ueV"] == pytest.approx(-rec.binding, abs=1e-6)
        assert r["overlap_A1B2_g100"] >= r["overlap_A1B2_g50"]
        assert r["AES_ueV"] == pytest.approx(rec.AES, abs=1e-6)
