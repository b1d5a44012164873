# Cascade transitions at the crossing.
#
# Path A goes XX -> X1 -> 0, path B goes XX -> X2 -> 0. When the binding
# vanishes, A1 = B2 and A2 = B1 even though X1 and X2 stay split.

from dotci import ExchangeParams, ParticleParams
from dotci.cascade import cascade_transitions, degeneracy_report, spectral_overlap
from dotci.sweep import Model, find_crossing, paper_model

model = paper_model()
for f in (0.0, find_crossing(model, 2.0, 4.0).field):
    p = model.solve_point(f)
    t = cascade_transitions(p.x, p.xx)
    d = degeneracy_report(t)
    print(f"F={f:.4f}: A1={t.A1:.5f} B2={t.B2:.5f} A2={t.A2:.5f} B1={t.B1:.5f} meV")
    print(f"   detunings {d['delta_A1B2']:.2f}, {d['delta_A2B1']:.2f} micro-eV, AES {d['AES']:.1f};"
          f" overlap at 50 micro-eV {spectral_overlap(d['delta_A1B2'], 50.0):.4f}")

# Identical carriers in one shell: XX = 2X exactly, exchange still splits X.
twin = ParticleParams("electron", 12.0, 0.055), ParticleParams("hole", 12.0, 0.055)
p = Model(*twin, n_shells=1, exchange=ExchangeParams(108.0)).solve_point(0.0)
print("hidden-symmetry toy:", degeneracy_report(cascade_transitions(p.x, p.xx)))
