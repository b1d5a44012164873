# Exciton and biexciton emission at a fixed field.
#
# The CI Hamiltonian is diagonalized in the (1,1) and (2,2) sectors and
# golden-rule line strengths are computed with the interband polarization
# operator. Photon energies are shifted by a constant gap offset for display.

import numpy as np

from dotci import biexciton_lines, broadened_spectrum, exciton_lines
from dotci.sweep import paper_model

model = paper_model(gap_offset=910.0)
point = model.solve_point(2.0)
print(f"F=2 kV/cm: X doublet {point.doublet}, XX binding {point.binding:.1f} micro-eV")

lines = exciton_lines(point.x, point.vacuum(), model.gap_offset)
lines += biexciton_lines(point.xx, point.x, model.gap_offset)
for ln in sorted(lines, key=lambda ln: ln.photon_energy):
    if ln.label != "other":
        print(f"{ln.label:6s} {ln.photon_energy:10.4f} meV  strength {ln.strength:.3e}  {ln.polarization}")

# Broaden with a 50 micro-eV Lorentzian around the X/XX region.
grid = np.linspace(921.0, 923.0, 2001)
y = broadened_spectrum(lines, 50.0, grid)
print("strongest broadened feature at", grid[np.argmax(y)], "meV")
