# Coulomb matrix elements in the oscillator basis.
#
# The fast route integrates products of form factors in momentum space.
# A slow real-space route is kept as an oracle. For s orbitals on a common
# center the element has the closed form sqrt(pi/2) C / (eps_r l).

import math
import time

from dotci import build_basis, build_tensors, electron_params, hole_params
from dotci.interaction import coulomb_displaced, coulomb_oracle, coulomb_same_center
from dotci.units import COULOMB_CONSTANT

l = electron_params().length
s, px = (0, 0), (1, 0)

v = coulomb_same_center(s, s, s, s, l, 12.5)
print(f"V_ssss = {v:.8f} meV, closed form {math.sqrt(math.pi / 2) * COULOMB_CONSTANT / (12.5 * l):.8f}")

# Electron-hole elements between displaced centers, compared with the oracle.
for d in (0.0, 0.5 * l, l, 2 * l):
    fast = coulomb_displaced(s, px, px, s, l, l, d)
    ref, err = coulomb_oracle(s, px, px, s, l, l, d)
    print(f"d={d:6.2f} nm  V(s px; px s) fast {fast:.10f}  oracle {ref:.10f} +- {err:.1e}")

# A full set of tensors for one field point.
t0 = time.perf_counter()
tens = build_tensors(build_basis(electron_params(), 3, 2.0), build_basis(hole_params(), 3, 2.0))
print({k: t.elements.shape for k, t in tens.items()}, f"built in {time.perf_counter() - t0:.2f} s")
