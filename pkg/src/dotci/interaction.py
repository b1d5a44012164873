"""Coulomb matrix elements between 2D oscillator orbitals.

Elements follow the convention

    V[p, q, r, s] = <pq|v|rs> = int phi_p(1) phi_q(2) v(1-2) phi_r(2) phi_s(1),

so particle 1 scatters s -> p and particle 2 scatters r -> q, and the
direct term is V[p, q, q, p]. They are evaluated in momentum space, where
the 2D kernel is 2*pi*C/|q|; in polar coordinates the 1/q cancels against
the Jacobian and the integrand is regular:

    V = C/(2 pi) int_0^inf dq int_0^2pi dtheta F_ps(q) F_qr(-q) exp(i q_x d)

F are products of 1D oscillator form factors (Laguerre polynomial times a
Gaussian) and d is the separation between the two orbital centers.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import eval_genlaguerre, gammaln

from .basis import spatial_states, _check_same_field
from .errors import NumericalError
from .units import COULOMB_CONSTANT

DEFAULT_EPS_R = 12.5
TOLERANCE = 1e-8  # meV per element
MAX_REFINEMENTS = 3


@dataclass(frozen=True)
class CoulombTensor:
    species_pair: str  # "ee", "hh" or "eh"
    elements: np.ndarray  # V[p, q, r, s] in meV, spatial orbitals
    eps_r: float
    field: float

    def __getitem__(self, idx):
        return self.elements[idx]

    @property
    def n(self):
        return self.elements.shape[0]


def form_factor_1d(m, n, k, length):
    """<m| exp(i k x) |n> for centered 1D oscillator states of width `length`."""
    if m < n:
        m, n = n, m
    k = np.asarray(k, dtype=float)
    b2 = 0.5 * (k * length) ** 2
    pref = math.exp(0.5 * (gammaln(n + 1) - gammaln(m + 1)))
    return pref * (1j * k * length / math.sqrt(2.0)) ** (m - n) * np.exp(-0.5 * b2) * eval_genlaguerre(n, m - n, b2)


def _pairs(states):
    """Unordered pairs of orbital indices, each once."""
    return [(a, b) for a in range(len(states)) for b in range(a, len(states))]


def _form_factors(states, pairs, length, qx, qy):
    nmax = max(max(s) for s in states) + 1
    fx = {(m, n): form_factor_1d(m, n, qx, length) for m in range(nmax) for n in range(m, nmax)}
    fy = {(m, n): form_factor_1d(m, n, qy, length) for m in range(nmax) for n in range(m, nmax)}

    def get(tab, m, n):
        return tab[(m, n)] if m <= n else tab[(n, m)]

    out = np.empty((len(pairs),) + qx.shape, dtype=complex)
    for i, (a, b) in enumerate(pairs):
        (ax, ay), (bx, by) = states[a], states[b]
        out[i] = get(fx, ax, bx) * get(fy, ay, by)
    return out


def _grid_orders(la, lb, d, degree):
    # radial cutoff where the Gaussian envelope is exp(-80) of its peak
    qmax = 2.0 * math.sqrt((80.0 + 2.0 * degree) / (la * la + lb * lb))
    n_r = 64 + 8 * degree
    n_t = 32 + 4 * degree + int(math.ceil(qmax * abs(d)))
    n_t = 1 << int(math.ceil(math.log2(n_t)))
    return qmax, n_r, n_t


def _pair_table(states_a, pairs_a, la, states_b, pairs_b, lb, d, n_r, n_t, qmax):
    """W[P, Q] = (1/2pi) int F^a_P(q) F^b_Q(-q) exp(i q_x d), unit coupling."""
    t, w = leggauss(n_r)
    q = 0.5 * qmax * (t + 1.0)
    wq = 0.5 * qmax * w
    theta = 2.0 * math.pi * np.arange(n_t) / n_t
    qq, tt = np.meshgrid(q, theta, indexing="ij")
    qx = (qq * np.cos(tt)).ravel()
    qy = (qq * np.sin(tt)).ravel()
    weights = (np.repeat(wq, n_t) * (2.0 * math.pi / n_t)) / (2.0 * math.pi)
    fa = _form_factors(states_a, pairs_a, la, qx, qy)
    fb = _form_factors(states_b, pairs_b, lb, -qx, -qy)
    phase = np.exp(1j * qx * d) if d != 0.0 else 1.0
    table = (fa * (weights * phase)) @ fb.T
    return table


def _converged_table(states_a, pairs_a, la, states_b, pairs_b, lb, d, tol=TOLERANCE, scale=1.0):
    degree = 2 * max(sum(s) for s in states_a + states_b)
    qmax, n_r, n_t = _grid_orders(la, lb, d, degree)
    prev = _pair_table(states_a, pairs_a, la, states_b, pairs_b, lb, d, n_r, n_t, qmax)
    diff = math.inf
    for _ in range(MAX_REFINEMENTS):
        n_r, n_t = 2 * n_r, 2 * n_t
        cur = _pair_table(states_a, pairs_a, la, states_b, pairs_b, lb, d, n_r, n_t, qmax)
        diff = np.max(np.abs(cur - prev)) * scale
        if diff < tol:
            imag = np.max(np.abs(cur.imag)) * scale
            if imag > max(tol, 1e-10 * np.max(np.abs(cur.real)) * scale):
                raise NumericalError(f"Coulomb table has imaginary part {imag:.3e} meV")
            return cur.real
        prev = cur
    raise NumericalError(
        f"Coulomb quadrature not converged: change {diff:.3e} meV after "
        f"{MAX_REFINEMENTS} refinements (n_r={n_r}, n_theta={n_t}, d={d} nm)"
    )


def _coupling(eps_r):
    if not eps_r > 0:
        raise ValueError(f"eps_r must be positive, got {eps_r}")
    return COULOMB_CONSTANT / eps_r


def _element(p, q, r, s, la, lb, d, eps_r):
    states_a = [p, s]
    states_b = [q, r]
    c = _coupling(eps_r)
    table = _converged_table(states_a, [(0, 1)], la, states_b, [(0, 1)], lb, d, scale=c)
    return float(c * table[0, 0])


def coulomb_same_center(p, q, r, s, length, eps_r=DEFAULT_EPS_R):
    """<pq|v|rs> for co-centered orbitals of one species; orbitals are (nx, ny)."""
    return _element(p, q, r, s, length, length, 0.0, eps_r)


def coulomb_displaced(p, q, r, s, l_e, l_h, d, eps_r=DEFAULT_EPS_R):
    """Electron-hole element: p, s electron orbitals; q, r hole orbitals.

    d is the electron center minus the hole center along x, nm. The value is
    the magnitude of the attraction; it enters the Hamiltonian with a minus.
    """
    return _element(p, q, r, s, l_e, l_h, d, eps_r)


def _scatter(table, n, pairs):
    pair_index = np.empty((n, n), dtype=int)
    for k, (a, b) in enumerate(pairs):
        pair_index[a, b] = pair_index[b, a] = k
    # V[p,q,r,s] = W[pair(p,s), pair(q,r)]
    ps = pair_index[:, None, None, :]
    qr = pair_index[None, :, :, None]
    return table[ps, qr]


@lru_cache(maxsize=32)
def _same_species_unit(n_shells, length):
    states = spatial_states(n_shells)
    pairs = _pairs(states)
    table = _converged_table(states, pairs, length, states, pairs, length, 0.0, scale=COULOMB_CONSTANT)
    # pair exchange symmetry: keep the upper triangle, copy it down
    upper = np.triu(table)
    table = upper + np.triu(table, 1).T
    v = _scatter(table, len(states), pairs)
    v.setflags(write=False)
    return v


def same_species_tensor(basis, eps_r=DEFAULT_EPS_R):
    c = _coupling(eps_r)
    pair = "ee" if basis.species == "electron" else "hh"
    v = c * _same_species_unit(basis.n_shells, basis.length)
    return CoulombTensor(pair, v, eps_r, basis.field)


def eh_tensor(basis_e, basis_h, eps_r=DEFAULT_EPS_R):
    _check_same_field(basis_e, basis_h)
    c = _coupling(eps_r)
    se, sh = basis_e.spatial, basis_h.spatial
    pe, ph = _pairs(se), _pairs(sh)
    d = basis_e.center_x - basis_h.center_x
    table = _converged_table(se, pe, basis_e.length, sh, ph, basis_h.length, d, scale=c)
    ne, nh = len(se), len(sh)
    ie = np.empty((ne, ne), dtype=int)
    for k, (a, b) in enumerate(pe):
        ie[a, b] = ie[b, a] = k
    ih = np.empty((nh, nh), dtype=int)
    for k, (a, b) in enumerate(ph):
        ih[a, b] = ih[b, a] = k
    v = c * table[ie[:, None, None, :], ih[None, :, :, None]]
    return CoulombTensor("eh", v, eps_r, basis_e.field)


def build_tensors(basis_e, basis_h, eps_r=DEFAULT_EPS_R):
    _check_same_field(basis_e, basis_h)
    return {
        "ee": same_species_tensor(basis_e, eps_r),
        "hh": same_species_tensor(basis_h, eps_r),
        "eh": eh_tensor(basis_e, basis_h, eps_r),
    }


# --- real-space oracle ---------------------------------------------------

def _hermite_norm(n, length):
    return 1.0 / math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi) * length)


def _hermite(n, x):
    h0, h1 = np.ones_like(x), 2.0 * x
    if n == 0:
        return h0
    for k in range(1, n):
        h0, h1 = h1, 2.0 * x * h1 - 2.0 * k * h0
    return h1


def _pair_convolution_1d(na, nb, la, ca, nc, nd, lb, cb, u, gh):
    """int dx phi_na phi_nb (x; la, ca) * phi_nc phi_nd (x - u; lb, cb), vectorized in u."""
    t, w = gh
    u = np.asarray(u, dtype=float)[..., None]
    a = 1.0 / la**2 + 1.0 / lb**2
    mu = (ca / la**2 + (u + cb) / lb**2) / a
    pref = np.exp(-((ca - u - cb) ** 2) / (la**2 + lb**2))
    x = mu + t / math.sqrt(a)
    xa = (x - ca) / la
    xb = (x - u - cb) / lb
    poly = _hermite(na, xa) * _hermite(nb, xa) * _hermite(nc, xb) * _hermite(nd, xb)
    norm = _hermite_norm(na, la) * _hermite_norm(nb, la) * _hermite_norm(nc, lb) * _hermite_norm(nd, lb)
    return norm * pref[..., 0] * (poly @ w) / math.sqrt(a)


def coulomb_oracle(p, q, r, s, l_a, l_b, d=0.0, eps_r=DEFAULT_EPS_R, n_theta=256, n_u=192):
    """Real-space evaluation of <pq|v|rs>, returns (value, error estimate) in meV.

    With u = r1 - r2 the 4D integral becomes int d^2u v(u) G(u), where the
    inner overlap G factorizes into x and y convolutions evaluated exactly by
    Gauss-Hermite. In polar u-coordinates v(u) d^2u = C du dtheta, leaving a
    smooth radial integral (Gauss-Legendre) of a periodic angular average
    (trapezoid). The error estimate is the change against a run at half the
    radial and angular orders. Orbitals of particle 1 (p, s) have width l_a
    and center d; those of particle 2 (q, r) have width l_b and center 0.
    Intended for validation only.
    """
    c = _coupling(eps_r)
    # the inner integrand is a Gaussian times a polynomial of degree <= 4 nmax,
    # which this many Gauss-Hermite nodes integrate exactly
    nmax = max(max(o) for o in (p, q, r, s))
    gh = np.polynomial.hermite.hermgauss(2 * nmax + 2)
    upper = abs(d) + 12.0 * math.sqrt(l_a**2 + l_b**2)

    def integral(nu, nt):
        t, w = leggauss(nu)
        u = 0.5 * upper * (t + 1.0)
        th = 2.0 * math.pi * np.arange(nt) / nt
        ux = u[:, None] * np.cos(th)
        uy = u[:, None] * np.sin(th)
        gx = _pair_convolution_1d(p[0], s[0], l_a, d, q[0], r[0], l_b, 0.0, ux, gh)
        gy = _pair_convolution_1d(p[1], s[1], l_a, 0.0, q[1], r[1], l_b, 0.0, uy, gh)
        ang = 2.0 * math.pi * np.mean(gx * gy, axis=1)
        return 0.5 * upper * float(w @ ang)

    val = integral(n_u, n_theta)
    coarse = integral(n_u // 2, n_theta // 2)
    return c * val, c * abs(val - coarse)
