"""Configuration-interaction Hamiltonian for electrons and holes.

States of one species are bit patterns over its spin-orbitals, ordered as
in the BasisSet. A two-species configuration is the product |E>|H> with all
electron operators to the left of the hole operators. Every operator is
built from one-body matrices E_il = c+_i c_l whose fermionic signs come from
the bit patterns; the two-body term then follows from

    c+_i c+_j c_k c_l = E_il E_jk - delta_jl E_ik.

Holes carry a pseudo-spin label; a bright pair is an electron of spin s with
a hole of label -s. Electron and hole S_z are conserved separately by the
Coulomb part. The effective exchange only mixes the two bright spin
sectors of the single exciton, so states are blocked by total S_z and by
the y-reflection parity, which the field along x leaves intact.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
import math

import numpy as np
import scipy.linalg

from .basis import overlap_1d, _check_same_field
from .units import UEV_PER_MEV


@dataclass(frozen=True)
class Configuration:
    e_occ: int
    h_occ: int

    def __str__(self):
        return f"e={self.e_occ:b} h={self.h_occ:b}"


def _popcount(x):
    return bin(x).count("1")


class SpeciesSpace:
    """All N-particle bit patterns over the spin-orbitals of one basis."""

    def __init__(self, basis, n):
        m = len(basis)
        if not 0 <= n <= m:
            raise ValueError(f"cannot place {n} particles in {m} {basis.species} spin-orbitals")
        self.basis = basis
        self.n = n
        self.n_orb = m
        self.states = [sum(1 << k for k in occ) for occ in combinations(range(m), n)]
        self.lookup = {s: i for i, s in enumerate(self.states)}
        spins = np.array([basis.orbitals[k].spin for k in range(m)])
        ny = np.array([basis.orbitals[k].ny for k in range(m)])
        occ = [[k for k in range(m) if s >> k & 1] for s in self.states]
        self.sz = np.array([spins[o].sum() for o in occ])
        # reflection y -> -y; conserved because the field lies along x
        self.y_parity = np.array([(-1) ** int(ny[o].sum()) for o in occ])

    def __len__(self):
        return len(self.states)

    def annihilator(self, k, lower):
        """Matrix of c_k from this space into `lower` (N-1 particles)."""
        a = np.zeros((len(lower), len(self)))
        bit = 1 << k
        below = bit - 1
        for col, s in enumerate(self.states):
            if s & bit:
                sign = -1.0 if _popcount(s & below) % 2 else 1.0
                a[lower.lookup[s ^ bit], col] = sign
        return a

    @cached_property
    def one_body(self):
        """E[i, l] = c+_i c_l as dense (M, M, D, D)."""
        m, dim = self.n_orb, len(self)
        e = np.zeros((m, m, dim, dim))
        for col, s in enumerate(self.states):
            for l in range(m):
                if not s >> l & 1:
                    continue
                sign_l = -1.0 if _popcount(s & ((1 << l) - 1)) % 2 else 1.0
                t = s ^ (1 << l)
                for i in range(m):
                    if t >> i & 1:
                        continue
                    sign_i = -1.0 if _popcount(t & ((1 << i) - 1)) % 2 else 1.0
                    e[i, l, self.lookup[t | (1 << i)], col] = sign_i * sign_l
        e.setflags(write=False)
        return e


class Sector:
    """Ordered configuration list of N_e electrons and N_h holes.

    Configurations are ordered lexicographically: electron pattern major,
    hole pattern minor, each in combination order.
    """

    def __init__(self, n_e, n_h, basis_e, basis_h):
        _check_same_field(basis_e, basis_h)
        self.n_e, self.n_h = n_e, n_h
        self.basis_e, self.basis_h = basis_e, basis_h
        self.e = SpeciesSpace(basis_e, n_e)
        self.h = SpeciesSpace(basis_h, n_h)

    @property
    def label(self):
        return (self.n_e, self.n_h)

    def __len__(self):
        return len(self.e) * len(self.h)

    def __getitem__(self, idx):
        a, b = divmod(idx, len(self.h))
        return Configuration(self.e.states[a], self.h.states[b])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def index(self, config):
        return self.e.lookup[config.e_occ] * len(self.h) + self.h.lookup[config.h_occ]

    @cached_property
    def sz_total(self):
        """Electron S_z plus hole pseudo-spin S_z of each configuration."""
        return (self.e.sz[:, None] + self.h.sz[None, :]).ravel()

    @cached_property
    def y_parity(self):
        return (self.e.y_parity[:, None] * self.h.y_parity[None, :]).ravel()

    def blocks(self):
        """Configuration indices grouped by (total S_z, y-parity)."""
        sz, py = self.sz_total, self.y_parity
        out = {}
        for v in np.unique(sz):
            for p in (1, -1):
                rows = np.flatnonzero((sz == v) & (py == p))
                if len(rows):
                    out[(float(v), p)] = rows
        return out


def enumerate_configs(n_e, n_h, basis_e, basis_h):
    return Sector(n_e, n_h, basis_e, basis_h)


@dataclass(frozen=True)
class ExchangeParams:
    """Effective electron-hole exchange for the bright exciton doublet.

    delta1_0 is the bright splitting at zero field and delta0 an optional
    dark-state lowering, both in micro-eV. With scaling "overlap" both are
    multiplied by |alpha_ss(F)|^2 / |alpha_ss(0)|^2.
    """

    delta1_0: float = 108.0
    delta0: float = 0.0
    scaling: str = "overlap"

    def __post_init__(self):
        if self.delta1_0 < 0 or self.delta0 < 0:
            raise ValueError("exchange splittings must be non-negative")
        if self.scaling not in ("overlap", "none"):
            raise ValueError(f"unknown exchange scaling {self.scaling!r}")

    def scale(self, basis_e, basis_h):
        if self.scaling == "none":
            return 1.0
        return exchange_scale(basis_e, basis_h)


NO_EXCHANGE = ExchangeParams(delta1_0=0.0, delta0=0.0)


def exchange_scale(basis_e, basis_h):
    """|alpha_ss(F)|^2 / |alpha_ss(0)|^2 for s-shell envelopes."""
    le, lh = basis_e.length, basis_h.length
    a_f = overlap_1d(0, le, basis_e.center_x, 0, lh, basis_h.center_x) * overlap_1d(0, le, 0.0, 0, lh, 0.0)
    a_0 = overlap_1d(0, le, 0.0, 0, lh, 0.0) ** 2
    return (a_f / a_0) ** 2


def _spin_orbital_tensor(v, basis_a, basis_b):
    """V_so[i,j,k,l] = V[ri,rj,rk,rl] delta(si,sl) delta(sj,sk), shaped ((i,l),(j,k))."""
    sa = np.array([o.spin for o in basis_a.orbitals])
    sb = np.array([o.spin for o in basis_b.orbitals])
    ra = np.arange(len(basis_a)) // 2
    rb = np.arange(len(basis_b)) // 2
    vs = v[ra[:, None, None, None], rb[None, :, None, None], rb[None, None, :, None], ra[None, None, None, :]]
    mask = (sa[:, None, None, None] == sa[None, None, None, :]) & (sb[None, :, None, None] == sb[None, None, :, None])
    vs = np.where(mask, vs, 0.0)
    ma, mb = len(basis_a), len(basis_b)
    return vs.transpose(0, 3, 1, 2).reshape(ma * ma, mb * mb)


def species_hamiltonian(space, energies, v):
    """Single-species Hamiltonian on an N-particle space (meV)."""
    m, dim = space.n_orb, len(space)
    h = np.zeros((dim, dim))
    if dim == 0 or space.n == 0:
        return h
    e = space.one_body
    h += np.einsum("i,iiab->ab", energies, e)
    if space.n >= 2:
        vmat = _spin_orbital_tensor(v, space.basis, space.basis)
        ek = e.reshape(m * m, dim, dim)
        y = np.tensordot(vmat, ek, axes=(1, 0))
        two = np.einsum("xab,xbc->ac", ek, y)
        # contraction term sum_j V[i,j,k,j] E_ik
        v4 = vmat.reshape(m, m, m, m)  # (i, l, j, k)
        contr = np.einsum("ijkj->ik", v4.transpose(0, 2, 3, 1))
        two -= np.einsum("ik,ikab->ab", contr, e)
        h += 0.5 * two
    return h


def _eh_coupling(space_e, space_h, veh, rows_e=None, rows_h=None):
    """-sum V_eh[i,j,k,l] E^e_il (x) E^h_jk on a product of index subsets."""
    me, mh = space_e.n_orb, space_h.n_orb
    ee = space_e.one_body
    eh = space_h.one_body
    if rows_e is not None:
        ee = ee[:, :, rows_e][:, :, :, rows_e]
    if rows_h is not None:
        eh = eh[:, :, rows_h][:, :, :, rows_h]
    de, dh = ee.shape[-1], eh.shape[-1]
    vmat = _spin_orbital_tensor(veh, space_e.basis, space_h.basis)
    yh = vmat @ eh.reshape(mh * mh, dh * dh)
    full = ee.reshape(me * me, de * de).T @ yh
    return -full.reshape(de, de, dh, dh).transpose(0, 2, 1, 3).reshape(de * dh, de * dh)


class HamiltonianBuilder:
    """Assembles sector Hamiltonians for fixed bases, tensors and exchange."""

    def __init__(self, sector, tensors, exchange=NO_EXCHANGE):
        for key in ("ee", "hh", "eh"):
            if tensors[key].field != sector.basis_e.field:
                raise ValueError(f"{key} tensor built at a different field than the bases")
        be, bh = sector.basis_e, sector.basis_h
        if tensors["ee"].n != be.n_spatial or tensors["hh"].n != bh.n_spatial:
            raise ValueError("tensor dimensions do not match the bases")
        self.sector = sector
        self.tensors = tensors
        self.exchange = exchange
        self._he = species_hamiltonian(sector.e, be.energies(), tensors["ee"].elements)
        self._hh = species_hamiltonian(sector.h, bh.energies(), tensors["hh"].elements)

    def _exchange_terms(self, rows):
        """Exchange matrix restricted to configuration indices `rows` (meV)."""
        sec = self.sector
        n = len(rows)
        x = np.zeros((n, n))
        if sec.label != (1, 1):
            return x
        s = self.exchange.scale(sec.basis_e, sec.basis_h)
        d1 = s * self.exchange.delta1_0 / UEV_PER_MEV
        d0 = s * self.exchange.delta0 / UEV_PER_MEV
        if d1 == 0.0 and d0 == 0.0:
            return x
        pos = {int(r): k for k, r in enumerate(rows)}
        for k, r in enumerate(rows):
            c = sec[int(r)]
            ie, ih = c.e_occ.bit_length() - 1, c.h_occ.bit_length() - 1
            se, sh = sec.basis_e.spin_of(ie), sec.basis_h.spin_of(ih)
            if se == sh:
                x[k, k] -= d0
                continue
            # partner: flip both spins (spin-orbital index parity within a spatial pair)
            partner = sec.index(Configuration(1 << (ie ^ 1), 1 << (ih ^ 1)))
            if partner in pos:
                x[k, pos[partner]] += 0.5 * d1
        return x

    def block(self, rows):
        """Hamiltonian restricted to configuration indices `rows` (sorted)."""
        sec = self.sector
        rows = np.asarray(rows)
        nh = len(sec.h)
        ie, ih = np.divmod(rows, nh)
        h = np.zeros((len(rows), len(rows)))
        # Coulomb conserves (S_z^e, S_z^h): build each product sub-block
        sz_e, sz_h = sec.e.sz[ie], sec.h.sz[ih]
        for a in np.unique(sz_e):
            for b in np.unique(sz_h[sz_e == a]):
                sel = np.flatnonzero((sz_e == a) & (sz_h == b))
                re = np.flatnonzero(sec.e.sz == a)
                rh = np.flatnonzero(sec.h.sz == b)
                sub = (np.kron(self._he[np.ix_(re, re)], np.eye(len(rh)))
                       + np.kron(np.eye(len(re)), self._hh[np.ix_(rh, rh)]))
                if sec.n_e and sec.n_h:
                    sub += _eh_coupling(sec.e, sec.h, self.tensors["eh"].elements, re, rh)
                # map product ordering (re major, rh minor) onto `rows`
                prod_rows = (re[:, None] * nh + rh[None, :]).ravel()
                where = {int(r): k for k, r in enumerate(prod_rows)}
                idx = np.array([where[int(r)] for r in rows[sel]])
                h[np.ix_(sel, sel)] = sub[np.ix_(idx, idx)]
        h += self._exchange_terms(rows)
        return h

    def matrix(self):
        return self.block(np.arange(len(self.sector)))


def assemble_hamiltonian(configs, tensors, bases=None, exchange=NO_EXCHANGE, field=None):
    """Dense Hamiltonian of a whole sector.

    `bases` and `field` are accepted for cross-checking only; the sector
    already carries its bases.
    """
    if bases is not None:
        be, bh = bases
        if be is not configs.basis_e or bh is not configs.basis_h:
            if be.field != configs.basis_e.field or bh.field != configs.basis_h.field:
                raise ValueError("bases do not match the configuration list")
    if field is not None and field != configs.basis_e.field:
        raise ValueError("field does not match the configuration list")
    return HamiltonianBuilder(configs, tensors, exchange).matrix()


@dataclass
class EigenSolution:
    energies: np.ndarray  # ascending, meV
    vectors: np.ndarray  # (configurations, states)
    sector: object = None  # Sector, or None for bare matrices
    sz_total: np.ndarray = None  # per state, when solved by blocks
    y_parity: np.ndarray = None
    residual: float = 0.0  # max ||Hv - Ev|| / ||H||

    @property
    def label(self):
        return None if self.sector is None else self.sector.label

    def __len__(self):
        return len(self.energies)

    def state(self, i):
        return Eigenstate(float(self.energies[i]), self.vectors[:, i], self.sector, i)


@dataclass(frozen=True)
class Eigenstate:
    energy: float
    vector: np.ndarray
    sector: object
    index: int


def _check_symmetric(h):
    norm = np.linalg.norm(h)
    asym = np.max(np.abs(h - h.T)) if h.size else 0.0
    if asym > 1e-9 * max(norm, 1e-300):
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    return norm


def _eigh(h, n_states=None):
    norm = _check_symmetric(h)
    if n_states is None or n_states >= h.shape[0]:
        w, v = np.linalg.eigh(h)
    else:
        w, v = scipy.linalg.eigh(h, subset_by_index=[0, n_states - 1])
    res = np.linalg.norm(h @ v - v * w, axis=0).max() / norm if h.size and norm > 0 else 0.0
    return w, v, res


def diagonalize(h, n_states=None):
    """Dense symmetric eigensolve; all states unless n_states is given."""
    h = np.asarray(h, dtype=float)
    w, v, res = _eigh(h, n_states)
    return EigenSolution(energies=w, vectors=v, residual=res)


def solve_sector(sector, tensors, exchange=NO_EXCHANGE, sz_total=None, n_states=None):
    """Diagonalize a sector block by block in total S_z and y-parity.

    Restrict to a single total S_z with `sz_total`; keep only the lowest
    `n_states` of every block with `n_states`. Vectors are returned over the
    full configuration list of the sector.
    """
    builder = HamiltonianBuilder(sector, tensors, exchange)
    blocks = sector.blocks()
    if sz_total is not None:
        blocks = {k: v for k, v in blocks.items() if k[0] == sz_total}
        if not blocks:
            raise ValueError(f"no configurations with total S_z = {sz_total}")
    energies, vectors, sz, parity, residual = [], [], [], [], 0.0
    for (s, p), rows in blocks.items():
        h = builder.block(rows)
        w, v, res = _eigh(h, n_states)
        full = np.zeros((len(sector), len(w)))
        full[rows] = v
        energies.append(w)
        vectors.append(full)
        sz.append(np.full(len(w), s))
        parity.append(np.full(len(w), p))
        residual = max(residual, res)
    energies = np.concatenate(energies)
    order = np.argsort(energies, kind="stable")
    return EigenSolution(
        energies=energies[order],
        vectors=np.hstack(vectors)[:, order],
        sector=sector,
        sz_total=np.concatenate(sz)[order],
        y_parity=np.concatenate(parity)[order],
        residual=residual,
    )


def solve(n_e, n_h, basis_e, basis_h, tensors, exchange=NO_EXCHANGE, **kw):
    return solve_sector(Sector(n_e, n_h, basis_e, basis_h), tensors, exchange, **kw)


def exciton_doublet(solution):
    """(E_X1, E_X2): the two lowest bright single-exciton energies, meV."""
    if solution.label != (1, 1):
        raise ValueError(f"exciton doublet needs the (1, 1) sector, got {solution.label}")
    bright = np.flatnonzero(solution.sz_total == 0)
    if len(bright) < 2:
        raise ValueError("fewer than two bright exciton states in the solution")
    e1, e2 = solution.energies[bright[:2]]
    return float(e1), float(e2)


def ground_energy(solution):
    return float(solution.energies[0])


def decompose_exciton_energy(solution, tensors, bases):
    """Single-particle, direct Coulomb and correlation parts of the X or XX energy.

    The correlation energy is the single s-shell configuration energy minus
    the CI ground energy. For the exciton the exchange-free ground is used
    (mean of the bright doublet).
    """
    be, bh = bases
    eps_e = be.energies()[0]
    eps_h = bh.energies()[0]
    v_eh = tensors["eh"][0, 0, 0, 0]
    v_ee = tensors["ee"][0, 0, 0, 0]
    v_hh = tensors["hh"][0, 0, 0, 0]
    out = {"eps_e": eps_e, "eps_h": eps_h, "V_eh0": v_eh, "V_ee0": v_ee, "V_hh0": v_hh}
    if solution.label == (1, 1):
        e_ci = 0.5 * sum(exciton_doublet(solution))
        single = eps_e + eps_h - v_eh
    elif solution.label == (2, 2):
        e_ci = ground_energy(solution)
        single = 2 * eps_e + 2 * eps_h + v_ee + v_hh - 4 * v_eh
        out["coulomb_XX"] = v_ee + v_hh - 4 * v_eh
        out["pair_interaction"] = v_ee + v_hh - 2 * v_eh
    else:
        raise ValueError(f"decomposition needs (1, 1) or (2, 2), got {solution.label}")
    out["E_single"] = single
    out["E_ci"] = e_ci
    out["E_corr"] = single - e_ci
    return out
