"""Plane-wave transforms of real Majorana spinor fields on periodic grids.

The kernel O(p,x) = rotor(-p.x) (pslash g0 + m)/(sqrt(E+m) sqrt(2E)) plays the
role of e^{-ip.x} u(p): everything stays real, with the orthogonal matrix
ig0 standing in for the imaginary unit.  pslash g0 + m expands to
(E+m) I + p_j (ig^j)(ig0), a symmetric matrix, so the kernel splits into a
commuting rotor factor and a symmetric amplitude A(p).

Discretization: periodic cubic grid, exactly dual momentum lattice
p = 2 pi k / L with k in fft order {0..n/2-1, -n/2..-1}.  On an even grid the
-n/2 wavenumber has no sine partner (sin(pi j) = 0 on the nodes), which would
break discrete orthogonality for the matrix part of the kernel; the grid
kernel therefore drops Nyquist-direction momentum components from A(p) and
renormalizes.  With that adjustment discrete orthogonality and completeness
are exact identities (round-off only), and the grid kernel coincides with the
continuum kernel on all non-Nyquist modes.

The transforms below never build the (n^3 x n^3) kernel: A(p) anticommutes
with ig0, so sum_x rotor(-p.x) A(p) Psi(x) = A_+(p) F(p) + A_-(p) F(-p) where
F is a pure rotor DFT evaluated axis by axis.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass, replace

from .clifford import build_canonical_rep

__all__ = [
    "DegenerateKernelError",
    "energy",
    "rotor",
    "kernel_O",
    "CartesianGrid",
    "SpinorField",
    "MomentumSpectrum",
    "forward",
    "inverse",
    "evolve",
    "plane_wave",
    "DiracSpectrum",
    "project_particle",
    "SpacetimeField",
    "SpacetimeSpectrum",
    "spacetime_forward",
    "spacetime_inverse",
    "time_rotor_forward",
    "time_rotor_inverse",
]

_REP = build_canonical_rep()
_G = _REP.generators[0]                      # ig0, the imaginary unit
_IGS = np.stack(_REP.generators[1:])         # (3,4,4) spatial ig^j
_I4 = np.eye(4)


class DegenerateKernelError(ValueError):
    """Raised when the kernel normalizer sqrt((E+m) 2E) vanishes (m=0, p=0)."""


def energy(p, m: float):
    """On-shell energy sqrt(|p|^2 + m^2); p has the 3-vector on the last axis."""
    p = np.asarray(p, dtype=float)
    return np.sqrt((p * p).sum(-1) + m * m)


def rotor(angle) -> np.ndarray:
    """e^{ig0 angle} = cos(angle) I + sin(angle) ig0; orthogonal, shape (..., 4, 4)."""
    a = np.asarray(angle, dtype=float)
    return np.multiply.outer(np.cos(a), _I4) + np.multiply.outer(np.sin(a), _G)


def _amplitude(p, m: float) -> np.ndarray:
    """Continuum amplitude A(p) = ((E+m) I + p_j ig^j ig0)/sqrt((E+m) 2E)."""
    p = np.asarray(p, dtype=float)
    E = energy(p, m)
    nu2 = (E + m) * 2.0 * E
    if nu2 < 1e-24:
        raise DegenerateKernelError("kernel normalizer vanishes at m=0, p=0")
    return ((E + m) * _I4 + np.einsum('j,jab,bc->ac', p, _IGS, _G)) / np.sqrt(nu2)


def kernel_O(p, x, m: float) -> np.ndarray:
    """Plane-wave kernel O(p,x) = rotor(-p.x) A(p); real 4x4.

    At p = 0, m > 0 this is the identity.  Raises DegenerateKernelError for
    the massless zero mode.
    """
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    return rotor(-float(p @ x)) @ _amplitude(p, m)


class CartesianGrid:
    """Periodic cubic grid (n points per axis, box side L) and its dual lattice.

    Positions x_i = i dx with dx = L/n; momenta p = 2 pi k/L with integer k
    per axis in fft order.  Kernel amplitude tables are cached per mass.
    """

    def __init__(self, n: int, L: float):
        if n < 2 or n % 2:
            raise ValueError("n must be an even integer >= 2")
        if not (L > 0):
            raise ValueError("L must be positive")
        self.n = int(n)
        self.L = float(L)
        self.dx = self.L / self.n
        self.ks = np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)
        self.xs = np.arange(self.n) * self.dx
        self.kvecs = np.stack(np.meshgrid(self.ks, self.ks, self.ks, indexing='ij'), -1)
        self.P = 2 * np.pi * self.kvecs / self.L
        self._mir = (-np.arange(self.n)) % self.n
        th = 2 * np.pi * np.outer(self.ks, np.arange(self.n)) / self.n
        self._c, self._s = np.cos(th), np.sin(th)
        self._tables: dict[float, tuple] = {}

    def energies(self, m: float) -> np.ndarray:
        return np.sqrt((self.P ** 2).sum(-1) + m * m)

    def k_index(self, kvec) -> tuple:
        """Array index of integer wavenumber kvec (components in [-n/2, n/2))."""
        return tuple(int(k) % self.n for k in kvec)

    def _kernel_tables(self, m: float):
        """Grid-kernel split A = Ap I + Am with Nyquist components removed.

        Returns (Ap, Am, deg): Ap scalar (n,n,n), Am matrix (n,n,n,4,4) built
        from the Nyquist-masked momentum, deg boolean mask of degenerate
        (zeroed) modes — nonempty only for m = 0, where it marks p = 0.
        """
        tab = self._tables.get(m)
        if tab is None:
            E = self.energies(m)
            nyq = self.kvecs == -(self.n // 2)
            pt = np.where(nyq, 0.0, self.P)
            nu = np.sqrt((E + m) ** 2 + (pt ** 2).sum(-1))
            deg = nu < 1e-12
            nu = np.where(deg, 1.0, nu)
            Ap = (E + m) / nu
            Am = np.einsum('xyzj,jab,bc->xyzac', pt, _IGS, _G) / nu[..., None, None]
            Ap = np.where(deg, 0.0, Ap)
            Am[deg] = 0.0
            tab = (Ap, Am, deg)
            self._tables[m] = tab
        return tab

    def kernel(self, kvec, m: float, x) -> np.ndarray:
        """Discrete kernel O(p_k, x) used by the transforms (4x4 at one point).

        Equal to kernel_O except on Nyquist modes, where the adjusted
        amplitude keeps the discrete transform exactly unitary.
        """
        Ap, Am, deg = self._kernel_tables(m)
        idx = self.k_index(kvec)
        if deg[idx]:
            raise DegenerateKernelError("degenerate (zeroed) mode at m=0, p=0")
        p = self.P[idx]
        A = Ap[idx] * _I4 + Am[idx]
        return rotor(-float(p @ np.asarray(x, dtype=float))) @ A

    def _rotor_stages(self, F: np.ndarray, sign: float) -> np.ndarray:
        """Per-axis rotor DFT: out[k] = sum_i rotor(sign p_k x_i) F[i], all axes."""
        for ax in range(3):
            Fm = np.moveaxis(F, ax, 0)
            GF = np.einsum('ab,i...b->i...a', _G, Fm)
            out = np.einsum('ki,i...a->k...a', self._c, Fm) \
                + sign * np.einsum('ki,i...a->k...a', self._s, GF)
            F = np.moveaxis(out, 0, ax)
        return F

    def _mirror(self, F: np.ndarray) -> np.ndarray:
        return F[np.ix_(self._mir, self._mir, self._mir)]


@dataclass
class SpinorField:
    """Real 4-spinor samples on a CartesianGrid; values shape (n, n, n, 4)."""
    grid: CartesianGrid
    values: np.ndarray
    mass: float

    def norm2(self) -> float:
        """Sum_x |Psi(x)|^2 dx^3."""
        return float((self.values ** 2).sum() * self.grid.dx ** 3)


@dataclass
class MomentumSpectrum:
    """Real 4-spinor amplitudes on the dual lattice; values shape (n, n, n, 4).

    zero_mode_dropped marks the massless p = 0 mode, zeroed by the transform
    because the kernel normalizer vanishes there.
    """
    grid: CartesianGrid
    values: np.ndarray
    mass: float
    zero_mode_dropped: bool = False

    def norm2(self) -> float:
        """Sum_p |psi(p)|^2 / L^3 (equals the field norm2: Parseval)."""
        return float((self.values ** 2).sum() / self.grid.L ** 3)


def forward(field: SpinorField) -> MomentumSpectrum:
    """psi(p) = sum_x O(p,x) Psi(x) dx^3 at every lattice momentum."""
    g = field.grid
    Ap, Am, deg = g._kernel_tables(field.mass)
    F = g._rotor_stages(field.values, -1.0) * g.dx ** 3
    vals = Ap[..., None] * F + np.einsum('xyzab,xyzb->xyza', Am, g._mirror(F))
    return MomentumSpectrum(g, vals, field.mass, zero_mode_dropped=bool(deg.any()))


def inverse(spec: MomentumSpectrum) -> SpinorField:
    """Psi(x) = (1/L^3) sum_p O^T(p,x) psi(p)."""
    g = spec.grid
    Ap, Am, _ = g._kernel_tables(spec.mass)
    u = Ap[..., None] * spec.values
    w = np.einsum('xyzab,xyzb->xyza', Am, spec.values)
    u = u + g._mirror(w)
    return SpinorField(g, g._rotor_stages(u, +1.0) / g.L ** 3, spec.mass)


def evolve(spec: MomentumSpectrum, t: float) -> MomentumSpectrum:
    """Free evolution psi(p) -> rotor(-E_p t) psi(p); exactly norm-preserving."""
    E = spec.grid.energies(spec.mass)
    R = rotor(-E * t)
    vals = np.einsum('xyzab,xyzb->xyza', R, spec.values)
    return replace(spec, values=vals)


def plane_wave(grid: CartesianGrid, kvec, m: float, chi, t: float = 0.0) -> SpinorField:
    """On-grid plane-wave solution Psi(x) = A(p) rotor(p.x - E t) chi.

    Satisfies the free Dirac equation exactly in the continuum; kvec must not
    touch the Nyquist wavenumber -n/2 for the field to be a pure grid mode.
    """
    p = 2 * np.pi * np.asarray(kvec, dtype=float) / grid.L
    E = energy(p, m)
    A = _amplitude(p, m)
    chi = np.asarray(chi, dtype=float)
    ph = (np.multiply.outer(p[0], grid.xs)[:, None, None]
          + np.multiply.outer(p[1], grid.xs)[None, :, None]
          + np.multiply.outer(p[2], grid.xs)[None, None, :]) - E * t
    vals = np.einsum('ab,xyzbc,c->xyza', A, rotor(ph), chi)
    return SpinorField(grid, vals, m)


# ----------------------------------------------------------------------------
# electron/positron projections: (1 +- g0)/2 with g0 = -i(ig0) is a complex
# matrix, so projected spectra carry two real channels (re, im).

@dataclass
class DiracSpectrum:
    """Complex momentum amplitudes stored as two real channels re + i im.

    Produced by project_particle; on the sign = +1 (electron) subspace
    ig0 v = i v, so the evolution rotor acts as the scalar phase e^{-iEt}
    (g0 -> 1 substitution); sign = -1 gives e^{+iEt} (g0 -> -1).
    """
    grid: CartesianGrid
    re: np.ndarray
    im: np.ndarray
    mass: float
    sign: int

    def project(self, sign: int) -> "DiracSpectrum":
        """Apply (1 + sign g0)/2 channel-wise."""
        s = float(sign)
        Ga = np.einsum('ab,xyzb->xyza', _G, self.re)
        Gb = np.einsum('ab,xyzb->xyza', _G, self.im)
        return DiracSpectrum(self.grid, (self.re + s * Gb) / 2.0,
                             (self.im - s * Ga) / 2.0, self.mass, sign)

    def evolve(self, t: float) -> "DiracSpectrum":
        """Rotor evolution applied to both channels (the exact dynamics)."""
        E = self.grid.energies(self.mass)
        R = rotor(-E * t)
        return DiracSpectrum(self.grid,
                             np.einsum('xyzab,xyzb->xyza', R, self.re),
                             np.einsum('xyzab,xyzb->xyza', R, self.im),
                             self.mass, self.sign)

    def phase_evolve(self, t: float) -> "DiracSpectrum":
        """Scalar-phase evolution e^{-i sign E t}: the g0 -> sign substitution."""
        E = self.grid.energies(self.mass)
        c = np.cos(E * t)[..., None]
        s = (self.sign * np.sin(E * t))[..., None]
        return DiracSpectrum(self.grid, c * self.re + s * self.im,
                             c * self.im - s * self.re, self.mass, self.sign)


def project_particle(spec: MomentumSpectrum, sign: int) -> DiracSpectrum:
    """Apply the particle/antiparticle projector (1 + sign g0)/2 per mode.

    sign = +1 keeps the electron part, -1 the positron part; the two results
    sum (channel-wise) back to the input spectrum.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    zero = np.zeros_like(spec.values)
    base = DiracSpectrum(spec.grid, spec.values, zero, spec.mass, sign)
    return base.project(sign)


# ----------------------------------------------------------------------------
# space-time extension: O(p, x) = e^{+ig0 p0 x0} O(pvec, xvec) on a periodic
# time axis with frequencies p0 = 2 pi k0 / Lt in fft order.  The time factor
# is a pure rotor, so no Nyquist adjustment is needed on that axis.

def _time_freqs(nt: int) -> np.ndarray:
    return np.fft.fftfreq(nt, d=1.0 / nt).astype(int)


def _time_stage(values: np.ndarray, Lt: float, sign: float) -> np.ndarray:
    """out[k] = sum_i rotor(sign p0_k t_i) values[i] along axis 0 (no weight)."""
    nt = values.shape[0]
    th = 2 * np.pi * np.outer(_time_freqs(nt), np.arange(nt)) / nt
    c, s = np.cos(th), np.sin(th)
    GV = np.einsum('ab,i...b->i...a', _G, values)
    return np.einsum('ki,i...a->k...a', c, values) \
        + sign * np.einsum('ki,i...a->k...a', s, GV)


def time_rotor_forward(values: np.ndarray, Lt: float) -> np.ndarray:
    """psi(p0) = sum_t rotor(+p0 t) psi(t) dt over the periodic time axis 0."""
    nt = values.shape[0]
    return _time_stage(values, Lt, +1.0) * (Lt / nt)


def time_rotor_inverse(values: np.ndarray, Lt: float) -> np.ndarray:
    """psi(t) = (1/Lt) sum_p0 rotor(-p0 t) psi(p0) along axis 0."""
    return _time_stage(values, Lt, -1.0) / Lt


@dataclass
class SpacetimeField:
    """Spinor samples on a periodic (t, x, y, z) grid; values (nt, n, n, n, 4)."""
    grid: CartesianGrid
    Lt: float
    values: np.ndarray
    mass: float


@dataclass
class SpacetimeSpectrum:
    grid: CartesianGrid
    Lt: float
    values: np.ndarray
    mass: float
    zero_mode_dropped: bool = False


def spacetime_forward(f4: SpacetimeField) -> SpacetimeSpectrum:
    """psi(p0, p) = sum_x O(p, x) Psi(x) dx^4: time rotor stage o spatial forward."""
    g = f4.grid
    slices = np.stack([forward(SpinorField(g, f4.values[i], f4.mass)).values
                       for i in range(f4.values.shape[0])])
    dropped = (f4.mass == 0.0)
    vals = time_rotor_forward(slices, f4.Lt)
    return SpacetimeSpectrum(g, f4.Lt, vals, f4.mass, zero_mode_dropped=dropped)


def spacetime_inverse(s4: SpacetimeSpectrum) -> SpacetimeField:
    """Psi(x) = (1/(Lt L^3)) sum_p O^T(p, x) psi(p)."""
    g = s4.grid
    u = time_rotor_inverse(s4.values, s4.Lt)
    slices = np.stack([inverse(MomentumSpectrum(g, u[i], s4.mass)).values
                       for i in range(u.shape[0])])
    return SpacetimeField(g, s4.Lt, slices, s4.mass)
