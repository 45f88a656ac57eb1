"""Angular machinery on the sphere for Majorana spinor fields.

Associated Legendre functions by stable recurrence, matrix-valued spherical
harmonics Y_lm = N_lm P_l^m(cos theta) (cos(m phi) I + sin(m phi) ig0),
spin operators sigma^k = gamma^k gamma^5, orbital angular momentum L_k with
ig0 playing the role of i, the total-angular-momentum matrices Omega_{l,mu},
and a table builder for spherical Bessel functions.

Angular grids are Gauss-Legendre in cos(theta) times uniform phi, which makes
every angular quadrature below exact for band-limited integrands.  The theta
derivative is evaluated per azimuthal Fourier mode: even-m modes are
polynomials in cos(theta) (differentiation matrix applies directly), odd-m
modes carry one factor of sin(theta) that is peeled off analytically, so the
operator is exact on fields of bounded degree.  The Gauss nodes exclude the
poles, so no special pole handling is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, pi

import numpy as np

from .clifford import build_canonical_rep

__all__ = [
    "assoc_legendre",
    "sph_norm",
    "majorana_Y",
    "AngularGrid",
    "SIGMA",
    "SpinOperators",
    "spin_operators",
    "sigma_r",
    "gamma_r",
    "omega_matrix",
    "angular_modes",
    "sph_jn_table",
]

_REP = build_canonical_rep()
_IG = _REP.generators
_IG5 = _REP.gamma5
_I4 = np.eye(4)
_G = _IG[0]

# sigma^k = gamma^k gamma^5 = -(i gamma^k)(i gamma^5); sigma^3 is diagonal
SIGMA = tuple(-(_IG[k] @ _IG5) for k in (1, 2, 3))
_PROJ_UP = (_I4 + SIGMA[2]) / 2.0
_PROJ_DN = (_I4 - SIGMA[2]) / 2.0


def assoc_legendre(l: int, m: int, x):
    """Associated Legendre P_l^m(x) with the Condon-Shortley sign.

    Matches the Rodrigues definition
        P_l^m = (-1)^m / (2^l l!) (1-x^2)^{m/2} d^{l+m}/dx^{l+m} (x^2-1)^l
    for -l <= m <= l (zero outside that range), computed by the standard
    three-term recurrence (stable near |x| = 1 where the expanded polynomial
    form cancels badly).
    """
    if not (0 <= l):
        raise ValueError("l must be >= 0")
    x = np.asarray(x, dtype=float)
    if abs(m) > l:
        return np.zeros_like(x)
    am = abs(m)
    s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    pmm = np.ones_like(x)
    for k in range(1, am + 1):
        pmm = pmm * (-(2 * k - 1)) * s
    if l == am:
        out = pmm
    else:
        pm1 = x * (2 * am + 1) * pmm
        if l == am + 1:
            out = pm1
        else:
            for ll in range(am + 2, l + 1):
                pmm, pm1 = pm1, (x * (2 * ll - 1) * pm1 - (ll + am - 1) * pmm) / (ll - am)
            out = pm1
    if m < 0:
        out = out * ((-1.0) ** am * factorial(l - am) / factorial(l + am))
    return out


def sph_norm(l: int, m: int) -> float:
    """Real spherical-harmonic normalization sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!)."""
    return np.sqrt((2 * l + 1) / (4 * pi) * factorial(l - m) / factorial(l + m))


def majorana_Y(l: int, m: int, theta, phi) -> np.ndarray:
    """Matrix spherical harmonic Y_lm = N_lm P_l^m(cos t)(cos(m p) I + sin(m p) ig0).

    theta/phi may be scalars or broadcastable arrays; the result has shape
    ``broadcast_shape + (4, 4)``.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    p = sph_norm(l, m) * assoc_legendre(l, m, np.cos(theta))
    c = p * np.cos(m * phi)
    s = p * np.sin(m * phi)
    return np.multiply.outer(c, _I4) + np.multiply.outer(s, _G)


def _barycentric_diffmat(x: np.ndarray) -> np.ndarray:
    """First-derivative collocation matrix on distinct nodes x (barycentric)."""
    n = len(x)
    lam = np.empty(n)
    for i in range(n):
        lam[i] = 1.0 / np.prod(x[i] - np.delete(x, i))
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                D[i, j] = (lam[j] / lam[i]) / (x[i] - x[j])
        D[i, i] = -D[i].sum()   # rows sum to zero (derivative of constants)
    return D


class AngularGrid:
    """Gauss-Legendre x uniform product grid on the sphere.

    Attributes
    ----------
    ntheta, nphi : int
    x, wx : (ntheta,) Gauss-Legendre nodes/weights in cos(theta)
    theta, phi : 1-d node arrays; ``phi`` uniform in [-pi, pi)
    ct, st, ph : (ntheta, nphi) broadcast node arrays
    weights : (ntheta, nphi) quadrature weights summing to 4 pi
    """

    def __init__(self, ntheta: int, nphi: int):
        if ntheta < 2 or nphi < 4 or nphi % 2:
            raise ValueError("need ntheta >= 2 and even nphi >= 4")
        self.ntheta, self.nphi = int(ntheta), int(nphi)
        self.x, self.wx = np.polynomial.legendre.leggauss(self.ntheta)
        self.theta = np.arccos(self.x)
        self.phi = 2 * pi * np.arange(self.nphi) / self.nphi - pi
        self.ct = np.repeat(self.x[:, None], self.nphi, axis=1)
        self.st = np.sqrt(1.0 - self.ct ** 2)
        self.ph = np.repeat(self.phi[None, :], self.ntheta, axis=0)
        self.weights = self.wx[:, None] * (2 * pi / self.nphi) * np.ones_like(self.ct)
        self._dx = _barycentric_diffmat(self.x)
        self._sin = np.sqrt(1.0 - self.x ** 2)

    # -- derivatives ------------------------------------------------------

    def dphi(self, F: np.ndarray) -> np.ndarray:
        """d/dphi along axis 1, spectral (exact for band-limited fields)."""
        ks = np.arange(self.nphi // 2 + 1)
        Fh = np.fft.rfft(F, axis=1)
        Fh *= (1j * ks).reshape((1, -1) + (1,) * (F.ndim - 2))
        return np.fft.irfft(Fh, n=self.nphi, axis=1)

    def dtheta(self, F: np.ndarray) -> np.ndarray:
        """d/dtheta along axis 0, exact on band-limited fields.

        Per azimuthal Fourier mode m: even-m components are polynomials in
        x = cos(theta), so d/dtheta = -sin(theta) d/dx; odd-m components are
        sin(theta) times a polynomial g(x), whose theta-derivative is
        x g - (1 - x^2) dg/dx.
        """
        Fh = np.fft.rfft(F, axis=1)
        out = np.empty_like(Fh)
        nth = self.ntheta
        xx = self.x.reshape((nth,) + (1,) * (F.ndim - 2))
        ss = self._sin.reshape((nth,) + (1,) * (F.ndim - 2))
        for m in range(self.nphi // 2 + 1):
            fm = Fh[:, m]
            if m % 2 == 0:
                out[:, m] = -ss * np.einsum('ij,j...->i...', self._dx, fm)
            else:
                g = fm / ss
                out[:, m] = xx * g - (1 - xx ** 2) * np.einsum('ij,j...->i...', self._dx, g)
        return np.fft.irfft(out, n=self.nphi, axis=1)

    # -- angular momentum --------------------------------------------------

    def angular_momentum_apply(self, F: np.ndarray, k: int) -> np.ndarray:
        """Apply L_k (k = 1, 2, 3) to a spinor field F of shape (nth, nph, 4, ...).

        L_3 = -ig0 d/dphi; L_1, L_2 by the usual spherical expressions with
        ig0 in place of i.  The matrix ig0 multiplies the spinor index
        (axis 2).
        """
        nd = F.ndim - 2
        cot = (self.ct / self.st).reshape(self.ct.shape + (1,) * nd)
        sph = np.sin(self.ph).reshape(self.ph.shape + (1,) * nd)
        cph = np.cos(self.ph).reshape(self.ph.shape + (1,) * nd)
        if k == 3:
            inner = -self.dphi(F)
        elif k == 1:
            inner = sph * self.dtheta(F) + cot * cph * self.dphi(F)
        elif k == 2:
            inner = -cph * self.dtheta(F) + cot * sph * self.dphi(F)
        else:
            raise ValueError("k must be 1, 2 or 3")
        return np.einsum('ab,xyb...->xya...', _G, inner)

    def sigma_dot_L(self, F: np.ndarray) -> np.ndarray:
        """Apply sigma.L = sum_k sigma^k L_k (spin times orbital)."""
        out = np.zeros_like(F)
        for k in (1, 2, 3):
            out += np.einsum('ab,xyb...->xya...', SIGMA[k - 1],
                             self.angular_momentum_apply(F, k))
        return out

    def integrate(self, F: np.ndarray) -> np.ndarray:
        """Quadrature over the sphere; F shape (nth, nph, ...)."""
        return np.einsum('xy,xy...->...', self.weights, F)


@dataclass(frozen=True)
class SpinOperators:
    """Spin matrices sigma^k = gamma^k gamma^5 plus the radial direction pair.

    sigma^k/2 satisfy the angular-momentum algebra with ig0 as imaginary
    unit: [sigma^i/2, sigma^j/2] = ig0 eps_ijk sigma^k/2 exactly.
    """
    sigma1: np.ndarray
    sigma2: np.ndarray
    sigma3: np.ndarray

    def sigmaR(self, theta, phi) -> np.ndarray:
        return sigma_r(theta, phi)

    def gammaR(self, theta, phi) -> np.ndarray:
        return gamma_r(theta, phi)


def spin_operators() -> SpinOperators:
    return SpinOperators(*SIGMA)


def sigma_r(theta, phi) -> np.ndarray:
    """Radial spin matrix sigma^r = xhat_k sigma^k."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    xh = np.stack([np.sin(theta) * np.cos(phi),
                   np.sin(theta) * np.sin(phi),
                   np.broadcast_to(np.cos(theta), np.broadcast_shapes(theta.shape, phi.shape))], -1)
    return np.einsum('...k,kab->...ab', xh, np.stack(SIGMA))


def gamma_r(theta, phi) -> np.ndarray:
    """Radial Majorana matrix i gamma^r = xhat_k (i gamma^k)."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    xh = np.stack([np.sin(theta) * np.cos(phi),
                   np.sin(theta) * np.sin(phi),
                   np.broadcast_to(np.cos(theta), np.broadcast_shapes(theta.shape, phi.shape))], -1)
    return np.einsum('...k,kab->...ab', xh, np.stack([_IG[1], _IG[2], _IG[3]]))


def angular_modes(lmax: int):
    """All (l, mu) with 1 <= l <= lmax and -l <= mu <= l - 1, in scan order."""
    return [(l, mu) for l in range(1, lmax + 1) for mu in range(-l, l)]


def omega_matrix(l: int, mu: int, theta, phi) -> np.ndarray:
    """Total-angular-momentum matrix Omega_{l,mu}(theta, phi).

    Combines Y_{l,.} with the spin-up projector and Y_{l-1,.} with spin-down,
    with square-root Clebsch weights; broadcasts over theta/phi to shape
    ``broadcast + (4, 4)``.  Requires l >= 1 and -l <= mu <= l-1 (the mu = l
    column is identically zero and is excluded from the index range).
    """
    if l < 1 or not (-l <= mu <= l - 1):
        raise ValueError("need l >= 1 and -l <= mu <= l-1")
    s1 = SIGMA[0]
    out = (-np.sqrt((l - mu) / (2 * l + 1))) * (majorana_Y(l, mu, theta, phi) @ _PROJ_UP)
    out += np.sqrt((l + mu + 1) / (2 * l + 1)) * (majorana_Y(l, mu + 1, theta, phi) @ (s1 @ _PROJ_UP))
    if l + mu > 0:
        out += np.sqrt((l + mu) / (2 * l - 1)) * (majorana_Y(l - 1, mu, theta, phi) @ (s1 @ _PROJ_DN))
    if l - mu - 1 > 0:
        out += np.sqrt((l - mu - 1) / (2 * l - 1)) * (majorana_Y(l - 1, mu + 1, theta, phi) @ _PROJ_DN)
    return out


def sph_jn_table(lmax: int, x: np.ndarray) -> np.ndarray:
    """Spherical Bessel functions j_l(x) for l = 0..lmax, vectorized in x.

    Three regimes per point: a power series for x < 1e-3, upward recurrence
    for x >= max(l, 1) (stable there), and Miller's downward recurrence with
    normalization against j_0 (or j_1 near zeros of j_0) otherwise.  An
    overflow guard rescales the downward sweep when entries exceed 1e250.
    """
    x = np.asarray(x, dtype=float)
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    shape = (lmax + 1,) + x.shape
    small = x < 1e-3
    xs = np.where(small, 1.0, x)   # avoid 0/0 in the generic formulas

    up = np.empty(shape)
    up[0] = np.sin(xs) / xs
    if lmax >= 1:
        up[1] = np.sin(xs) / xs ** 2 - np.cos(xs) / xs
    for l in range(2, lmax + 1):
        up[l] = (2 * l - 1) / xs * up[l - 1] - up[l - 2]

    start = lmax + 20
    jp = np.zeros_like(x)
    jc = np.full_like(x, 1e-30)
    down = np.empty(shape)
    for n in range(start, 0, -1):
        jm = (2 * n + 1) / xs * jc - jp
        if n - 1 <= lmax:
            down[n - 1] = jm
        jp, jc = jc, jm
        big = np.abs(jm) > 1e250
        if big.any():
            sc = np.where(big, 1e-250, 1.0)
            jp = jp * sc
            jc = jc * sc
            if n - 1 <= lmax:
                down[n - 1:] *= sc
    # normalize against j0, or j1 where j0 is near a zero
    with np.errstate(invalid='ignore', divide='ignore'):
        use1 = (np.abs(up[0]) < 1e-3 / np.maximum(xs, 1.0)) if lmax >= 1 else np.zeros_like(x, bool)
        scale0 = up[0] / down[0]
        if lmax >= 1:
            scale1 = up[1] / down[1]
            scale = np.where(use1, scale1, scale0)
        else:
            scale = scale0
    down = down * scale

    lg = np.arange(lmax + 1).reshape((lmax + 1,) + (1,) * x.ndim)
    out = np.where(x >= np.maximum(lg, 1.0), up, down)
    for l in range(lmax + 1):
        dfac = np.prod(np.arange(1, 2 * l + 2, 2), dtype=float)   # (2l+1)!!
        series = x ** l / dfac * (1.0 - x * x / (2.0 * (2 * l + 3)))
        out[l] = np.where(small, series, out[l])
    return out
