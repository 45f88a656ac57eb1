"""Binary and CSV serialization of spinor fields and spectra.

Cartesian binary layout (magic ``MAJ1``): u32 version = 1, u32 rank (3 or 4),
rank u32 axis sizes, rank f64 box lengths, f64 mass, then row-major
little-endian f64 spinor components (4 per grid point).  Spherical layout
(magic ``MAJS``): u32 version = 1, u32 nr/ntheta/nphi, f64 rmax, f64 mass,
node arrays (r, cos(theta), phi as f64), then spinor data (nr, ntheta, nphi,
4) row-major.

CSV exports carry one row per grid point: coordinate columns (x,y,z or
x0..x3 or r,theta,phi), then psi0..psi3; mode spectra use p,l,mu,psi0..psi3.
Float formatting is fixed at 17 significant digits so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import numpy as np

from .fourier import CartesianGrid, MomentumSpectrum, SpacetimeField, SpinorField
from .hankel import HankelSpectrum, SphericalField, SphericalGrid

__all__ = [
    "FormatError",
    "write_maj1",
    "read_maj1",
    "write_majs",
    "read_majs",
    "write_field_csv",
    "write_spacetime_csv",
    "write_spherical_csv",
    "write_spectrum_csv",
    "write_hankel_csv",
]

_MAGIC_CART = b"MAJ1"
_MAGIC_SPH = b"MAJS"
_U32 = np.dtype('<u4')
_F64 = np.dtype('<f8')


class FormatError(ValueError):
    """Raised on bad magic, version, or inconsistent geometry while reading."""


def _fmt(v: float) -> str:
    return format(float(v), '.17g')


def write_maj1(path, obj) -> None:
    """Write a SpinorField (rank 3) or SpacetimeField (rank 4)."""
    if isinstance(obj, SpinorField):
        rank, dims = 3, (obj.grid.n,) * 3
        boxes = (obj.grid.L,) * 3
        data = obj.values
    elif isinstance(obj, SpacetimeField):
        nt = obj.values.shape[0]
        rank, dims = 4, (nt,) + (obj.grid.n,) * 3
        boxes = (obj.Lt,) + (obj.grid.L,) * 3
        data = obj.values
    else:
        raise TypeError("expected SpinorField or SpacetimeField")
    with open(path, 'wb') as fh:
        fh.write(_MAGIC_CART)
        fh.write(np.array([1, rank], dtype=_U32).tobytes())
        fh.write(np.array(dims, dtype=_U32).tobytes())
        fh.write(np.array(boxes, dtype=_F64).tobytes())
        fh.write(np.array([obj.mass], dtype=_F64).tobytes())
        fh.write(np.ascontiguousarray(data, dtype=_F64).tobytes())


def read_maj1(path):
    """Read a MAJ1 file; returns SpinorField or SpacetimeField by rank."""
    with open(path, 'rb') as fh:
        if fh.read(4) != _MAGIC_CART:
            raise FormatError("bad magic (expected MAJ1)")
        version, rank = np.frombuffer(fh.read(8), dtype=_U32)
        if version != 1 or rank not in (3, 4):
            raise FormatError(f"unsupported version/rank: {version}/{rank}")
        dims = np.frombuffer(fh.read(4 * rank), dtype=_U32).astype(int)
        boxes = np.frombuffer(fh.read(8 * rank), dtype=_F64)
        mass = float(np.frombuffer(fh.read(8), dtype=_F64)[0])
        count = int(np.prod(dims)) * 4
        data = np.frombuffer(fh.read(8 * count), dtype=_F64)
        if data.size != count:
            raise FormatError("truncated spinor data")
        values = data.reshape(tuple(dims) + (4,)).copy()
    spatial = dims[-3:]
    if not (spatial[0] == spatial[1] == spatial[2]):
        raise FormatError("spatial axes must be cubic")
    if np.ptp(boxes[-3:]) != 0.0:
        raise FormatError("spatial box lengths must be equal")
    grid = CartesianGrid(int(spatial[0]), float(boxes[-1]))
    if rank == 3:
        return SpinorField(grid, values, mass)
    return SpacetimeField(grid, float(boxes[0]), values, mass)


def write_majs(path, field: SphericalField) -> None:
    g = field.grid
    with open(path, 'wb') as fh:
        fh.write(_MAGIC_SPH)
        fh.write(np.array([1, g.nr, g.angular.ntheta, g.angular.nphi],
                          dtype=_U32).tobytes())
        fh.write(np.array([g.rmax, field.mass], dtype=_F64).tobytes())
        fh.write(np.ascontiguousarray(g.r, dtype=_F64).tobytes())
        fh.write(np.ascontiguousarray(g.angular.x, dtype=_F64).tobytes())
        fh.write(np.ascontiguousarray(g.angular.phi, dtype=_F64).tobytes())
        fh.write(np.ascontiguousarray(field.values, dtype=_F64).tobytes())


def read_majs(path, lmax: int = 5, np_points: int | None = None) -> SphericalField:
    """Read a MAJS file; lmax/np_points set the transform side of the grid
    (they are not stored in the file)."""
    with open(path, 'rb') as fh:
        if fh.read(4) != _MAGIC_SPH:
            raise FormatError("bad magic (expected MAJS)")
        version, nr, ntheta, nphi = np.frombuffer(fh.read(16), dtype=_U32)
        if version != 1:
            raise FormatError(f"unsupported version: {version}")
        rmax, mass = np.frombuffer(fh.read(16), dtype=_F64)
        r = np.frombuffer(fh.read(8 * int(nr)), dtype=_F64)
        x = np.frombuffer(fh.read(8 * int(ntheta)), dtype=_F64)
        phi = np.frombuffer(fh.read(8 * int(nphi)), dtype=_F64)
        count = int(nr) * int(ntheta) * int(nphi) * 4
        data = np.frombuffer(fh.read(8 * count), dtype=_F64)
        if data.size != count:
            raise FormatError("truncated spinor data")
    grid = SphericalGrid(int(nr), float(rmax), int(ntheta), int(nphi),
                         lmax, int(np_points or nr))
    for stored, built, name in ((r, grid.r, 'r'), (x, grid.angular.x, 'costheta'),
                                (phi, grid.angular.phi, 'phi')):
        if not np.allclose(stored, built, atol=1e-12):
            raise FormatError(f"stored {name} nodes do not match the grid")
    values = data.reshape(int(nr), int(ntheta), int(nphi), 4).copy()
    return SphericalField(grid, values, float(mass))


def _write_rows(path, header: str, rows) -> None:
    with open(path, 'w', newline='\n') as fh:
        fh.write(header + '\n')
        for row in rows:
            fh.write(','.join(row) + '\n')


def write_field_csv(path, field: SpinorField) -> None:
    g = field.grid
    xs = g.xs

    def rows():
        for i in range(g.n):
            for j in range(g.n):
                for k in range(g.n):
                    v = field.values[i, j, k]
                    yield ([_fmt(xs[i]), _fmt(xs[j]), _fmt(xs[k])]
                           + [_fmt(c) for c in v])
    _write_rows(path, 'x,y,z,psi0,psi1,psi2,psi3', rows())


def write_spacetime_csv(path, f4: SpacetimeField) -> None:
    g = f4.grid
    nt = f4.values.shape[0]
    dt = f4.Lt / nt
    xs = g.xs

    def rows():
        for it in range(nt):
            for i in range(g.n):
                for j in range(g.n):
                    for k in range(g.n):
                        v = f4.values[it, i, j, k]
                        yield ([_fmt(it * dt), _fmt(xs[i]), _fmt(xs[j]), _fmt(xs[k])]
                               + [_fmt(c) for c in v])
    _write_rows(path, 'x0,x1,x2,x3,psi0,psi1,psi2,psi3', rows())


def write_spherical_csv(path, field: SphericalField) -> None:
    g = field.grid

    def rows():
        for i in range(g.nr):
            for j in range(g.angular.ntheta):
                for k in range(g.angular.nphi):
                    v = field.values[i, j, k]
                    yield ([_fmt(g.r[i]), _fmt(g.angular.theta[j]),
                            _fmt(g.angular.phi[k])] + [_fmt(c) for c in v])
    _write_rows(path, 'r,theta,phi,psi0,psi1,psi2,psi3', rows())


def write_spectrum_csv(path, spec: MomentumSpectrum) -> None:
    g = spec.grid
    ps = 2 * np.pi * g.ks / g.L

    def rows():
        for i in range(g.n):
            for j in range(g.n):
                for k in range(g.n):
                    v = spec.values[i, j, k]
                    yield ([_fmt(ps[i]), _fmt(ps[j]), _fmt(ps[k])]
                           + [_fmt(c) for c in v])
    _write_rows(path, 'px,py,pz,psi0,psi1,psi2,psi3', rows())


def write_hankel_csv(path, spec: HankelSpectrum) -> None:
    g = spec.grid

    def rows():
        for k in range(g.np_points):
            for i, (l, mu) in enumerate(g.modes):
                v = spec.values[k, i]
                yield ([_fmt(g.p[k]), str(l), str(mu)] + [_fmt(c) for c in v])
    _write_rows(path, 'p,l,mu,psi0,psi1,psi2,psi3', rows())
