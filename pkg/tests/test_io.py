"""Serialization round trips and format validation."""

import numpy as np
import pytest

from majorana import fourier, hankel, io

RNG = np.random.default_rng(17)


def cart_field(n=4, L=4.0, m=1.5):
    return fourier.SpinorField(fourier.CartesianGrid(n, L),
                               RNG.standard_normal((n, n, n, 4)), m)


def test_maj1_roundtrip_exact(tmp_path):
    f = cart_field()
    p = tmp_path / "f.maj1"
    io.write_maj1(p, f)
    f2 = io.read_maj1(p)
    assert isinstance(f2, fourier.SpinorField)
    assert (f2.grid.n, f2.grid.L, f2.mass) == (4, 4.0, 1.5)
    np.testing.assert_array_equal(f2.values, f.values)


def test_maj1_spacetime_roundtrip(tmp_path):
    g = fourier.CartesianGrid(4, 4.0)
    f4 = fourier.SpacetimeField(g, 2.5, RNG.standard_normal((3, 4, 4, 4, 4)), 0.0)
    p = tmp_path / "f4.maj1"
    io.write_maj1(p, f4)
    back = io.read_maj1(p)
    assert isinstance(back, fourier.SpacetimeField)
    assert back.Lt == 2.5 and back.mass == 0.0
    np.testing.assert_array_equal(back.values, f4.values)


def test_maj1_rejects_wrong_type(tmp_path):
    with pytest.raises(TypeError):
        io.write_maj1(tmp_path / "x.maj1", np.zeros(3))


def test_maj1_bad_magic(tmp_path):
    p = tmp_path / "bad.maj1"
    p.write_bytes(b"NOPE" + b"\0" * 64)
    with pytest.raises(io.FormatError, match="magic"):
        io.read_maj1(p)


def test_maj1_bad_version(tmp_path):
    f = cart_field()
    p = tmp_path / "v.maj1"
    io.write_maj1(p, f)
    raw = bytearray(p.read_bytes())
    raw[4] = 9  # version field
    p.write_bytes(bytes(raw))
    with pytest.raises(io.FormatError, match="version"):
        io.read_maj1(p)


def test_maj1_truncated(tmp_path):
    f = cart_field()
    p = tmp_path / "t.maj1"
    io.write_maj1(p, f)
    p.write_bytes(p.read_bytes()[:-16])
    with pytest.raises(io.FormatError, match="truncated"):
        io.read_maj1(p)


def test_majs_roundtrip_exact(tmp_path):
    g = hankel.SphericalGrid(16, 8.0, 6, 12, 2, 16)
    f = hankel.SphericalField(g, RNG.standard_normal((16, 6, 12, 4)), 0.7)
    p = tmp_path / "f.majs"
    io.write_majs(p, f)
    back = io.read_majs(p, lmax=2, np_points=16)
    assert back.mass == 0.7
    assert (back.grid.nr, back.grid.rmax) == (16, 8.0)
    assert back.grid.lmax == 2 and back.grid.np_points == 16
    np.testing.assert_array_equal(back.values, f.values)


def test_majs_bad_magic_and_truncation(tmp_path):
    p = tmp_path / "bad.majs"
    p.write_bytes(b"MAJ1" + b"\0" * 64)
    with pytest.raises(io.FormatError, match="magic"):
        io.read_majs(p)
    g = hankel.SphericalGrid(16, 8.0, 6, 12, 1, 16)
    f = hankel.SphericalField(g, np.zeros((16, 6, 12, 4)), 1.0)
    q = tmp_path / "t.majs"
    io.write_majs(q, f)
    q.write_bytes(q.read_bytes()[:-8])
    with pytest.raises(io.FormatError, match="truncated"):
        io.read_majs(q)


def test_majs_node_consistency_check(tmp_path):
    g = hankel.SphericalGrid(16, 8.0, 6, 12, 1, 16)
    f = hankel.SphericalField(g, np.zeros((16, 6, 12, 4)), 1.0)
    p = tmp_path / "n.majs"
    io.write_majs(p, f)
    raw = bytearray(p.read_bytes())
    # corrupt the first stored radial node (offset: magic 4 + 4 u32 + 2 f64)
    raw[36:44] = np.array([99.0]).tobytes()
    p.write_bytes(bytes(raw))
    with pytest.raises(io.FormatError, match="nodes"):
        io.read_majs(p)


def test_field_csv_values_roundtrip_17g(tmp_path):
    f = cart_field(n=2)
    p = tmp_path / "f.csv"
    io.write_field_csv(p, f)
    lines = p.read_text().splitlines()
    assert lines[0] == "x,y,z,psi0,psi1,psi2,psi3"
    assert len(lines) == 1 + 2 ** 3
    got = np.array([[float(c) for c in ln.split(',')[3:]] for ln in lines[1:]])
    np.testing.assert_array_equal(got.reshape(2, 2, 2, 4), f.values)


def test_csv_deterministic(tmp_path):
    f = cart_field()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    io.write_field_csv(a, f)
    io.write_field_csv(b, f)
    assert a.read_bytes() == b.read_bytes()


def test_spectrum_csv_shape(tmp_path):
    g = fourier.CartesianGrid(4, 4.0)
    spec = fourier.MomentumSpectrum(g, RNG.standard_normal((4, 4, 4, 4)), 1.0)
    p = tmp_path / "s.csv"
    io.write_spectrum_csv(p, spec)
    lines = p.read_text().splitlines()
    assert lines[0] == "px,py,pz,psi0,psi1,psi2,psi3"
    assert len(lines) == 1 + 4 ** 3


def test_hankel_csv_mode_labels(tmp_path):
    g = hankel.SphericalGrid(8, 4.0, 4, 8, 2, 8)
    spec = hankel.HankelSpectrum(g, RNG.standard_normal((8, len(g.modes), 4)), 1.0)
    p = tmp_path / "h.csv"
    io.write_hankel_csv(p, spec)
    lines = p.read_text().splitlines()
    assert lines[0] == "p,l,mu,psi0,psi1,psi2,psi3"
    assert len(lines) == 1 + 8 * len(g.modes)
    first = lines[1].split(',')
    assert (int(first[1]), int(first[2])) == g.modes[0]
    got = np.array([float(c) for c in first[3:]])
    np.testing.assert_array_equal(got, spec.values[0, 0])


def test_spherical_and_spacetime_csv_headers(tmp_path):
    g = hankel.SphericalGrid(8, 4.0, 4, 8, 1, 8)
    f = hankel.SphericalField(g, np.zeros((8, 4, 8, 4)), 1.0)
    ps = tmp_path / "sph.csv"
    io.write_spherical_csv(ps, f)
    assert ps.read_text().splitlines()[0] == "r,theta,phi,psi0,psi1,psi2,psi3"
    gc = fourier.CartesianGrid(2, 2.0)
    f4 = fourier.SpacetimeField(gc, 1.0, np.zeros((2, 2, 2, 2, 4)), 1.0)
    pt = tmp_path / "st.csv"
    io.write_spacetime_csv(pt, f4)
    lines = pt.read_text().splitlines()
    assert lines[0] == "x0,x1,x2,x3,psi0,psi1,psi2,psi3"
    assert len(lines) == 1 + 2 * 2 ** 3
