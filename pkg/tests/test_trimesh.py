import math

import numpy as np
import pytest

from spectra_lab.mesh import TriMesh, flat_torus, icosphere, read_off, write_off


def test_icosphere_counts_and_area():
    for level, nv in [(0, 12), (1, 42), (2, 162), (3, 642)]:
        mesh = icosphere(level)
        assert mesh.n_vertices == nv
        assert mesh.n_faces == 20 * 4**level
    # inscribed polyhedral area approaches 4 pi from below
    a2, a3 = icosphere(2).area(), icosphere(3).area()
    assert a2 < a3 < 4 * math.pi


def test_icosphere_radius():
    mesh = icosphere(2, radius=2.5)
    r = np.linalg.norm(mesh.vertices, axis=1)
    assert np.allclose(r, 2.5, atol=1e-12)


def test_flat_torus_metric():
    mesh = flat_torus(8, 8)
    assert mesh.n_vertices == 64
    assert mesh.n_faces == 128
    assert abs(mesh.area() - (2 * math.pi) ** 2) < 1e-10
    # every face is a right triangle with the grid steps as legs
    h = 2 * math.pi / 8
    lens = np.sort(mesh.face_edge_lengths(), axis=1)
    assert np.allclose(lens[:, 0], h) and np.allclose(lens[:, 1], h)
    assert np.allclose(lens[:, 2], h * math.sqrt(2))


def test_off_roundtrip_with_overrides(tmp_path):
    mesh = flat_torus(6, 4)
    path = str(tmp_path / "torus.off")
    write_off(mesh, path)
    back = read_off(path)
    assert back.n_vertices == mesh.n_vertices
    assert np.array_equal(back.faces, mesh.faces)
    assert back.overrides == mesh.overrides


def test_off_roundtrip_plain(tmp_path):
    mesh = icosphere(1)
    path = str(tmp_path / "ico.off")
    mesh.save(path)
    back = read_off(path)
    assert np.allclose(back.vertices, mesh.vertices)
    assert not back.overrides


def test_validate_rejects_bad_lengths():
    tri = TriMesh(np.array([[0.0, 0, 0], [1, 0, 0], [0, 1, 0]]),
                  np.array([[0, 1, 2]]))
    with pytest.raises(ValueError):
        TriMesh(tri.vertices, tri.faces,
                edge_lengths={(0, 1): 10.0, (0, 2): 1.0, (1, 2): 1.0})


def test_geodesics_and_diameter():
    mesh = icosphere(3)
    d = mesh.diameter()
    # graph geodesics on a fine sphere approximate pi from above
    assert math.pi <= d <= math.pi * 1.1
    dist = mesh.geodesic_distances(sources=[0])
    assert dist.shape[-1] == mesh.n_vertices
    assert dist.min() == 0.0


def test_vertex_faces_cover():
    mesh = icosphere(0)
    vf = mesh.vertex_faces()
    assert all(len(v) == 5 for v in vf)
