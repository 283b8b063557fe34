"""Triangle meshes with optional per-edge metric lengths.

A TriMesh is a connectivity (vertices, faces) plus a length for every edge.
By default lengths come from the 3-d embedding, but any subset can be
overridden, which makes non-embeddable metrics (flat tori, pinched necks)
first-class citizens: all downstream geometry (areas, Laplacians, distances)
reads lengths, never coordinates.
"""

import csv
import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

__all__ = ["TriMesh", "icosphere", "flat_torus", "write_off", "read_off"]


class TriMesh:
    def __init__(self, vertices, faces, edge_lengths=None, validate=True):
        """edge_lengths: optional dict {(i, j): length} with i < j, overriding
        the embedding distance for those edges."""
        self.vertices = np.ascontiguousarray(vertices, dtype=float)
        self.faces = np.ascontiguousarray(faces, dtype=np.int64)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise ValueError("vertices must be (V, 3)")
        if self.faces.ndim != 2 or self.faces.shape[1] != 3:
            raise ValueError("faces must be (F, 3)")
        self.overrides = {}
        if edge_lengths:
            for (i, j), l in edge_lengths.items():
                if not l > 0 or not np.isfinite(l):
                    raise ValueError(f"edge ({i},{j}) has non-positive length")
                self.overrides[(min(i, j), max(i, j))] = float(l)
        self._build()
        if validate:
            self.validate()

    def _build(self):
        f = self.faces
        pairs = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        pairs = np.sort(pairs, axis=1)
        self.edges, inv, counts = np.unique(pairs, axis=0,
                                            return_inverse=True, return_counts=True)
        self._edge_face_count = counts
        self._face_edge_index = inv.reshape(3, -1).T  # face -> edge ids (01, 12, 20)
        diff = self.vertices[self.edges[:, 0]] - self.vertices[self.edges[:, 1]]
        lengths = np.linalg.norm(diff, axis=1)
        if self.overrides:
            idx = {tuple(e): k for k, e in enumerate(map(tuple, self.edges))}
            for key, l in self.overrides.items():
                if key not in idx:
                    raise ValueError(f"override for non-existent edge {key}")
                lengths[idx[key]] = l
        self.edge_lengths_arr = lengths

    # --- queries -----------------------------------------------------------

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    @property
    def n_faces(self):
        return self.faces.shape[0]

    def face_edge_lengths(self):
        """(F, 3) lengths opposite to local vertices (0, 1, 2):
        column k is the edge not containing face vertex k."""
        l01 = self.edge_lengths_arr[self._face_edge_index[:, 0]]
        l12 = self.edge_lengths_arr[self._face_edge_index[:, 1]]
        l20 = self.edge_lengths_arr[self._face_edge_index[:, 2]]
        return np.stack([l12, l20, l01], axis=1)

    def face_areas(self):
        l = self.face_edge_lengths()
        a, b, c = l[:, 0], l[:, 1], l[:, 2]
        s = 0.5 * (a + b + c)
        h = s * (s - a) * (s - b) * (s - c)
        if np.any(h <= 0):
            bad = int(np.argmin(h))
            raise ValueError(f"degenerate face {bad}: edge lengths violate the "
                             f"triangle inequality")
        return np.sqrt(h)

    def area(self):
        return float(self.face_areas().sum())

    def adjacency(self):
        """Sparse symmetric matrix of edge lengths (graph metric)."""
        i, j = self.edges[:, 0], self.edges[:, 1]
        w = self.edge_lengths_arr
        n = self.n_vertices
        return csr_matrix((np.concatenate([w, w]),
                           (np.concatenate([i, j]), np.concatenate([j, i]))),
                          shape=(n, n))

    def geodesic_distances(self, sources=None):
        """Graph-geodesic distances (Dijkstra on edge lengths)."""
        return dijkstra(self.adjacency(), directed=False, indices=sources)

    def diameter(self, exact_limit=2000, n_probes=48, seed=0):
        """Graph-geodesic diameter; exact up to exact_limit vertices, otherwise
        a max over Dijkstra runs from a seeded probe sample (lower estimate)."""
        n = self.n_vertices
        if n <= exact_limit:
            return float(self.geodesic_distances().max())
        rng = np.random.default_rng(seed)
        probes = rng.choice(n, size=min(n_probes, n), replace=False)
        return float(self.geodesic_distances(sources=probes).max())

    def vertex_faces(self):
        """List of incident face indices per vertex."""
        out = [[] for _ in range(self.n_vertices)]
        for k, f in enumerate(self.faces):
            for v in f:
                out[v].append(k)
        return out

    # --- validation --------------------------------------------------------

    def validate(self):
        f = self.faces
        if f.size and (f.min() < 0 or f.max() >= self.n_vertices):
            raise ValueError("face index out of range")
        if np.any(np.sort(f, axis=1)[:, :-1] == np.sort(f, axis=1)[:, 1:]):
            raise ValueError("face with repeated vertex")
        key = np.sort(f, axis=1)
        if np.unique(key, axis=0).shape[0] != f.shape[0]:
            raise ValueError("duplicate face")
        if np.any(self._edge_face_count > 2):
            raise ValueError("non-manifold edge (more than two incident faces)")
        ncomp, _ = connected_components(self.adjacency(), directed=False)
        if ncomp != 1:
            raise ValueError(f"mesh is not connected ({ncomp} components)")
        self.face_areas()  # triangle inequality + positivity

    # --- i/o -----------------------------------------------------------------

    def save(self, path):
        write_off(self, path)


def write_off(mesh, path):
    """OFF file plus a sidecar CSV <path>.lengths.csv of per-edge metric lengths."""
    path = str(path)
    with open(path, "w") as fh:
        fh.write("OFF\n")
        fh.write(f"{mesh.n_vertices} {mesh.n_faces} 0\n")
        for v in mesh.vertices:
            fh.write(f"{float(v[0])!r} {float(v[1])!r} {float(v[2])!r}\n")
        for f in mesh.faces:
            fh.write(f"3 {f[0]} {f[1]} {f[2]}\n")
    if mesh.overrides:
        with open(path + ".lengths.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["i", "j", "length"])
            for (i, j), l in sorted(mesh.overrides.items()):
                w.writerow([int(i), int(j), repr(float(l))])


def read_off(path, with_lengths=True):
    """Read an OFF file (+ sidecar CSV of edge lengths when present)."""
    path = str(path)
    with open(path) as fh:
        tokens = []
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                tokens.extend(line.split())
    if tokens[0] != "OFF":
        raise ValueError("not an OFF file")
    nv, nf = int(tokens[1]), int(tokens[2])
    k = 4
    verts = np.array(tokens[k:k + 3 * nv], dtype=float).reshape(nv, 3)
    k += 3 * nv
    faces = []
    for _ in range(nf):
        cnt = int(tokens[k])
        if cnt != 3:
            raise ValueError("only triangle faces supported")
        faces.append([int(tokens[k + 1]), int(tokens[k + 2]), int(tokens[k + 3])])
        k += 4
    overrides = None
    if with_lengths:
        import os
        side = path + ".lengths.csv"
        if os.path.exists(side):
            overrides = {}
            with open(side, newline="") as fh:
                for row in csv.DictReader(fh):
                    overrides[(int(row["i"]), int(row["j"]))] = float(row["length"])
    return TriMesh(verts, np.array(faces), edge_lengths=overrides)


# --- constructions ---------------------------------------------------------

def icosphere(subdivisions=0, radius=1.0):
    """Icosahedron subdivided `subdivisions` times, projected to the sphere.

    10 * 4^s + 2 vertices; the 12 original vertices keep valence 5.
    """
    if subdivisions < 0:
        raise ValueError("subdivisions must be >= 0")
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    verts = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=float)
    verts /= np.linalg.norm(verts[0])
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [tuple(v) for v in verts]
    for _ in range(subdivisions):
        cache = {}
        verts_arr = [np.array(v) for v in verts]

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts_arr[i] + verts_arr[j]
                m /= np.linalg.norm(m)
                verts_arr.append(m)
                cache[key] = len(verts_arr) - 1
            return cache[key]

        new_faces = []
        for (a, b, c) in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
        verts = [tuple(v) for v in verts_arr]
    v = np.array(verts) * radius
    return TriMesh(v, np.array(faces, dtype=np.int64))


def flat_torus(m, k, l1=2 * math.pi, l2=2 * math.pi):
    """Flat torus of side lengths (l1, l2) on an m x k grid with wraparound.

    The metric lives entirely in edge-length overrides (grid steps and the
    right-angle diagonal); vertex coordinates are a planar layout only.
    """
    if m < 3 or k < 3:
        raise ValueError("need at least a 3 x 3 grid")
    hx, hy = l1 / m, l2 / k
    idx = lambda i, j: (i % m) * k + (j % k)
    verts = np.zeros((m * k, 3))
    for i in range(m):
        for j in range(k):
            verts[idx(i, j)] = (i * hx, j * hy, 0.0)
    faces = []
    lengths = {}

    def setlen(a, b, l):
        lengths[(min(a, b), max(a, b))] = l

    diag = math.hypot(hx, hy)
    for i in range(m):
        for j in range(k):
            a = idx(i, j)
            b = idx(i + 1, j)
            c = idx(i + 1, j + 1)
            d = idx(i, j + 1)
            faces.append((a, b, c))
            faces.append((a, c, d))
            setlen(a, b, hx)
            setlen(d, c, hx)
            setlen(a, d, hy)
            setlen(b, c, hy)
            setlen(a, c, diag)
    return TriMesh(verts, np.array(faces, dtype=np.int64), edge_lengths=lengths)
