"""Simplicial maps between meshes and the discrete minimax machinery.

A SimplicialMap sends each source vertex to a point of the target given by a
face index and barycentric coordinates.  Pullback is barycentric
interpolation; the minimax check extracts worst-case L2 loss (delta) and
energy gain (epsilon) over the pulled-back low-eigenspace span and asserts
the resulting eigenvalue envelope, which is a rigorous discrete consequence
of the minimax principle whenever delta < 1.
"""

import math
from dataclasses import dataclass

import numpy as np

from .eigs import smallest_eigs
from .laplacian import cotan_laplacian

__all__ = ["SimplicialMap", "identity_map", "pullback", "map_statistics",
           "minimax_check", "gh_distortion"]


@dataclass
class SimplicialMap:
    source: object                 # TriMesh
    target: object                 # TriMesh
    face_index: np.ndarray         # (Vs,) target face per source vertex
    barycentric: np.ndarray        # (Vs, 3), rows sum to 1, entries >= 0

    def __post_init__(self):
        self.face_index = np.asarray(self.face_index, dtype=np.int64)
        self.barycentric = np.asarray(self.barycentric, dtype=float)
        vs = self.source.n_vertices
        if self.face_index.shape != (vs,) or self.barycentric.shape != (vs, 3):
            raise ValueError("map tables must cover every source vertex")
        if self.face_index.min() < 0 or self.face_index.max() >= self.target.n_faces:
            raise ValueError("face index out of range")
        if np.any(self.barycentric < -1e-12) or \
                np.abs(self.barycentric.sum(axis=1) - 1.0).max() > 1e-9:
            raise ValueError("barycentric coordinates must be a convex combination")

    def image_points(self):
        """(Vs, 3) embedded coordinates of vertex images."""
        tri = self.target.vertices[self.target.faces[self.face_index]]
        return (tri * self.barycentric[:, :, None]).sum(axis=1)

    def dominant_vertex(self):
        """Target vertex with the largest barycentric weight, per source vertex."""
        k = np.argmax(self.barycentric, axis=1)
        return self.target.faces[self.face_index, k]


def identity_map(mesh):
    """Identity as a SimplicialMap (any incident face, corner coordinates).

    Also the canonical map between two meshes sharing connectivity (e.g. the
    same torus with a perturbed metric)."""
    vf = mesh.vertex_faces()
    faces = np.empty(mesh.n_vertices, dtype=np.int64)
    bary = np.zeros((mesh.n_vertices, 3))
    for v in range(mesh.n_vertices):
        if not vf[v]:
            raise ValueError(f"isolated vertex {v}")
        f = vf[v][0]
        faces[v] = f
        bary[v, list(mesh.faces[f]).index(v)] = 1.0
    return faces, bary


def pullback(smap, values_on_target):
    """phi(u) = u o F by barycentric interpolation; maps constants to constants."""
    values_on_target = np.asarray(values_on_target, dtype=float)
    tri_vals = values_on_target[smap.target.faces[smap.face_index]]
    return (tri_vals * smap.barycentric).sum(axis=1)


def _triangle_chart(l0, l1, l2):
    """Planar coordinates of a triangle with edge lengths (v0v1, v1v2, v2v0)."""
    x = (l0**2 + l2**2 - l1**2) / (2.0 * l0)
    h2 = l2**2 - x**2
    if h2 <= 0:
        raise ValueError("degenerate triangle in chart")
    return np.array([[0.0, 0.0], [l0, 0.0], [x, math.sqrt(h2)]])


def map_statistics(smap, eta):
    """Per-face differential data of a simplicial map, tested against eta.

    For each source face the (piecewise affine) differential is computed in an
    intrinsic 2-d chart of the face; the image triangle uses the intrinsic
    chart of the common target face when all three vertex images share one,
    and embedded coordinates otherwise.  Reports energy density e = tr(g),
    Jacobian |det|^(1/2) of the pulled-back metric, the area fraction where
    |Jac| < 1 - sqrt(eta), and whether the pointwise hypotheses
    |Jac| <= 1 + eta and e <= n (1 + eta)^(2/n) (n = 2) hold everywhere.
    """
    if eta <= 0:
        raise ValueError("eta must be > 0")
    src = smap.source
    l = src.face_edge_lengths()          # opposite-vertex convention
    areas = src.face_areas()
    img = smap.image_points()
    tfl = smap.target.face_edge_lengths()
    energy = np.empty(src.n_faces)
    jac = np.empty(src.n_faces)
    for k, f in enumerate(src.faces):
        # chart of the source triangle from its metric lengths
        l12, l20, l01 = l[k, 0], l[k, 1], l[k, 2]
        p = _triangle_chart(l01, l12, l20)
        fi = smap.face_index[f]
        if fi[0] == fi[1] == fi[2]:
            # common target face: use its intrinsic chart (metric-aware)
            tl = tfl[fi[0]]
            q3 = _triangle_chart(tl[2], tl[0], tl[1])
            q = (q3[None, :, :] * smap.barycentric[f][:, :, None]).sum(axis=1)
        else:
            q = img[f]
        pm = np.stack([p[1] - p[0], p[2] - p[0]], axis=1)       # 2x2
        qm = np.stack([q[1] - q[0], q[2] - q[0]], axis=1)       # dx2
        j = qm @ np.linalg.inv(pm)
        g = j.T @ j
        energy[k] = float(np.trace(g))
        jac[k] = math.sqrt(max(0.0, float(np.linalg.det(g))))
    se = math.sqrt(eta)
    low = jac < 1.0 - se
    total = areas.sum()
    frac_low = float(areas[low].sum() / total)
    return {
        "eta": eta,
        "energy": energy,
        "jacobian": jac,
        "low_jacobian_fraction": frac_low,
        "jacobian_hypothesis": bool(np.all(jac <= 1.0 + eta + 1e-12)),
        "energy_hypothesis": bool(np.all(energy <= 2.0 * (1.0 + eta) + 1e-12)),
        "volume_hypothesis": bool((1.0 - eta) * src.area()
                                  <= smap.target.area() + 1e-12),
        "low_jacobian_bound": 2.0 * se,
    }


def minimax_check(smap, i_max, tol=1e-9, seed=0, slack=1e-9):
    """Measure (delta, epsilon) of a map on the first i_max+1 eigenfunctions
    and verify lambda_i(Y) <= (1+epsilon)/(1-delta) lambda_i(X) for i <= i_max.

    delta: worst relative L2 loss of the pulled-back span; epsilon: worst
    relative energy gain against the target eigenvalues.  Both use
    volume-normalized norms.  Returns a report dict; 'feasible' is False when
    the pulled-back family degenerates (delta >= 1), in which case no bound is
    asserted.
    """
    y, x = smap.source, smap.target
    k = i_max + 1
    ops_y = cotan_laplacian(y)
    ops_x = cotan_laplacian(x)
    sx = smallest_eigs(ops_x, k, tol=tol, seed=seed)
    sy = smallest_eigs(ops_y, k, tol=tol, seed=seed)
    vol_x, vol_y = x.area(), y.area()
    phi = np.stack([pullback(smap, sx.eigenvectors[:, i]) for i in range(k)], axis=1)
    gram = (phi * ops_y.mass[:, None]).T @ phi          # phi^T M_Y phi
    stiff = phi.T @ (ops_y.stiffness @ phi)
    gram = 0.5 * (gram + gram.T)
    stiff = 0.5 * (stiff + stiff.T)
    gev = np.linalg.eigvalsh(gram)
    delta = 1.0 - (vol_x / vol_y) * float(gev[0])
    lam_x = np.maximum(sx.eigenvalues, 0.0)
    report = {
        "delta": delta,
        "lambda_x": lam_x,
        "lambda_y": sy.eigenvalues,
        "feasible": delta < 1.0,
    }
    if delta >= 1.0:
        report["epsilon"] = math.inf
        report["bound_ok"] = None
        return report
    # energy comparison on the non-constant block (the constant pulls back to a
    # constant; its stiffness row is zero up to assembly roundoff)
    lam_pos = lam_x[1:]
    block = stiff[1:, 1:]
    scale = 1.0 / np.sqrt(np.outer(lam_pos, lam_pos))
    ratios = np.linalg.eigvalsh(block * scale)
    epsilon = (vol_x / vol_y) * float(ratios.max()) - 1.0
    env = (1.0 + epsilon) / (1.0 - delta)
    bound_ok = bool(np.all(sy.eigenvalues[:k] <= env * lam_x[:k]
                           + slack * np.maximum(1.0, lam_x[:k])))
    report.update({"epsilon": epsilon, "envelope": env, "bound_ok": bound_ok})
    return report


def gh_distortion(smap, max_exact=2000, n_pairs=100000, seed=0):
    """Worst metric distortion |d_Y(a,b) - d_X(F(a),F(b))| over vertex pairs.

    Graph-geodesic distances on metric edge lengths; images are snapped to the
    dominant barycentric vertex (exact for vertex-to-vertex maps).  All pairs
    up to max_exact source vertices, a seeded random sample beyond that.
    """
    y, x = smap.source, smap.target
    img = smap.dominant_vertex()
    n = y.n_vertices
    if n <= max_exact:
        dy = y.geodesic_distances()
        dx = x.geodesic_distances(sources=np.unique(img))
        col = {v: i for i, v in enumerate(np.unique(img))}
        rows = np.array([col[v] for v in img])
        dxi = dx[rows][:, img]
        return float(np.abs(dy - dxi).max())
    rng = np.random.default_rng(seed)
    m = int(math.isqrt(n_pairs)) + 1
    src = rng.choice(n, size=min(m, n), replace=False)
    dsts = rng.choice(n, size=min(m, n), replace=False)
    dy = y.geodesic_distances(sources=src)[:, dsts]
    srcs_img = img[src]
    uniq = np.unique(srcs_img)
    dx = x.geodesic_distances(sources=uniq)
    col = {v: i for i, v in enumerate(uniq)}
    rows = np.array([col[v] for v in srcs_img])
    dxi = dx[rows][:, img[dsts]]
    return float(np.abs(dy - dxi).max())
