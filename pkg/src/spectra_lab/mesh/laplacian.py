"""Cotangent stiffness and lumped mass operators from metric edge lengths."""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix, diags, spmatrix

__all__ = ["OperatorPair", "cotan_laplacian", "rayleigh"]


@dataclass
class OperatorPair:
    stiffness: spmatrix          # S, symmetric PSD, row sums 0
    mass: np.ndarray             # lumped (diagonal) mass as a vector
    mass_matrix: spmatrix = None

    def __post_init__(self):
        if self.mass_matrix is None:
            self.mass_matrix = diags(self.mass).tocsr()


def cotan_laplacian(mesh):
    """Assemble (stiffness, lumped mass) from intrinsic edge lengths.

    Angles come from the law of cosines on the per-face length triple, so the
    operator is correct for metric (non-embedded) meshes too.  Mass is the
    barycentric lump: one third of the incident face areas per vertex.
    """
    l = mesh.face_edge_lengths()       # (F, 3), l[:, k] opposite local vertex k
    areas = mesh.face_areas()
    f = mesh.faces
    n = mesh.n_vertices

    # cos of angle at local vertex k via law of cosines
    cots = np.empty_like(l)
    for k in range(3):
        a = l[:, k]                    # opposite side
        b = l[:, (k + 1) % 3]
        c = l[:, (k + 2) % 3]
        cosang = (b**2 + c**2 - a**2) / (2.0 * b * c)
        # 4 * area = 2 b c sin(angle)
        sinang = 2.0 * areas / (b * c)
        cots[:, k] = cosang / sinang
    if not np.all(np.isfinite(cots)):
        bad = int(np.argwhere(~np.isfinite(cots))[0, 0])
        raise ValueError(f"degenerate angle in face {bad}")

    rows, cols, vals = [], [], []
    for k in range(3):
        i = f[:, (k + 1) % 3]
        j = f[:, (k + 2) % 3]
        w = 0.5 * cots[:, k]
        rows += [i, j, i, j]
        cols += [j, i, i, j]
        vals += [-w, -w, w, w]
    s = csr_matrix((np.concatenate(vals),
                    (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    s.sum_duplicates()

    mass = np.zeros(n)
    third = areas / 3.0
    for k in range(3):
        np.add.at(mass, f[:, k], third)
    if np.any(mass <= 0):
        raise ValueError("vertex with non-positive lumped mass")
    return OperatorPair(stiffness=s, mass=mass)


def rayleigh(obj, func):
    """Rayleigh quotient f^T S f / f^T M f; obj is a TriMesh or OperatorPair."""
    ops = obj if isinstance(obj, OperatorPair) else cotan_laplacian(obj)
    func = np.asarray(func, dtype=float)
    num = float(func @ (ops.stiffness @ func))
    den = float((func * ops.mass) @ func)
    if den <= 0:
        raise ValueError("function has zero mass norm")
    return num / den
