"""Brute-force isoperimetric (Cheeger) constant on small meshes."""

import numpy as np

from .laplacian import cotan_laplacian

__all__ = ["brute_cheeger"]


def brute_cheeger(mesh, max_vertices=20):
    """Exact discrete Cheeger constant by enumerating all vertex subsets.

    h = min over nonempty proper S of  len(cut edges) / min(vol S, vol S^c),
    with edge lengths as cut weights and lumped vertex areas as volumes.
    Exponential in the vertex count, hence the hard cap.
    """
    n = mesh.n_vertices
    if n > max_vertices:
        raise ValueError(f"brute-force enumeration capped at {max_vertices} vertices")
    vol = cotan_laplacian(mesh).mass
    total = vol.sum()
    lengths = mesh.edge_lengths_arr
    i, j = mesh.edges[:, 0], mesh.edges[:, 1]

    # bit k of each subset id says whether vertex k is inside
    ids = np.arange(1, 2 ** n - 1, dtype=np.uint64)
    inside = (ids[:, None] >> np.arange(n, dtype=np.uint64)) & 1  # (2^n-2, n)
    vols = inside @ vol
    cut = (inside[:, i] != inside[:, j]) @ lengths
    ratios = cut / np.minimum(vols, total - vols)
    k = int(np.argmin(ratios))
    subset = np.nonzero(inside[k])[0]
    return {"h": float(ratios[k]), "subset": subset,
            "cut_length": float(cut[k]),
            "volume": float(min(vols[k], total - vols[k]))}
