"""Surgery constructions: pinched-neck spheres and tube gluings.

The thin-neck metric (interpolated fiber circle x a compressed radial
direction) is not embeddable, so it is realized through per-edge metric
lengths.  Each ring pair is developed as a planar trapezoid, which keeps
every triangle inequality valid for any azimuthal count; faithfulness of the
radial compression then dictates the azimuthal count L (the discrete meridian
exceeds its nominal length by ~ sum (dc)^2 / (8 L^2 m)), and a mesh that
cannot meet the representation tolerance raises with the required count.
Count transitions (boundary loop -> L -> sphere-side count) use "zipper"
rings that change only the vertex count, never the circumference.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .trimesh import TriMesh
from .laplacian import OperatorPair, cotan_laplacian
from .eigs import smallest_eigs, dense_eigs_oracle
from .maps import SimplicialMap

__all__ = ["MushroomParams", "mushroom", "mushroom_lambda1_sweep",
           "cap_complement_dirichlet", "GluingParams", "tube_gluing"]


# ---------------------------------------------------------------- utilities

def _smoothstep(s):
    s = np.clip(s, 0.0, 1.0)
    return s * s * (3.0 - 2.0 * s)


class _Ring:
    def __init__(self, indices, azimuths, circumference):
        self.indices = np.asarray(indices, dtype=np.int64)
        self.azimuths = np.asarray(azimuths, dtype=float)
        self.circumference = float(circumference)


class _Builder:
    """Incremental mesh builder with per-edge length overrides."""

    def __init__(self):
        self.verts = []
        self.faces = []
        self.lengths = {}

    def add_vertex(self, xyz):
        self.verts.append(tuple(float(c) for c in xyz))
        return len(self.verts) - 1

    def add_face(self, a, b, c):
        self.faces.append((int(a), int(b), int(c)))

    def set_len(self, a, b, l):
        if not l > 0:
            raise ValueError("non-positive edge length in construction")
        self.lengths[(min(a, b), max(a, b))] = float(l)

    def uniform_ring(self, count, circumference, center, axis, e1, e2, radius=None):
        """Add `count` vertices on a visual circle; returns a _Ring."""
        r_vis = circumference / (2.0 * math.pi) if radius is None else radius
        idx = []
        az = np.arange(count) / count
        for a in az:
            phi = 2.0 * math.pi * a
            idx.append(self.add_vertex(center + r_vis * (math.cos(phi) * e1
                                                         + math.sin(phi) * e2)))
        return _Ring(idx, az, circumference)

    def strip(self, ring_a, ring_b, m):
        """Connect two aligned rings of equal count by a trapezoid strip."""
        if len(ring_a.indices) != len(ring_b.indices):
            raise ValueError("strip requires equal ring counts")
        n = len(ring_a.indices)
        ca, cb = ring_a.circumference, ring_b.circumference
        lateral = math.hypot(m, abs(ca - cb) / (2.0 * n))
        diag = math.hypot(m, (ca + cb) / (2.0 * n))
        for i in range(n):
            a, a2 = ring_a.indices[i], ring_a.indices[(i + 1) % n]
            b, b2 = ring_b.indices[i], ring_b.indices[(i + 1) % n]
            self.add_face(a, a2, b2)
            self.add_face(a, b2, b)
            self.set_len(a, a2, ca / n)
            self.set_len(b, b2, cb / n)
            self.set_len(a, b, lateral)
            self.set_len(a2, b2, lateral)
            self.set_len(a, b2, diag)

    def zipper(self, ring_a, ring_b, m, fixed_a_edges=False):
        """Triangulate between two rings of equal circumference but different
        vertex counts/azimuths.  fixed_a_edges: do not override ring A's own
        edges (used when ring A is a pre-existing boundary loop)."""
        ca, cb = ring_a.circumference, ring_b.circumference
        if abs(ca - cb) > 1e-9 * max(ca, cb):
            raise ValueError("zipper rings must share circumference")
        cbar = 0.5 * (ca + cb)
        na, nb = len(ring_a.indices), len(ring_b.indices)

        def cross(u_az, v_az):
            d = abs(u_az - v_az) % 1.0
            d = min(d, 1.0 - d)
            return math.hypot(m, d * cbar)

        # rotate ring B start next to ring A start
        shift = int(np.argmin(np.abs((ring_b.azimuths - ring_a.azimuths[0]) % 1.0)))
        b_idx = np.roll(ring_b.indices, -shift)
        b_az = np.roll(ring_b.azimuths, -shift)
        b_az = b_az + np.where(b_az < b_az[0] - 1e-12, 1.0, 0.0)  # monotone walk
        a_az = ring_a.azimuths + np.where(
            ring_a.azimuths < ring_a.azimuths[0] - 1e-12, 1.0, 0.0)
        ia = ib = 0
        while ia < na or ib < nb:
            next_a = a_az[ia + 1] if ia + 1 < na else a_az[0] + 1.0
            next_b = b_az[ib + 1] if ib + 1 < nb else b_az[0] + 1.0
            va = ring_a.indices[ia % na]
            vb = b_idx[ib % nb]
            if (next_a <= next_b and ia < na) or ib >= nb:
                va2 = ring_a.indices[(ia + 1) % na]
                self.add_face(va, va2, vb)
                if not fixed_a_edges:
                    self.set_len(va, va2, (min(next_a, a_az[0] + 1.0)
                                           - a_az[ia]) * ca)
                self.set_len(va, vb, cross(a_az[ia % na] % 1.0, b_az[ib % nb] % 1.0))
                self.set_len(va2, vb, cross(a_az[(ia + 1) % na] % 1.0,
                                            b_az[ib % nb] % 1.0))
                ia += 1
            else:
                vb2 = b_idx[(ib + 1) % nb]
                self.add_face(va, vb2, vb)
                self.set_len(vb, vb2, (min(next_b, b_az[0] + 1.0) - b_az[ib]) * cb)
                self.set_len(va, vb, cross(a_az[ia % na] % 1.0, b_az[ib % nb] % 1.0))
                self.set_len(va, vb2, cross(a_az[ia % na] % 1.0,
                                            b_az[(ib + 1) % nb] % 1.0))
                ib += 1

    def pole(self, ring, m, position):
        """Close a ring with a fan to an apex at meridian distance m."""
        n = len(ring.indices)
        if ring.circumference / n >= 2.0 * m:
            raise ValueError("pole fan needs circumference/count < 2 m")
        apex = self.add_vertex(position)
        for i in range(n):
            a, b = ring.indices[i], ring.indices[(i + 1) % n]
            self.add_face(a, b, apex)
            self.set_len(a, b, ring.circumference / n)
            self.set_len(a, apex, m)
        self.set_len(ring.indices[-1], apex, m)
        return apex

    def build(self, validate=True):
        return TriMesh(np.array(self.verts), np.array(self.faces, dtype=np.int64),
                       edge_lengths=self.lengths, validate=validate)


def _boundary_loop(mesh, removed_faces, center):
    """Ordered vertex loop around `center` after removing its star."""
    ring_edges = {}
    for k in removed_faces:
        f = [v for v in mesh.faces[k] if v != center]
        if len(f) != 2:
            raise ValueError("star face without the center vertex")
        a, b = f
        ring_edges.setdefault(a, []).append(b)
        ring_edges.setdefault(b, []).append(a)
    start = next(iter(ring_edges))
    loop = [start]
    prev = None
    while True:
        nbrs = ring_edges[loop[-1]]
        nxt = nbrs[0] if nbrs[0] != prev else nbrs[1]
        if nxt == start:
            break
        prev = loop[-1]
        loop.append(nxt)
        if len(loop) > len(ring_edges) + 1:
            raise ValueError("boundary loop failed to close")
    return loop


def _edge_length_of(mesh, a, b):
    key = (min(a, b), max(a, b))
    if key in mesh.overrides:
        return mesh.overrides[key]
    return float(np.linalg.norm(mesh.vertices[a] - mesh.vertices[b]))


def _frame(axis):
    axis = axis / np.linalg.norm(axis)
    h = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(axis, h)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    return axis, e1, e2


def _required_azimuthal(c_grid, m_grid, budget):
    """Smallest L with sum (dc/(2L))^2 / (2 m) <= budget."""
    s = sum((dc ** 2) / (2.0 * m) for dc, m in zip(np.abs(np.diff(c_grid)), m_grid))
    if s == 0.0:
        return 4
    return max(4, int(math.ceil(math.sqrt(s / (4.0 * budget)))))


def _excise_cap(mesh, center, rcut=None):
    """Copy a mesh without a geodesic cap around `center`.

    rcut=None removes only the star of the center vertex; otherwise every
    vertex within graph-geodesic distance rcut goes, together with all faces
    touching a removed vertex.  Returns (builder, old->new map, ordered
    boundary loop in old indices, removed area).
    """
    if rcut is None:
        removed = {int(center)}
    else:
        dist = mesh.geodesic_distances(sources=np.array([center]))[0]
        removed = set(np.nonzero(dist < rcut)[0].tolist()) | {int(center)}
    kept_faces = [k for k in range(mesh.n_faces)
                  if not (set(map(int, mesh.faces[k])) & removed)]
    if len(kept_faces) == mesh.n_faces or not kept_faces:
        raise ValueError("cap excision must remove some faces but not all")
    areas = mesh.face_areas()
    removed_area = float(areas.sum() - areas[kept_faces].sum())

    # boundary loop: edges used exactly once by the kept faces
    edge_use = {}
    for k in kept_faces:
        f = mesh.faces[k]
        for a, c in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
            key = (min(a, c), max(a, c))
            edge_use[key] = edge_use.get(key, 0) + 1
    nbrs = {}
    for (a, c), cnt in edge_use.items():
        if cnt == 1:
            nbrs.setdefault(a, []).append(c)
            nbrs.setdefault(c, []).append(a)
    if any(len(v) != 2 for v in nbrs.values()):
        raise ValueError("cap boundary is not a simple loop; adjust the radius")
    start = next(iter(nbrs))
    loop = [start]
    prev = None
    while True:
        a, c = nbrs[loop[-1]]
        nxt = a if a != prev else c
        if nxt == start:
            break
        prev = loop[-1]
        loop.append(nxt)
    if len(loop) != len(nbrs):
        raise ValueError("cap boundary splits into several loops; adjust the radius")

    b = _Builder()
    old2new = {}
    kept_verts = sorted({int(v) for k in kept_faces for v in mesh.faces[k]})
    for v in kept_verts:
        old2new[v] = b.add_vertex(mesh.vertices[v])
    for k in kept_faces:
        f = mesh.faces[k]
        b.add_face(old2new[f[0]], old2new[f[1]], old2new[f[2]])
    for (i, j), l in mesh.overrides.items():
        if (min(i, j), max(i, j)) in edge_use:
            b.set_len(old2new[i], old2new[j], l)
    return b, old2new, loop, removed_area


def _loop_ring(mesh, b, old2new, loop):
    """_Ring for a pre-existing boundary loop (azimuths by cumulative length)."""
    seglens = [_edge_length_of(mesh, loop[i], loop[(i + 1) % len(loop)])
               for i in range(len(loop))]
    c0 = float(sum(seglens))
    az = np.concatenate([[0.0], np.cumsum(seglens[:-1])]) / c0
    return _Ring([old2new[v] for v in loop], az, c0), c0


def _sphere_theta_grid(theta0, n_fine=20, step_coarse=0.16):
    """Polar grid from theta0 to pi: geometric near the small hole, uniform after."""
    knee = min(1.0, max(2.0 * theta0, 0.5))
    fine = list(np.geomspace(theta0, knee, n_fine)) if theta0 < knee else [theta0]
    coarse = list(np.arange(fine[-1] + step_coarse, math.pi - 0.5 * step_coarse,
                            step_coarse))
    return np.array(fine + coarse + [math.pi])


# ---------------------------------------------------------------- mushroom

@dataclass
class MushroomParams:
    delta: float
    center: int = 0
    tube_rings: int = 28
    sphere_azimuthal: int = 24
    rep_tolerance: float = 0.25
    azimuthal_cap: int = 20000
    epsilon: float = None      # derived from the excised star when omitted
    cap_volume_fraction: float = None   # informational override for f(eps)

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")


def _neck_profile(c0, eps, f, theta0, radius):
    """Circumference profile c(r) of the neck, r in [0, 1].

    Interpolates log-circumference between the shrinking geodesic-circle
    family of the base cap and the boundary circle family of the small
    sphere's excised cap.  Blending the logarithm keeps d(log c)/dr bounded
    through the collapse, so the ring grid never degenerates into steps whose
    meridian is negligible against the circumference drop.
    """
    s_eps = math.sin(0.5 * eps / radius)

    def c(r):
        r = np.asarray(r, dtype=float)
        lam = _smoothstep(3.0 * (r - 1.0 / 3.0))
        c_geo = c0 * np.sin(0.5 * eps * (1.0 - r) / radius) / s_eps
        c_sph = 2.0 * math.pi * f * np.sin(r * theta0)
        floor = 1e-12 * c0
        return np.exp((1.0 - lam) * np.log(np.maximum(c_geo, floor))
                      + lam * np.log(np.maximum(c_sph, floor)))

    return c


def _neck_grid(cfun, n_rings, delta):
    """Ring positions for the neck; returns (r, c, m).

    Two competing costs: the steep part of the profile (large |c'|) needs
    azimuthal resolution proportional to |c'| per ring, so it gets only a few
    rings; the thin tail dominates the resistance integral dm/c, so most rings
    go there, at equal resistance increments (geometric in c).
    """
    rf = np.linspace(0.0, 1.0, 8001)
    cf = cfun(rf)
    arc = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(cf)))])
    rho = np.concatenate([[0.0], np.cumsum(np.diff(rf) / cf[1:])])
    lc = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(np.log(cf))))])
    n_steep = max(4, n_rings // 5)
    n_log = max(6, n_rings // 3)
    n_res = max(8, n_rings - n_steep - n_log)
    knots_a = np.interp(np.linspace(0, arc[-1], n_steep + 1), arc, rf)
    knots_b = np.interp(np.linspace(0, rho[-1], n_res + 1), rho, rf)
    knots_c = np.interp(np.linspace(0, lc[-1], n_log + 1), lc, rf)
    r = np.unique(np.concatenate([knots_a, knots_b, knots_c, [0.0, 1.0]]))
    m = delta * np.diff(r)
    keep = m > 1e-16 * delta
    r = np.concatenate([[r[0]], r[1:][keep]])
    c = cfun(r)
    m = delta * np.diff(r)
    return r, c, m


def mushroom(base, params: MushroomParams):
    """Replace the star of a base-sphere vertex by a thin neck and a small sphere.

    Returns (mesh, collapse_map, info).  The collapse map is the identity off
    the excision and sends every neck/sphere vertex to the excised center, so
    it is surjective on vertices.  info records the derived scales
    (eps, f, neck azimuthal count, areas) and the volume comparison.
    """
    center = params.center
    radius = float(np.linalg.norm(base.vertices, axis=1).mean())
    rcut = None if params.epsilon is None else 0.5 * params.epsilon
    b, old2new, loop, v_eps = _excise_cap(base, center, rcut)
    ring0, c0 = _loop_ring(base, b, old2new, loop)

    # geodesic radius of the excised cap -> eps
    cdir = base.vertices[center] / np.linalg.norm(base.vertices[center])
    arcs = [radius * math.acos(np.clip(np.dot(
        base.vertices[v] / np.linalg.norm(base.vertices[v]), cdir), -1, 1))
        for v in loop]
    eps = params.epsilon if params.epsilon is not None else 2.0 * float(np.mean(arcs))
    delta = params.delta
    if not delta < 0.25 * eps:
        raise ValueError(f"delta must be < eps/4 = {0.25 * eps:.4g}")
    f = min(math.sqrt(v_eps / (8.0 * math.pi)), eps / (2.0 * math.pi))
    theta0 = math.asin(delta)

    cfun = _neck_profile(c0, eps, f, theta0, radius)
    r, c, m = _neck_grid(cfun, params.tube_rings, delta)
    budget = max(0.05, params.rep_tolerance - 0.1) * delta
    # per-strip azimuthal count from the local faithfulness requirement; the
    # meridian-excess budget is split to minimize total vertex count
    # (b_j ~ (dc_j^2/m_j)^(1/3) by Lagrange), then quantized to powers of two
    # so count transitions stay few
    dc = np.abs(np.diff(c))
    w = np.where(dc > 0, (dc ** 2 / m) ** (1.0 / 3.0), 0.0)
    b_j = budget * w / max(w.sum(), 1e-300)
    l_req = np.where(dc > 0, dc / (2.0 * np.sqrt(2.0 * m * np.maximum(b_j, 1e-300))),
                     1.0)
    n_s = params.sphere_azimuthal
    counts = (2 ** np.ceil(np.log2(np.maximum(l_req, 1.0)))).astype(int)
    # cap the count so azimuthal edges never drop far below the local
    # meridian: slivers with near-pi angles give the cotan operator spurious
    # negative weights and wreck the eigensolve
    cbar = 0.5 * (c[:-1] + c[1:])
    aspect = 2 ** np.ceil(np.log2(np.maximum(cbar / np.maximum(m, 1e-300), 1.0)))
    counts = np.minimum(counts, aspect.astype(counts.dtype))
    counts = np.maximum(counts, n_s)
    excess = float(np.sum(np.hypot(m, dc / (2.0 * counts)) - m))
    if counts.max() > params.azimuthal_cap or excess > budget * (1.0 + 1e-9):
        raise ValueError(
            f"resolution too coarse to represent delta={delta:g}: required "
            f"azimuthal count {counts.max()} (cap {params.azimuthal_cap}), "
            f"meridian excess {excess:.3g} (budget {budget:.3g})")

    axis, e1, e2 = _frame(cdir)
    ring_center = base.vertices[center] * 1.0
    step_vis = 0.3 * eps / (len(c) + 1)
    m_zip = 0.01 * delta

    # zipper: boundary loop -> uniform ring at the same circumference
    pos = ring_center + axis * step_vis
    ring = b.uniform_ring(int(counts[0]), c[0], pos, axis, e1, e2)
    b.zipper(ring0, ring, 0.05 * delta, fixed_a_edges=True)
    # neck strips, re-zippering wherever the count level changes
    for j in range(len(m)):
        k = int(counts[j])
        if len(ring.indices) != k:
            mid = b.uniform_ring(k, ring.circumference, pos, axis, e1, e2)
            b.zipper(ring, mid, m_zip)
            ring = mid
        pos = pos + axis * step_vis
        nxt = b.uniform_ring(k, c[j + 1], pos, axis, e1, e2)
        b.strip(ring, nxt, m[j])
        ring = nxt
    n_az = int(counts.max())

    # small sphere (minus its delta-cap), azimuthally coarser
    thetas = _sphere_theta_grid(theta0)
    n_s = params.sphere_azimuthal
    sph_center = pos + axis * (f + step_vis)

    def sph_pos(th):
        return sph_center - axis * (f * math.cos(th))

    def sph_ring(th, count):
        return b.uniform_ring(count, 2.0 * math.pi * f * math.sin(th),
                              sph_pos(th), axis, e1, e2,
                              radius=f * math.sin(th))

    first = sph_ring(thetas[0], n_s)
    if len(ring.indices) != n_s:
        b.zipper(ring, first, 0.3 * f * (thetas[1] - thetas[0]))
    else:
        b.strip(ring, first, 0.3 * f * (thetas[1] - thetas[0]))
    ring = first
    for j in range(1, len(thetas) - 1):
        nxt = sph_ring(thetas[j], n_s)
        b.strip(ring, nxt, f * (thetas[j] - thetas[j - 1]))
        ring = nxt
    b.pole(ring, f * (thetas[-1] - thetas[-2]), sph_pos(math.pi))

    mesh = b.build()

    # collapse map: identity off the excision, everything new -> center corner
    vf = base.vertex_faces()
    star_face = vf[center][0]
    corner = list(base.faces[star_face]).index(center)
    vs = mesh.n_vertices
    face_index = np.full(vs, star_face, dtype=np.int64)
    bary = np.zeros((vs, 3))
    bary[:, corner] = 1.0
    for old, new in old2new.items():
        fidx = vf[old][0]
        face_index[new] = fidx
        bary[new] = 0.0
        bary[new, list(base.faces[fidx]).index(old)] = 1.0
    smap = SimplicialMap(source=mesh, target=base,
                         face_index=face_index, barycentric=bary)

    info = {
        "epsilon": eps, "delta": delta, "f": f, "cap_area": v_eps,
        "azimuthal": n_az, "rings": len(c),
        "area_base": base.area(), "area": mesh.area(),
        "volume_ok": mesh.area() < base.area(),
        "neck_length_nominal": delta,
        "neck_length_actual": float(np.sum(np.hypot(m, dc / (2.0 * counts)))),
    }
    return mesh, smap, info


def mushroom_lambda1_sweep(base, epsilon, deltas, params=None, tol=1e-7, seed=0):
    """lambda_1 of the pinched construction for a decreasing list of deltas.

    Returns a report with the measured lambda_1 sequence, consecutive-pair
    ratios, and the log-law predictions log(arcsin d2)/log(arcsin d1).
    """
    if list(deltas) != sorted(deltas, reverse=True):
        raise ValueError("deltas must be strictly decreasing")
    lam1 = []
    infos = []
    for d in deltas:
        p = MushroomParams(delta=d, epsilon=epsilon) if params is None else \
            MushroomParams(**{**params.__dict__, "delta": d, "epsilon": epsilon})
        mesh, _, info = mushroom(base, p)
        ops = cotan_laplacian(mesh)
        res = smallest_eigs(ops, 2, tol=tol, seed=seed)
        lam1.append(float(res.eigenvalues[1]))
        info["n_vertices"] = mesh.n_vertices
        infos.append(info)
    measured = [lam1[i] / lam1[i + 1] for i in range(len(lam1) - 1)]
    predicted = [math.log(math.asin(deltas[i + 1])) / math.log(math.asin(deltas[i]))
                 for i in range(len(deltas) - 1)]
    return {"deltas": list(deltas), "lambda1": lam1,
            "measured_ratios": measured, "predicted_ratios": predicted,
            "infos": infos}


def cap_complement_dirichlet(delta, azimuthal=24, seed=0, tol=1e-9):
    """First Dirichlet eigenvalue of the unit sphere minus a cap of radius
    arcsin(delta), by deleting the boundary ring's rows and columns."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    theta0 = math.asin(delta)
    thetas = _sphere_theta_grid(theta0)
    b = _Builder()
    axis, e1, e2 = _frame(np.array([0.0, 0.0, 1.0]))

    def ring_at(th):
        return b.uniform_ring(azimuthal, 2.0 * math.pi * math.sin(th),
                              axis * (-math.cos(th)), axis, e1, e2,
                              radius=math.sin(th))

    ring = ring_at(thetas[0])
    boundary = list(ring.indices)
    for j in range(1, len(thetas) - 1):
        nxt = ring_at(thetas[j])
        b.strip(ring, nxt, thetas[j] - thetas[j - 1])
        ring = nxt
    b.pole(ring, thetas[-1] - thetas[-2], axis * 1.0)
    mesh = b.build()
    ops = cotan_laplacian(mesh)
    keep = np.setdiff1d(np.arange(mesh.n_vertices), np.array(boundary))
    s_int = ops.stiffness[keep][:, keep].tocsr()
    m_int = ops.mass[keep]
    reduced = OperatorPair(stiffness=s_int, mass=m_int)
    if keep.size <= 400:
        lam = float(dense_eigs_oracle(reduced).eigenvalues[0])
    else:
        lam = float(smallest_eigs(reduced, 1, tol=tol, seed=seed).eigenvalues[0])
    return {"delta": delta, "lambda1_dirichlet": lam,
            "n_vertices": mesh.n_vertices, "n_interior": int(keep.size)}


# ---------------------------------------------------------------- gluing

@dataclass
class GluingParams:
    epsilon: float = None        # defaults to 4 x excised-ring radius
    center_base: int = 0
    center_attach: int = 0
    tube_rings: int = 12
    rep_tolerance: float = 0.25
    azimuthal_cap: int = 20000


def tube_gluing(base, attachment, params=None):
    """Glue a shrunken copy of `attachment` to `base` through a short tube.

    The attachment is scaled by alpha with
        alpha^2 = min(eps^2 / (16 diam(Z)^2), (V_rho / (2 Vol(Z)))^(2/n)),  n = 2,
    the tube width is
        l = min(eps / 4, V_rho / (2 integral of the fiber circumference)),
    and the fiber metric interpolates linearly between the two boundary-loop
    metrics.  Returns (mesh, collapse_map, info); the collapse map is the
    identity on the base part and sends tube + attachment to the excised
    center.
    """
    params = params or GluingParams()
    b, old2new, loop_x, v_rho = _excise_cap(base, params.center_base)
    ring_x, c_x = _loop_ring(base, b, old2new, loop_x)

    cdir = base.vertices[params.center_base]
    cdir = cdir / np.linalg.norm(cdir)
    radius = float(np.linalg.norm(base.vertices, axis=1).mean())
    arcs = [radius * math.acos(np.clip(np.dot(
        base.vertices[v] / np.linalg.norm(base.vertices[v]), cdir), -1, 1))
        for v in loop_x]
    rho = float(np.mean(arcs))
    eps = params.epsilon if params.epsilon is not None else 4.0 * rho
    vf_x = base.vertex_faces()

    diam_z = attachment.diameter()
    area_z = attachment.area()
    alpha = math.sqrt(min(eps**2 / (16.0 * diam_z**2), v_rho / (2.0 * area_z)))

    # scaled copy of the attachment, minus the star of its gluing vertex
    scaled = TriMesh(attachment.vertices * alpha, attachment.faces,
                     edge_lengths={k: l * alpha
                                   for k, l in attachment.overrides.items()})
    _, _, loop_z, _ = _excise_cap(scaled, params.center_attach)
    c_z = sum(_edge_length_of(scaled, loop_z[i], loop_z[(i + 1) % len(loop_z)])
              for i in range(len(loop_z)))

    def cfun(r):
        r = np.asarray(r, dtype=float)
        return np.sqrt((1.0 - r) * c_x**2 + r * c_z**2)

    rf = np.linspace(0.0, 1.0, 2001)
    integral_c = float(np.trapezoid(cfun(rf), rf))
    ell = min(0.25 * eps, v_rho / (2.0 * integral_c))

    n_r = params.tube_rings
    r = np.linspace(0.0, 1.0, n_r + 1)
    c = cfun(r)
    m = ell * np.diff(r)
    budget = max(0.05, params.rep_tolerance - 0.1) * ell
    n_az = _required_azimuthal(c, m, budget)
    n_az = max(n_az, len(loop_x), len(loop_z), 12)
    if n_az > params.azimuthal_cap:
        raise ValueError(f"resolution too coarse: required azimuthal count {n_az}")

    axis, e1, e2 = _frame(cdir)
    step_vis = ell / (n_r + 2)
    pos = base.vertices[params.center_base] + axis * step_vis
    ring = b.uniform_ring(n_az, c[0], pos, axis, e1, e2)
    b.zipper(ring_x, ring, 0.05 * ell, fixed_a_edges=True)
    for j in range(n_r):
        pos = pos + axis * step_vis
        nxt = b.uniform_ring(n_az, c[j + 1], pos, axis, e1, e2)
        b.strip(ring, nxt, m[j])
        ring = nxt

    # import the scaled attachment into the main builder
    offset = pos + axis * (alpha * radius + step_vis) - \
        scaled.vertices[params.center_attach]
    z_map = {}
    for v in range(scaled.n_vertices):
        if v == params.center_attach:
            continue
        z_map[v] = b.add_vertex(scaled.vertices[v] + offset)
    star_z = set(scaled.vertex_faces()[params.center_attach])
    for k in range(scaled.n_faces):
        if k in star_z:
            continue
        f = scaled.faces[k]
        b.add_face(z_map[f[0]], z_map[f[1]], z_map[f[2]])
    for (i, j) in map(tuple, scaled.edges):
        if i in z_map and j in z_map:
            b.set_len(z_map[i], z_map[j], _edge_length_of(scaled, i, j))
    # zipper tube end -> attachment boundary loop
    seglens = [_edge_length_of(scaled, loop_z[i], loop_z[(i + 1) % len(loop_z)])
               for i in range(len(loop_z))]
    az_z = np.concatenate([[0.0], np.cumsum(seglens[:-1])]) / c_z
    ring_z = _Ring([z_map[v] for v in loop_z], az_z, c_z)
    b.zipper(ring_z, ring, 0.05 * ell, fixed_a_edges=True)

    mesh = b.build()

    star_face = vf_x[params.center_base][0]
    corner = list(base.faces[star_face]).index(params.center_base)
    vs = mesh.n_vertices
    face_index = np.full(vs, star_face, dtype=np.int64)
    bary = np.zeros((vs, 3))
    bary[:, corner] = 1.0
    for old, new in old2new.items():
        fidx = vf_x[old][0]
        face_index[new] = fidx
        bary[new] = 0.0
        bary[new, list(base.faces[fidx]).index(old)] = 1.0
    smap = SimplicialMap(source=mesh, target=base,
                         face_index=face_index, barycentric=bary)

    info = {
        "epsilon": eps, "rho": rho, "alpha": alpha, "ell": ell,
        "cap_area": v_rho, "attachment_area_scaled": alpha**2 * area_z,
        "azimuthal": n_az, "area_base": base.area(), "area": mesh.area(),
        "volume_ok": mesh.area() < base.area(),
    }
    return mesh, smap, info
