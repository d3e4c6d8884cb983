"""Mesh topology, reference-element mappings, metric terms, and normals.

Supported meshes: 1-D lines, 2-D structured quadrilateral meshes (optionally
smoothly warped, with isoparametric cross-product metrics), 3-D Cartesian
boxes, and the 2-D forward-facing-step domain built from Cartesian blocks.

Element node arrays always carry three node axes, with extent 1 in unused
directions, so the operator code is dimension-agnostic. Contravariant
metric vectors Ja^d are stored with physical 3-components; in 1-D the
convention is Ja = (1, 0, 0) with J = dx/dxi.
"""

from dataclasses import dataclass, field

import numpy as np

from .basis import OperatorSet, operator_set

WALL_TAGS = ("wall_free_slip", "wall_no_slip")
BOUNDARY_TAGS = WALL_TAGS + ("inflow", "outflow")


def face_slice(axis: int, end: int):
    """Index tuple selecting the nodes of one element side (node axes only)."""
    sl = [slice(None)] * 3
    sl[axis] = -1 if end else 0
    return tuple(sl)


@dataclass
class FaceBlock:
    """Interior (or periodic) faces along one axis.

    The face normal points from elem_left (its high side) into elem_right
    (its low side); node orderings on both sides coincide for structured
    meshes.
    """

    axis: int
    elem_left: np.ndarray
    elem_right: np.ndarray
    nds: np.ndarray = None  # (nf, perp-nodes..., 3), outward from left


@dataclass
class BoundaryBlock:
    axis: int
    end: int
    elem: np.ndarray
    tag: str
    nds: np.ndarray = None  # outward


@dataclass
class Mesh:
    dim: int
    ops: OperatorSet
    X: np.ndarray  # (ne, n0, n1, n2, 3)
    J: np.ndarray  # (ne, n0, n1, n2)
    Ja: np.ndarray  # (ne, n0, n1, n2, dim, 3)
    faces: list
    boundaries: list
    cell_volume: np.ndarray
    element_size: np.ndarray  # characteristic physical width per element

    @property
    def n_elements(self) -> int:
        return self.X.shape[0]

    @property
    def N(self) -> int:
        return self.ops.N


def _differentiate(ops: OperatorSet, A: np.ndarray, axis: int) -> np.ndarray:
    """Apply the derivative matrix along node axis `axis` (0, 1, or 2)."""
    return np.moveaxis(
        np.tensordot(ops.D, np.moveaxis(A, 1 + axis, 0), axes=(1, 0)), 0, 1 + axis
    )


def _compute_metrics(ops: OperatorSet, X: np.ndarray, dim: int):
    """Nodal J and Ja^d from the isoparametric mapping (dims 1 and 2)."""
    shape = X.shape[:-1]
    Ja = np.zeros(shape + (dim, 3))
    if dim == 1:
        xxi = _differentiate(ops, X[..., 0], 0)
        J = xxi
        Ja[..., 0, 0] = 1.0
    elif dim == 2:
        xxi = _differentiate(ops, X[..., 0], 0)
        xeta = _differentiate(ops, X[..., 0], 1)
        yxi = _differentiate(ops, X[..., 1], 0)
        yeta = _differentiate(ops, X[..., 1], 1)
        J = xxi * yeta - xeta * yxi
        Ja[..., 0, 0] = yeta
        Ja[..., 0, 1] = -xeta
        Ja[..., 1, 0] = -yxi
        Ja[..., 1, 1] = xxi
    else:
        raise ValueError("3-D metrics are analytic (Cartesian only)")
    if np.any(J <= 0):
        bad = int(np.argwhere(np.any(J.reshape(J.shape[0], -1) <= 0, axis=1))[0, 0])
        raise ValueError(f"inverted element (J <= 0) in element {bad}")
    return J, Ja


def _attach_normals(mesh: Mesh):
    """Precompute outward n*dS per face from the left element's metrics."""
    for f in mesh.faces:
        sl = face_slice(f.axis, 1)
        f.nds = mesh.Ja[(f.elem_left,) + sl + (f.axis,)].copy()
    for b in mesh.boundaries:
        sl = face_slice(b.axis, b.end)
        sign = 1.0 if b.end else -1.0
        b.nds = sign * mesh.Ja[(b.elem,) + sl + (b.axis,)]


def build_box_mesh(
    extents,
    counts,
    N: int,
    periodic=None,
    boundary=None,
    warp=None,
) -> Mesh:
    """Structured box mesh.

    extents: [(x0, x1), ...] per dimension; counts: elements per dimension.
    periodic: list of bools per axis. boundary: dict mapping side names
    ('xmin', 'xmax', 'ymin', ...) to boundary tags for non-periodic axes.
    warp: optional smooth map R^dim -> R^dim applied to nodal coordinates
    (2-D only; metrics are then computed isoparametrically).
    """
    counts = [int(c) for c in np.atleast_1d(counts)]
    dim = len(counts)
    extents = [tuple(map(float, e)) for e in extents]
    if len(extents) != dim:
        raise ValueError("extents/counts dimension mismatch")
    for (a, b) in extents:
        if not b > a:
            raise ValueError("empty extent")
    if any(c < 1 for c in counts):
        raise ValueError("element counts must be positive")
    periodic = list(periodic) if periodic is not None else [False] * dim
    boundary = dict(boundary or {})
    if warp is not None and dim != 2:
        raise ValueError("warped mappings are supported in 2-D only")

    ops = operator_set(N)
    xi = ops.nodes
    n = N + 1
    widths = [(e[1] - e[0]) / c for e, c in zip(extents, counts)]
    # 1-D node positions per element per axis
    axis_nodes = []
    for d in range(dim):
        lo = extents[d][0] + widths[d] * np.arange(counts[d])
        axis_nodes.append(lo[:, None] + 0.5 * widths[d] * (xi[None, :] + 1.0))

    ne = int(np.prod(counts))
    nshape = tuple(n if d < dim else 1 for d in range(3))
    X = np.zeros((ne,) + nshape + (3,))
    grid = np.arange(ne).reshape(counts, order="F")  # index (i, j, k) -> element
    idx = np.unravel_index(np.arange(ne), counts, order="F")
    for d in range(dim):
        coord = axis_nodes[d][idx[d]]  # (ne, n)
        sh = [1, 1, 1]
        sh[d] = n
        X[..., d] = coord.reshape((ne,) + tuple(sh))

    if warp is not None:
        Xw = warp(X[..., 0].copy(), X[..., 1].copy())
        X[..., 0], X[..., 1] = Xw

    if dim == 3:
        if warp is not None:
            raise ValueError("3-D meshes are Cartesian only")
        J = np.full((ne,) + nshape, np.prod(widths) / 2**dim)
        Ja = np.zeros((ne,) + nshape + (dim, 3))
        for d in range(dim):
            Ja[..., d, d] = np.prod(widths) / 2**dim * 2.0 / widths[d]
    else:
        J, Ja = _compute_metrics(ops, X, dim)

    faces = []
    boundaries = []
    side_names = [("xmin", "xmax"), ("ymin", "ymax"), ("zmin", "zmax")]
    for d in range(dim):
        take = [slice(None)] * dim
        take_hi, take_lo = list(take), list(take)
        take_hi[d] = slice(0, counts[d] - 1)
        take_lo[d] = slice(1, counts[d])
        eL = grid[tuple(take_hi)].ravel(order="F")
        eR = grid[tuple(take_lo)].ravel(order="F")
        if eL.size:
            faces.append(FaceBlock(axis=d, elem_left=eL, elem_right=eR))
        first, last = list(take), list(take)
        first[d], last[d] = 0, counts[d] - 1
        e0 = np.atleast_1d(grid[tuple(first)]).ravel(order="F")
        e1 = np.atleast_1d(grid[tuple(last)]).ravel(order="F")
        if periodic[d]:
            faces.append(FaceBlock(axis=d, elem_left=e1, elem_right=e0))
        else:
            lo_tag = boundary.get(side_names[d][0], "wall_free_slip")
            hi_tag = boundary.get(side_names[d][1], "wall_free_slip")
            boundaries.append(BoundaryBlock(axis=d, end=0, elem=e0, tag=lo_tag))
            boundaries.append(BoundaryBlock(axis=d, end=1, elem=e1, tag=hi_tag))

    vol = J.reshape(ne, -1) @ _weight_product(ops, dim)
    size = np.full(ne, min(widths))
    mesh = Mesh(
        dim=dim, ops=ops, X=X, J=J, Ja=Ja, faces=faces,
        boundaries=boundaries, cell_volume=vol, element_size=size,
    )
    _attach_normals(mesh)
    return mesh


def _weight_product(ops: OperatorSet, dim: int) -> np.ndarray:
    w = ops.weights
    omega = w.reshape(-1, 1, 1)
    if dim >= 2:
        omega = omega * w.reshape(1, -1, 1)
    if dim == 3:
        omega = omega * w.reshape(1, 1, -1)
    shape = tuple(ops.N + 1 if d < dim else 1 for d in range(3))
    return np.broadcast_to(omega, shape).ravel()


def build_step_mesh(
    N: int,
    length: float = 3.0,
    height: float = 1.0,
    step_height: float = 0.2,
    step_position: float = 0.6,
    nx: int = 30,
    ny: int = 10,
) -> Mesh:
    """Forward-facing-step domain from Cartesian blocks.

    [0, length] x [0, height] minus the step region x >= step_position,
    y <= step_height. Boundary tags: inflow (left), outflow (right),
    free-slip walls elsewhere (including the step surfaces).
    """
    if not (0 < step_position < length and 0 < step_height < height):
        raise ValueError("step outside domain")
    ops = operator_set(N)
    dx, dy = length / nx, height / ny
    i_step = int(round(step_position / dx))
    j_step = int(round(step_height / dy))
    if abs(i_step * dx - step_position) > 1e-12 or abs(j_step * dy - step_height) > 1e-12:
        raise ValueError("element counts must align with the step corner")

    keep = np.ones((nx, ny), dtype=bool)
    keep[i_step:, :j_step] = False
    eid = -np.ones((nx, ny), dtype=int)
    eid[keep] = np.arange(keep.sum())
    ne = int(keep.sum())

    n = N + 1
    xi = ops.nodes
    X = np.zeros((ne, n, n, 1, 3))
    ii, jj = np.nonzero(keep)
    x_nodes = (ii * dx)[:, None] + 0.5 * dx * (xi[None, :] + 1.0)
    y_nodes = (jj * dy)[:, None] + 0.5 * dy * (xi[None, :] + 1.0)
    X[..., 0] = x_nodes[:, :, None, None]
    X[..., 1] = y_nodes[:, None, :, None]
    J, Ja = _compute_metrics(ops, X, 2)

    fx_L, fx_R, fy_L, fy_R = [], [], [], []
    b = {}  # (axis, end, tag) -> element list

    def add_bnd(axis, end, tag, e):
        b.setdefault((axis, end, tag), []).append(e)

    for i, j in zip(ii, jj):
        e = eid[i, j]
        # +x neighbor
        if i + 1 < nx and keep[i + 1, j]:
            fx_L.append(e)
            fx_R.append(eid[i + 1, j])
        elif i + 1 == nx:
            add_bnd(0, 1, "outflow", e)
        else:
            add_bnd(0, 1, "wall_free_slip", e)  # step front
        if i == 0:
            add_bnd(0, 0, "inflow", e)
        elif not keep[i - 1, j]:
            add_bnd(0, 0, "wall_free_slip", e)
        # +y neighbor
        if j + 1 < ny and keep[i, j + 1]:
            fy_L.append(e)
            fy_R.append(eid[i, j + 1])
        elif j + 1 == ny:
            add_bnd(1, 1, "wall_free_slip", e)
        if j == 0:
            add_bnd(1, 0, "wall_free_slip", e)
        elif not keep[i, j - 1]:
            add_bnd(1, 0, "wall_free_slip", e)  # step top

    faces = [
        FaceBlock(axis=0, elem_left=np.array(fx_L), elem_right=np.array(fx_R)),
        FaceBlock(axis=1, elem_left=np.array(fy_L), elem_right=np.array(fy_R)),
    ]
    boundaries = [
        BoundaryBlock(axis=a, end=end, elem=np.array(sorted(e)), tag=tag)
        for (a, end, tag), e in sorted(b.items())
    ]
    vol = J.reshape(ne, -1) @ _weight_product(ops, 2)
    mesh = Mesh(
        dim=2, ops=ops, X=X, J=J, Ja=Ja, faces=faces, boundaries=boundaries,
        cell_volume=vol, element_size=np.full(ne, min(dx, dy)),
    )
    _attach_normals(mesh)
    return mesh
