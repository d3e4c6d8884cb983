"""Hot-loop kernels for the split-form inviscid volume divergence.

The two-point volume flux is evaluated against the metric-averaged
contravariant vectors, which is what makes the split form free-stream
preserving on non-Cartesian meshes. Flux kind ids: 0 central,
1 Pirozzoli, 2 Chandrashekar.
"""

import numba as nb
import numpy as np

KIND_IDS = {"central": 0, "pirozzoli": 1, "chandrashekar": 2}


@nb.njit(inline="always", cache=True)
def _log_mean(a, b):
    f = (a - b) / (a + b)
    u = f * f
    if u < 1e-8:
        return (a + b) / (2.0 * (1.0 + u * (1.0 / 3.0 + u * (0.2 + u / 7.0))))
    return (a - b) / np.log(a / b)


@nb.njit(inline="always", cache=True)
def _tp_flux(
    kind, gamma,
    r1, u1, v1, w1, p1, h1,
    r2, u2, v2, w2, p2, h2,
    jx, jy, jz, out,
):
    ub = 0.5 * (u1 + u2)
    vb = 0.5 * (v1 + v2)
    wb = 0.5 * (w1 + w2)
    un = jx * ub + jy * vb + jz * wb
    if kind == 1:  # Pirozzoli
        rb = 0.5 * (r1 + r2)
        pb = 0.5 * (p1 + p2)
        fr = rb * un
        out[0] = fr
        out[1] = fr * ub + pb * jx
        out[2] = fr * vb + pb * jy
        out[3] = fr * wb + pb * jz
        out[4] = fr * 0.5 * (h1 + h2)
    elif kind == 2:  # Chandrashekar
        b1 = 0.5 * r1 / p1
        b2 = 0.5 * r2 / p2
        rln = _log_mean(r1, r2)
        bln = _log_mean(b1, b2)
        phat = 0.5 * (r1 + r2) / (b1 + b2)
        fr = rln * un
        out[0] = fr
        out[1] = fr * ub + phat * jx
        out[2] = fr * vb + phat * jy
        out[3] = fr * wb + phat * jz
        sq = 0.5 * (u1 * u1 + u2 * u2 + v1 * v1 + v2 * v2 + w1 * w1 + w2 * w2)
        out[4] = (
            fr * (0.5 / ((gamma - 1.0) * bln) - 0.5 * sq)
            + ub * out[1] + vb * out[2] + wb * out[3]
        )
    else:  # central: metric-averaged mean of the physical fluxes
        f1r = r1 * (jx * u1 + jy * v1 + jz * w1)
        f2r = r2 * (jx * u2 + jy * v2 + jz * w2)
        out[0] = 0.5 * (f1r + f2r)
        out[1] = 0.5 * (f1r * u1 + p1 * jx + f2r * u2 + p2 * jx)
        out[2] = 0.5 * (f1r * v1 + p1 * jy + f2r * v2 + p2 * jy)
        out[3] = 0.5 * (f1r * w1 + p1 * jz + f2r * w2 + p2 * jz)
        out[4] = 0.5 * (f1r * h1 + f2r * h2)


@nb.njit(cache=True)
def split_volume_divergence(rho, u, v, w, p, h, Ja, D, gamma, kind, out):
    """Accumulate -D(F#) into out (shape like conserved state array).

    rho..h are nodal primitive fields (ne, n0, n1, n2); Ja is
    (ne, n0, n1, n2, dim, 3); D the 1-D derivative matrix. The two-point
    flux is symmetric, so each node pair along a line is evaluated once
    and scattered to both rows.
    """
    ne, n0, n1, n2 = rho.shape
    dim = Ja.shape[4]
    sizes = (n0, n1, n2)
    flux = np.empty(5)
    for e in range(ne):
        for i in range(n0):
            for j in range(n1):
                for k in range(n2):
                    for d in range(dim):
                        if d == 0:
                            row = i
                        elif d == 1:
                            row = j
                        else:
                            row = k
                        for m in range(row, sizes[d]):
                            if d == 0:
                                pi, pj, pk = m, j, k
                            elif d == 1:
                                pi, pj, pk = i, m, k
                            else:
                                pi, pj, pk = i, j, m
                            jx = 0.5 * (Ja[e, i, j, k, d, 0] + Ja[e, pi, pj, pk, d, 0])
                            jy = 0.5 * (Ja[e, i, j, k, d, 1] + Ja[e, pi, pj, pk, d, 1])
                            jz = 0.5 * (Ja[e, i, j, k, d, 2] + Ja[e, pi, pj, pk, d, 2])
                            _tp_flux(
                                kind, gamma,
                                rho[e, i, j, k], u[e, i, j, k], v[e, i, j, k],
                                w[e, i, j, k], p[e, i, j, k], h[e, i, j, k],
                                rho[e, pi, pj, pk], u[e, pi, pj, pk],
                                v[e, pi, pj, pk], w[e, pi, pj, pk],
                                p[e, pi, pj, pk], h[e, pi, pj, pk],
                                jx, jy, jz, flux,
                            )
                            coef = 2.0 * D[row, m]
                            for q in range(5):
                                out[e, i, j, k, q] -= coef * flux[q]
                            if m > row:
                                coef_t = 2.0 * D[m, row]
                                for q in range(5):
                                    out[e, pi, pj, pk, q] -= coef_t * flux[q]
