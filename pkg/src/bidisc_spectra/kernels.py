"""Hot numeric kernels.

Each kernel has a numba implementation (``*_nb``) and a vectorised numpy
implementation (``*_np``).  The public names dispatch on ``USE_NUMBA``.
Both variants are kept importable so they can be checked against each
other and benchmarked.

Polynomials are dense complex arrays ``coef[i, j]`` holding the
coefficient of ``z1**i * z2**j``.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# value and first partials


def poly_eval_grad_np(coef, z1, z2):
    z1 = np.asarray(z1, dtype=np.complex128)
    z2 = np.asarray(z2, dtype=np.complex128)
    d1, d2 = coef.shape[0] - 1, coef.shape[1] - 1
    shape = np.broadcast(z1, z2).shape
    z1 = np.broadcast_to(z1, shape)
    z2 = np.broadcast_to(z2, shape)
    acc = np.broadcast_to(coef[:, d2].reshape((d1 + 1,) + (1,) * len(shape)), (d1 + 1,) + shape).copy()
    dacc = np.zeros_like(acc)
    for j in range(d2 - 1, -1, -1):
        dacc = dacc * z2 + acc
        acc = acc * z2 + coef[:, j].reshape((d1 + 1,) + (1,) * len(shape))
    w = acc[d1].copy()
    w1 = np.zeros(shape, dtype=np.complex128)
    w2 = dacc[d1].copy()
    for i in range(d1 - 1, -1, -1):
        w1 = w1 * z1 + w
        w = w * z1 + acc[i]
        w2 = w2 * z1 + dacc[i]
    return w, w1, w2


@njit
def _eval_point_nb(coef, z1, z2):
    d1 = coef.shape[0] - 1
    d2 = coef.shape[1] - 1
    w = 0j
    w1 = 0j
    w2 = 0j
    for i in range(d1, -1, -1):
        row = coef[i, d2]
        drow = 0j
        for j in range(d2 - 1, -1, -1):
            drow = drow * z2 + row
            row = row * z2 + coef[i, j]
        w1 = w1 * z1 + w
        w = w * z1 + row
        w2 = w2 * z1 + drow
    return w, w1, w2


@njit
def _poly_eval_grad_flat_nb(coef, z1, z2):
    n = z1.shape[0]
    w = np.empty(n, dtype=np.complex128)
    w1 = np.empty(n, dtype=np.complex128)
    w2 = np.empty(n, dtype=np.complex128)
    for k in range(n):
        a, b, c = _eval_point_nb(coef, z1[k], z2[k])
        w[k] = a
        w1[k] = b
        w2[k] = c
    return w, w1, w2


def poly_eval_grad_nb(coef, z1, z2):
    z1, z2 = np.broadcast_arrays(np.asarray(z1, dtype=np.complex128), np.asarray(z2, dtype=np.complex128))
    shape = z1.shape
    w, w1, w2 = _poly_eval_grad_flat_nb(
        np.ascontiguousarray(coef, dtype=np.complex128),
        np.ascontiguousarray(z1).ravel(),
        np.ascontiguousarray(z2).ravel(),
    )
    return w.reshape(shape), w1.reshape(shape), w2.reshape(shape)


# ---------------------------------------------------------------------------
# subdivision cell bounds
#
# A cell is a box in (r1, t1, r2, t2) with z_j = r_j exp(i t_j).  The bound
# is a first-order Taylor model with a certified second-order remainder;
# consts = (D1, D2, D11, D12, D22) bound the partials on the closed bidisc.


def cell_bounds_np(coef, consts, centers, half):
    D1, D2, D11, D12, D22 = consts
    r1, t1, r2, t2 = centers.T
    e1 = np.exp(1j * t1)
    e2 = np.exp(1j * t2)
    z1 = r1 * e1
    z2 = r2 * e2
    a, w1, w2 = poly_eval_grad_np(coef, z1, z2)
    g = np.stack([w1 * e1, w1 * 1j * z1, w2 * e2, w2 * 1j * z2], axis=1)
    eta1 = half[:, 0] + half[:, 1]
    eta2 = half[:, 2] + half[:, 3]
    rem = 0.5 * ((D11 + D1) * eta1**2 + 2.0 * D12 * eta1 * eta2 + (D22 + D2) * eta2**2)
    absval = np.abs(a)
    safe = np.where(absval > 0.0, absval, 1.0)
    u = np.where(absval > 0.0, np.conj(a) / safe, 0.0)
    proj = np.abs((u[:, None] * g).real)
    orth = np.abs((u[:, None] * g).imag)
    gmod = np.abs(g)
    P = (half * proj).sum(axis=1)
    Q = (half * orth).sum(axis=1)
    G = (half * gmod).sum(axis=1)
    lower = np.where(absval > 0.0, absval - P, -G) - rem
    up_fo = absval + G
    up_so = np.where(absval > 0.0, absval + P + Q * Q / (2.0 * safe), np.inf)
    upper = np.minimum(up_fo, up_so) + rem
    cw = np.array([D11 + D1 + D12, D11 + D1 + D12, D22 + D2 + D12, D22 + D2 + D12])
    eta = np.stack([eta1, eta1, eta2, eta2], axis=1)
    score = half * gmod + half * eta * cw
    score = np.where(half > 0.0, score + 1e-300, -1.0)
    split = np.argmax(score, axis=1)
    split = np.where(score.max(axis=1) < 0.0, -1, split)
    return absval, lower, upper, split


@njit
def _cell_bounds_nb(coef, consts, centers, half):
    D1 = consts[0]
    D2 = consts[1]
    D11 = consts[2]
    D12 = consts[3]
    D22 = consts[4]
    n = centers.shape[0]
    absval = np.empty(n)
    lower = np.empty(n)
    upper = np.empty(n)
    split = np.empty(n, dtype=np.int64)
    g = np.empty(4, dtype=np.complex128)
    cw = np.empty(4)
    cw[0] = D11 + D1 + D12
    cw[1] = cw[0]
    cw[2] = D22 + D2 + D12
    cw[3] = cw[2]
    for k in range(n):
        e1 = np.exp(1j * centers[k, 1])
        e2 = np.exp(1j * centers[k, 3])
        z1 = centers[k, 0] * e1
        z2 = centers[k, 2] * e2
        a, w1, w2 = _eval_point_nb(coef, z1, z2)
        g[0] = w1 * e1
        g[1] = w1 * 1j * z1
        g[2] = w2 * e2
        g[3] = w2 * 1j * z2
        eta1 = half[k, 0] + half[k, 1]
        eta2 = half[k, 2] + half[k, 3]
        rem = 0.5 * ((D11 + D1) * eta1 * eta1 + 2.0 * D12 * eta1 * eta2 + (D22 + D2) * eta2 * eta2)
        av = abs(a)
        P = 0.0
        Q = 0.0
        G = 0.0
        best = -1.0
        bi = -1
        for p in range(4):
            h = half[k, p]
            gm = abs(g[p])
            G += h * gm
            if av > 0.0:
                v = a.conjugate() / av * g[p]
                P += h * abs(v.real)
                Q += h * abs(v.imag)
            if h > 0.0:
                eta = eta1 if p < 2 else eta2
                s = h * gm + h * eta * cw[p] + 1e-300
                if s > best:
                    best = s
                    bi = p
        absval[k] = av
        if av > 0.0:
            lower[k] = av - P - rem
            up = av + P + Q * Q / (2.0 * av)
            if av + G < up:
                up = av + G
            upper[k] = up + rem
        else:
            lower[k] = -G - rem
            upper[k] = G + rem
        split[k] = bi
    return absval, lower, upper, split


def cell_bounds_nb(coef, consts, centers, half):
    return _cell_bounds_nb(
        np.ascontiguousarray(coef, dtype=np.complex128),
        np.asarray(consts, dtype=np.float64),
        np.ascontiguousarray(centers, dtype=np.float64),
        np.ascontiguousarray(half, dtype=np.float64),
    )


# ---------------------------------------------------------------------------
# mean of log|w| over a product of circle node sets


def log_abs_mean_np(coef, z1_nodes, z2_nodes, chunk=256):
    total = 0.0
    z2 = np.asarray(z2_nodes, dtype=np.complex128)
    for s in range(0, len(z1_nodes), chunk):
        z1 = np.asarray(z1_nodes[s : s + chunk], dtype=np.complex128)
        w, _, _ = poly_eval_grad_np(coef, z1[:, None], z2[None, :])
        with np.errstate(divide="ignore"):
            total += np.log(np.abs(w)).sum()
    return total / (len(z1_nodes) * len(z2))


@njit
def _log_abs_mean_nb(coef, z1_nodes, z2_nodes):
    total = 0.0
    for a in range(z1_nodes.shape[0]):
        for b in range(z2_nodes.shape[0]):
            w, _, _ = _eval_point_nb(coef, z1_nodes[a], z2_nodes[b])
            total += np.log(abs(w))
    return total / (z1_nodes.shape[0] * z2_nodes.shape[0])


def log_abs_mean_nb(coef, z1_nodes, z2_nodes):
    return _log_abs_mean_nb(
        np.ascontiguousarray(coef, dtype=np.complex128),
        np.ascontiguousarray(z1_nodes, dtype=np.complex128),
        np.ascontiguousarray(z2_nodes, dtype=np.complex128),
    )


if USE_NUMBA:
    poly_eval_grad = poly_eval_grad_nb
    cell_bounds = cell_bounds_nb
    log_abs_mean = log_abs_mean_nb
else:
    poly_eval_grad = poly_eval_grad_np
    cell_bounds = cell_bounds_np
    log_abs_mean = log_abs_mean_np
