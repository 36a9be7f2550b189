"""Numba kernels for the closed-loop simulation inner loop."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def control_kernel(p, edges, d2e, tris, s_star, alpha, beta, u):
    """Velocity commands for all agents; writes into ``u`` (n, 2)."""
    n = p.shape[0]
    for q in range(n):
        u[q, 0] = 0.0
        u[q, 1] = 0.0
    for m in range(edges.shape[0]):
        s = edges[m, 0]
        t = edges[m, 1]
        dx = p[s, 0] - p[t, 0]
        dy = p[s, 1] - p[t, 1]
        z = dx * dx + dy * dy - d2e[m]
        u[s, 0] -= alpha[s] * z * dx
        u[s, 1] -= alpha[s] * z * dy
    for m in range(tris.shape[0]):
        i = tris[m, 0]
        j = tris[m, 1]
        k = tris[m, 2]
        ax = p[k, 0] - p[i, 0]
        ay = p[k, 1] - p[i, 1]
        bx = p[k, 0] - p[j, 0]
        by = p[k, 1] - p[j, 1]
        # 0.5 * (p_k - p_i)^T J (p_k - p_j) with J = [[0, 1], [-1, 0]]
        s_err = 0.5 * (ax * by - ay * bx) - s_star[m]
        vx = ax - bx
        vy = ay - by
        # J^T v = (-v_y, v_x)
        u[k, 0] -= beta[k] * s_err * (-vy)
        u[k, 1] -= beta[k] * s_err * vx


@njit(cache=True, nogil=True)
def errors_kernel(p, edges, d2e, tris, s_star, z_out, s_out):
    for m in range(edges.shape[0]):
        s = edges[m, 0]
        t = edges[m, 1]
        dx = p[s, 0] - p[t, 0]
        dy = p[s, 1] - p[t, 1]
        z_out[m] = dx * dx + dy * dy - d2e[m]
    for m in range(tris.shape[0]):
        i = tris[m, 0]
        j = tris[m, 1]
        k = tris[m, 2]
        ax = p[k, 0] - p[i, 0]
        ay = p[k, 1] - p[i, 1]
        bx = p[k, 0] - p[j, 0]
        by = p[k, 1] - p[j, 1]
        s_out[m] = 0.5 * (ax * by - ay * bx) - s_star[m]


@njit(cache=True, nogil=True)
def rk4_kernel(p, h, edges, d2e, tris, s_star, alpha, beta, k1, k2, k3, k4, tmp):
    """One classical fixed-step update of ``p`` in place."""
    control_kernel(p, edges, d2e, tris, s_star, alpha, beta, k1)
    tmp[:] = p + 0.5 * h * k1
    control_kernel(tmp, edges, d2e, tris, s_star, alpha, beta, k2)
    tmp[:] = p + 0.5 * h * k2
    control_kernel(tmp, edges, d2e, tris, s_star, alpha, beta, k3)
    tmp[:] = p + h * k3
    control_kernel(tmp, edges, d2e, tris, s_star, alpha, beta, k4)
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@njit(cache=True, nogil=True)
def run_kernel(
    p,
    h,
    nsteps,
    dec,
    eps,
    sustain,
    edges,
    d2e,
    tris,
    s_star,
    alpha,
    beta,
    times,
    pos_buf,
    z_buf,
    s_buf,
    v_buf,
):
    """Integrate with early exit on sustained convergence.

    Returns (samples, steps_done, status, consec_both, consec_z, t_threshold)
    with status 0 = ran to the horizon, 1 = converged early, 3 = diverged.
    Samples are recorded at step 0, every ``dec`` steps, and the last step.
    """
    n = p.shape[0]
    a = edges.shape[0]
    ntri = tris.shape[0]
    k1 = np.empty((n, 2))
    k2 = np.empty((n, 2))
    k3 = np.empty((n, 2))
    k4 = np.empty((n, 2))
    tmp = np.empty((n, 2))
    z = np.empty(a)
    s_err = np.empty(ntri)

    def _record(idx, t):
        times[idx] = t
        for q in range(n):
            pos_buf[idx, q, 0] = p[q, 0]
            pos_buf[idx, q, 1] = p[q, 1]
        v = 0.0
        for m in range(a):
            z_buf[idx, m] = z[m]
            v += 0.25 * alpha[edges[m, 0]] * z[m] * z[m]
        for m in range(ntri):
            s_buf[idx, m] = s_err[m]
            v += beta[tris[m, 2]] * s_err[m] * s_err[m]
        v_buf[idx] = v

    errors_kernel(p, edges, d2e, tris, s_star, z, s_err)
    _record(0, 0.0)
    count = 1
    last_rec = 0
    consec_both = 0
    consec_z = 0
    t_thresh = -1.0
    status = 0
    step = 0
    for step in range(1, nsteps + 1):
        rk4_kernel(p, h, edges, d2e, tris, s_star, alpha, beta, k1, k2, k3, k4, tmp)
        t = step * h
        errors_kernel(p, edges, d2e, tris, s_star, z, s_err)
        finite = True
        maxz = 0.0
        for m in range(a):
            if not np.isfinite(z[m]):
                finite = False
            if abs(z[m]) > maxz:
                maxz = abs(z[m])
        maxs = 0.0
        for m in range(ntri):
            if not np.isfinite(s_err[m]):
                finite = False
            if abs(s_err[m]) > maxs:
                maxs = abs(s_err[m])
        if not finite:
            status = 3
            break
        if maxz < eps:
            consec_z += 1
        else:
            consec_z = 0
        if maxz < eps and maxs < eps:
            if consec_both == 0:
                t_thresh = t
            consec_both += 1
        else:
            consec_both = 0
            t_thresh = -1.0
        if step % dec == 0:
            _record(count, t)
            count += 1
            last_rec = step
        if consec_both >= sustain:
            status = 1
            break
    if status != 3 and last_rec != step:
        _record(count, step * h)
        count += 1
    return count, step, status, consec_both, consec_z, t_thresh
