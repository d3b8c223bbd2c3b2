"""Hot numerical kernels.

Everything in this module is compiled with ``@njit`` when the numba backend
is active (the default) and runs as plain numpy/Python otherwise; see
:mod:`atompair._accel`. Keep the code inside the numba-supported subset:
scalars, small ndarrays, no Python objects. Input validation lives in the
public wrappers (:mod:`atompair.spectral`, :mod:`atompair.coefficients`,
...), not here.

Units: the atomic transition frequency is fixed at 1, so ``a`` means a/omega
and ``L`` means omega*L. Rates are expressed in units of the spontaneous
emission rate, times in its inverse.
"""

import numpy as np

from ._accel import njit

# switch points of the series fallbacks
SMALL_A = 1e-4      # below this the accelerated spectral shapes equal the static ones to O(a^2)
SMALL_R = 3e-3      # lambda*L below this: closed forms cancel catastrophically, use series
SERIES_Q_MAX = 1.0  # the small-L series assumes a*L is moderate as well

COND_LIMIT = 1e12   # eigenvector condition number beyond which expm fallback is used
EPS_DEAD = 1e-12    # concurrence threshold for death/birth events
EPS_ENH = 1e-9      # enhancement margin over the initial concurrence
RADICAND_SLACK = -1e-12

_INVGOLD = (np.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# elementary pieces

@njit(cache=True, nogil=True)
def coth_kernel(x):
    # caller guarantees x > 0
    if x > 20.0:
        return 1.0 + 2.0 * np.exp(-2.0 * x)
    if x < 1e-6:
        return 1.0 / x + x / 3.0
    return 1.0 / np.tanh(x)


@njit(cache=True, nogil=True)
def f11_kernel(lam, a):
    return 1.0 + (a * a) / (lam * lam)


@njit(cache=True, nogil=True)
def f12_thermal_kernel(i, j, lam, L):
    """Static-bath cross-correlation shape, component (i, j), 1-based axes."""
    r = lam * L
    if i == j and i < 3:
        if r < SMALL_R:
            r2 = r * r
            return 1.0 - r2 / 5.0 + 3.0 * r2 * r2 / 280.0 - r2 * r2 * r2 / 3780.0
        return (3.0 * r * np.cos(r) - 3.0 * np.sin(r) + 3.0 * r * r * np.sin(r)) / (2.0 * r ** 3)
    if i == 3 and j == 3:
        if r < SMALL_R:
            r2 = r * r
            return 1.0 - r2 / 10.0 + r2 * r2 / 280.0 - r2 * r2 * r2 / 15120.0
        return 3.0 * (np.sin(r) - r * np.cos(r)) / r ** 3
    return 0.0


@njit(cache=True, nogil=True)
def _f12_closed(i, j, lam, a, L):
    # canonical nonzero components (1,1), (2,2), (3,3), (1,3); no switching
    q = a * L
    r = lam * L
    q2 = q * q
    r2 = r * r
    R2 = 4.0 + q2
    R = np.sqrt(R2)
    R5 = R2 * R2 * R
    r3 = r * r2
    s = (2.0 * lam / a) * np.arcsinh(0.5 * q)
    cs = np.cos(s)
    sn = np.sin(s)
    if i == 1 and j == 1:
        return 12.0 / (r3 * R5) * (
            2.0 * r * (1.0 + q2) * R * cs
            - (4.0 - 4.0 * r2 + q2 * (2.0 - r2 + q2)) * sn)
    if i == 2 and j == 2:
        return 3.0 / (r3 * R2 * R) * (
            r * (2.0 + q2) * R * cs
            + (-4.0 + 4.0 * r2 + q2 * r2) * sn)
    if i == 3 and j == 3:
        return -3.0 / (r3 * R5) * (
            r * (16.0 + 2.0 * q2 + q2 * q2) * R * cs
            + (-32.0 + q2 * q2 * r2 + 4.0 * q2 * (r2 - 5.0)) * sn)
    # (1, 3)
    return -6.0 * q / (r3 * R5) * (
        r * (q2 - 2.0) * R * cs
        + (4.0 + 4.0 * r2 + q2 * (4.0 + r2)) * sn)


@njit(cache=True, nogil=True)
def _f12_series(i, j, lam, a, L):
    # 6th-order expansion about L = 0 of the canonical components
    l2 = lam * lam
    l4 = l2 * l2
    l6 = l4 * l2
    a2 = a * a
    a4 = a2 * a2
    a6 = a4 * a2
    a8 = a4 * a4
    L2 = L * L
    if i == 1 and j == 1:
        c0 = 1.0 + a2 / l2
        c2 = -(4.0 * a4 / (5.0 * l2) + a2 + l2 / 5.0)
        c4 = 27.0 * a6 / (70.0 * l2) + 21.0 * a4 / 40.0 + 3.0 * a2 * l2 / 20.0 + 3.0 * l4 / 280.0
        c6 = -(16.0 * a8 / (105.0 * l2) + 41.0 * a6 / 189.0 + 13.0 * a4 * l2 / 180.0
               + a2 * l4 / 126.0 + l6 / 3780.0)
        return c0 + L2 * (c2 + L2 * (c4 + L2 * c6))
    if i == 2 and j == 2:
        c0 = 1.0 + a2 / l2
        c2 = -(3.0 * a4 / (10.0 * l2) + 0.5 * a2 + l2 / 5.0)
        c4 = 3.0 * a6 / (35.0 * l2) + 3.0 * a4 / 20.0 + 3.0 * a2 * l2 / 40.0 + 3.0 * l4 / 280.0
        c6 = -(a8 / (42.0 * l2) + 317.0 * a6 / 7560.0 + a4 * l2 / 45.0
               + 11.0 * a2 * l4 / 2520.0 + l6 / 3780.0)
        return c0 + L2 * (c2 + L2 * (c4 + L2 * c6))
    if i == 3 and j == 3:
        c0 = 1.0 + a2 / l2
        c2 = -(9.0 * a4 / (10.0 * l2) + a2 + l2 / 10.0)
        c4 = 3.0 * a6 / (7.0 * l2) + 11.0 * a4 / 20.0 + a2 * l2 / 8.0 + l4 / 280.0
        c6 = -(a8 / (6.0 * l2) + 1733.0 * a6 / 7560.0 + 49.0 * a4 * l2 / 720.0
               + a2 * l4 / 180.0 + l6 / 15120.0)
        return c0 + L2 * (c2 + L2 * (c4 + L2 * c6))
    # (1, 3): odd in L
    a3 = a2 * a
    a5 = a4 * a
    a7 = a6 * a
    c1 = -(a3 / l2 + a)
    c3 = 3.0 * a5 / (5.0 * l2) + 0.75 * a3 + 3.0 * a * l2 / 20.0
    c5 = -(9.0 * a7 / (35.0 * l2) + 7.0 * a5 / 20.0 + a3 * l2 / 10.0 + a * l4 / 140.0)
    return L * (c1 + L2 * (c3 + L2 * c5))


@njit(cache=True, nogil=True)
def f12_kernel(i, j, lam, a, L, order21):
    """Accelerated cross-correlation shape f_ij; order21 selects the swapped pair.

    Components outside (1,1), (2,2), (3,3), (1,3), (3,1) are zero. The
    (3,1) value is minus the (1,3) one, and the swapped atom order flips
    both of those signs once more.
    """
    if a < SMALL_A:
        # 0/0 loss in (2 lam / a) asinh(aL/2); the static shapes agree to O(a^2)
        return f12_thermal_kernel(i, j, lam, L)
    diag = i == j and 1 <= i <= 3
    skew = (i == 1 and j == 3) or (i == 3 and j == 1)
    if not (diag or skew):
        return 0.0
    ci = i
    cj = j
    sign = 1.0
    if skew:
        ci = 1
        cj = 3
        if i == 3:
            sign = -sign
        if order21:
            sign = -sign
    if lam * L < SMALL_R and a * L < SERIES_Q_MAX:
        return sign * _f12_series(ci, cj, lam, a, L)
    return sign * _f12_closed(ci, cj, lam, a, L)


# ---------------------------------------------------------------------------
# dissipator coefficients (units of the spontaneous emission rate)

@njit(cache=True, nogil=True)
def assemble_kernel(a, L, d1, d2, thermal, order21):
    """Kossakowski coefficients (A1, B1, A2, B2) for one bath mode.

    ``d1``/``d2`` are unit 3-vectors; ``thermal`` selects the static bath at
    the matching Unruh temperature (shape functions frozen at their a -> 0
    limits, Planck factor kept).
    """
    lam = 1.0
    if thermal:
        g11 = 1.0
        c11 = f12_thermal_kernel(1, 1, lam, L)
        c22 = c11
        c33 = f12_thermal_kernel(3, 3, lam, L)
        c13 = 0.0
    else:
        g11 = f11_kernel(lam, a)
        c11 = f12_kernel(1, 1, lam, a, L, order21)
        c22 = f12_kernel(2, 2, lam, a, L, order21)
        c33 = f12_kernel(3, 3, lam, a, L, order21)
        c13 = f12_kernel(1, 3, lam, a, L, order21)
    # contraction over the five nonzero components; f_31 = -f_13
    F = (c11 * d1[0] * d2[0] + c22 * d1[1] * d2[1] + c33 * d1[2] * d2[2]
         + c13 * (d1[0] * d2[2] - d1[2] * d2[0]))
    if a > 0.0:
        cth = coth_kernel(np.pi / a)
    else:
        cth = 1.0
    A1 = 0.25 * g11 * cth
    B1 = 0.25 * g11
    A2 = 0.25 * F * cth
    B2 = 0.25 * F
    return A1, B1, A2, B2


@njit(cache=True, nogil=True)
def generator_kernel(A1, B1, A2, B2):
    """Population rate matrix M, d/dtau (pGG,pAA,pSS,pEE) = M p.

    Diagonals are assembled as minus their column's off-diagonal sum, which
    the rate equations satisfy identically; this makes the column sums (and
    hence trace preservation) exact in floating point, with the diagonals
    matching the -4(...) closed forms to roundoff.
    """
    M = np.empty((4, 4))
    M[0, 1] = 2.0 * (A1 + B1 - A2 - B2)
    M[0, 2] = 2.0 * (A1 + B1 + A2 + B2)
    M[0, 3] = 0.0
    M[1, 0] = 2.0 * (A1 - B1 - A2 + B2)
    M[1, 2] = 0.0
    M[1, 3] = 2.0 * (A1 + B1 - A2 - B2)
    M[2, 0] = 2.0 * (A1 - B1 + A2 - B2)
    M[2, 1] = 0.0
    M[2, 3] = 2.0 * (A1 + B1 + A2 + B2)
    M[3, 0] = 0.0
    M[3, 1] = 2.0 * (A1 - B1 - A2 + B2)
    M[3, 2] = 2.0 * (A1 - B1 + A2 - B2)
    for k in range(4):
        s = 0.0
        for r in range(4):
            if r != k:
                s += M[r, k]
        M[k, k] = -s
    return M


# ---------------------------------------------------------------------------
# exact propagation of the closed linear system

@njit(cache=True, nogil=True)
def eig_decompose(M):
    """Eigendecomposition of the generator plus a condition estimate."""
    Mc = M.astype(np.complex128)
    w, V = np.linalg.eig(Mc)
    Vinv = np.linalg.inv(V)
    nv = 0.0
    ni = 0.0
    for r in range(4):
        for c in range(4):
            nv += abs(V[r, c]) ** 2
            ni += abs(Vinv[r, c]) ** 2
    cond = np.sqrt(nv) * np.sqrt(ni)
    return w, V, Vinv, cond


@njit(cache=True, nogil=True)
def expm_kernel(A):
    """Scaling-and-squaring Taylor matrix exponential for the 4x4 generator."""
    nrm = 0.0
    for r in range(4):
        s = 0.0
        for c in range(4):
            s += abs(A[r, c])
        if s > nrm:
            nrm = s
    k = 0
    while nrm > 0.25:
        nrm *= 0.5
        k += 1
    B = A / (2.0 ** k)
    E = np.eye(4)
    T = np.eye(4)
    for n in range(1, 21):
        T = (T @ B) / n
        E = E + T
    for _ in range(k):
        E = E @ E
    return E


@njit(cache=True, nogil=True)
def pops_at(w, V, c, M, use_expm, p0, tau):
    """Populations at one time from the prepared decomposition (c = Vinv p0)."""
    out = np.empty(4)
    if tau == 0.0:
        for m in range(4):
            out[m] = p0[m]
        return out
    if use_expm:
        E = expm_kernel(M * tau)
        for m in range(4):
            s = 0.0
            for n in range(4):
                s += E[m, n] * p0[n]
            out[m] = s
    else:
        ph = c * np.exp(w * tau)
        v = V @ ph
        for m in range(4):
            out[m] = v[m].real
    return out


@njit(cache=True, nogil=True)
def concurrence_kernel(pGG, pAA, pSS, pEE, reAS, imAS, reGE, imGE):
    """X-state concurrence max{0, K1, K2} from the eight real components."""
    rad1 = (pAA - pSS) * (pAA - pSS) + 4.0 * imAS * imAS
    if rad1 < 0.0:
        if rad1 < RADICAND_SLACK:
            raise ValueError("concurrence radicand below tolerance: state not positive")
        rad1 = 0.0
    prod = pGG * pEE
    if prod < 0.0:
        if prod < RADICAND_SLACK:
            raise ValueError("concurrence radicand below tolerance: state not positive")
        prod = 0.0
    K1 = np.sqrt(rad1) - 2.0 * np.sqrt(prod)
    rad2 = (pAA + pSS) * (pAA + pSS) - 4.0 * reAS * reAS
    if rad2 < 0.0:
        if rad2 < RADICAND_SLACK:
            raise ValueError("concurrence radicand below tolerance: state not positive")
        rad2 = 0.0
    K2 = 2.0 * np.hypot(reGE, imGE) - np.sqrt(rad2)
    C = K1 if K1 > K2 else K2
    return C if C > 0.0 else 0.0


@njit(cache=True, nogil=True)
def _conc_at(w, V, c, M, use_expm, p0, A1, reAS0, imAS0, reGE0, imGE0, tau):
    p = pops_at(w, V, c, M, use_expm, p0, tau)
    amp = np.exp(-4.0 * A1 * tau)
    return concurrence_kernel(p[0], p[1], p[2], p[3],
                              reAS0 * amp, imAS0 * amp, reGE0 * amp, imGE0 * amp)


@njit(cache=True, nogil=True)
def _conc_raw_at(w, V, c, M, use_expm, p0, A1, reAS0, imAS0, reGE0, imGE0, tau):
    # max(K1, K2) without the clamp at zero; negative values certify a dip
    p = pops_at(w, V, c, M, use_expm, p0, tau)
    amp = np.exp(-4.0 * A1 * tau)
    pGG, pAA, pSS, pEE = p[0], p[1], p[2], p[3]
    reAS = reAS0 * amp
    imAS = imAS0 * amp
    rad1 = (pAA - pSS) * (pAA - pSS) + 4.0 * imAS * imAS
    if rad1 < 0.0:
        rad1 = 0.0
    prod = pGG * pEE
    if prod < 0.0:
        prod = 0.0
    K1 = np.sqrt(rad1) - 2.0 * np.sqrt(prod)
    rad2 = (pAA + pSS) * (pAA + pSS) - 4.0 * reAS * reAS
    if rad2 < 0.0:
        rad2 = 0.0
    K2 = 2.0 * np.hypot(reGE0 * amp, imGE0 * amp) - np.sqrt(rad2)
    return K1 if K1 > K2 else K2


@njit(cache=True, nogil=True)
def trajectory_kernel(A1, B1, A2, B2, p0, reAS0, imAS0, reGE0, imGE0, taus):
    """Populations and concurrence along a time grid. Returns (pops, C, cond)."""
    M = generator_kernel(A1, B1, A2, B2)
    w, V, Vinv, cond = eig_decompose(M)
    use_expm = (not np.isfinite(cond)) or cond > COND_LIMIT
    c = Vinv @ p0.astype(np.complex128)
    n = taus.size
    pops = np.empty((n, 4))
    C = np.empty(n)
    for k in range(n):
        p = pops_at(w, V, c, M, use_expm, p0, taus[k])
        pops[k, 0] = p[0]
        pops[k, 1] = p[1]
        pops[k, 2] = p[2]
        pops[k, 3] = p[3]
        amp = np.exp(-4.0 * A1 * taus[k])
        C[k] = concurrence_kernel(p[0], p[1], p[2], p[3],
                                  reAS0 * amp, imAS0 * amp, reGE0 * amp, imGE0 * amp)
    return pops, C, cond


@njit(cache=True, nogil=True)
def _bisect_crossing(w, V, c, M, use_expm, p0, A1, reAS0, imAS0, reGE0, imGE0,
                     lo, hi, want_up, refine_tol):
    # bracket carries a sign change of C - EPS_DEAD by construction
    while hi - lo > refine_tol:
        mid = 0.5 * (lo + hi)
        high = _conc_at(w, V, c, M, use_expm, p0, A1,
                        reAS0, imAS0, reGE0, imGE0, mid) > EPS_DEAD
        if want_up == high:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@njit(cache=True, nogil=True)
def _golden_extremum(w, V, c, M, use_expm, p0, A1, reAS0, imAS0, reGE0, imGE0,
                     lo, hi, sign, refine_tol, raw):
    # golden-section on sign*C; sign=+1 finds a maximum, -1 a minimum.
    # raw=True searches the unclamped max(K1, K2) instead.
    x1 = hi - _INVGOLD * (hi - lo)
    x2 = lo + _INVGOLD * (hi - lo)
    if raw:
        f1 = sign * _conc_raw_at(w, V, c, M, use_expm, p0, A1, reAS0, imAS0, reGE0, imGE0, x1)
        f2 = sign * _conc_raw_at(w, V, c, M, use_expm, p0, A1, reAS0, imAS0, reGE0, imGE0, x2)
    else:
        f1 = sign * _conc_at(w, V, c, M, use_expm, p0, A1, reAS0, imAS0, reGE0, imGE0, x1)
        f2 = sign * _conc_at(w, V, c, M, use_expm, p0, A1, reAS0, imAS0, reGE0, imGE0, x2)
    while hi - lo > refine_tol:
        if f1 < f2:
            lo = x1
            x1 = x2
            f1 = f2
            x2 = lo + _INVGOLD * (hi - lo)
            if raw:
                f2 = sign * _conc_raw_at(w, V, c, M, use_expm, p0, A1,
                                         reAS0, imAS0, reGE0, imGE0, x2)
            else:
                f2 = sign * _conc_at(w, V, c, M, use_expm, p0, A1,
                                     reAS0, imAS0, reGE0, imGE0, x2)
        else:
            hi = x2
            x2 = x1
            f2 = f1
            x1 = hi - _INVGOLD * (hi - lo)
            if raw:
                f1 = sign * _conc_raw_at(w, V, c, M, use_expm, p0, A1,
                                         reAS0, imAS0, reGE0, imGE0, x1)
            else:
                f1 = sign * _conc_at(w, V, c, M, use_expm, p0, A1,
                                     reAS0, imAS0, reGE0, imGE0, x1)
    t = 0.5 * (lo + hi)
    if raw:
        f = _conc_raw_at(w, V, c, M, use_expm, p0, A1, reAS0, imAS0, reGE0, imGE0, t)
    else:
        f = _conc_at(w, V, c, M, use_expm, p0, A1, reAS0, imAS0, reGE0, imGE0, t)
    return t, f


@njit(cache=True, nogil=True)
def events_kernel(A1, B1, A2, B2, p0, reAS0, imAS0, reGE0, imGE0, taus, refine_tol):
    """Entanglement events along one trajectory.

    Returns (death_time, birth_time, revival, enhancement, max_C, max_time,
    revival_amplitude); missing times are NaN, flags are 0/1. Threshold
    crossings are refined by bisection on the exact propagator and maxima
    by golden section. Sampled local minima are drilled into at machine
    depth on the unclamped concurrence, so a dip through zero far narrower
    than the sample spacing (including exact touches at zero temperature)
    still registers as a death/birth pair; bumps narrower than the spacing
    remain invisible. revival_amplitude is the largest concurrence after
    the first death, 0 when there is no death.
    """
    M = generator_kernel(A1, B1, A2, B2)
    w, V, Vinv, cond = eig_decompose(M)
    use_expm = (not np.isfinite(cond)) or cond > COND_LIMIT
    c = Vinv @ p0.astype(np.complex128)
    n = taus.size
    C = np.empty(n)
    for k in range(n):
        C[k] = _conc_at(w, V, c, M, use_expm, p0, A1, reAS0, imAS0, reGE0, imGE0, taus[k])

    # crossing times and directions, in chronological order
    cross_t = np.empty(2 * n)
    cross_up = np.empty(2 * n, np.int8)
    ncross = 0
    above = C[0] > EPS_DEAD
    for k in range(1, n):
        now = C[k] > EPS_DEAD
        if now != above:
            t = _bisect_crossing(w, V, c, M, use_expm, p0, A1,
                                 reAS0, imAS0, reGE0, imGE0,
                                 taus[k - 1], taus[k], now, refine_tol)
            cross_t[ncross] = t
            cross_up[ncross] = 1 if now else 0
            ncross += 1
            above = now
        elif (now and k < n - 1 and C[k] <= C[k - 1] and C[k] <= C[k + 1]
              and C[k - 1] > EPS_DEAD and C[k + 1] > EPS_DEAD):
            # local minimum above threshold: the true dip may cross between
            # samples; certify at machine depth (a zero-temperature dip is a
            # V touching zero over a vanishing time window)
            dip_tol = 1e-12 * max(1.0, taus[k + 1])
            tmin, fmin = _golden_extremum(w, V, c, M, use_expm, p0, A1,
                                          reAS0, imAS0, reGE0, imGE0,
                                          taus[k - 1], taus[k + 1], -1.0,
                                          dip_tol, True)
            if fmin <= EPS_DEAD:
                td = _bisect_crossing(w, V, c, M, use_expm, p0, A1,
                                      reAS0, imAS0, reGE0, imGE0,
                                      taus[k - 1], tmin, False, refine_tol)
                tb = _bisect_crossing(w, V, c, M, use_expm, p0, A1,
                                      reAS0, imAS0, reGE0, imGE0,
                                      tmin, taus[k + 1], True, refine_tol)
                cross_t[ncross] = td
                cross_up[ncross] = 0
                ncross += 1
                cross_t[ncross] = tb
                cross_up[ncross] = 1
                ncross += 1

    death = np.nan
    birth = np.nan
    for m in range(ncross):
        if cross_up[m] == 0 and np.isnan(death):
            death = cross_t[m]
        if cross_up[m] == 1 and np.isnan(birth):
            birth = cross_t[m]

    # golden-section refinement of the sampled maximum
    kbest = 0
    cbest = C[0]
    for k in range(1, n):
        if C[k] > cbest:
            cbest = C[k]
            kbest = k
    lo = taus[kbest - 1] if kbest > 0 else taus[0]
    hi = taus[kbest + 1] if kbest < n - 1 else taus[n - 1]
    tmax, fmax = _golden_extremum(w, V, c, M, use_expm, p0, A1,
                                  reAS0, imAS0, reGE0, imGE0, lo, hi, 1.0,
                                  refine_tol, False)
    max_c = cbest
    max_t = taus[kbest]
    if fmax > max_c:
        max_c = fmax
        max_t = tmax

    # largest concurrence after the first death
    rev_amp = 0.0
    if not np.isnan(death):
        kpost = -1
        cpost = 0.0
        for k in range(n):
            if taus[k] > death and C[k] > cpost:
                cpost = C[k]
                kpost = k
        if kpost >= 0:
            plo = taus[kpost - 1] if kpost > 0 else taus[0]
            if plo < death:
                plo = death
            phi = taus[kpost + 1] if kpost < n - 1 else taus[n - 1]
            tpost, fpost = _golden_extremum(w, V, c, M, use_expm, p0, A1,
                                            reAS0, imAS0, reGE0, imGE0,
                                            plo, phi, 1.0, refine_tol, False)
            rev_amp = cpost if cpost > fpost else fpost

    revival = 1 if (not np.isnan(death)) and (not np.isnan(birth)) and birth > death else 0
    enhancement = 1 if max_c > C[0] + EPS_ENH else 0
    return death, birth, revival, enhancement, max_c, max_t, rev_amp


@njit(cache=True, nogil=True)
def events_cells_kernel(a_vals, L_vals, p0s, reAS0s, imAS0s, reGE0s, imGE0s,
                        d1, d2, thermal, order21, taus, refine_tol):
    """Event detection over a list of cells for one bath mode.

    Arrays are indexed by cell; the output row layout is
    (death, birth, revival, enhancement, max_C, max_time, revival_amplitude).
    """
    n = a_vals.size
    out = np.empty((n, 7))
    for k in range(n):
        A1, B1, A2, B2 = assemble_kernel(a_vals[k], L_vals[k], d1, d2, thermal, order21)
        d, b, rev, enh, mc, mt, ra = events_kernel(
            A1, B1, A2, B2, p0s[k], reAS0s[k], imAS0s[k], reGE0s[k], imGE0s[k],
            taus, refine_tol)
        out[k, 0] = d
        out[k, 1] = b
        out[k, 2] = rev
        out[k, 3] = enh
        out[k, 4] = mc
        out[k, 5] = mt
        out[k, 6] = ra
    return out
