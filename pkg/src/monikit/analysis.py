"""Fits and special functions for the entanglement phase diagram.

All fits are weighted least squares in bits. The entropy-profile
ansatz combines, per data point (l, L):

    vol      average entanglement of a uniformly random stabilizer
             state on the same bipartition (volume-law column),
    log      (L/3) ln[(L/pi) sin(pi l / L)]   leading conformal term,
    sublog   (1/3) ln[(L/pi) sin(pi l / L)]   subleading term,
    area     L                                 boundary-law term,
    const    -1                                topological offset.

The Lifshitz profile J(x) is built from the Jacobi theta constant
theta3(it) and the Dedekind eta(it) on the imaginary axis; both obey
t^(-1/2) modular identities that the tests pin to 1e-10. x J(x) tends
to -pi/24 as x -> 0 (the eta prefactor dominates), reached numerically
by one Richardson halving step since x J(x) is analytic at 0+.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

LN2 = math.log(2.0)

# lim_{x->0} x J(x): only the eta(2x) ~ (2x)^(-1/2) exp(-pi/(24x))
# factor survives multiplication by x
LIFSHITZ_XJ_LIMIT = -math.pi / 24


# -- volume-law reference -------------------------------------------------------


def vol_term(l, L):
    """Mean entanglement (bits) of a random stabilizer state across the
    cylinder cut at l of L columns: |A| - 2^(2|A| - n - 1)/ln 2, with
    the shorter side of the cut taken (profiles are reflection
    symmetric). |A| = 2 L l of n = 2 L^2 qubits."""
    l = np.asarray(l, float)
    short = np.minimum(l, L - l)
    m = 2.0 * L * short
    return m - np.exp2(2.0 * m - 2.0 * L * L - 1.0) / LN2


# -- weighted linear fits -------------------------------------------------------


@dataclass
class FitResult:
    names: tuple
    values: np.ndarray
    stderrs: np.ndarray
    cov: np.ndarray
    chi2: float
    dof: int

    def __getitem__(self, name: str) -> tuple[float, float]:
        i = self.names.index(name)
        return float(self.values[i]), float(self.stderrs[i])


_STDERR_FLOOR = 1e-3  # bits; keeps exact lattice points from dominating


def weighted_lsq(design: np.ndarray, y: np.ndarray, stderr: np.ndarray,
                 names) -> FitResult:
    names = tuple(names)
    sigma = np.maximum(np.asarray(stderr, float), _STDERR_FLOOR)
    w = 1.0 / sigma
    aw = design * w[:, None]
    yw = np.asarray(y, float) * w
    u, s, vt = np.linalg.svd(aw, full_matrices=False)
    if s[0] == 0 or s[-1] / s[0] < 1e-9:
        bad = set()
        for row in range(len(s)):
            if s[0] == 0 or s[row] / s[0] < 1e-9:
                null = np.abs(vt[row])
                bad |= {i for i in range(len(names))
                        if null[i] > 0.05 * null.max()}
        terms = [names[i] for i in sorted(bad)]
        raise ValueError(f"design matrix is degenerate; confounded terms: {terms}")
    coef = vt.T @ ((u.T @ yw) / s)
    cov = (vt.T / s ** 2) @ vt
    resid = yw - aw @ coef
    return FitResult(names, coef, np.sqrt(np.diag(cov)), cov,
                     float(resid @ resid), len(yw) - len(names))


def _log_sine(l, L):
    return np.log((L / np.pi) * np.sin(np.pi * np.asarray(l, float) / L))


_TERM_NAME = {"vol": "v", "log": "c", "sublog": "c1", "area": "a",
              "const": "gamma"}


def profile_window(l, L):
    """Fit window: drop the trivial edge points l <= 1 and l >= L - 1."""
    l = np.asarray(l)
    L = np.asarray(L)
    return (l >= 2) & (l <= L - 2)


def fit_page_ansatz(l, L, mean, stderr,
                    terms=("vol", "log", "sublog", "area", "const")) -> FitResult:
    """Fit entropy-profile data (possibly several system sizes at once)
    to the selected ansatz terms; returns coefficients named
    v, c, c1, a, gamma."""
    l = np.asarray(l, float)
    L = np.asarray(L, float)
    mean = np.asarray(mean, float)
    stderr = np.asarray(stderr, float)
    keep = profile_window(l, L)
    if keep.sum() < len(terms):
        raise ValueError("not enough points inside the fit window")
    l, L, mean, stderr = l[keep], L[keep], mean[keep], stderr[keep]
    cols = []
    for t in terms:
        if t == "vol":
            cols.append(vol_term(l, L))
        elif t == "log":
            cols.append(L * _log_sine(l, L) / 3.0)
        elif t == "sublog":
            cols.append(_log_sine(l, L) / 3.0)
        elif t == "area":
            cols.append(L.astype(float) if L.shape else np.full(len(l), float(L)))
        elif t == "const":
            cols.append(np.full(len(l), -1.0))
        else:
            raise ValueError(f"unknown term {t!r}")
    design = np.column_stack(cols)
    return weighted_lsq(design, mean, stderr, [_TERM_NAME[t] for t in terms])


def fit_through_origin(x, y, stderr) -> tuple[float, float, float, int]:
    """One-parameter weighted fit y = k x; returns (k, k_err, chi2, dof)."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    sigma = np.maximum(np.asarray(stderr, float), _STDERR_FLOOR)
    w = 1.0 / sigma ** 2
    den = float(np.sum(w * x * x))
    if den == 0:
        raise ValueError("all abscissae are zero")
    k = float(np.sum(w * x * y)) / den
    err = 1.0 / math.sqrt(den)
    chi2 = float(np.sum(w * (y - k * x) ** 2))
    return k, err, chi2, len(x) - 1


def fit_cft_collapse(l, mean, stderr, L) -> FitResult:
    """One-parameter collapse fit of an entropy profile at a conformal
    point: (S(l) - S(L/2)) / L = c * ln sin(pi l / L) / 3.

    Subtracting the midpoint removes area and constant terms exactly,
    so c is the only free coefficient. Needs even L and a data point at
    l = L/2."""
    l = np.asarray(l, float)
    mean = np.asarray(mean, float)
    stderr = np.asarray(stderr, float)
    if L % 2:
        raise ValueError("collapse fit needs even L (midpoint cut required)")
    mid = np.nonzero(l == L // 2)[0]
    if len(mid) != 1:
        raise ValueError("need exactly one data point at l = L/2")
    m = int(mid[0])
    keep = profile_window(l, np.full(len(l), L))
    keep[m] = False
    if not keep.any():
        raise ValueError("not enough points inside the fit window")
    x = np.log(np.sin(np.pi * l[keep] / L)) / 3.0
    y = (mean[keep] - mean[m]) / L
    sig = np.sqrt(stderr[keep] ** 2 + stderr[m] ** 2) / L
    c, err, chi2, dof = fit_through_origin(x, y, sig)
    return FitResult(("c",), np.array([c]), np.array([err]),
                     np.array([[err * err]]), chi2, dof)


# -- modular functions ----------------------------------------------------------


def theta3(t: float, tol: float = 1e-15) -> float:
    """Jacobi theta_3(it) = sum_n exp(-pi t n^2), t > 0."""
    if t <= 0:
        raise ValueError("theta3 needs t > 0")
    s = 1.0
    n = 1
    while True:
        term = math.exp(-math.pi * t * n * n)
        if term < tol:
            return s
        s += 2.0 * term
        n += 1


def eta(t: float, tol: float = 1e-15) -> float:
    """Dedekind eta(it) = exp(-pi t / 12) prod_n (1 - exp(-2 pi n t))."""
    if t <= 0:
        raise ValueError("eta needs t > 0")
    q = math.exp(-2.0 * math.pi * t)
    prod = 1.0
    qn = q
    while qn >= tol:
        prod *= 1.0 - qn
        qn *= q
    return math.exp(-math.pi * t / 12.0) * prod


def lifshitz_J(x, lam: float):
    """Entropy profile shape of the anisotropic critical point:
    J(x) = -ln[ theta3(lam x) theta3(lam (1-x)) / (eta(2x) eta(2(1-x))) ]."""

    def one(xx: float) -> float:
        if not 0.0 < xx < 1.0:
            raise ValueError("J is defined on 0 < x < 1")
        return -(math.log(theta3(lam * xx)) + math.log(theta3(lam * (1.0 - xx)))
                 - math.log(eta(2.0 * xx)) - math.log(eta(2.0 * (1.0 - xx))))

    if np.ndim(x) == 0:
        return one(float(x))
    return np.array([one(float(v)) for v in np.asarray(x).ravel()])


# -- Lifshitz profile fit ---------------------------------------------------------


@dataclass
class LifshitzFit:
    lam: float          # dimensionless anisotropy of the profile
    beta: float         # amplitude multiplying J
    offset: float       # constant background
    chi2: float
    dof: int
    flat: bool = False  # objective indifferent to lam (beta ~ 0 data)
    lam_grid: np.ndarray = field(repr=False, default=None)
    grid_chi2: np.ndarray = field(repr=False, default=None)

    def predict(self, l, L):
        x = np.asarray(l, float) / L
        return self.beta * lifshitz_J(x, self.lam) + self.offset


def _lifshitz_chi2(lam, x, y, w):
    j = lifshitz_J(x, lam)
    a = np.column_stack([j, np.ones_like(j)]) * np.sqrt(w)[:, None]
    yw = y * np.sqrt(w)
    coef, *_ = np.linalg.lstsq(a, yw, rcond=None)
    r = yw - a @ coef
    return float(r @ r), coef


def fit_lifshitz(l, mean, stderr, L,
                 lam_grid=None) -> LifshitzFit:
    """Two linear parameters (amplitude, offset) and one nonlinear
    profile parameter lam, scanned on a log grid then polished by
    golden-section search."""
    l = np.asarray(l, float)
    keep = profile_window(l, np.full(len(l), L))
    x = l[keep] / L
    y = np.asarray(mean, float)[keep]
    sigma = np.maximum(np.asarray(stderr, float)[keep], _STDERR_FLOOR)
    w = 1.0 / sigma ** 2
    if lam_grid is None:
        lam_grid = np.logspace(-1.0, 1.5, 60)
    chi = np.array([_lifshitz_chi2(lam, x, y, w)[0] for lam in lam_grid])
    i = int(np.argmin(chi))
    spread = chi.max() - chi.min()
    flat = bool(spread <= 1e-12 * max(1.0, chi.max()))
    lo = math.log(lam_grid[max(i - 1, 0)])
    hi = math.log(lam_grid[min(i + 1, len(lam_grid) - 1)])
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc = _lifshitz_chi2(math.exp(c), x, y, w)[0]
    fd = _lifshitz_chi2(math.exp(d), x, y, w)[0]
    for _ in range(60):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = _lifshitz_chi2(math.exp(c), x, y, w)[0]
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = _lifshitz_chi2(math.exp(d), x, y, w)[0]
    lam = math.exp((a + b) / 2.0)
    chi2, coef = _lifshitz_chi2(lam, x, y, w)
    return LifshitzFit(lam=lam, beta=float(coef[0]), offset=float(coef[1]),
                       chi2=chi2, dof=len(x) - 3, flat=flat,
                       lam_grid=lam_grid, grid_chi2=chi)


# -- finite-size crossing ---------------------------------------------------------


@dataclass
class CrossingResult:
    p_c: float
    p_c_err: float
    nu_inv: float
    pair_crossings: list          # (L1, L2, p_cross, err)
    nu_grid: np.ndarray = field(repr=False, default=None)
    nu_cost: np.ndarray = field(repr=False, default=None)


def _interp_crossing(p, d, sig):
    """First interpolated sign change of the difference d, with error."""
    for m in range(len(p) - 1):
        if d[m] == 0.0:
            continue
        if d[m] * d[m + 1] <= 0.0 and d[m + 1] != d[m]:
            t = d[m] / (d[m] - d[m + 1])
            pc = p[m] + t * (p[m + 1] - p[m])
            slope = abs((d[m + 1] - d[m]) / (p[m + 1] - p[m]))
            sig_d = math.sqrt(((1 - t) * sig[m]) ** 2
                              + (t * sig[m + 1]) ** 2)
            return float(pc), float(sig_d / slope if slope > 0 else np.inf)
    return None


def _weighted_polyfit(p, d, w, deg):
    """Coefficients (increasing powers) and covariance of a weighted fit."""
    design = np.vander(p, deg + 1, increasing=True)
    sqw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(design * sqw[:, None], d * sqw, rcond=None)
    cov = np.linalg.inv(design.T @ (design * w[:, None]))
    return coef, cov


def _local_quad_crossing(p, d, sig, half=2, iters=12):
    """Root of the difference d(p) from a weighted quadratic fit over the
    2*half+1 grid points nearest the root, iterated to a fixed point.

    Averaging over a neighbourhood keeps a single noise flip at the window
    edge from masquerading as the crossing, which any two-point
    interpolation is defenceless against when |d| is comparable to its
    error over part of the scan. The seed is the weighted-linear root
    (clipped into the window); the quoted error is the delta-method
    propagation of the local fit covariance.
    """
    n = len(p)
    w = 1.0 / np.maximum(sig, _STDERR_FLOOR) ** 2
    (b0, b1), _ = _weighted_polyfit(p, d, w, 1)
    if b1 == 0.0:
        return None
    root = float(np.clip(-b0 / b1, p[0], p[-1]))
    a0 = a1 = a2 = 0.0
    cov = None
    for _ in range(iters):
        center = int(np.clip(np.argmin(np.abs(p - root)), half,
                             n - 1 - half))
        window = slice(center - half, center + half + 1)
        coef, cov = _weighted_polyfit(p[window], d[window], w[window], 2)
        a0, a1, a2 = (float(v) for v in coef)
        if abs(a2) < 1e-12 * max(abs(a1), 1.0):
            if a1 == 0.0:
                return None
            cands = [-a0 / a1]
        else:
            disc = a1 * a1 - 4.0 * a2 * a0
            if disc < 0.0:
                return None
            sq = math.sqrt(disc)
            cands = [(-a1 - sq) / (2.0 * a2), (-a1 + sq) / (2.0 * a2)]
        keep = [x for x in cands
                if np.sign(a1 + 2.0 * a2 * x) == np.sign(b1)]
        new = min(keep or cands, key=lambda x: abs(x - root))
        if not p[0] - 1e-12 <= new <= p[-1] + 1e-12:
            return None
        done = abs(new - root) < 1e-10
        root = float(new)
        if done:
            break
    slope = a1 + 2.0 * a2 * root
    if slope == 0.0:
        return None
    grad = np.array([1.0, root, root * root]) / -slope
    var = float(grad @ cov @ grad)
    return root, float(math.sqrt(max(var, 0.0)))


def _pair_crossing(p, y1, e1, y2, e2):
    """Crossing of two curves, from the zero of their difference.

    Scans with at least five shared points use the local-quadratic root;
    sparser scans, and any pair the local fit rejects, fall back to the
    first interpolated sign change.
    """
    d = y1 - y2
    sig = np.hypot(e1, e2)
    if len(p) >= 5:
        hit = _local_quad_crossing(p, d, sig)
        if hit is not None:
            return hit
    return _interp_crossing(p, d, sig)


def _collapse_cost(curves, p_c, nu_inv, n_knots=14):
    """Weighted misfit of all points to one piecewise-linear master
    curve of the scaling variable u = (p - p_c) L^(1/nu).

    The knot count balances master-curve flexibility against
    overfitting; too few knots cannot track a steep transition region
    and bias the recovered exponent low. On small inputs the count is
    capped so at least six residual degrees of freedom remain (never
    below three knots); otherwise the master could interpolate the
    data exactly and flatten the cost landscape.
    """
    us, ys, ws = [], [], []
    for L, (p, y, e) in curves.items():
        u = (np.asarray(p, float) - p_c) * float(L) ** nu_inv
        us.append(u)
        ys.append(np.asarray(y, float))
        ws.append(1.0 / np.maximum(np.asarray(e, float), _STDERR_FLOOR) ** 2)
    u = np.concatenate(us)
    y = np.concatenate(ys)
    w = np.concatenate(ws)
    n_knots = min(n_knots, max(3, len(u) - 6))
    knots = np.linspace(u.min(), u.max(), n_knots)
    span = knots[1] - knots[0]
    if span == 0:
        return np.inf
    pos = np.clip((u - knots[0]) / span, 0, n_knots - 1 - 1e-12)
    left = pos.astype(int)
    frac = pos - left
    design = np.zeros((len(u), n_knots))
    design[np.arange(len(u)), left] = 1 - frac
    design[np.arange(len(u)), left + 1] = frac
    aw = design * np.sqrt(w)[:, None]
    yw = y * np.sqrt(w)
    coef, *_ = np.linalg.lstsq(aw, yw, rcond=None)
    r = yw - aw @ coef
    dof = max(len(u) - n_knots, 1)
    return float(r @ r) / dof


def tmi_crossing(curves: dict) -> CrossingResult:
    """Locate the common crossing of I3(p; L) curves.

    curves maps L -> (p array, mean array, stderr array). The critical
    point is the error-weighted mean of the pairwise crossings (see
    _pair_crossing); the exponent comes from minimizing the data
    collapse cost over 1/nu in [0.5, 2.0], using only the sizes that
    participate in at least one pair crossing (a curve that never
    crosses the others cannot satisfy the collapse ansatz).
    """
    sizes = sorted(curves)
    if len(sizes) < 2:
        raise ValueError("need at least two system sizes")
    pairs = []
    for ii in range(len(sizes)):
        for jj in range(ii + 1, len(sizes)):
            L1, L2 = sizes[ii], sizes[jj]
            p1, y1, e1 = (np.asarray(v, float) for v in curves[L1])
            p2, y2, e2 = (np.asarray(v, float) for v in curves[L2])
            o1, o2 = np.argsort(p1), np.argsort(p2)
            p1, y1, e1 = p1[o1], y1[o1], e1[o1]
            p2, y2, e2 = p2[o2], y2[o2], e2[o2]
            common = np.intersect1d(p1, p2)
            if len(common) < 2:
                raise ValueError(f"sizes {L1} and {L2} share too few p values")
            i1 = np.searchsorted(p1, common)
            i2 = np.searchsorted(p2, common)
            hit = _pair_crossing(common, y1[i1], e1[i1], y2[i2], e2[i2])
            if hit is not None:
                pairs.append((L1, L2, hit[0], hit[1]))
    if not pairs:
        raise ValueError("no pairwise crossing found in the scanned window")
    pc_vals = np.array([p for *_, p, _ in pairs])
    pc_errs = np.maximum(np.array([e for *_, e in pairs]), 1e-6)
    wts = 1.0 / pc_errs ** 2
    p_c = float(np.sum(wts * pc_vals) / np.sum(wts))
    scatter = (float(np.sqrt(np.sum(wts * (pc_vals - p_c) ** 2)
                             / np.sum(wts) / max(len(pairs) - 1, 1)))
               if len(pairs) > 1 else 0.0)
    p_c_err = max(float(1.0 / math.sqrt(np.sum(wts))), scatter)

    # The single-master-curve ansatz only holds for curves that exhibit
    # the crossing; a size kept out of every pair (e.g. offset by a
    # lattice-commensuration effect) would otherwise drag the cost
    # minimum to the grid edge.
    crossing_sizes = {L for L1, L2, *_ in pairs for L in (L1, L2)}
    collapse = {L: curves[L] for L in crossing_sizes}
    grid = np.arange(0.5, 2.0001, 0.01)
    cost = np.array([_collapse_cost(collapse, p_c, g) for g in grid])
    nu_inv = float(grid[int(np.argmin(cost))])
    return CrossingResult(p_c=p_c, p_c_err=p_c_err, nu_inv=nu_inv,
                          pair_crossings=pairs, nu_grid=grid, nu_cost=cost)
