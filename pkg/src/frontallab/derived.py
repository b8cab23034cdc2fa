"""Normal congruence, normal ruled surface, and focal surfaces.

The congruence f + w*nu degenerates exactly on the union of the ruled surface
swept by the normal along the singular image curve and the two focal sheets
C_j = f + (1/kappa_j) * nu.  The w-direction is handled in closed form
(its partial is just nu), so jets stay bivariate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_ORDER, DEFAULT_TOL, Tolerances
from .errors import PreconditionError
from .frontal import (
    FrameBundle,
    InvariantProfile,
    eval_values,
    frame_bundle,
    invariant_profile,
    invariant_derivatives,
    invariants_at,
)
from .surfaces import SurfaceDef


# ---------------------------------------------------------------------------
# normal congruence


@dataclass
class CongruencePoint:
    u: float
    v: float
    w: float
    point: np.ndarray
    jacobian: float
    factor1: float  # 1 - w*kappa1
    factor2: float  # 1 - w*kappa2
    lam: float
    residual: float  # |jacobian - factor1*factor2*lam| (relative)


def congruence_check(
    surface: SurfaceDef,
    samples,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
) -> list[CongruencePoint]:
    """Evaluate det J of f + w*nu two ways at each (u, v, w) sample.

    The 3x3 determinant of (f_u + w nu_u, f_v + w nu_v, nu) must factor as
    (1 - w kappa1)(1 - w kappa2) * lambda.
    """
    samples = np.asarray(samples, dtype=float).reshape(-1, 3)
    us, vs, ws = samples[:, 0], samples[:, 1], samples[:, 2]

    def extract(b: FrameBundle) -> dict:
        sq = b.sqrt_gamma
        return {
            "f": b.f.value,
            "fu": b.fu.value,
            "fv": b.fv.value,
            "nu": b.nu.value,
            "nuu": b.nu_u.value,
            "nuv": b.nu_v.value,
            "k1": np.asarray((b.mean + sq).value),
            "k2": np.asarray((b.mean - sq).value),
            "lam": np.asarray(b.lam.value),
        }

    vals = eval_values(surface, us, vs, extract, order=order, tol=tol)
    cols = np.stack(
        [
            vals["fu"] + ws[:, None] * vals["nuu"],
            vals["fv"] + ws[:, None] * vals["nuv"],
            vals["nu"],
        ],
        axis=-1,
    )
    jac = np.linalg.det(cols)
    f1 = 1.0 - ws * vals["k1"]
    f2 = 1.0 - ws * vals["k2"]
    product = f1 * f2 * vals["lam"]
    scale = np.maximum(1.0, np.maximum(np.abs(jac), np.abs(product)))
    residual = np.abs(jac - product) / scale
    out = []
    for i in range(samples.shape[0]):
        out.append(
            CongruencePoint(
                u=float(us[i]),
                v=float(vs[i]),
                w=float(ws[i]),
                point=vals["f"][i] + ws[i] * vals["nu"][i],
                jacobian=float(jac[i]),
                factor1=float(f1[i]),
                factor2=float(f2[i]),
                lam=float(vals["lam"][i]),
                residual=float(residual[i]),
            )
        )
    return out


# ---------------------------------------------------------------------------
# sources for normal-ruled-surface analysis (surfaces and synthesized frames)


class SurfaceNRSource:
    """Adapter exposing the axis data a ruled-surface analysis needs."""

    def __init__(self, surface: SurfaceDef, order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL):
        self.surface = surface
        self.order = order
        self.tol = tol
        self.name = surface.name
        self.u_range = surface.internal_u_range

    def invariants(self, us) -> InvariantProfile:
        return invariant_profile(self.surface, us, order=self.order, tol=self.tol)

    def derivatives(self, u0: float):
        return invariant_derivatives(self.surface, u0, order=self.order, tol=self.tol)

    def frame(self, us) -> dict:
        us = np.atleast_1d(np.asarray(us, dtype=float))
        b = frame_bundle(self.surface, us, np.zeros_like(us), order=self.order, tol=self.tol)
        t_raw = b.fu.value
        speed = np.linalg.norm(t_raw, axis=-1)
        tangent = t_raw / speed[..., None]
        nuhat = b.nu.value
        hhat = np.cross(nuhat, tangent)
        return {"gamma": b.f.value, "T": tangent, "h": hhat, "nu": nuhat, "speed": speed}

    def torsion_evidence(self, us) -> np.ndarray:
        """det(gamma', nu, nu') / |gamma'|^2 -- must match kappa_t pointwise."""
        us = np.atleast_1d(np.asarray(us, dtype=float))
        b = frame_bundle(self.surface, us, np.zeros_like(us), order=self.order, tol=self.tol)
        gp = b.fu.value
        nu = b.nu.value
        nup = b.nu_u.value
        det = np.einsum("...i,...i->...", np.cross(gp, nu), nup)
        return det / np.einsum("...i,...i->...", gp, gp)


def as_nr_source(source, *, order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL):
    if isinstance(source, SurfaceDef):
        return SurfaceNRSource(source, order, tol)
    return source


# ---------------------------------------------------------------------------
# normal ruled surface


@dataclass
class RuledPoint:
    u: float
    w: float
    point: np.ndarray
    nr_u: np.ndarray  # unit-speed parameter derivative: (1 - w kappa_nu) T - w kappa_t h
    nr_w: np.ndarray  # = nu
    singular: bool


def nr_eval(source, u: float, w: float, *, order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> RuledPoint:
    src = as_nr_source(source, order=order, tol=tol)
    prof = src.invariants([u])
    fr = src.frame([u])
    kn, kt = float(prof.kappa_nu[0]), float(prof.kappa_t[0])
    point = fr["gamma"][0] + w * fr["nu"][0]
    nr_u = (1.0 - w * kn) * fr["T"][0] - w * kt * fr["h"][0]
    singular = abs(kt) <= tol.band_hi and abs(1.0 - w * kn) <= tol.band_hi
    return RuledPoint(u=float(u), w=float(w), point=point, nr_u=nr_u, nr_w=fr["nu"][0], singular=bool(singular))


def nr_grid(source, us, ws, *, order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Image points gamma(u) + w nu(u) on a parameter grid (len(us), len(ws), 3)."""
    src = as_nr_source(source, order=order, tol=tol)
    fr = src.frame(us)
    ws = np.asarray(ws, dtype=float)
    return fr["gamma"][:, None, :] + ws[None, :, None] * fr["nu"][:, None, :]


@dataclass
class SingularCurveTrace:
    surface_tag: str  # "nr" | "c1" | "c2"
    points: np.ndarray  # (n, 2) parameter points
    image: np.ndarray  # (n, 3)
    kinds: list[str]  # "first" | "second" | "undetermined"
    notes: list[str] = field(default_factory=list)
    max_defining_residual: float = 0.0

    @property
    def empty(self) -> bool:
        return self.points.shape[0] == 0


@dataclass
class DevelopableReport:
    developable: bool
    max_abs_kappa_t: float
    evidence_max_mismatch: float  # |det-form torsion - kappa_t| over samples
    threshold: float


def nr_developable_test(
    source,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    samples: int = 41,
) -> DevelopableReport:
    """Developable iff the cuspidal torsion vanishes along the curve.

    Cross-checked against the independent unit-speed determinant form
    det(gamma', nu, nu')/|gamma'|^2.
    """
    src = as_nr_source(source, order=order, tol=tol)
    lo, hi = src.u_range
    pad = 1e-3 * (hi - lo)
    us = np.linspace(lo + pad, hi - pad, samples)
    prof = src.invariants(us)
    evidence = src.torsion_evidence(us)
    mismatch = float(np.max(np.abs(evidence - prof.kappa_t)))
    max_kt = float(np.max(np.abs(prof.kappa_t)))
    scale = max(1.0, float(np.max(np.abs(prof.kappa_nu))), max_kt)
    return DevelopableReport(
        developable=max_kt <= tol.band_lo * scale,
        max_abs_kappa_t=max_kt,
        evidence_max_mismatch=mismatch,
        threshold=tol.band_lo * scale,
    )


def nr_noncylindrical(source, *, order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL, samples: int = 41) -> bool:
    src = as_nr_source(source, order=order, tol=tol)
    lo, hi = src.u_range
    pad = 1e-3 * (hi - lo)
    prof = src.invariants(np.linspace(lo + pad, hi - pad, samples))
    mags = np.maximum(np.abs(prof.kappa_nu), np.abs(prof.kappa_t))
    return bool(np.max(mags) > tol.band_hi)


def nr_singular_points(
    source,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    samples: int | None = None,
) -> SingularCurveTrace:
    """Singular set of the normal ruled surface.

    Nondevelopable case: isolated points (u0, 1/kappa_nu(u0)) at the zeros of
    the cuspidal torsion, found by sign scan + bisection.  Developable case:
    the whole curve w = 1/kappa_nu(u).
    """
    src = as_nr_source(source, order=order, tol=tol)
    if not nr_noncylindrical(src, order=order, tol=tol):
        raise PreconditionError(
            "normal ruled surface is cylindrical ((kappa_nu, kappa_t) = (0,0) along the curve)"
        )
    lo, hi = src.u_range
    pad = 1e-3 * (hi - lo)
    n = samples if samples is not None else tol.scan_cells
    us = np.linspace(lo + pad, hi - pad, n + 1)
    prof = src.invariants(us)
    dev = nr_developable_test(src, order=order, tol=tol)
    notes: list[str] = []

    if dev.developable:
        mask = np.abs(prof.kappa_nu) > tol.band_hi
        if not np.all(mask):
            notes.append("points with kappa_nu ~ 0 skipped (singular ruling at infinity)")
        uu = us[mask]
        ww = 1.0 / prof.kappa_nu[mask]
        fr = src.frame(uu)
        image = fr["gamma"] + ww[:, None] * fr["nu"]
        # null direction of the ruled map is d/du; the singular curve
        # (u, 1/kappa_nu(u)) is tangent to it exactly where kappa_nu' = 0
        dkn = np.gradient(prof.kappa_nu[mask], uu) if uu.size >= 2 else np.zeros_like(uu)
        kinds = ["second" if abs(d) <= tol.band_lo else "first" for d in dkn]
        return SingularCurveTrace(
            surface_tag="nr",
            points=np.stack([uu, ww], axis=-1),
            image=image,
            kinds=kinds,
            notes=notes,
            max_defining_residual=float(np.max(np.abs(prof.kappa_t))) if uu.size else 0.0,
        )

    # nondevelopable: bisect the sign changes of kappa_t(u)
    kt = prof.kappa_t
    roots: list[float] = []
    exact = np.where(np.abs(kt) == 0.0)[0]
    for i in exact:
        roots.append(float(us[i]))
    brackets = []
    for i in range(n):
        if kt[i] == 0.0 or kt[i + 1] == 0.0:
            continue
        if np.sign(kt[i]) != np.sign(kt[i + 1]):
            brackets.append((us[i], us[i + 1], kt[i]))
    if brackets:
        a = np.array([b[0] for b in brackets])
        bb = np.array([b[1] for b in brackets])
        fa = np.array([b[2] for b in brackets])
        span = hi - lo
        iters = max(1, int(math.ceil(math.log2(span / tol.bisection))))
        for _ in range(iters):
            mid = 0.5 * (a + bb)
            fm = src.invariants(mid).kappa_t
            left = np.sign(fm) == np.sign(fa)
            a = np.where(left, mid, a)
            fa = np.where(left, fm, fa)
            bb = np.where(left, bb, mid)
        roots.extend((0.5 * (a + bb)).tolist())
    roots = sorted(set(round(r, 14) for r in roots))

    points = []
    kinds = []
    defining = 0.0
    for r in roots:
        prof_r = src.invariants([r])
        kn = float(prof_r.kappa_nu[0])
        defining = max(defining, abs(float(prof_r.kappa_t[0])))
        if abs(kn) <= tol.band_lo:
            notes.append(f"kappa_t root at u = {r:.6g}: kappa_nu ~ 0, singular ruling at infinity")
            continue
        points.append((r, 1.0 / kn))
        kinds.append("undetermined")  # isolated singular points of the ruled map
    pts = np.array(points, dtype=float).reshape(-1, 2)
    if pts.shape[0]:
        fr = src.frame(pts[:, 0])
        image = fr["gamma"] + pts[:, 1][:, None] * fr["nu"]
    else:
        image = np.zeros((0, 3))
    return SingularCurveTrace(
        surface_tag="nr",
        points=pts,
        image=image,
        kinds=kinds,
        notes=notes,
        max_defining_residual=defining,
    )


def nr_front_test(source, u0: float, *, order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL) -> bool:
    """For a developable ruled normal surface: front iff kappa_s != 0 at u0."""
    src = as_nr_source(source, order=order, tol=tol)
    dev = nr_developable_test(src, order=order, tol=tol)
    if not dev.developable:
        raise PreconditionError(
            f"front test applies to developable ruled surfaces only "
            f"(max |kappa_t| = {dev.max_abs_kappa_t:.3e})"
        )
    prof = src.invariants([u0])
    return bool(abs(float(prof.kappa_s[0])) > tol.band_hi)


def nr_plane_fit(source, *, order: int = DEFAULT_ORDER, tol: Tolerances = DEFAULT_TOL, nu_samples: int = 21, w_values=(-1.0, -0.5, 0.0, 0.5, 1.0)):
    """Best-fit plane through ruled-surface samples; returns max distance.

    Oracle for the plane case: a developable normal ruled surface that is
    nowhere a front lies in a plane.
    """
    src = as_nr_source(source, order=order, tol=tol)
    lo, hi = src.u_range
    pad = 1e-3 * (hi - lo)
    us = np.linspace(lo + pad, hi - pad, nu_samples)
    pts = nr_grid(src, us, np.asarray(w_values), order=order, tol=tol).reshape(-1, 3)
    center = pts.mean(axis=0)
    q = pts - center
    _, svals, vt = np.linalg.svd(q, full_matrices=False)
    normal = vt[-1]
    distances = np.abs(q @ normal)
    return float(distances.max()), normal


# ---------------------------------------------------------------------------
# focal surfaces


@dataclass
class FocalPoint:
    j: int
    u: float
    v: float
    point: np.ndarray  # C_j
    normal: np.ndarray  # e_j = x_j / |x_j|
    v_rho: float  # V_j rho_j: zero exactly on S(C_j)
    first_form: tuple[float, float, float]  # E, F, G of C_j
    second_form: tuple[float, float, float]  # L, M, N of C_j w.r.t. e_j
    gauss: float | None
    mean: float | None
    form_det: float


def _focal_extract(j: int, tol: Tolerances):
    def extract(b: FrameBundle) -> dict:
        c = b.focal(j)
        e = b.focal_normal(j)
        cu, cv = c.d_du(), c.d_dv()
        eu, ev = e.d_du(), e.d_dv()
        ec = cu.dot(cu).value
        fc = cu.dot(cv).value
        gc = cv.dot(cv).value
        lc = -cu.dot(eu).value
        mc1 = -cu.dot(ev).value
        mc2 = -cv.dot(eu).value
        nc = -cv.dot(ev).value
        return {
            "C": c.value,
            "e": e.value,
            "vrho": np.asarray(b.v_rho(j).value),
            "EC": np.asarray(ec),
            "FC": np.asarray(fc),
            "GC": np.asarray(gc),
            "LC": np.asarray(lc),
            "MC": np.asarray(0.5 * (mc1 + mc2)),
            "MC_asym": np.asarray(np.abs(mc1 - mc2)),
            "NC": np.asarray(nc),
        }

    return extract


def focal_eval(
    surface: SurfaceDef,
    j: int,
    p,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
) -> FocalPoint:
    """Focal sheet C_j, its unit normal, and both fundamental forms at p."""
    u, v = float(p[0]), float(p[1])
    vals = eval_values(surface, [u], [v], _focal_extract(j, tol), order=order, tol=tol)
    ec, fc, gc = float(vals["EC"][0]), float(vals["FC"][0]), float(vals["GC"][0])
    lc, mc, nc = float(vals["LC"][0]), float(vals["MC"][0]), float(vals["NC"][0])
    det = ec * gc - fc * fc
    gauss = mean = None
    if det > tol.zero_rel:
        gauss = (lc * nc - mc * mc) / det
        mean = (ec * nc - 2.0 * fc * mc + gc * lc) / (2.0 * det)
    return FocalPoint(
        j=j,
        u=u,
        v=v,
        point=vals["C"][0],
        normal=vals["e"][0],
        v_rho=float(vals["vrho"][0]),
        first_form=(ec, fc, gc),
        second_form=(lc, mc, nc),
        gauss=gauss,
        mean=mean,
        form_det=det,
    )


def focal_one_sided_limits(
    surface: SurfaceDef,
    j: int,
    u0: float,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    band_frac: float = 0.05,
) -> dict:
    """Richardson-extrapolated one-sided limits of K and H of C_j as v -> 0.

    Qualitative boundedness evidence near the singular set (4 transect
    points per side, cubic extrapolation); not an acceptance-grade quantity.
    """
    vwidth = surface.internal_v_range[1] - surface.internal_v_range[0]
    h0 = band_frac * vwidth / 2.0
    out = {}
    for side, sign in (("plus", 1.0), ("minus", -1.0)):
        vs = sign * h0 / 2.0 ** np.arange(4)
        us = np.full(4, float(u0))
        vals = eval_values(surface, us, vs, _focal_extract(j, tol), order=order, tol=tol)
        det = vals["EC"] * vals["GC"] - vals["FC"] ** 2
        det = np.where(det > tol.zero_rel, det, np.nan)
        kk = (vals["LC"] * vals["NC"] - vals["MC"] ** 2) / det
        hh = (vals["EC"] * vals["NC"] - 2 * vals["FC"] * vals["MC"] + vals["GC"] * vals["LC"]) / (
            2 * det
        )
        limits = {}
        for name, series in (("K", kk), ("H", hh)):
            if np.any(np.isnan(series)):
                limits[name] = None
            else:
                limits[name] = float(np.polynomial.polynomial.polyfit(vs, series, 3)[0])
        out[side] = limits
    return out


def focal_curvature_prediction(
    surface: SurfaceDef,
    j: int,
    u0: float,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[float, float]:
    """Closed-form focal curvatures at a regular point of C_j on the axis.

    Valid where the secondary cuspidal curvature is nonzero (so C_j is
    regular at the point) and kappa_t != 0:

        K = -kappa_t^2 kappa_j^4 / (kappa_t^2 + (kappa_nu - kappa_j)^2)^2
        H = -kappa_j (kappa_s D + kappa_t'(kappa_nu - kappa_j) - kappa_t kappa_nu')
            / (2 D^(3/2)),   D = kappa_t^2 + (kappa_nu - kappa_j)^2
    """
    inv = invariants_at(surface, u0, order=order, tol=tol)
    if abs(inv.kappa_t) < tol.kappa_t_min:
        raise PreconditionError("kappa_t = 0: focal curvature formulas undefined")
    if abs(inv.r_c) <= tol.band_hi:
        raise PreconditionError(
            f"secondary cuspidal curvature r_c = {inv.r_c:.3e} ~ 0: C_{j} is singular here"
        )
    der = invariant_derivatives(surface, u0, order=order, tol=tol)
    kj = inv.kappa1 if j == 1 else inv.kappa2
    d = inv.kappa_t**2 + (inv.kappa_nu - kj) ** 2
    gauss = -(inv.kappa_t**2) * kj**4 / d**2
    mean = (
        -kj
        * (inv.kappa_s * d + der.kappa_t.d1 * (inv.kappa_nu - kj) - inv.kappa_t * der.kappa_nu.d1)
        / (2.0 * d**1.5)
    )
    return float(gauss), float(mean)


def _vrho_values(surface, j, us, vs, *, order, tol):
    """V_j rho_j over points, with invalid points (|kappa_j| small) masked."""

    def extract(b: FrameBundle) -> dict:
        values, _ = b.v_rho_masked(j)
        return {"vr": values}

    return eval_values(surface, us, vs, extract, order=order, tol=tol)["vr"]


def focal_singular_trace(
    surface: SurfaceDef,
    j: int,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    cells: int | None = None,
    scan_order: int = 5,
) -> SingularCurveTrace:
    """Zero set of V_j rho_j: the singular set of the focal sheet C_j.

    Grid sign scan with bisection along v for each u column, plus the
    transposed scan along u, merged and deduplicated.  Each point is tagged
    first/second kind by comparing the curve tangent (from the gradient of
    V_j rho_j) with the principal null direction V_j.  The scan itself runs
    at a reduced jet order (values only); the per-point details use the full
    requested order.
    """
    scan_order = min(scan_order, order)
    n = cells if cells is not None else tol.scan_cells
    ulo, uhi = surface.internal_u_range
    vlo, vhi = surface.internal_v_range
    upad, vpad = 1e-3 * (uhi - ulo), 1e-3 * (vhi - vlo)
    us = np.linspace(ulo + upad, uhi - upad, n + 1)
    vs = np.linspace(vlo + vpad, vhi - vpad, n + 1)

    uu, vv = np.meshgrid(us, vs, indexing="ij")
    g = _vrho_values(surface, j, uu, vv, order=scan_order, tol=tol)

    points: list[tuple[float, float]] = []

    def bisect(pa, pb, fa):
        """Vectorized bisection along segments pa->pb with f(pa)=fa sign."""
        pa = np.array(pa, dtype=float)
        pb = np.array(pb, dtype=float)
        fa = np.array(fa, dtype=float)
        span = np.max(np.linalg.norm(pb - pa, axis=-1)) if len(pa) else 0.0
        if not len(pa):
            return
        iters = max(1, int(math.ceil(math.log2(max(span, 1e-300) / tol.bisection))))
        for _ in range(min(iters, 60)):
            mid = 0.5 * (pa + pb)
            fm = _vrho_values(surface, j, mid[:, 0], mid[:, 1], order=scan_order, tol=tol)
            fm = np.where(np.isnan(fm), 0.0, fm)
            left = np.sign(fm) == np.sign(fa)
            pa = np.where(left[:, None], mid, pa)
            fa = np.where(left, fm, fa)
            pb = np.where(left[:, None], pb, mid)
        for q in 0.5 * (pa + pb):
            points.append((float(q[0]), float(q[1])))

    # v-scan (columns), then u-scan (rows)
    for axis in (1, 0):
        a_pts, b_pts, f_a = [], [], []
        it = np.ndindex(g.shape[:1] + (g.shape[1] - 1,)) if axis == 1 else np.ndindex(
            (g.shape[0] - 1,) + g.shape[1:]
        )
        for idx in it:
            i, k = idx
            if axis == 1:
                fa_, fb_ = g[i, k], g[i, k + 1]
                pa_, pb_ = (uu[i, k], vv[i, k]), (uu[i, k + 1], vv[i, k + 1])
            else:
                fa_, fb_ = g[i, k], g[i + 1, k]
                pa_, pb_ = (uu[i, k], vv[i, k]), (uu[i + 1, k], vv[i + 1, k])
            if np.isnan(fa_) or np.isnan(fb_):
                continue
            if fa_ == 0.0:
                points.append((float(pa_[0]), float(pa_[1])))
                continue
            if fb_ == 0.0:
                continue
            if np.sign(fa_) != np.sign(fb_):
                a_pts.append(pa_)
                b_pts.append(pb_)
                f_a.append(fa_)
        bisect(a_pts, b_pts, f_a)

    # deduplicate within half a cell
    du = (us[1] - us[0]) if len(us) > 1 else 1.0
    dv = (vs[1] - vs[0]) if len(vs) > 1 else 1.0
    unique: list[tuple[float, float]] = []
    for p in sorted(points):
        if all((abs(p[0] - q[0]) / du + abs(p[1] - q[1]) / dv) > 0.5 for q in unique):
            unique.append(p)
    pts = np.array(unique, dtype=float).reshape(-1, 2)

    if pts.shape[0] == 0:
        return SingularCurveTrace(surface_tag=f"c{j}", points=pts, image=np.zeros((0, 3)), kinds=[])

    def detail_extract(b: FrameBundle) -> dict:
        vr = b.v_rho(j)
        v1, v2 = b.principal_vector(j)
        return {
            "C": b.focal(j).value,
            "vr": np.asarray(vr.value),
            "gu": np.asarray(vr.partial(1, 0)),
            "gv": np.asarray(vr.partial(0, 1)),
            "V1": np.asarray(v1.value),
            "V2": np.asarray(v2.value),
        }

    det = eval_values(surface, pts[:, 0], pts[:, 1], detail_extract, order=order, tol=tol)
    kinds = []
    for i in range(pts.shape[0]):
        grad = np.array([det["gu"][i], det["gv"][i]])
        vdir = np.array([det["V1"][i], det["V2"][i]])
        gn, vn = np.linalg.norm(grad), np.linalg.norm(vdir)
        if gn <= tol.band_lo or vn <= tol.band_lo:
            kinds.append("undetermined")
            continue
        tangent = np.array([-grad[1], grad[0]]) / gn
        cosang = abs(float(tangent @ vdir) / vn)
        kinds.append("second" if math.acos(min(1.0, cosang)) < tol.angular else "first")
    return SingularCurveTrace(
        surface_tag=f"c{j}",
        points=pts,
        image=det["C"],
        kinds=kinds,
        max_defining_residual=float(np.max(np.abs(det["vr"]))),
    )


def trace_v_of_u(
    surface: SurfaceDef,
    j: int,
    us,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    scan_order: int = 5,
    v_cells: int | None = None,
) -> np.ndarray:
    """Per-column root v(u) of V_j rho_j (NaN where the column has no root).

    Batched bisection across all columns; when a column crosses zero on
    several branches, the one nearest the axis wins (the singular curves of
    interest pass through or hug the axis).
    """
    scan_order = min(scan_order, order)
    us = np.atleast_1d(np.asarray(us, dtype=float))
    vlo, vhi = surface.internal_v_range
    vpad = 1e-3 * (vhi - vlo)
    cells = v_cells if v_cells is not None else tol.scan_cells
    vgrid = np.linspace(vlo + vpad, vhi - vpad, cells + 1)
    uu, vv = np.meshgrid(us, vgrid, indexing="ij")
    g = _vrho_values(surface, j, uu, vv, order=scan_order, tol=tol)
    v_of_u = np.full(us.shape, np.nan)
    a = np.full(us.shape, np.nan)
    b = np.full(us.shape, np.nan)
    fa = np.full(us.shape, np.nan)
    for i in range(us.size):
        col = g[i]
        best = None
        for k in range(col.size - 1):
            if np.isnan(col[k]) or np.isnan(col[k + 1]):
                continue
            if col[k] == 0.0:
                cand = ("exact", vgrid[k], None, None)
            elif np.sign(col[k]) != np.sign(col[k + 1]) and col[k + 1] != 0.0:
                cand = ("bracket", 0.5 * (vgrid[k] + vgrid[k + 1]), (vgrid[k], vgrid[k + 1]), col[k])
            else:
                continue
            if best is None or abs(cand[1]) < abs(best[1]):
                best = cand
        if best is None:
            continue
        if best[0] == "exact":
            v_of_u[i] = best[1]
        else:
            a[i], b[i] = best[2]
            fa[i] = best[3]
    active = np.isnan(v_of_u) & ~np.isnan(a)
    if np.any(active):
        aa, bb, ffa = a[active], b[active], fa[active]
        ua = us[active]
        iters = max(1, int(math.ceil(math.log2((vhi - vlo) / tol.bisection))))
        for _ in range(min(iters, 60)):
            mid = 0.5 * (aa + bb)
            fm = _vrho_values(surface, j, ua, mid, order=scan_order, tol=tol)
            fm = np.where(np.isnan(fm), 0.0, fm)
            left = np.sign(fm) == np.sign(ffa)
            aa = np.where(left, mid, aa)
            ffa = np.where(left, fm, ffa)
            bb = np.where(left, bb, mid)
        v_of_u[active] = 0.5 * (aa + bb)
    return v_of_u


@dataclass
class FocalPsiProfile:
    j: int
    u: np.ndarray  # trace parameter (internal u along the traced curve)
    v: np.ndarray  # traced v(u)
    psi: np.ndarray  # det(beta', e_j, d e_j(V_j)) along the trace
    de_norm: np.ndarray  # |d e_j (V_j)|
    scale: float


def focal_psi_profile(
    surface: SurfaceDef,
    j: int,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    samples: int = 41,
    u_window: tuple[float, float] | None = None,
    scan_order: int = 5,
) -> FocalPsiProfile:
    """Front-degeneracy function of the focal sheet along its singular curve.

    The trace is parametrized as v(u) over a uniform u grid (graph-like
    singular curves); the curve tangent is taken by 4th-order differences of
    the image points.
    """
    ulo, uhi = u_window if u_window is not None else surface.internal_u_range
    pad = 0.02 * (uhi - ulo)
    us = np.linspace(ulo + pad, uhi - pad, samples)
    v_of_u = trace_v_of_u(surface, j, us, order=order, tol=tol, scan_order=scan_order)

    found = ~np.isnan(v_of_u)
    if found.sum() < 5:
        raise PreconditionError(
            f"singular trace of C_{j} not found on enough columns ({int(found.sum())})"
        )
    us, vtr = us[found], v_of_u[found]

    def extract(bnd: FrameBundle) -> dict:
        e = bnd.focal_normal(j)
        eu, ev = e.d_du(), e.d_dv()
        v1, v2 = bnd.principal_vector(j)
        de_x = (v1 * eu.x + v2 * ev.x).value
        de_y = (v1 * eu.y + v2 * ev.y).value
        de_z = (v1 * eu.z + v2 * ev.z).value
        return {
            "C": bnd.focal(j).value,
            "e": e.value,
            "de": np.stack([de_x, de_y, de_z], axis=-1),
        }

    vals = eval_values(surface, us, vtr, extract, order=order, tol=tol)
    beta = vals["C"]
    # 4th-order interior differences of the image curve (uniform u spacing)
    tang = np.gradient(beta, us, axis=0, edge_order=2)
    if beta.shape[0] >= 5:
        h = us[1] - us[0]
        core = (beta[:-4] - 8 * beta[1:-3] + 8 * beta[3:-1] - beta[4:]) / (12 * h)
        tang[2:-2] = core
    psi = np.einsum("ij,ij->i", np.cross(tang, vals["e"]), vals["de"])
    scale = max(1.0, float(np.max(np.linalg.norm(tang, axis=-1)))) * max(
        1.0, float(np.max(np.linalg.norm(vals["de"], axis=-1)))
    )
    return FocalPsiProfile(
        j=j, u=us, v=vtr, psi=psi, de_norm=np.linalg.norm(vals["de"], axis=-1), scale=scale
    )
