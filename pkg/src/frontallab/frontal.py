"""Pointwise and along-curve geometry of a frontal surface.

Everything is computed in the internal pre-adapted chart (singular set
{v = 0}, null direction d/dv) from one object: a ``FrameBundle`` holding the
jets of the map f, the transverse quotient h = f_v / v, the unit normal
nu = (f_u x h)/|f_u x h|, and every scalar assembled from them (modified
fundamentals, curvatures, principal data).  Jets make all the transverse
(v-)derivatives exact; derivatives of the along-curve invariants with respect
to the curve parameter are taken by finite differences over re-normalized
samples, because the pointwise chart normalization has to be redone at every
curve point.

On the axis the quotients f_v/v and nu_v/v are taken by coefficient shifts
(deflation); away from the axis by plain jet division.  The two branches are
switched at |v| = deflation_window * (v-range width) and agree on the overlap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .config import DEFAULT_ORDER, DEFAULT_TOL, Tolerances, worker_count
from .errors import (
    DeflationError,
    FrameDegeneracyError,
    GammaNegativeError,
    PreconditionError,
    UmbilicError,
)
from .jets import Jet2, JetVec3, det3, lift
from .surfaces import SurfaceDef

MIN_ORDER = 4  # below this the secondary cuspidal curvature is not reachable


@dataclass(frozen=True)
class ChartMap:
    """Pointwise normalizing chart (s, t) -> (u0 + a*s + (c/2)*t**2, b*t).

    Chosen so that at the point the frame {f_u, h, nu} satisfies
    E = G = 1, F = 0; a rescales the curve parameter to unit speed, b makes
    h unit, c removes the f_u/h obliquity.
    """

    u0: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    shear: np.ndarray


class FrameBundle:
    """Jets of the frontal's pointwise quantities at a batch of points."""

    def __init__(
        self,
        surface: SurfaceDef,
        order: int,
        tol: Tolerances,
        bind_u: Jet2,
        bind_v: Jet2,
        f: JetVec3,
        h: JetVec3 | None = None,
        nu1: JetVec3 | None = None,
        mode: str = "axis",
        chart: ChartMap | None = None,
    ):
        self.surface = surface
        self.order = order
        self.tol = tol
        self.bind_u = bind_u
        self.bind_v = bind_v
        self.f = f
        self.mode = mode
        self.chart = chart
        self._h = h
        self._nu1 = nu1
        self._per_j: dict = {}

    # -- primary jets --------------------------------------------------------

    @cached_property
    def fu(self) -> JetVec3:
        return self.f.d_du()

    @cached_property
    def fv(self) -> JetVec3:
        return self.f.d_dv()

    @cached_property
    def h(self) -> JetVec3:
        if self._h is not None:
            return self._h
        if self.mode == "axis":
            try:
                return self.fv.deflate_v(1, self.tol.zero_rel)
            except DeflationError as err:
                raise DeflationError(
                    f"surface {self.surface.name!r}: transverse derivative not divisible "
                    f"by v -- not a frontal in this pre-adapted chart ({err})"
                ) from None
        return JetVec3(
            self.fv.x / self.bind_v, self.fv.y / self.bind_v, self.fv.z / self.bind_v
        )

    @cached_property
    def nu(self) -> JetVec3:
        cross = self.fu.cross(self.h)
        w = cross.dot(cross)
        if np.any(w.value <= self.tol.zero_rel):
            raise FrameDegeneracyError(
                f"surface {self.surface.name!r}: frame {{f_u, h, nu}} degenerates "
                f"(E*G - F^2 = {float(np.min(w.value)):.3e})"
            )
        return cross.normalized()

    @cached_property
    def nu_u(self) -> JetVec3:
        return self.nu.d_du()

    @cached_property
    def nu_v(self) -> JetVec3:
        return self.nu.d_dv()

    @cached_property
    def nu1(self) -> JetVec3:
        if self._nu1 is not None:
            return self._nu1
        if self.mode == "axis":
            try:
                return self.nu_v.deflate_v(1, 10 * self.tol.zero_rel)
            except DeflationError as err:
                raise DeflationError(
                    f"surface {self.surface.name!r}: normal's transverse derivative not "
                    f"divisible by v -- singular point is not pure-frontal ({err})"
                ) from None
        return JetVec3(
            self.nu_v.x / self.bind_v, self.nu_v.y / self.bind_v, self.nu_v.z / self.bind_v
        )

    # -- scalar jets ----------------------------------------------------------

    @cached_property
    def lam(self) -> Jet2:
        """Signed area density det(f_u, f_v, nu)."""
        return det3(self.fu, self.fv, self.nu)

    @cached_property
    def E(self) -> Jet2:
        return self.fu.dot(self.fu)

    @cached_property
    def F(self) -> Jet2:
        return self.fu.dot(self.h)

    @cached_property
    def G(self) -> Jet2:
        return self.h.dot(self.h)

    @cached_property
    def L(self) -> Jet2:
        return -self.fu.dot(self.nu_u)

    @cached_property
    def M(self) -> Jet2:
        return -self.h.dot(self.nu_u)

    @cached_property
    def N(self) -> Jet2:
        return -self.h.dot(self.nu_v)

    @cached_property
    def N1(self) -> Jet2:
        return -self.h.dot(self.nu1)

    @cached_property
    def W(self) -> Jet2:
        return self.E * self.G - self.F * self.F

    @cached_property
    def gauss(self) -> Jet2:
        return (self.L * self.N1 - self.M * self.M) / self.W

    @cached_property
    def mean(self) -> Jet2:
        return (self.E * self.N1 - 2.0 * (self.F * self.M) + self.G * self.L) / (2.0 * self.W)

    @cached_property
    def Gamma(self) -> Jet2:
        return self.mean * self.mean - self.gauss

    @cached_property
    def _gamma_flat(self) -> bool:
        """True when H^2 - K vanishes identically (e.g. a planar fold)."""
        g = self.Gamma
        g00 = np.asarray(g.value)
        if np.any(g00 < -self.tol.gamma_clamp * np.maximum(1.0, np.abs(g00))):
            raise GammaNegativeError(
                f"H^2 - K = {float(np.min(g00)):.3e} < 0: inconsistent curvature data "
                f"(non-pure-frontal input or jet order too low)"
            )
        # flatness decided on the low-order coefficients: the top coefficients
        # of off-axis quotient jets carry amplified rounding noise
        k = min(g.order, 3)
        low = np.abs(g.c[..., : k + 1, : k + 1]).max(axis=(-2, -1))
        if np.all(low <= np.maximum(self.tol.gamma_clamp, self.tol.zero_rel)):
            return True
        if np.any(g00 <= self.tol.gamma_clamp * np.maximum(1.0, np.abs(g00))):
            raise UmbilicError(
                f"H^2 - K = {float(np.min(g00)):.3e} is zero to tolerance at some point: "
                f"principal data undefined near umbilics"
            )
        return False

    @cached_property
    def sqrt_gamma(self) -> Jet2:
        if self._gamma_flat:
            g = self.Gamma
            return g.constant_like(np.zeros(np.shape(g.value)))
        return self.Gamma.sqrt()

    def kappa(self, j: int) -> Jet2:
        self._check_j(j)
        key = ("kappa", j)
        if key not in self._per_j:
            self._per_j[key] = self.mean + self.sqrt_gamma if j == 1 else self.mean - self.sqrt_gamma
        return self._per_j[key]

    def rho(self, j: int) -> Jet2:
        key = ("rho", j)
        if key not in self._per_j:
            k = self.kappa(j)
            if np.any(np.abs(k.value) < self.tol.kappa_min):
                raise PreconditionError(
                    f"principal curvature kappa_{j} = {float(np.min(np.abs(k.value))):.3e} "
                    f"below threshold: focal point at infinity"
                )
            self._per_j[key] = 1.0 / k
        return self._per_j[key]

    def principal_vector(self, j: int) -> tuple[Jet2, Jet2]:
        """Components of the principal direction relative to kappa_j."""
        key = ("V", j)
        if key not in self._per_j:
            k = self.kappa(j)
            self._per_j[key] = (-(self.bind_v * (self.M - k * self.F)), self.L - k * self.E)
        return self._per_j[key]

    def x_vec(self, j: int) -> JetVec3:
        """Smooth normal field of the focal map C_j (df(V_j) = v * x_j)."""
        key = ("x", j)
        if key not in self._per_j:
            k = self.kappa(j)
            self._per_j[key] = self.fu.scaled(-(self.M - k * self.F)) + self.h.scaled(
                self.L - k * self.E
            )
        return self._per_j[key]

    def focal(self, j: int) -> JetVec3:
        key = ("C", j)
        if key not in self._per_j:
            self._per_j[key] = self.f + self.nu.scaled(self.rho(j))
        return self._per_j[key]

    def focal_normal(self, j: int) -> JetVec3:
        key = ("e", j)
        if key not in self._per_j:
            x = self.x_vec(j)
            n2 = x.dot(x)
            if np.any(n2.value <= self.tol.zero_rel):
                raise PreconditionError(f"|x_{j}| vanishes: focal normal undefined")
            self._per_j[key] = x.normalized()
        return self._per_j[key]

    def v_rho(self, j: int) -> Jet2:
        """Directional derivative V_j(rho_j): its zero set is S(C_j)."""
        key = ("vrho", j)
        if key not in self._per_j:
            self._per_j[key] = self.dir_deriv(j, self.rho(j))
        return self._per_j[key]

    def dir_deriv(self, j: int, g: Jet2) -> Jet2:
        v1, v2 = self.principal_vector(j)
        return v1 * g.d_du() + v2 * g.d_dv()

    def v_rho_masked(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """V_j(rho_j) values with sub-threshold |kappa_j| lanes masked to NaN.

        Unlike v_rho it does not raise when some batch lanes have focal data
        at infinity; those lanes are excluded (used by the curve tracers).
        """
        k = self.kappa(j)
        kv = np.asarray(k.value)
        valid = np.abs(kv) >= self.tol.kappa_min
        safe_c = k.c.copy()
        safe_c[..., 0, 0] = np.where(valid, kv, 1.0)
        safe = Jet2(k.u0, k.v0, k.order, safe_c)
        rho = 1.0 / safe
        v1, v2 = self.principal_vector(j)
        vr = v1 * rho.d_du() + v2 * rho.d_dv()
        return np.where(valid, np.asarray(vr.value), np.nan), valid

    @cached_property
    def weingarten(self) -> tuple[Jet2, Jet2, Jet2, Jet2]:
        """(X1, X2, Y1, Y2) with nu_u = X1 f_u + X2 h, nu_v = v(Y1 f_u + Y2 h)."""
        x1 = (self.F * self.M - self.G * self.L) / self.W
        x2 = (self.F * self.L - self.E * self.M) / self.W
        y1 = (self.F * self.N1 - self.G * self.M) / self.W
        y2 = (self.F * self.M - self.E * self.N1) / self.W
        return x1, x2, y1, y2

    @property
    def umbilic(self) -> np.ndarray:
        return np.asarray(self.Gamma.value) <= self.tol.gamma_clamp * self.Gamma.scale()

    # -- base manipulation -----------------------------------------------------

    def recentered(self, dv) -> "FrameBundle":
        """Move the base transversally by dv (axis bundles only, |dv| small)."""
        if self.mode != "axis":
            raise ValueError("recentered() applies to axis bundles")
        u0 = self.bind_u.value
        v0 = self.bind_v.value + np.asarray(dv, float)
        order = self.order
        return FrameBundle(
            self.surface,
            order,
            self.tol,
            lift("u", (u0, v0), self.f.order),
            lift("v", (u0, v0), self.f.order),
            self.f.recenter_v(dv),
            h=self.h.recenter_v(dv),
            nu1=self.nu1.recenter_v(dv),
            mode="recentered",
            chart=self.chart,
        )

    def _check_j(self, j: int):
        if j not in (1, 2):
            raise ValueError(f"principal index must be 1 or 2, got {j}")


def frame_bundle(
    surface: SurfaceDef,
    u,
    v,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    chart: ChartMap | None = None,
) -> FrameBundle:
    """Build the jet bundle at points with a uniform axis/off-axis branch."""
    if order < MIN_ORDER:
        raise ValueError(f"jet order must be >= {MIN_ORDER}")
    jet_order = order + 1  # one extra order is consumed by each deflation
    if chart is not None:
        s = lift("u", (np.zeros(np.shape(chart.u0)), np.zeros(np.shape(chart.u0))), jet_order)
        t = lift("v", (np.zeros(np.shape(chart.u0)), np.zeros(np.shape(chart.u0))), jet_order)
        bu = chart.u0 + chart.alpha * s + (t * t) * (0.5 * np.asarray(chart.shear))
        bv = t * chart.beta
        f = surface.eval_jets(bu, bv)
        return FrameBundle(surface, order, tol, s, t, f, mode="axis", chart=chart)

    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u, v = np.broadcast_arrays(u, v)
    lo, hi = surface.internal_v_range
    window = tol.deflation_window * (hi - lo)
    near = np.abs(v) <= window
    if np.all(near):
        bu = lift("u", (u, np.zeros_like(v)), jet_order)
        bv = lift("v", (u, np.zeros_like(v)), jet_order)
        f = surface.eval_jets(bu, bv)
        bundle = FrameBundle(surface, order, tol, bu, bv, f, mode="axis")
        if np.any(v != 0.0):
            bundle = bundle.recentered(v)
        return bundle
    if np.any(near):
        raise ValueError(
            "mixed near-axis/off-axis point batch; split it (see eval_values)"
        )
    bu = lift("u", (u, v), jet_order)
    bv = lift("v", (u, v), jet_order)
    f = surface.eval_jets(bu, bv)
    return FrameBundle(surface, order, tol, bu, bv, f, mode="off")


def eval_values(
    surface: SurfaceDef,
    u,
    v,
    extract: Callable[[FrameBundle], dict],
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
) -> dict:
    """Evaluate pointwise quantities over arbitrary point sets.

    Splits the points into near-axis and off-axis groups (the two quotient
    branches), applies ``extract(bundle) -> dict[str, array]`` to each group
    and merges the results back into the input shape.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u, v = np.broadcast_arrays(u, v)
    shape = u.shape
    uf, vf = u.ravel(), v.ravel()
    lo, hi = surface.internal_v_range
    window = tol.deflation_window * (hi - lo)
    near = np.abs(vf) <= window
    out: dict[str, np.ndarray] = {}

    def run_group(index_array) -> list[tuple[np.ndarray, dict]]:
        bundle = frame_bundle(surface, uf[index_array], vf[index_array], order=order, tol=tol)
        return [(index_array, extract(bundle))]

    groups: list[np.ndarray] = []
    for mask in (near, ~near):
        if not mask.any():
            continue
        idx = np.nonzero(mask)[0]
        workers = worker_count()
        if workers > 1 and idx.size >= 4 * workers:
            groups.extend(np.array_split(idx, workers))
        else:
            groups.append(idx)

    if len(groups) > 1 and worker_count() > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            results = [item for sub in pool.map(run_group, groups) for item in sub]
    else:
        results = [item for g in groups for item in run_group(g)]

    for idx, values in results:
        for key, arr in values.items():
            arr = np.asarray(arr)
            if key not in out:
                out[key] = np.empty((uf.size,) + arr.shape[1:], dtype=arr.dtype)
            out[key][idx] = arr
    return {key: arr.reshape(shape + arr.shape[1:]) for key, arr in out.items()}


# ---------------------------------------------------------------------------
# pointwise report


@dataclass
class FrontalPoint:
    """All pointwise quantities at an internal-chart point (u, v)."""

    u: float
    v: float
    f: np.ndarray
    f_u: np.ndarray
    f_v: np.ndarray
    h: np.ndarray
    nu: np.ndarray
    nu1: np.ndarray | None
    lam: float
    E: float
    F: float
    G: float
    L: float
    M: float
    N: float
    N1: float | None
    gauss: float
    mean: float
    Gamma: float
    kappa1: float
    kappa2: float
    umbilic: bool
    V1: np.ndarray | None
    V2: np.ndarray | None
    x1: np.ndarray | None
    x2: np.ndarray | None
    X1: float
    X2: float
    Y1: float
    Y2: float
    bundle: FrameBundle

    def as_dict(self) -> dict:
        def arr(x):
            return None if x is None else [float(c) for c in np.asarray(x)]

        return {
            "point": {"u": self.u, "v": self.v},
            "f": arr(self.f),
            "f_u": arr(self.f_u),
            "f_v": arr(self.f_v),
            "h": arr(self.h),
            "nu": arr(self.nu),
            "nu1": arr(self.nu1),
            "area_density": self.lam,
            "fundamentals": {
                "E": self.E,
                "F": self.F,
                "G": self.G,
                "L": self.L,
                "M": self.M,
                "N": self.N,
                "N1": self.N1,
            },
            "gauss": self.gauss,
            "mean": self.mean,
            "kappa1": self.kappa1,
            "kappa2": self.kappa2,
            "umbilic": bool(self.umbilic),
            "principal_vectors": {"V1": arr(self.V1), "V2": arr(self.V2)},
            "focal_normals": {"x1": arr(self.x1), "x2": arr(self.x2)},
            "weingarten": {"X1": self.X1, "X2": self.X2, "Y1": self.Y1, "Y2": self.Y2},
        }


def evaluate_point(
    surface: SurfaceDef,
    u: float,
    v: float,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
) -> FrontalPoint:
    """Full pointwise evaluation; see FrontalPoint for the field list."""
    b = frame_bundle(surface, u, v, order=order, tol=tol)
    n1_val = None
    nu1_val = None
    try:
        nu1_val = b.nu1.value.reshape(3)
        n1_val = float(b.N1.value)
    except DeflationError:
        if v == 0.0:
            raise
    gamma = float(b.Gamma.value)
    mean = float(b.mean.value)
    sq = math.sqrt(max(gamma, 0.0))
    umbilic = bool(np.asarray(b.umbilic).reshape(()))
    v1 = v2 = x1 = x2 = None
    if not umbilic:
        v1 = np.array([float(c.value) for c in b.principal_vector(1)])
        v2 = np.array([float(c.value) for c in b.principal_vector(2)])
        x1 = b.x_vec(1).value.reshape(3)
        x2 = b.x_vec(2).value.reshape(3)
    xw1, xw2, yw1, yw2 = b.weingarten
    return FrontalPoint(
        u=float(u),
        v=float(v),
        f=b.f.value.reshape(3),
        f_u=b.fu.value.reshape(3),
        f_v=b.fv.value.reshape(3),
        h=b.h.value.reshape(3),
        nu=b.nu.value.reshape(3),
        nu1=nu1_val,
        lam=float(b.lam.value),
        E=float(b.E.value),
        F=float(b.F.value),
        G=float(b.G.value),
        L=float(b.L.value),
        M=float(b.M.value),
        N=float(b.N.value),
        N1=n1_val,
        gauss=float(b.gauss.value) if n1_val is not None else float("nan"),
        mean=float(b.mean.value) if n1_val is not None else float("nan"),
        Gamma=gamma if n1_val is not None else float("nan"),
        kappa1=mean + sq if n1_val is not None else float("nan"),
        kappa2=mean - sq if n1_val is not None else float("nan"),
        umbilic=umbilic if n1_val is not None else True,
        V1=v1,
        V2=v2,
        x1=x1,
        x2=x2,
        X1=float(xw1.value),
        X2=float(xw2.value),
        Y1=float(yw1.value),
        Y2=float(yw2.value),
        bundle=b,
    )


# ---------------------------------------------------------------------------
# psi profile and front classification


def psi_profile(
    surface: SurfaceDef,
    u_samples,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
):
    """psi(u) = det(f_u, nu, nu_v) along the singular axis.

    Vanishes identically exactly for pure-frontal singular curves; nonzero
    values detect front points.
    """
    us = np.atleast_1d(np.asarray(u_samples, dtype=float))
    b = frame_bundle(surface, us, np.zeros_like(us), order=order, tol=tol)
    psi = det3(b.fu, b.nu, b.nu_v).value
    scale = np.maximum(
        1.0,
        np.sqrt(b.E.value)
        * np.max([c.scale() for c in (b.nu_v.x, b.nu_v.y, b.nu_v.z)], axis=0),
    )
    return us, np.asarray(psi, dtype=float), np.asarray(scale, dtype=float)


@dataclass
class FrontClass:
    """Verdict of the front / k-non-front / pure-frontal trichotomy."""

    tag: str  # "Front" | "KNonFront" | "PureFrontal" | "Degenerate"
    k: int | None
    derivatives: list[float]  # psi(u0), psi'(u0), ..., psi^(k_max)(u0)
    profile_max: float
    threshold: float

    def as_dict(self) -> dict:
        return {
            "tag": self.tag,
            "k": self.k,
            "psi_derivatives": self.derivatives,
            "profile_max_abs_psi": self.profile_max,
            "threshold": self.threshold,
        }


def classify_front(
    surface: SurfaceDef,
    u0: float,
    k_max: int = 4,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    profile_samples: int = 81,
) -> FrontClass:
    """Front if psi(u0) != 0; k-non-front if the first nonzero derivative of
    psi at u0 has order k; pure-frontal if psi vanishes along the whole
    sampled curve."""
    lo, hi = surface.internal_u_range
    us_profile = np.linspace(lo, hi, profile_samples)
    _, psi_prof, scale_prof = psi_profile(surface, us_profile, order=order, tol=tol)

    width = hi - lo
    w = min(0.2 * width, u0 - lo, hi - u0)
    if w <= 0:
        raise PreconditionError(f"u0 = {u0} sits on the boundary of the axis range")
    npts = 2 * k_max + 5
    us_fit = u0 + np.linspace(-w, w, npts)
    _, psi_fit, scale_fit = psi_profile(surface, us_fit, order=order, tol=tol)

    scale = float(max(scale_prof.max(), scale_fit.max()))
    threshold = tol.psi_zero * scale

    coeffs = np.polynomial.polynomial.polyfit(us_fit - u0, psi_fit, k_max)
    derivs = [float(coeffs[k] * math.factorial(k)) for k in range(k_max + 1)]
    profile_max = float(np.max(np.abs(psi_prof)))

    if abs(derivs[0]) > threshold:
        return FrontClass("Front", None, derivs, profile_max, threshold)
    for k in range(1, k_max + 1):
        deriv_threshold = threshold * math.factorial(k) / w**k
        if abs(derivs[k]) > deriv_threshold:
            return FrontClass("KNonFront", k, derivs, profile_max, threshold)
    if profile_max <= threshold:
        return FrontClass("PureFrontal", k_max, derivs, profile_max, threshold)
    return FrontClass("Degenerate", None, derivs, profile_max, threshold)


# ---------------------------------------------------------------------------
# pointwise chart normalization and invariants


def adapt_at_point(
    surface: SurfaceDef,
    u0,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
):
    """Normalize the chart at axis point(s) u0 so that E = G = 1, F = 0 there.

    Returns (normalized bundle, residual, raw bundle).  The residual is the
    largest deviation of the three conditions after normalization.
    """
    u0 = np.asarray(u0, dtype=float)
    raw = frame_bundle(surface, u0, np.zeros_like(u0), order=order, tol=tol)
    e0 = np.asarray(raw.E.value, dtype=float)
    f0 = np.asarray(raw.F.value, dtype=float)
    g0 = np.asarray(raw.G.value, dtype=float)
    w0 = e0 * g0 - f0 * f0
    if np.any(e0 <= tol.kappa_min**2) or np.any(w0 <= tol.zero_rel):
        raise FrameDegeneracyError(
            f"cannot normalize chart: |f_u|^2 = {float(np.min(e0)):.3e}, "
            f"E*G - F^2 = {float(np.min(w0)):.3e}"
        )
    alpha = 1.0 / np.sqrt(e0)
    beta = (e0 / w0) ** 0.25
    shear = -(beta**2) * f0 / e0
    chart = ChartMap(u0=u0, alpha=alpha, beta=beta, shear=shear)
    nb = frame_bundle(surface, None, None, order=order, tol=tol, chart=chart)
    residual = np.max(
        np.stack(
            [
                np.abs(np.asarray(nb.E.value) - 1.0),
                np.abs(np.asarray(nb.G.value) - 1.0),
                np.abs(np.asarray(nb.F.value)),
            ]
        ),
        axis=0,
    )
    return nb, residual, raw


@dataclass
class InvariantProfile:
    """Along-curve invariants at a batch of axis points (arrays)."""

    u: np.ndarray
    kappa_s: np.ndarray
    kappa_nu: np.ndarray
    kappa_t: np.ndarray
    kappa_c: np.ndarray
    r_b: np.ndarray
    r_c: np.ndarray
    residual: np.ndarray
    speed: np.ndarray  # |d(f o gamma)/du| in the internal chart
    speed_du: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    gamma: np.ndarray  # H^2 - K along the axis

    def at(self, index: int) -> "InvariantSample":
        return InvariantSample(
            u=float(self.u[index]),
            kappa_s=float(self.kappa_s[index]),
            kappa_nu=float(self.kappa_nu[index]),
            kappa_t=float(self.kappa_t[index]),
            kappa_c=float(self.kappa_c[index]),
            r_b=float(self.r_b[index]),
            r_c=float(self.r_c[index]),
            residual=float(self.residual[index]),
            speed=float(self.speed[index]),
            speed_du=float(self.speed_du[index]),
            kappa1=float(self.kappa1[index]),
            kappa2=float(self.kappa2[index]),
            gamma=float(self.gamma[index]),
        )


@dataclass
class InvariantSample:
    """The six invariants (and context) at one singular-curve point."""

    u: float
    kappa_s: float
    kappa_nu: float
    kappa_t: float
    kappa_c: float
    r_b: float
    r_c: float
    residual: float
    speed: float
    speed_du: float
    kappa1: float
    kappa2: float
    gamma: float

    def as_dict(self) -> dict:
        return {
            "u": self.u,
            "kappa_s": self.kappa_s,
            "kappa_nu": self.kappa_nu,
            "kappa_t": self.kappa_t,
            "kappa_c": self.kappa_c,
            "r_b": self.r_b,
            "r_c": self.r_c,
            "adaptedness_residual": self.residual,
            "kappa1": self.kappa1,
            "kappa2": self.kappa2,
        }


def invariant_profile(
    surface: SurfaceDef,
    u_samples,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
) -> InvariantProfile:
    us = np.atleast_1d(np.asarray(u_samples, dtype=float))
    nb, residual, raw = adapt_at_point(surface, us, order=order, tol=tol)

    kappa_nu = np.asarray(nb.L.value, dtype=float)
    kappa_t = np.asarray(nb.M.value, dtype=float)
    kappa_c = 2.0 * np.asarray(nb.N.value, dtype=float)
    r_b = 3.0 * np.asarray(nb.N1.value, dtype=float)
    r_c = 24.0 * np.asarray(
        (
            nb.N1.d_dv() - 2.0 * (nb.F.d_dv() * nb.M) - nb.G.d_dv() * nb.N1
        ).value,
        dtype=float,
    )
    tangent = nb.fu.normalized()
    kappa_s = np.asarray(
        (tangent.d_du().dot(nb.h) / nb.E.sqrt()).value, dtype=float
    )
    speed = np.sqrt(np.asarray(raw.E.value, dtype=float))
    speed_du = np.asarray(raw.E.d_du().value, dtype=float) / (2.0 * speed)

    mean = np.asarray(nb.mean.value, dtype=float)
    gamma = np.maximum(np.asarray(nb.Gamma.value, dtype=float), 0.0)
    sq = np.sqrt(gamma)

    return InvariantProfile(
        u=us,
        kappa_s=kappa_s,
        kappa_nu=kappa_nu,
        kappa_t=kappa_t,
        kappa_c=kappa_c,
        r_b=r_b,
        r_c=r_c,
        residual=np.broadcast_to(np.asarray(residual, dtype=float), us.shape).copy(),
        speed=speed,
        speed_du=speed_du,
        kappa1=mean + sq,
        kappa2=mean - sq,
        gamma=gamma,
    )


def invariants_at(
    surface: SurfaceDef,
    u0: float,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
) -> InvariantSample:
    return invariant_profile(surface, [u0], order=order, tol=tol).at(0)


# ---------------------------------------------------------------------------
# along-curve derivatives of the invariants (finite differences + Richardson)

_D1_W = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0  # at offsets -2h, -h, h, 2h
_D2_W = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0  # -2h..2h incl. center


@dataclass
class DerivativeEstimate:
    d1: float
    d1_err: float
    d2: float
    d2_err: float


@dataclass
class InvariantDerivatives:
    """Arc-length derivatives of the invariants at one axis point."""

    u: float
    step: float
    kappa_s: DerivativeEstimate
    kappa_nu: DerivativeEstimate
    kappa_t: DerivativeEstimate
    r_b: DerivativeEstimate
    r_c: DerivativeEstimate

    def as_dict(self) -> dict:
        def d(e: DerivativeEstimate):
            return {"d1": e.d1, "d1_err": e.d1_err, "d2": e.d2, "d2_err": e.d2_err}

        return {
            "u": self.u,
            "step": self.step,
            "kappa_s": d(self.kappa_s),
            "kappa_nu": d(self.kappa_nu),
            "kappa_t": d(self.kappa_t),
            "r_b": d(self.r_b),
            "r_c": d(self.r_c),
        }


def invariant_derivatives(
    surface: SurfaceDef,
    u0: float,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    step: float | None = None,
) -> InvariantDerivatives:
    """First and second arc-length derivatives of the along-curve invariants.

    Central 4th-order stencils at steps h and h/2, combined by one Richardson
    level; the reported error is the Richardson correction size.  Values are
    converted from internal-parameter derivatives to arc-length derivatives
    with the exact speed factors from the jets.
    """
    lo, hi = surface.internal_u_range
    h = step if step is not None else 1e-3 * (hi - lo)
    if not (lo < u0 - 2 * h and u0 + 2 * h < hi):
        raise PreconditionError(
            f"derivative stencil [{u0 - 2 * h}, {u0 + 2 * h}] exits the axis range"
        )
    offsets = np.array([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0])
    prof = invariant_profile(surface, u0 + offsets * h, order=order, tol=tol)
    m = prof.speed[3]
    m_u = prof.speed_du[3]

    def estimate(values: np.ndarray) -> DerivativeEstimate:
        f_m2, f_m1, f_mh, f_0, f_ph, f_p1, f_p2 = values
        d1_h = (_D1_W * np.array([f_m2, f_m1, f_p1, f_p2])).sum() / h
        d1_h2 = (_D1_W * np.array([f_m1, f_mh, f_ph, f_p1])).sum() / (h / 2)
        d1 = (16.0 * d1_h2 - d1_h) / 15.0
        d1_err = abs(d1_h2 - d1_h) / 15.0
        d2_h = (_D2_W * np.array([f_m2, f_m1, f_0, f_p1, f_p2])).sum() / h**2
        d2_h2 = (_D2_W * np.array([f_m1, f_mh, f_0, f_ph, f_p1])).sum() / (h / 2) ** 2
        d2 = (16.0 * d2_h2 - d2_h) / 15.0
        d2_err = abs(d2_h2 - d2_h) / 15.0
        # convert d/du to d/ds with s'(u) = m(u)
        d1_s = d1 / m
        d2_s = d2 / m**2 - d1 * m_u / m**3
        d1_err_s = d1_err / m
        d2_err_s = d2_err / m**2 + d1_err * abs(m_u) / m**3
        return DerivativeEstimate(float(d1_s), float(d1_err_s), float(d2_s), float(d2_err_s))

    return InvariantDerivatives(
        u=float(u0),
        step=float(h),
        kappa_s=estimate(prof.kappa_s),
        kappa_nu=estimate(prof.kappa_nu),
        kappa_t=estimate(prof.kappa_t),
        r_b=estimate(prof.r_b),
        r_c=estimate(prof.r_c),
    )


# ---------------------------------------------------------------------------
# ridge / sub-parabolic report


@dataclass
class RidgeReport:
    j: int
    order: int  # 0: not a ridge point; k >= 1: k-th order ridge; -1: order > max tested
    max_order: int
    v_kappa: float  # V_j kappa_j
    vv_kappa: float  # V_j V_j kappa_j
    second_order_criterion: float  # (kappa_nu - kappa_j) (kappa_j)_vv - kappa_t (kappa_j)_u
    directional: list[float]  # V_j^m kappa_j for m = 1..max_order+1
    subparabolic_other: bool  # V_j kappa_{j+1} = 0 within tolerance
    v_kappa_other: float  # V_j kappa_{j+1}
    threshold: float

    def as_dict(self) -> dict:
        return {
            "j": self.j,
            "ridge_order": self.order,
            "max_order_tested": self.max_order,
            "v_kappa": self.v_kappa,
            "vv_kappa": self.vv_kappa,
            "second_order_criterion": self.second_order_criterion,
            "directional_derivatives": self.directional,
            "subparabolic_other": self.subparabolic_other,
            "v_kappa_other": self.v_kappa_other,
            "threshold": self.threshold,
        }


def ridge_report(
    surface: SurfaceDef,
    u0: float,
    j: int,
    max_order: int = 2,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
) -> RidgeReport:
    """Ridge order of V_j at an axis point, plus the sub-parabolic flag.

    Requires kappa_t != 0 (non-umbilic guarantee); refuses otherwise.
    """
    nb, _, _ = adapt_at_point(surface, u0, order=order, tol=tol)
    kappa_t = float(np.asarray(nb.M.value).reshape(()))
    if abs(kappa_t) < tol.kappa_t_min:
        raise UmbilicError(
            f"umbilic risk: |kappa_t| = {abs(kappa_t):.3e} below threshold, "
            f"ridge machinery undefined"
        )
    kj = nb.kappa(j)
    scale = float(np.max(kj.scale()))
    threshold = tol.band_hi * scale

    directional = []
    g = kj
    for _ in range(max_order + 1):
        g = nb.dir_deriv(j, g)
        directional.append(float(np.asarray(g.value).reshape(())))

    kappa_nu = float(np.asarray(nb.L.value).reshape(()))
    kjv = float(np.asarray(kj.value).reshape(()))
    crit2 = (kappa_nu - kjv) * float(np.asarray(kj.partial(0, 2)).reshape(())) - kappa_t * float(
        np.asarray(kj.partial(1, 0)).reshape(())
    )

    ridge_order = 0
    if abs(directional[0]) <= threshold:
        ridge_order = -1
        for m in range(1, max_order + 1):
            if abs(directional[m]) > threshold:
                ridge_order = m
                break

    other = 2 if j == 1 else 1
    v_kappa_other = float(np.asarray(nb.dir_deriv(j, nb.kappa(other)).value).reshape(()))

    return RidgeReport(
        j=j,
        order=ridge_order,
        max_order=max_order,
        v_kappa=directional[0],
        vv_kappa=directional[1] if len(directional) > 1 else float("nan"),
        second_order_criterion=crit2,
        directional=directional,
        subparabolic_other=abs(v_kappa_other) <= threshold,
        v_kappa_other=v_kappa_other,
        threshold=threshold,
    )
