"""Inversion of the filling-coordinate map.

Closed-form solutions in the model family, complex Newton iteration over
polynomial paths in parameter space, filling-sequence generation, and a
sampled continuity/injectivity diagnostic for the coordinate map.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .config import NEWTON_MAX_ITER, NEWTON_TOL
from .hypcore import MobiusTransform
from .torus_end import EndParameter, filling_coordinates, holonomy

TWO_PI_I = 2j * math.pi


class ZeroTarget(ValueError):
    """Raised when the target coordinates (0, 0) are requested."""


class DomainExit(RuntimeError):
    """Raised when a Newton iterate leaves the declared domain disc."""


def _horner(coeffs, w):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * w + c
    return acc


def _derivative_coeffs(coeffs):
    return tuple(k * c for k, c in enumerate(coeffs) if k > 0) or (0j,)


@dataclass(frozen=True)
class HolomorphicPath:
    """Polynomial maps w -> a(w), w -> b(w) on a disc, coefficients ascending.

    Im b(w) > 0 is required on the declared disc; it is spot-checked on a
    polar sample grid at construction.
    """

    a_coeffs: tuple
    b_coeffs: tuple
    center: complex
    radius: float

    def __post_init__(self):
        if len(self.a_coeffs) == 0 or len(self.b_coeffs) == 0:
            raise ValueError("coefficient lists must be nonempty")
        object.__setattr__(self, "a_coeffs", tuple(complex(c) for c in self.a_coeffs))
        object.__setattr__(self, "b_coeffs", tuple(complex(c) for c in self.b_coeffs))
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ValueError("domain radius must be positive")
        for w in self._grid():
            bw = self.b(w)
            if not bw.imag > 0:
                raise ValueError(f"Im b(w) must stay positive on the disc; b({w}) = {bw}")

    def _grid(self, rings: int = 4, rays: int = 8):
        pts = [self.center]
        for i in range(1, rings + 1):
            r = self.radius * i / rings
            for k in range(rays):
                pts.append(self.center + r * cmath.exp(2j * math.pi * k / rays))
        return pts

    def contains(self, w: complex) -> bool:
        return abs(w - self.center) <= self.radius

    def a(self, w: complex) -> complex:
        return _horner(self.a_coeffs, w)

    def b(self, w: complex) -> complex:
        return _horner(self.b_coeffs, w)

    def da(self, w: complex) -> complex:
        return _horner(_derivative_coeffs(self.a_coeffs), w)

    def db(self, w: complex) -> complex:
        return _horner(_derivative_coeffs(self.b_coeffs), w)

    def to_dict(self) -> dict:
        return {
            "a_coeffs": [[c.real, c.imag] for c in self.a_coeffs],
            "b_coeffs": [[c.real, c.imag] for c in self.b_coeffs],
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
        }

    @staticmethod
    def from_dict(data: dict) -> "HolomorphicPath":
        return HolomorphicPath(
            tuple(complex(re, im) for re, im in data["a_coeffs"]),
            tuple(complex(re, im) for re, im in data["b_coeffs"]),
            complex(data["center"][0], data["center"][1]),
            float(data["radius"]),
        )


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a Newton solve; converged implies residual <= the tolerance used."""

    w: complex
    residual: float
    iterations: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "w": [self.w.real, self.w.imag],
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class ContinuityReport:
    """Sampled continuity/injectivity diagnostics along a path; evidence, not proof."""

    max_jump: float
    injectivity_violations: tuple
    sample_count: int

    def to_dict(self) -> dict:
        return {
            "max_jump": self.max_jump,
            "injectivity_violations": [list(p) for p in self.injectivity_violations],
            "violation_count": len(self.injectivity_violations),
            "sample_count": self.sample_count,
        }


def solve_direct(b: complex, x: float, y: float) -> EndParameter:
    """Closed-form parameter with filling coordinates +-(x, y): a = 2*pi*i/(x + by)."""
    if x == 0.0 and y == 0.0:
        raise ZeroTarget("coordinates (0, 0) are excluded")
    b = complex(b)
    return EndParameter(TWO_PI_I / (x + b * y), b)


def solve_on_path(
    path: HolomorphicPath,
    x: float,
    y: float,
    w0: complex,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
) -> SolveReport:
    """Newton iteration on F(w) = a(w) (x + b(w) y) - 2*pi*i with analytic derivative.

    Non-convergence is reported, not raised; leaving the declared disc raises
    DomainExit.
    """
    if x == 0.0 and y == 0.0:
        raise ZeroTarget("coordinates (0, 0) are excluded")
    if not path.contains(w0):
        raise DomainExit(f"starting point {w0} lies outside the declared disc")
    w = complex(w0)

    def f_and_df(w):
        aw, bw = path.a(w), path.b(w)
        fw = aw * (x + bw * y) - TWO_PI_I
        dfw = path.da(w) * (x + bw * y) + aw * path.db(w) * y
        return fw, dfw

    fw, dfw = f_and_df(w)
    for it in range(1, max_iter + 1):
        if abs(fw) <= tol:
            return SolveReport(w, abs(fw), it - 1, True)
        if dfw == 0:
            return SolveReport(w, abs(fw), it - 1, False)
        w = w - fw / dfw
        if not path.contains(w):
            raise DomainExit(f"iterate {w} left the declared disc at step {it}")
        fw, dfw = f_and_df(w)
    return SolveReport(w, abs(fw), max_iter, abs(fw) <= tol)


def unimodular_completion(p: int, q: int) -> np.ndarray:
    """Integer matrix with determinant 1 whose first column is (p, q)."""
    if math.gcd(abs(p), abs(q)) != 1:
        raise ValueError(f"({p}, {q}) is not a primitive class")
    g, r, t = _xgcd(p, q)
    # p*r + q*t = 1, so [[p, -t], [q, r]] has determinant p*r + q*t = 1
    return np.array([[p, -t], [q, r]], dtype=int)


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def filling_sequence(
    b: complex,
    p: int,
    q: int,
    n_list,
    basis: np.ndarray | None = None,
) -> list[EndParameter]:
    """Parameters filling the (1, n)-classes in the basis where (p, q) is the meridian.

    `basis` is a unimodular integer matrix whose first column is the declared
    meridian class; when omitted it is completed canonically by the extended
    Euclidean algorithm.  Each returned parameter is solve_direct at the
    coordinates basis @ (1, n).
    """
    if len(n_list) == 0:
        raise ValueError("n_list must be nonempty")
    if basis is None:
        basis = unimodular_completion(p, q)
    basis = np.asarray(basis, dtype=int)
    if abs(round(float(np.linalg.det(basis)))) != 1:
        raise ValueError("basis change must be unimodular")
    if basis[0, 0] != p or basis[1, 0] != q:
        raise ValueError("first basis column must be the declared meridian class")
    out = []
    for n in n_list:
        xy = basis @ np.array([1, int(n)])
        out.append(solve_direct(b, float(xy[0]), float(xy[1])))
    return out


def _sample_disc(center: complex, radius: float, count: int, rng) -> list[complex]:
    pts = []
    while len(pts) < count:
        u, v = rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)
        if u * u + v * v <= 1.0:
            pts.append(center + radius * complex(u, v))
    return pts


def verify_coordinate_continuity(
    path: HolomorphicPath,
    sample_count: int,
    seed: int = 0,
    coincidence_tol: float = 1e-9,
) -> ContinuityReport:
    """Sample coordinates along the path; report the worst jump and coincidences.

    max_jump is the largest coordinate displacement between consecutive
    samples; injectivity_violations lists index pairs of distinct w with
    equal coordinates within coincidence_tol.  Sampling evidence only.
    """
    if sample_count < 2:
        raise ValueError("need at least two samples")
    rng = np.random.default_rng(seed)
    ws = _sample_disc(path.center, path.radius, sample_count, rng)
    coords = [filling_coordinates(EndParameter(path.a(w), path.b(w))) for w in ws]
    max_jump = 0.0
    for c1, c2 in zip(coords, coords[1:]):
        d = c1.distance(c2)
        if d > max_jump:
            max_jump = d
    violations = []
    for i in range(sample_count):
        for j in range(i + 1, sample_count):
            if abs(ws[i] - ws[j]) > coincidence_tol and coords[i].distance(coords[j]) <= coincidence_tol:
                violations.append((i, j))
    return ContinuityReport(max_jump, tuple(violations), sample_count)


def cusp_distance(s: EndParameter, aligned: bool = True) -> float:
    """Worst generator-holonomy distance from s to the cusp (0, b).

    With aligned=True the holonomies are first conjugated by the canonical
    aligner g = diag(sigma^-1/2, sigma^1/2) . [[1, 0], [a/(2 sigma), 1]],
    sigma = a/(e^a - 1), which pushes the degenerating axis fixed point z0
    off to infinity; this measures distance between conjugacy classes, the
    sense in which filled holonomies approach the cusp.  With aligned=False
    the raw normalized matrices are compared (their distance decays like
    |a|/2 instead of |a|^2/4).
    """
    if s.a == 0:
        return 0.0
    cusp_gens = (holonomy(EndParameter(0.0, s.b), 1, 0), holonomy(EndParameter(0.0, s.b), 0, 1))
    mats = [holonomy(s, 1, 0), holonomy(s, 0, 1)]
    if aligned:
        sigma = s.a / (cmath.exp(s.a) - 1.0)
        eps = s.a / (2.0 * sigma)
        dl = sigma ** -0.5
        g = np.array([[dl, 0.0], [eps / dl, 1.0 / dl]], dtype=complex)
        gi = np.linalg.inv(g)
        mats = [MobiusTransform.from_matrix(g @ m.matrix() @ gi) for m in mats]
    return max(m.distance(c) for m, c in zip(mats, cusp_gens))
