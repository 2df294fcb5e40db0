"""Cone structures on a torus end T x [0, inf).

A parameter s = (a, b) with Im b > 0 determines a hyperbolic structure on
the end through an explicit developing map and the holonomy

    rho(g1) = e^a z + 1,   rho(g2) = e^{ab} z + (e^{ab} - 1)/(e^a - 1)

for a != 0, and rho(g1) = z + 1, rho(g2) = z + b at the cusp a = 0.  The
(x,y)-curve on the boundary torus has complex length a(x + by) up to sign,
and the filling coordinates of the end are the +-(x,y) solving
a(x + by) = 2*pi*i, or infinity at the cusp.

The affine normalization above has a pole along e^a = 1, a != 0
(z0 = 1/(1 - e^a) leaves every compact set).  The end structures themselves
vary continuously through that locus; on it, holonomy() returns the
axis-centered normalization z -> e^{a(m+bn)} z, which is the geometric
limit of the nearby structures up to conjugation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CHART, MAX_DENOMINATOR, RATIONAL_TOL, SINGULAR_LOCUS_TOL
from .hypcore import H3Point, MobiusTransform, apply_h3, hyp_distance


class ZeroA(ValueError):
    """Raised by cone-specific operations at the cusp parameter a = 0."""


class DegenerateRegion(ValueError):
    """Raised when a sampling region has zero volume."""


@dataclass(frozen=True)
class EndParameter:
    """The pair s = (a, b): holonomy exponent a and boundary-torus modulus b."""

    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if not self.b.imag > 0:
            raise ValueError(f"Im b must be strictly positive, got b = {self.b}")

    def to_dict(self) -> dict:
        return {"a": [self.a.real, self.a.imag], "b": [self.b.real, self.b.imag]}

    @staticmethod
    def from_dict(data: dict) -> "EndParameter":
        return EndParameter(complex(*data["a"]), complex(*data["b"]))


@dataclass(frozen=True)
class FillingCoordinate:
    """Point of (R^2 / +-1) u {infinity}; finite values carry the canonical sign."""

    infinite: bool
    x: float = 0.0
    y: float = 0.0

    @staticmethod
    def infinity() -> "FillingCoordinate":
        return FillingCoordinate(True)

    @staticmethod
    def finite(x: float, y: float) -> "FillingCoordinate":
        if x == 0.0 and y == 0.0:
            raise ValueError("finite filling coordinates cannot be (0, 0)")
        x, y = canonical_sign_pair(x, y)
        return FillingCoordinate(False, x, y)

    def distance(self, other: "FillingCoordinate") -> float:
        """Quotient metric on R^2/+-1 u {infinity}; mixed pairs are infinitely far."""
        if self.infinite and other.infinite:
            return 0.0
        if self.infinite or other.infinite:
            return math.inf
        d1 = math.hypot(self.x - other.x, self.y - other.y)
        d2 = math.hypot(self.x + other.x, self.y + other.y)
        return min(d1, d2)

    def to_dict(self) -> dict:
        if self.infinite:
            return {"type": "infinity"}
        return {"type": "finite", "x": self.x, "y": self.y}

    @staticmethod
    def from_dict(data: dict) -> "FillingCoordinate":
        if data["type"] == "infinity":
            return FillingCoordinate.infinity()
        if data["type"] == "finite":
            return FillingCoordinate.finite(data["x"], data["y"])
        raise ValueError(f"unknown coordinate type {data['type']!r}")


@dataclass(frozen=True)
class CompletionClass:
    """Completion of the end: cusp, smooth filling, rational cone, irrational, or undetermined."""

    kind: str  # "cusp" | "smooth" | "cone" | "irrational" | "undetermined"
    p: int | None = None
    q: int | None = None
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in ("cusp", "smooth", "cone", "irrational", "undetermined"):
            raise ValueError(f"unknown completion kind {self.kind!r}")
        if self.kind in ("smooth", "cone"):
            if math.gcd(abs(self.p), abs(self.q)) != 1:
                raise ValueError("meridian class must be primitive")
            if not self.angle > 0:
                raise ValueError("cone angle must be positive")

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind in ("smooth", "cone"):
            out.update({"p": self.p, "q": self.q, "angle": self.angle})
        return out

    @staticmethod
    def from_dict(data: dict) -> "CompletionClass":
        return CompletionClass(
            data["kind"], p=data.get("p"), q=data.get("q"), angle=data.get("angle")
        )


@dataclass(frozen=True)
class EndRegion:
    """Box [x0,x1] x [y0,y1] x [t0,t1] in the chart R^2 x [1, inf) of the universal cover."""

    x0: float
    x1: float
    y0: float
    y1: float
    t0: float
    t1: float

    def __post_init__(self):
        if not (self.x0 <= self.x1 and self.y0 <= self.y1 and self.t0 <= self.t1):
            raise ValueError("region bounds must be ordered")
        if self.t0 < 1.0:
            raise ValueError("chart heights start at t = 1")

    def volume(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0) * (self.t1 - self.t0)


def canonical_sign_pair(x: float, y: float) -> tuple[float, float]:
    """Representative of +-(x, y) whose first nonzero component is positive."""
    if x < 0 or (x == 0 and y < 0):
        return -x, -y
    return x, y


def canonical_sign_complex(z: complex) -> complex:
    """Representative of +-z whose first nonzero component (Re, then Im) is positive."""
    if z.real < 0 or (z.real == 0 and z.imag < 0):
        return -z
    return z


def z0_of(a: complex) -> complex:
    """Fixed point z0 = 1/(1 - e^a) of the holonomy, finite away from e^a = 1."""
    den = 1.0 - cmath.exp(a)
    if den == 0:
        raise ZeroDivisionError("z0 undefined on the locus e^a = 1")
    return 1.0 / den


def phi(s: EndParameter, x: float, y: float) -> complex:
    """phi(x, y) = -z0 e^{xa + yab} with z0 = 1/(1 - e^a); requires a != 0."""
    if s.a == 0:
        raise ZeroA("phi is undefined at a = 0; the cusp chart applies instead")
    return -z0_of(s.a) * cmath.exp(x * s.a + y * s.a * s.b)


def develop(s: EndParameter, x: float, y: float, t: float, chart: str = DEFAULT_CHART) -> H3Point:
    """Chart of the universal cover into H^3.

    For a = 0 both variants are the exact cusp chart (x + by, t).  For a != 0:

      printed:    (z0, 0) + |phi| (phi, t) / sqrt(t^2 + |phi|^2)
      corrected:  (z0, 0) + (phi, t |phi|) / sqrt(1 + t^2)

    Both place the image at Euclidean distance |phi| from (z0, 0).  Only the
    corrected variant satisfies deck equivariance exactly when |e^a| != 1
    (the printed height picks up the factor |e^a| on one side only); the
    printed variant is the one converging to the cusp chart as a -> 0.
    """
    if t < 1.0:
        raise ValueError("chart heights start at t = 1")
    if s.a == 0:
        return H3Point(x + s.b * y, float(t))
    ph = phi(s, x, y)
    ap = abs(ph)
    z0 = z0_of(s.a)
    if chart == "printed":
        den = math.sqrt(t * t + ap * ap)
        return H3Point(z0 + ph * (ap / den), t * ap / den)
    if chart == "corrected":
        den = math.sqrt(1.0 + t * t)
        return H3Point(z0 + ph / den, t * ap / den)
    raise ValueError(f"unknown chart variant {chart!r}")


def holonomy(s: EndParameter, m: int, n: int) -> MobiusTransform:
    """Holonomy of g1^m g2^n.

    Away from the pole locus e^a = 1 this is the affine normalization
    z -> e^c z + (1 - e^c)/(1 - e^a) with c = a(m + bn); at a = 0 it is
    z -> z + m + nb.  On the pole locus (a != 0, e^a = 1) the affine form
    has no limit and the axis-centered normalization z -> e^c z is returned.
    """
    if s.a == 0:
        return MobiusTransform(1.0, m + n * s.b, 0.0, 1.0)
    c = s.a * (m + s.b * n)
    ec2 = cmath.exp(c / 2.0)
    den = 1.0 - cmath.exp(s.a)
    if abs(den) <= SINGULAR_LOCUS_TOL:
        return MobiusTransform(ec2, 0.0, 0.0, 1.0 / ec2)
    tau = (1.0 - cmath.exp(c)) / den
    return MobiusTransform(ec2, tau / ec2, 0.0, 1.0 / ec2)


def complex_length(s: EndParameter, x: float, y: float) -> complex:
    """Total complex length a(x + by) of the (x, y)-class, canonical up to sign.

    Not reduced mod 2*pi*i: it records total rotation as well.
    """
    return canonical_sign_complex(s.a * (x + s.b * y))


def filling_coordinates(s: EndParameter) -> FillingCoordinate:
    """The +-(x, y) with a(x + by) = +-2*pi*i, or infinity at the cusp."""
    if s.a == 0:
        return FillingCoordinate.infinity()
    w = 2j * math.pi / s.a
    y = w.imag / s.b.imag
    x = w.real - s.b.real * y
    return FillingCoordinate.finite(x, y)


def _best_convergent(r_abs: float, max_den: int):
    """Best-scoring continued-fraction convergent num/den of r_abs in [0, 1].

    The score |r - num/den| * den^2 is scale-free in the denominator: rational
    values produced by floating-point arithmetic score near machine epsilon
    (reliably so for denominators up to ~10^3), while the best convergents of
    an irrational keep it at order one.
    """
    best_score, best = math.inf, None
    h_prev, h_cur = 0, 1  # numerator recurrence seeds h_-2, h_-1
    k_prev, k_cur = 1, 0  # denominator recurrence seeds k_-2, k_-1
    rem = r_abs
    for _ in range(64):
        a_i = math.floor(rem)
        h_prev, h_cur = h_cur, int(a_i) * h_cur + h_prev
        k_prev, k_cur = k_cur, int(a_i) * k_cur + k_prev
        if k_cur > max_den:
            break
        score = abs(r_abs - h_cur / k_cur) * k_cur * k_cur
        if score < best_score:
            best_score, best = score, (h_cur, k_cur)
        frac = rem - a_i
        if frac == 0.0:
            break
        rem = 1.0 / frac
    return best, best_score


def _rational_direction(x: float, y: float, tol: float, max_den: int):
    """Detect (x, y) ~ g (p, q) with coprime integers and g > 0.

    The continued fraction runs on the ratio of the smaller to the larger
    component, so its argument lies in [-1, 1].  Scores <= tol are accepted
    as rational, scores > 100 tol are conclusively irrational at this
    denominator cap, and the band between is reported as undetermined.

    Returns (p, q, g), "irrational", or "undetermined".
    """
    swap = abs(y) > abs(x)
    r = x / y if swap else y / x
    best, score = _best_convergent(abs(r), max_den)
    if best is None or score > 100.0 * tol:
        return "irrational"
    if score > tol:
        return "undetermined"
    num, den = best
    if r < 0:
        num = -num
    p_i, q_i = (num, den) if swap else (den, num)
    # align the integer class with (x, y) and extract the positive scale
    if p_i * x + q_i * y < 0:
        p_i, q_i = -p_i, -q_i
    g = (x * p_i + y * q_i) / (p_i * p_i + q_i * q_i)
    return p_i, q_i, g


def classify_completion(
    s: EndParameter,
    rational_tolerance: float = RATIONAL_TOL,
    max_denominator: int = MAX_DENOMINATOR,
) -> CompletionClass:
    """Completion of the end from its filling coordinates.

    Cusp at infinity; otherwise a rational direction (x, y) ~ g (p, q) gives
    a solid torus with meridian (p, q) and cone angle theta = |Im L(p,q)|
    (equivalently 2*pi/g), smooth exactly when theta = 2*pi; an irrational
    direction is completed by a single point.
    """
    if rational_tolerance <= 0:
        raise ValueError("rational tolerance must be positive")
    if max_denominator < 1:
        raise ValueError("max denominator must be >= 1")
    coords = filling_coordinates(s)
    if coords.infinite:
        return CompletionClass("cusp")
    got = _rational_direction(coords.x, coords.y, rational_tolerance, max_denominator)
    if got == "irrational":
        return CompletionClass("irrational")
    if got == "undetermined":
        return CompletionClass("undetermined")
    p, q, g = got
    p, q = (int(v) for v in canonical_sign_pair(p, q))
    ell = s.a * (p + s.b * q)
    if abs(ell.real) > rational_tolerance * max(1.0, abs(ell)):
        return CompletionClass("undetermined")
    theta = abs(ell.imag)
    if abs(g - 1.0) <= rational_tolerance:
        return CompletionClass("smooth", p=p, q=q, angle=theta)
    return CompletionClass("cone", p=p, q=q, angle=theta)


def cross_section_length(s: EndParameter, x: float, y: float, eps: float) -> float:
    """Length of the (x, y)-curve on the tube torus at radius eps around the axis.

    With l = a(x + by): sqrt(Re(l)^2 cosh(eps)^2 + Im(l)^2 sinh(eps)^2);
    the translation part stretches by cosh(eps), the rotation by sinh(eps).
    """
    if s.a == 0:
        raise ZeroA("no axis at the cusp parameter a = 0")
    if not eps > 0:
        raise ValueError("tube radius must be positive")
    ell = s.a * (x + s.b * y)
    return math.hypot(ell.real * math.cosh(eps), ell.imag * math.sinh(eps))


def end_isometric(s: EndParameter, sp: EndParameter, tol: float = 1e-12) -> bool:
    """True iff the ends are isometric: b = b' and a' = +-a (within tol)."""
    if abs(s.b - sp.b) > tol:
        return False
    return min(abs(s.a - sp.a), abs(s.a + sp.a)) <= tol


def holonomy_representation(s: EndParameter):
    """Generator images (rho(g1), rho(g2)) of the Z^2 marking."""
    return holonomy(s, 1, 0), holonomy(s, 0, 1)


def estimate_bilipschitz(
    s1: EndParameter,
    s2: EndParameter,
    region: EndRegion,
    samples: int,
    seed: int = 0,
    chart: str = DEFAULT_CHART,
) -> float:
    """Sampled biLipschitz estimate between the two developed charts on a region.

    Draws `samples` points, develops consecutive pairs under both parameters
    and returns the worst ratio of hyperbolic distances, symmetrized to >= 1.
    Deterministic for a fixed seed.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    if region.volume() == 0.0:
        raise DegenerateRegion("sampling region has zero volume")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(size=(samples, 3))
    pts[:, 0] = region.x0 + pts[:, 0] * (region.x1 - region.x0)
    pts[:, 1] = region.y0 + pts[:, 1] * (region.y1 - region.y0)
    pts[:, 2] = region.t0 + pts[:, 2] * (region.t1 - region.t0)
    worst = 1.0
    prev1 = prev2 = None
    for x, y, t in pts:
        cur1 = develop(s1, x, y, t, chart=chart)
        cur2 = develop(s2, x, y, t, chart=chart)
        if prev1 is not None:
            d1 = hyp_distance(prev1, cur1)
            d2 = hyp_distance(prev2, cur2)
            if d1 > 0.0 and d2 > 0.0:
                r = d2 / d1
                worst = max(worst, r, 1.0 / r)
        prev1, prev2 = cur1, cur2
    return worst


def equivariance_residual(
    s: EndParameter,
    generator: int,
    x: float,
    y: float,
    t: float,
    chart: str = DEFAULT_CHART,
) -> float:
    """Euclidean residual |D(g p) - rho(g) D(p)| for a deck generator (1 or 2)."""
    if generator == 1:
        shifted = develop(s, x + 1.0, y, t, chart=chart)
        rho = holonomy(s, 1, 0)
    elif generator == 2:
        shifted = develop(s, x, y + 1.0, t, chart=chart)
        rho = holonomy(s, 0, 1)
    else:
        raise ValueError("generator index must be 1 or 2")
    mapped = apply_h3(rho, develop(s, x, y, t, chart=chart))
    return math.hypot(abs(shifted.z - mapped.z), shifted.t - mapped.t)
