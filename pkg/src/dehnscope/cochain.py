"""Group-cohomology linear algebra for marked PSL(2,C) representations.

Cocycles are maps from generators to sl(2,C) extended over words by
z(gh) = z(g) + Ad rho(g) z(h); coboundaries are z(g) = v - Ad rho(g) v.
Numerical ranks of the relator and coboundary maps give the complex
dimensions of Z^1, B^1 and H^1.  Also provides tangent cocycles of
representation paths by central differences and the strain coefficient of
vector fields on the sphere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .config import RANK_RTOL
from .hypcore import MobiusTransform, SL2Vector, adjoint, adjoint_matrix


class BadWord(ValueError):
    """Raised for a word letter outside the generator index range."""


class StepTooSmall(ValueError):
    """Raised when central differencing is dominated by cancellation."""


@dataclass(frozen=True)
class MarkedRepresentation:
    """Generator images and relator words (letters +-(i+1)) of a marked group."""

    generators: tuple
    relators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(tuple(w) for w in self.relators))
        for word in self.relators:
            img = self.evaluate_word(word)
            if img.distance(MobiusTransform.identity()) > 1e-9:
                raise ValueError(f"relator {word} does not evaluate to +-identity")

    def generator(self, letter: int) -> MobiusTransform:
        idx = abs(letter) - 1
        if letter == 0 or idx >= len(self.generators):
            raise BadWord(f"letter {letter} outside generator range")
        g = self.generators[idx]
        return g if letter > 0 else g.inverse()

    def evaluate_word(self, word: Sequence[int]) -> MobiusTransform:
        acc = MobiusTransform.identity()
        for letter in word:
            acc = acc @ self.generator(letter)
        return acc

    def to_dict(self) -> dict:
        gens = []
        for g in self.generators:
            gens.append([[v.real, v.imag] for v in (g.a11, g.a12, g.a21, g.a22)])
        return {"generators": gens, "relators": [list(w) for w in self.relators]}

    @staticmethod
    def from_dict(data: dict) -> "MarkedRepresentation":
        gens = tuple(
            MobiusTransform.from_entries(*(complex(re, im) for re, im in entries))
            for entries in data["generators"]
        )
        relators = tuple(tuple(int(v) for v in w) for w in data.get("relators", []))
        return MarkedRepresentation(gens, relators)


@dataclass(frozen=True)
class Cocycle:
    """One sl(2,C) value per generator of a marked representation."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @staticmethod
    def zero(count: int) -> "Cocycle":
        return Cocycle(tuple(SL2Vector.zero() for _ in range(count)))

    @staticmethod
    def coboundary(rep: MarkedRepresentation, v: SL2Vector) -> "Cocycle":
        return Cocycle(tuple(v - adjoint(g, v) for g in rep.generators))

    def coords(self) -> np.ndarray:
        """Stacked coordinate vector in C^{3k}."""
        return np.concatenate([v.coords() for v in self.values])


def extend_cocycle(rep: MarkedRepresentation, c: Cocycle, word: Sequence[int]) -> SL2Vector:
    """Left fold of z(gh) = z(g) + Ad rho(g) z(h) over the word.

    Inverse letters use z(g^-1) = -Ad rho(g)^-1 z(g).
    """
    if len(c.values) != len(rep.generators):
        raise ValueError("cocycle and representation have different generator counts")
    acc = SL2Vector.zero()
    prefix = MobiusTransform.identity()
    for letter in word:
        g = rep.generator(letter)
        if letter > 0:
            zl = c.values[letter - 1]
        else:
            zl = -adjoint(g, c.values[-letter - 1])
        acc = acc + adjoint(prefix, zl)
        prefix = prefix @ g
    return acc


def is_cocycle(rep: MarkedRepresentation, c: Cocycle, tol: float = 1e-9):
    """(bool, max relator residual): the extension over every relator must vanish."""
    worst = 0.0
    for word in rep.relators:
        worst = max(worst, extend_cocycle(rep, c, word).norm())
    return worst <= tol, worst


def solve_coboundary(rep: MarkedRepresentation, c: Cocycle):
    """Least-squares v with v - Ad rho(g_i) v = z(g_i) for all generators.

    Returns (v, residual) where residual is the Euclidean norm of the stacked
    defect; a residual at roundoff scale certifies c as a coboundary.
    """
    k = len(rep.generators)
    if k == 0:
        return SL2Vector.zero(), 0.0
    rows = []
    for g in rep.generators:
        rows.append(np.eye(3, dtype=complex) - adjoint_matrix(g))
    A = np.vstack(rows)
    rhs = c.coords()
    v_coords, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    residual = float(np.linalg.norm(A @ v_coords - rhs))
    return SL2Vector.from_coords(v_coords), residual


def _numerical_rank(mat: np.ndarray, rtol: float = RANK_RTOL) -> int:
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def h1_dimension(rep: MarkedRepresentation, rtol: float = RANK_RTOL):
    """Complex dimensions (dim Z^1, dim B^1, dim H^1).

    Z^1 is the kernel of the linearized relator map on (sl2)^k, B^1 the image
    of v -> (v - Ad rho(g_i) v)_i, both by numerical rank.
    """
    k = len(rep.generators)
    if k == 0:
        return 0, 0, 0
    cols = []
    for i in range(k):
        for alpha in range(3):
            vals = [SL2Vector.zero() for _ in range(k)]
            e = np.zeros(3, dtype=complex)
            e[alpha] = 1.0
            vals[i] = SL2Vector.from_coords(e)
            c = Cocycle(tuple(vals))
            col = (
                np.concatenate([extend_cocycle(rep, c, w).coords() for w in rep.relators])
                if rep.relators
                else np.zeros(0, dtype=complex)
            )
            cols.append(col)
    relator_map = np.array(cols).T
    dim_z = 3 * k - _numerical_rank(relator_map, rtol)
    cob_cols = []
    for alpha in range(3):
        e = np.zeros(3, dtype=complex)
        e[alpha] = 1.0
        cob_cols.append(Cocycle.coboundary(rep, SL2Vector.from_coords(e)).coords())
    dim_b = _numerical_rank(np.array(cob_cols).T, rtol)
    return dim_z, dim_b, dim_z - dim_b


def class_rank(rep: MarkedRepresentation, cocycles: Sequence[Cocycle], rtol: float = RANK_RTOL) -> int:
    """Rank of the given cocycles in H^1: rank([B-basis | cocycles]) - rank(B-basis)."""
    cob_cols = []
    for alpha in range(3):
        e = np.zeros(3, dtype=complex)
        e[alpha] = 1.0
        cob_cols.append(Cocycle.coboundary(rep, SL2Vector.from_coords(e)).coords())
    b_mat = np.array(cob_cols).T
    z_mat = np.array([c.coords() for c in cocycles]).T
    joint = np.hstack([b_mat, z_mat])
    return _numerical_rank(joint, rtol) - _numerical_rank(b_mat, rtol)


def _align_sign(m: MobiusTransform, ref: MobiusTransform) -> np.ndarray:
    """SL2 matrix of m with the sign nearest to ref."""
    a, r = m.matrix(), ref.matrix()
    if np.sum(np.abs(a - r) ** 2) <= np.sum(np.abs(a + r) ** 2):
        return a
    return -a


def tangent_cocycle(path: Callable[[float], MarkedRepresentation], h: float) -> Cocycle:
    """Cocycle z(g_i) = (d/dw rho_w(g_i)) rho_0(g_i)^-1 by central differences.

    Signs of the +-h samples are aligned to the center representation before
    differencing.  The result is projected to traceless.
    """
    if not h > 0:
        raise ValueError("step must be positive")
    rep0 = path(0.0)
    rep_p = path(h)
    rep_m = path(-h)
    values = []
    for g0, gp, gm in zip(rep0.generators, rep_p.generators, rep_m.generators):
        mp = _align_sign(gp, g0)
        mm = _align_sign(gm, g0)
        diff = mp - mm
        scale = float(np.max(np.abs(g0.matrix())))
        top = float(np.max(np.abs(diff)))
        # an exactly constant generator is fine; a nonzero difference at
        # roundoff scale means the step no longer resolves the derivative
        if 0.0 < top < 64.0 * np.finfo(float).eps * max(scale, 1.0):
            raise StepTooSmall("central difference dominated by cancellation")
        d = (diff / (2.0 * h)) @ g0.inverse().matrix()
        tr = (d[0, 0] + d[1, 1]) / 2.0
        d[0, 0] -= tr
        d[1, 1] -= tr
        values.append(SL2Vector(d))
    return Cocycle(tuple(values))


def strain(field: Callable[[complex], complex], z: complex, h: float = 1e-5) -> complex:
    """d/d(conj z) coefficient of the field f d/dz by central differences.

    f_zbar = ((f(z+h) - f(z-h)) + i (f(z+ih) - f(z-ih))) / (4h); vanishes
    exactly on projective (quadratic polynomial) fields.
    """
    if not h > 0:
        raise ValueError("step must be positive")
    dx = field(z + h) - field(z - h)
    dy = field(z + 1j * h) - field(z - 1j * h)
    return (dx + 1j * dy) / (4.0 * h)
