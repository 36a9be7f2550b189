"""Gain-ratio synthesis for the distance + signed-area control law.

For each ordinary follower's triangle, the spurious stationary points of
its potential are the real roots of a quartic whose coefficients depend
on the three side lengths and the gain ratio beta/alpha.  The quartic
has no real root when its discriminant quantities Lambda(gamma) and
P(gamma) are both positive; both are polynomials in the gain ratio gamma
(degrees 15 and 5).  We evaluate them exactly in rational arithmetic at
integer nodes, interpolate the exact polynomials, and take the largest
real roots to obtain a certified lower bound on the usable gain ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import SpecError
from .geometry import FormationSpec, heron_radicand, triangle_shape_condition
from .quartic import Quartic, _real_roots_by_bisection

ISOSCELES_REL_TOL = 1e-9  # legs closer than this (relative) use the isosceles branch
MIN_RATIO_FLOOR = 1e-3  # keeps beta_k positive when the isosceles bound is <= 0
DEFAULT_MARGIN = 0.1

_LAMBDA_DEG = 15
_P_DEG = 5


def shared_radicand(d_ji: float, d_ki: float, d_kj: float) -> float:
    """2 d1^2 d2^2 - d1^4 + 2 d1^2 d3^2 - d2^4 + 2 d2^2 d3^2 - d3^4.

    Equals 16 times the squared triangle area; positive iff the strict
    triangle inequality holds.
    """
    q1, q2, q3 = d_ji**2, d_kj**2, d_ki**2
    return 2 * q1 * q2 - q1**2 + 2 * q1 * q3 - q2**2 + 2 * q2 * q3 - q3**2


def stationary_quartic(d_ji: float, d_ki: float, d_kj: float, ratio: float) -> Quartic:
    """Quartic (in the apex ordinate) whose real roots are spurious stationary points.

    Symmetric in the two legs d_ki, d_kj.  Requires a nondegenerate
    triangle and ratio > 0.
    """
    if ratio <= 0:
        raise ValueError(f"gain ratio must be positive, got {ratio}")
    rad = shared_radicand(d_ji, d_ki, d_kj)
    if rad <= 0:
        raise ValueError(
            f"side lengths ({d_ji}, {d_ki}, {d_kj}) do not form a nondegenerate triangle"
        )
    q1, q2, q3 = d_ji**2, d_kj**2, d_ki**2
    root = math.sqrt(rad)
    g = ratio
    a = -2.0 * q1 * (g - 2.0) ** 2
    b = d_ji * (g**2 - 4.0) * root
    c = -0.5 * q1**2 * g**3 + q1 * (1.5 * q1 + q2 + q3) * g**2 - 4.0 * q1 * (q2 + q3) * g
    d = 0.25 * d_ji * g**2 * (2.0 * q1 * g - 3.0 * q1 - 2.0 * q2 - 2.0 * q3) * root
    e = -0.125 * q1 * g**3 * rad
    return Quartic(a, b, c, d, e)


def _lambda_p_exact(
    q1: Fraction, q2: Fraction, q3: Fraction, g: Fraction
) -> tuple[Fraction, Fraction]:
    """Exact discriminant quantities of the stationary quartic at gain ratio g.

    The odd coefficients carry a factor sqrt(q1 * rad); every discriminant
    monomial holds an even combined power of them, so both quantities are
    rational in the squared side lengths.
    """
    rad = 2 * q1 * q2 - q1**2 + 2 * q1 * q3 - q2**2 + 2 * q2 * q3 - q3**2
    u = q1 * rad  # square of the common irrational factor
    a = -2 * q1 * (g - 2) ** 2
    b2 = g**2 - 4
    c = (
        -Fraction(1, 2) * q1**2 * g**3
        + q1 * (Fraction(3, 2) * q1 + q2 + q3) * g**2
        - 4 * q1 * (q2 + q3) * g
    )
    d2 = Fraction(1, 4) * g**2 * (2 * q1 * g - 3 * q1 - 2 * q2 - 2 * q3)
    e = -Fraction(1, 8) * q1 * g**3 * rad

    t0 = 256 * a**3 * e**3 - 128 * a**2 * c**2 * e**2 + 16 * a * c**4 * e
    t1 = (
        -192 * a**2 * b2 * d2 * e**2
        + 144 * a**2 * c * d2**2 * e
        + 144 * a * b2**2 * c * e**2
        - 80 * a * b2 * c**2 * d2 * e
        - 4 * a * c**3 * d2**2
        - 4 * b2**2 * c**3 * e
    )
    t2 = (
        -27 * a**2 * d2**4
        - 6 * a * b2**2 * d2**2 * e
        + 18 * a * b2 * c * d2**3
        - 27 * b2**4 * e**2
        + 18 * b2**3 * c * d2 * e
        + b2**2 * c**2 * d2**2
    )
    t3 = -4 * b2**3 * d2**3
    lam = t0 + u * (t1 + u * (t2 + u * t3))
    p = 8 * a * c - 3 * b2**2 * u
    return lam, p


def _interpolate_exact(values: list[Fraction], degree: int) -> list[Fraction]:
    """Monomial coefficients (descending) of the degree-``degree`` polynomial
    through (0, values[0]), (1, values[1]), ...; extra values are consistency
    checks and must lie on the curve exactly."""
    nodes = list(range(degree + 1))
    # divided differences
    table = [values[i] for i in nodes]
    for level in range(1, degree + 1):
        for i in range(degree, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (nodes[i] - nodes[i - level])
    # expand Newton form to monomials
    coeffs = [Fraction(0)] * (degree + 1)  # ascending during assembly
    basis = [Fraction(1)]  # product of (x - node_m), ascending coefficients
    for i in range(degree + 1):
        for k, bc in enumerate(basis):
            coeffs[k] += table[i] * bc
        new_basis = [Fraction(0)] * (len(basis) + 1)
        for k, bc in enumerate(basis):
            new_basis[k] -= nodes[i] * bc
            new_basis[k + 1] += bc
        basis = new_basis
    desc = list(reversed(coeffs))
    for x in range(degree + 1, len(values)):
        acc = Fraction(0)
        for cc in desc:
            acc = acc * x + cc
        if acc != values[x]:
            raise AssertionError("interpolated polynomial fails exact-degree check")
    return desc


def _deflate_exact(coeffs: list[Fraction], root: Fraction, times: int) -> list[Fraction]:
    """Synthetic division by (x - root), ``times`` times; remainders must vanish."""
    for _ in range(times):
        out = [coeffs[0]]
        for cc in coeffs[1:]:
            out.append(cc + root * out[-1])
        if out[-1] != 0:
            raise AssertionError(f"polynomial is not divisible by (x - {root})")
        coeffs = out[:-1]
    return coeffs


def _largest_real_root(coeffs: list[Fraction]) -> Optional[float]:
    """Largest real root of an exact polynomial; refined by rational bisection."""
    fl = np.array([float(c) for c in coeffs])
    fl = fl / np.max(np.abs(fl))
    rts = np.roots(fl)
    scale = 1.0 + max((abs(r) for r in rts), default=0.0)
    reals = sorted(r.real for r in rts if abs(r.imag) <= 1e-7 * scale)
    if not reals:
        return None
    r = reals[-1]

    def val(x: Fraction) -> Fraction:
        acc = Fraction(0)
        for cc in coeffs:
            acc = acc * x + cc
        return acc

    # bracket around the float root; for a simple largest root the sign of
    # the polynomial just above it matches the leading coefficient
    h = Fraction(max(abs(r), 1.0)).limit_denominator(10**6) * Fraction(1, 10**6)
    lo = Fraction(r).limit_denominator(10**12) - h
    hi = Fraction(r).limit_denominator(10**12) + h
    for _ in range(10):
        if val(lo) * val(hi) < 0:
            break
        lo -= h
        hi += h
        h *= 2
    else:
        return r  # multiple root or cluster: keep the eigenvalue estimate
    for _ in range(80):
        mid = (lo + hi) / 2
        v = val(mid)
        if v == 0:
            return float(mid)
        if v * val(lo) < 0:
            hi = mid
        else:
            lo = mid
    return float((lo + hi) / 2)


def gain_ratio_lower_bound(d_ji: float, d_ki: float, d_kj: float) -> float:
    """Certified gain-ratio bound for a non-isosceles triangle.

    Returns the largest real root over both discriminant polynomials (at
    least 2, which is always a root of each); for every gain ratio
    strictly above it the stationary quartic has no real root.
    """
    if abs(d_ki - d_kj) <= ISOSCELES_REL_TOL * max(d_ki, d_kj):
        raise ValueError(
            f"legs d_ki={d_ki} and d_kj={d_kj} are (numerically) equal; "
            "use the isosceles bound"
        )
    if not triangle_shape_condition(d_ji, d_ki, d_kj):
        raise ValueError(
            f"triangle ({d_ji}, {d_ki}, {d_kj}) fails the shape condition "
            "|d_ki^2 - d_kj^2| / d_ji^2 < 2 sqrt(2)"
        )
    if heron_radicand(d_ji, d_ki, d_kj) <= 0:
        raise ValueError(
            f"side lengths ({d_ji}, {d_ki}, {d_kj}) violate the triangle inequality"
        )
    q1 = Fraction(d_ji) ** 2
    q2 = Fraction(d_kj) ** 2
    q3 = Fraction(d_ki) ** 2
    lam_vals, p_vals = [], []
    for g in range(2 * _LAMBDA_DEG + 1):
        lam, p = _lambda_p_exact(q1, q2, q3, Fraction(g))
        lam_vals.append(lam)
        p_vals.append(p)
    lam_coeffs = _interpolate_exact(lam_vals, _LAMBDA_DEG)
    p_coeffs = _interpolate_exact(p_vals[: 2 * _P_DEG + 1], _P_DEG)
    # strip the known gamma^6 (gamma-2)^2 and (gamma-2)^2 factors exactly
    lam_core = _deflate_exact(lam_coeffs, Fraction(0), 6)
    lam_core = _deflate_exact(lam_core, Fraction(2), 2)
    p_core = _deflate_exact(p_coeffs, Fraction(2), 2)
    g1 = _largest_real_root(lam_core)
    g2 = _largest_real_root(p_core)
    g1 = 2.0 if g1 is None else max(g1, 2.0)
    g2 = 2.0 if g2 is None else max(g2, 2.0)
    return max(g1, g2)


def isosceles_gain_bound(d_ji: float, d_kj: float) -> float:
    """Gain-ratio bound (d_kj^2 - d_ji^2/4) / d_ji^2 for d_ki = d_kj."""
    if not 2.0 * d_kj > d_ji > 0:
        raise ValueError(
            f"isosceles triangle with base {d_ji} and legs {d_kj} violates "
            "the triangle inequality"
        )
    return (d_kj**2 - 0.25 * d_ji**2) / d_ji**2


@dataclass(frozen=True)
class TriangleGainInfo:
    """Per-triangle synthesis record for reporting."""

    triangle: tuple[int, int, int]
    d_ji: float
    d_ki: float
    d_kj: float
    shape_ratio: float  # |d_ki^2 - d_kj^2| / d_ji^2, must be < 2 sqrt(2)
    branch: str  # "isosceles" | "quartic"
    bound: float  # strict lower bound actually enforced on beta/alpha
    gamma_bar: Optional[float]  # largest discriminant root (quartic branch only)
    ratio: float  # chosen beta_k / alpha_k


@dataclass(frozen=True)
class GainSchedule:
    """Per-agent control gains: alpha_k for k >= 2, beta_k for k >= 3."""

    alphas: dict[int, float]
    betas: dict[int, float]
    table: tuple[TriangleGainInfo, ...] = ()

    def __post_init__(self):
        for k, a in self.alphas.items():
            if not a > 0:
                raise SpecError(f"alpha_{k} must be positive, got {a}")
        for k, b in self.betas.items():
            if not b >= 0:
                raise SpecError(f"beta_{k} must be nonnegative, got {b}")

    def ratio(self, k: int) -> float:
        return self.betas[k] / self.alphas[k]


def recommended_schedule(
    spec: FormationSpec, alpha: float = 1.0, margin: float = DEFAULT_MARGIN
) -> GainSchedule:
    """Synthesize gains meeting the per-triangle stability bound with headroom.

    Isosceles triangles use the closed-form bound; the rest use the
    certified discriminant-root bound (never below 2).  The chosen ratio
    exceeds the bound by the relative ``margin``.
    """
    if alpha <= 0 or margin <= 0:
        raise SpecError("alpha and margin must be positive")
    failing = [
        tri
        for tri in spec.triangles
        if not triangle_shape_condition(*spec.triangle_sides(tri))
    ]
    if failing:
        raise SpecError(
            "triangles fail the shape condition |d_ki^2 - d_kj^2|/d_ji^2 < 2 sqrt(2): "
            + ", ".join(str(t) for t in failing)
        )
    alphas = {k: alpha for k in range(2, spec.n + 1)}
    betas: dict[int, float] = {}
    table = []
    for tri in spec.triangles:
        d_ji, d_ki, d_kj = spec.triangle_sides(tri)
        shape_ratio = abs(d_ki**2 - d_kj**2) / d_ji**2
        if abs(d_ki - d_kj) <= ISOSCELES_REL_TOL * max(d_ki, d_kj):
            bound = isosceles_gain_bound(d_ji, d_kj)
            ratio = max(bound * (1.0 + margin), MIN_RATIO_FLOOR)
            info = TriangleGainInfo(
                tri, d_ji, d_ki, d_kj, shape_ratio, "isosceles", bound, None, ratio
            )
        else:
            gamma_bar = gain_ratio_lower_bound(d_ji, d_ki, d_kj)
            bound = max(gamma_bar, 2.0)
            ratio = bound * (1.0 + margin)
            info = TriangleGainInfo(
                tri, d_ji, d_ki, d_kj, shape_ratio, "quartic", bound, gamma_bar, ratio
            )
        betas[tri[2]] = ratio * alpha
        table.append(info)
    return GainSchedule(alphas=alphas, betas=betas, table=tuple(table))


def stationary_points(
    d21: float, d31: float, d32: float, s_star: float, ratio: float
) -> list[tuple[float, float]]:
    """All stationary apex positions of the three-agent potential.

    The base pair sits at p1 = (-d21/2, 0), p2 = (d21/2, 0).  The desired
    apex ((d31^2 - d32^2)/(2 d21), 2 s_star / d21) is always a solution;
    additional real solutions exist only when the gain ratio is below the
    synthesis bound.
    """
    if ratio <= 0:
        raise ValueError(f"gain ratio must be positive, got {ratio}")
    if heron_radicand(d21, d31, d32) <= 0:
        raise ValueError(
            f"side lengths ({d21}, {d31}, {d32}) violate the triangle inequality"
        )
    q1, q2, q3 = d21**2, d32**2, d31**2
    cshift = 0.5 * q1 - q2 - q3

    def eq1(x, y):
        return (2 * x * x + 2 * y * y + cshift + q1) * x + 0.5 * d21 * (q2 - q3)

    def eq2(x, y):
        return (2 * x * x + 2 * y * y + cshift) * y + ratio * (0.5 * q1 * y - d21 * s_star)

    def polish(x, y):
        for _ in range(40):
            g = 2 * x * x + 2 * y * y + cshift
            f1, f2 = eq1(x, y), eq2(x, y)
            j11 = g + 4 * x * x + q1
            j12 = 4 * x * y
            j21 = 4 * x * y
            j22 = g + 4 * y * y + 0.5 * ratio * q1
            det = j11 * j22 - j12 * j21
            if det == 0:
                break
            dx = (f1 * j22 - f2 * j12) / det
            dy = (j11 * f2 - j21 * f1) / det
            x, y = x - dx, y - dy
            if abs(dx) + abs(dy) < 1e-14 * (1.0 + abs(x) + abs(y)):
                break
        return x, y

    y_desired = 2.0 * s_star / d21
    candidates: list[tuple[float, float]] = [
        ((q3 - q2) / (2.0 * d21), y_desired)
    ]
    isosceles = abs(d31 - d32) <= ISOSCELES_REL_TOL * max(d31, d32)
    if isosceles:
        # apex on the axis of symmetry: eq2 with x = 0 is a cubic in y
        for y in np.roots([2.0, 0.0, cshift + 0.5 * ratio * q1, -ratio * d21 * s_star]):
            if abs(y.imag) <= 1e-9 * (1.0 + abs(y)):
                candidates.append((0.0, float(y.real)))
        # apex on the circle x^2 + y^2 = d32^2 - 3/4 d21^2
        rho2 = q2 - 0.75 * q1
        if rho2 > 0 and ratio != 2.0:
            y = 2.0 * ratio * s_star / (d21 * (ratio - 2.0))
            x2 = rho2 - y * y
            if x2 >= 0:
                x = math.sqrt(x2)
                candidates.extend([(x, y), (-x, y)])
    else:
        # at ratio exactly 2 the quartic's leading terms vanish; the
        # bisection isolator trims leading zeros and handles any degree
        spurious = _real_roots_by_bisection(
            np.array(stationary_quartic(d21, d31, d32, ratio).coeffs())
        )
        ys = [y_desired] + spurious
        for y in ys:
            cubic = [2.0, 0.0, 2 * y * y + cshift + q1, 0.5 * d21 * (q2 - q3)]
            for x in np.roots(cubic):
                if abs(x.imag) <= 1e-9 * (1.0 + abs(x)):
                    candidates.append((float(x.real), y))

    scale = max(d21, d31, d32)
    res_tol = 1e-7 * (1.0 + ratio) * (1.0 + scale**3)
    sol: list[tuple[float, float]] = []
    for x0, y0 in candidates:
        x, y = polish(x0, y0)
        if abs(eq1(x, y)) > res_tol or abs(eq2(x, y)) > res_tol:
            continue
        if any(abs(x - u) + abs(y - v) < 1e-6 * (1.0 + scale) for u, v in sol):
            continue
        sol.append((x, y))
    return sol
