"""Quartic polynomials: discriminant-based no-real-root tests and root isolation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BISECT_TOL = 1e-10


@dataclass(frozen=True)
class Quartic:
    """Coefficients of a x^4 + b x^3 + c x^2 + d x + e."""

    a: float
    b: float
    c: float
    d: float
    e: float

    def __call__(self, x: float) -> float:
        return (((self.a * x + self.b) * x + self.c) * x + self.d) * x + self.e

    def coeffs(self) -> tuple[float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.e)


@dataclass(frozen=True)
class DiscriminantTriple:
    """The three sign-test quantities for a quartic's real-root count."""

    disc: float
    p: float
    d: float


def discriminant_quantities(q: Quartic) -> DiscriminantTriple:
    """Discriminant and the two auxiliary depressed-quartic quantities.

    If disc > 0 and (p > 0 or d > 0), the quartic has no real root.
    """
    a, b, c, d, e = q.coeffs()
    if a == 0:
        raise ValueError("leading coefficient must be nonzero")
    disc = (
        256 * a**3 * e**3
        - 192 * a**2 * b * d * e**2
        - 128 * a**2 * c**2 * e**2
        + 144 * a**2 * c * d**2 * e
        - 27 * a**2 * d**4
        + 144 * a * b**2 * c * e**2
        - 6 * a * b**2 * d**2 * e
        - 80 * a * b * c**2 * d * e
        + 18 * a * b * c * d**3
        + 16 * a * c**4 * e
        - 4 * a * c**3 * d**2
        - 27 * b**4 * e**2
        + 18 * b**3 * c * d * e
        - 4 * b**3 * d**3
        - 4 * b**2 * c**3 * e
        + b**2 * c**2 * d**2
    )
    pp = 8 * a * c - 3 * b**2
    dd = 64 * a**3 * e - 16 * a**2 * c**2 + 16 * a * b**2 * c - 16 * a**2 * b * d - 3 * b**4
    return DiscriminantTriple(disc=disc, p=pp, d=dd)


def certifies_no_real_root(t: DiscriminantTriple) -> bool:
    """Sufficient sign condition for the quartic to have no real root."""
    return t.disc > 0 and (t.p > 0 or t.d > 0)


def _cauchy_bound(coeffs: np.ndarray) -> float:
    """All real roots lie in [-B, B] with B = 1 + max |c_i / c_lead|."""
    lead = coeffs[0]
    return 1.0 + float(np.max(np.abs(coeffs[1:] / lead)))


def _real_roots_by_bisection(coeffs: np.ndarray, tol: float = BISECT_TOL) -> list[float]:
    """Real roots of a polynomial via derivative-based interval subdivision.

    The polynomial is monotonic between consecutive critical points, so a
    sign change on such an interval brackets exactly one root; brackets
    are refined by bisection.  Critical points are found recursively.
    """
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    deg = len(coeffs) - 1
    if deg <= 0:
        return []
    if deg == 1:
        return [-coeffs[1] / coeffs[0]]
    bound = _cauchy_bound(coeffs)
    deriv = coeffs[:-1] * np.arange(deg, 0, -1)
    crit = [x for x in _real_roots_by_bisection(deriv, tol) if -bound < x < bound]
    nodes = [-bound] + sorted(crit) + [bound]

    def val(x: float) -> float:
        return float(np.polyval(coeffs, x))

    roots: list[float] = []
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        flo, fhi = val(lo), val(hi)
        if flo == 0.0:
            roots.append(lo)
            continue
        if flo * fhi > 0:
            if fhi == 0.0:
                roots.append(hi)
            continue
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fmid = val(mid)
            if fmid == 0.0 or hi - lo < tol * max(1.0, abs(mid)):
                break
            if flo * fmid < 0:
                hi = mid
            else:
                lo, flo = mid, fmid
        roots.append(0.5 * (lo + hi))
    # dedupe roots shared by adjacent intervals (root at a critical point)
    out: list[float] = []
    for r in sorted(roots):
        if not out or abs(r - out[-1]) > 10 * tol * max(1.0, abs(r)):
            out.append(r)
    return out


def real_roots(q: Quartic, tol: float = BISECT_TOL) -> list[float]:
    """All real roots of the quartic, ascending; leading coefficient nonzero."""
    if q.a == 0:
        raise ValueError("leading coefficient must be nonzero")
    return _real_roots_by_bisection(np.array(q.coeffs()), tol)


def has_real_root(q: Quartic, tol: float = BISECT_TOL) -> bool:
    """True iff the quartic has at least one real root.

    A quartic with leading coefficient a attains a global extremum at a
    critical point; it has a real root iff some critical value has the
    opposite sign of a (or is zero).
    """
    if q.a == 0:
        raise ValueError("leading coefficient must be nonzero")
    coeffs = np.array(q.coeffs())
    deriv = coeffs[:-1] * np.arange(4, 0, -1)
    crit = _real_roots_by_bisection(deriv, tol)
    return any(q(x) * q.a <= 0.0 for x in crit)


def real_roots_companion(q: Quartic) -> list[float]:
    """Cross-check oracle: real eigenvalues of the companion matrix."""
    if q.a == 0:
        raise ValueError("leading coefficient must be nonzero")
    rts = np.roots(np.array(q.coeffs()))
    scale = 1.0 + float(np.max(np.abs(rts))) if rts.size else 1.0
    return sorted(float(r.real) for r in rts if abs(r.imag) <= 1e-8 * scale)
