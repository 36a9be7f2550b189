import numpy as np
import pytest

from formctl.quartic import (
    Quartic,
    certifies_no_real_root,
    discriminant_quantities,
    has_real_root,
    real_roots,
    real_roots_companion,
)


def random_quartic(rng):
    c = rng.uniform(-10, 10, 5)
    while c[0] == 0:
        c[0] = rng.uniform(-10, 10)
    return Quartic(*c)


class TestDiscriminantQuantities:
    def test_x4_plus_1(self):
        t = discriminant_quantities(Quartic(1, 0, 0, 0, 1))
        assert (t.disc, t.p, t.d) == (256, 0, 64)
        assert certifies_no_real_root(t)

    def test_x4_minus_1(self):
        t = discriminant_quantities(Quartic(1, 0, 0, 0, -1))
        assert t.disc == -256
        assert not certifies_no_real_root(t)

    def test_zero_leading_coefficient(self):
        with pytest.raises(ValueError):
            discriminant_quantities(Quartic(0, 1, 1, 1, 1))

    def test_criterion_soundness_random(self):
        # no-real-root certificate must never contradict the root oracles
        rng = np.random.default_rng(12)
        certified = 0
        for _ in range(2000):
            q = random_quartic(rng)
            if certifies_no_real_root(discriminant_quantities(q)):
                certified += 1
                assert not has_real_root(q)
                assert real_roots_companion(q) == []
        assert certified > 0


class TestRealRoots:
    def test_x4_plus_1_has_none(self):
        assert not has_real_root(Quartic(1, 0, 0, 0, 1))
        assert real_roots(Quartic(1, 0, 0, 0, 1)) == []

    def test_x4_minus_1_roots(self):
        q = Quartic(1, 0, 0, 0, -1)
        assert has_real_root(q)
        np.testing.assert_allclose(real_roots(q), [-1.0, 1.0], atol=1e-9)

    def test_known_factored_quartic(self):
        # (x - 1)(x - 2)(x - 3)(x - 4)
        q = Quartic(1, -10, 35, -50, 24)
        np.testing.assert_allclose(real_roots(q), [1, 2, 3, 4], atol=1e-8)

    def test_double_root(self):
        # (x - 1)^2 (x^2 + 1)
        q = Quartic(1, -2, 2, -2, 1)
        assert has_real_root(q)
        roots = real_roots(q)
        assert len(roots) >= 1
        assert min(abs(r - 1.0) for r in roots) < 1e-5

    def test_roots_evaluate_to_zero(self):
        rng = np.random.default_rng(13)
        for _ in range(500):
            q = random_quartic(rng)
            for r in real_roots(q):
                scale = max(abs(c) for c in q.coeffs()) * max(1.0, abs(r)) ** 4
                assert abs(q(r)) <= 1e-6 * scale

    def test_bisection_agrees_with_companion(self):
        rng = np.random.default_rng(14)
        for _ in range(1000):
            q = random_quartic(rng)
            mine = real_roots(q)
            ref = real_roots_companion(q)
            # same root count away from borderline (near-multiple) cases
            if mine and ref:
                paired = min(len(mine), len(ref))
                for a, b in zip(mine[:paired], ref[:paired]):
                    if abs(a - b) > 1e-5 * max(1.0, abs(a)):
                        # verify both claims directly on the polynomial
                        scale = max(abs(c) for c in q.coeffs())
                        assert abs(q(a)) <= 1e-5 * scale * max(1.0, abs(a)) ** 4
            assert has_real_root(q) == bool(ref) or _borderline(q)


def _borderline(q, eps=1e-6):
    """Near-tangency: smallest |critical value| is tiny relative to scale."""
    coeffs = np.array(q.coeffs())
    deriv = coeffs[:-1] * np.arange(4, 0, -1)
    crit = np.roots(deriv)
    crit = [c.real for c in crit if abs(c.imag) < 1e-8 * (1 + abs(c))]
    scale = max(abs(c) for c in q.coeffs())
    return any(abs(q(x)) <= eps * scale * max(1.0, abs(x)) ** 4 for x in crit)
