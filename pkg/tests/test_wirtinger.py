"""Stencil derivative tests against hand-differentiated references.

The references: for holomorphic f, d/dz f is the complex derivative and
d/dzbar f = 0; for f = conj(z) the roles swap; for f = |z|^2 = z zbar the
two Wirtinger derivatives are zbar and z and the Laplacian is 4.
"""

from __future__ import annotations

import cmath
import math
import random
import sys

import pytest

from moutard import cpoly
from moutard.errors import NonFinite
from moutard.wirtinger import (
    DEFAULT_STENCIL,
    FIRST_ORDER_STEP_SCALE,
    LAPLACIAN_STEP_SCALE,
    StencilConfig,
    d_z,
    d_zbar,
    laplacian,
)

EPS = sys.float_info.epsilon
LAM = 1 + 1j


def expwave(z: complex) -> complex:
    return cmath.exp(LAM * z)


# --- d_z -------------------------------------------------------------------


def test_dz_holomorphic_exponential():
    z = 0.3
    assert abs(d_z(expwave, z) - LAM * cmath.exp(LAM * z)) < 1e-8


def test_dz_kills_antiholomorphic():
    assert abs(d_z(lambda z: z.conjugate(), 0.4 - 1.1j)) < 1e-10


def test_dz_modulus_squared():
    z = 2 + 1j
    assert abs(d_z(lambda w: abs(w) ** 2, z) - z.conjugate()) < 1e-8


# --- d_zbar ----------------------------------------------------------------


def test_dzbar_kills_holomorphic():
    assert abs(d_zbar(expwave, 0.3)) < 1e-10


def test_dzbar_conjugate_is_one():
    assert abs(d_zbar(lambda z: z.conjugate(), 0.4 - 1.1j) - 1) < 1e-10


def test_dzbar_modulus_squared():
    z = 2 + 1j
    assert abs(d_zbar(lambda w: abs(w) ** 2, z) - z) < 1e-8


def test_dzbar_annihilates_polynomial_evaluations():
    rng = random.Random(99)
    for _ in range(30):
        deg = rng.randrange(1, 7)
        p = cpoly.ComplexPoly(
            tuple(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(deg))
            + (1 + 0j,)
        )
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        dp = cpoly.horner(cpoly.differentiate(p.coeffs, 1), z)
        assert abs(d_zbar(p.evaluate, z)) < 1e-9 * (1.0 + abs(dp))


# --- laplacian -------------------------------------------------------------


def test_laplacian_exponential_is_harmonic():
    assert abs(laplacian(expwave, 0.5 - 0.2j)) < 1e-7


def test_laplacian_log_abs_away_from_origin():
    assert abs(laplacian(lambda z: math.log(abs(z)), 1 + 2j)) < 1e-7


def test_laplacian_modulus_squared_is_four():
    assert abs(laplacian(lambda w: abs(w) ** 2, 0.7 + 0.4j) - 4) < 1e-8


def test_laplacian_agrees_with_nested_wirtinger():
    # Delta f = 4 d_zbar(d_z f).  At h = 1e-3 both estimates carry O(h^4)
    # truncation plus eps/h^2-scale rounding; 1e-6 covers the combined
    # error for these smooth test functions with a wide margin (measured
    # worst 4.4e-9).
    cfg = StencilConfig(h=1e-3)
    for f in (expwave, cmath.sin, lambda z: abs(z) ** 2):
        for z in (0.3 + 0.2j, 2 - 1j, -1 + 3j):
            lap = laplacian(f, z, cfg)
            nested = 4.0 * d_zbar(lambda w: d_z(f, w, cfg), z, cfg)
            assert abs(lap - nested) < 1e-6 * max(1.0, abs(f(z)))


# --- step handling ---------------------------------------------------------


def test_step_halving_is_noise_stable():
    # A first derivative estimated from eps-perturbed samples carries
    # rounding noise of scale eps * |f| / h; halving the step must not move
    # a Richardson-extrapolated result by more than 10x that scale for
    # entire functions on |z| <= 5 (measured worst 6.1x).
    for f in (expwave, cmath.sin, lambda z: z * z * z - 2j * z):
        for z in (0.3, 2 - 1j, -1 + 2j, 4 + 3j, -3 - 4j, 5j):
            coarse = d_z(f, z, StencilConfig(h=1e-3))
            fine = d_z(f, z, StencilConfig(h=5e-4))
            noise = EPS * max(1.0, abs(f(z))) / 5e-4
            assert abs(coarse - fine) < 10.0 * noise


def test_adaptive_steps_scale_with_z():
    cfg = StencilConfig()
    assert cfg.first_order_step(0.5j) == FIRST_ORDER_STEP_SCALE
    assert cfg.first_order_step(10j) == FIRST_ORDER_STEP_SCALE * 10
    assert cfg.laplacian_step(0) == LAPLACIAN_STEP_SCALE
    assert cfg.laplacian_step(-4) == LAPLACIAN_STEP_SCALE * 4


def test_explicit_step_is_used_verbatim():
    cfg = StencilConfig(h=0.25)
    assert cfg.first_order_step(100) == 0.25
    assert cfg.laplacian_step(100) == 0.25


def test_step_must_be_positive():
    with pytest.raises(ValueError):
        StencilConfig(h=0.0)
    with pytest.raises(ValueError):
        StencilConfig(h=-1e-3)


def test_richardson_toggle_changes_estimate():
    f = expwave
    z = 1.1 - 0.6j
    plain = d_z(f, z, StencilConfig(h=1e-2, richardson=False))
    sharp = d_z(f, z, StencilConfig(h=1e-2, richardson=True))
    want = LAM * cmath.exp(LAM * z)
    assert abs(sharp - want) < abs(plain - want)


# --- failure reporting -----------------------------------------------------


def test_non_finite_sample_raises():
    with pytest.raises(NonFinite):
        d_z(lambda z: complex("nan"), 0)
    with pytest.raises(NonFinite):
        laplacian(lambda z: complex(math.inf, 0.0), 1 + 1j)


def test_non_finite_reports_sample_point():
    def pole_like(z: complex) -> complex:
        return complex(math.inf, 0.0) if z.real > 1.0 else 1.0

    with pytest.raises(NonFinite) as exc:
        d_z(pole_like, 1.0, DEFAULT_STENCIL)
    assert exc.value.details["point"].real > 1.0
