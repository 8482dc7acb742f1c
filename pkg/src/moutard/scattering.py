"""Generalized scattering data of the closed-form eigenfunctions.

Outside its poles the normalized deviation mu(z) = psi(z) e^{-lambda z} - 1
decays like 1/z, and its leading behaviour on a large circle is

    mu(z) ~ a / z  +  e^{lambda_bar z_bar - lambda z} b / z_bar

with coefficients a ("forward" amplitude) and b ("reflected" amplitude).
For a generating polynomial of degree N the expected values are a = -2N/lambda
and b = 0 identically: mu is a rational function of z alone, holomorphic
outside the roots, so nothing multiplies the conjugate-phase mode.

Extraction is a linear least-squares fit of sampled mu against the two basis
functions above.  mu also carries higher holomorphic modes 1/z^2, 1/z^3, ...
whose overlap with the wildly oscillatory b-column does not vanish at any
finite sample count (the phase e^{-2i Im(lambda z)} aliases them in); fitted
naively they leak into b at the 1/radius level and mask the reflectionless
property.  The fit therefore includes a few of those modes as nuisance
columns, projects them out of both the data and the (1/z, conjugate-phase)
columns, and solves the remaining two-unknown problem explicitly; the
coefficients a and b equal those of the full augmented least squares, while
the reported misfit is still measured against the plain two-term model.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateDesign, InconsistentData, RadiusTooSmall, ZeroLambda
from .transform import FaddeevParams

DEFAULT_RADIUS_FACTOR = 1e4
DEFAULT_SAMPLE_COUNT = 64

# Highest 1/z^j mode projected out as a nuisance column (given enough samples).
MAX_NUISANCE_MODE = 6

MuSamples = list[tuple[complex, complex]]


@dataclass(frozen=True)
class ScatteringEstimate:
    """Fitted scattering data from one circle of eigenfunction samples."""

    a: complex
    b: complex
    fit_residual: float
    radius: float
    samples: int

    def __post_init__(self) -> None:
        if not self.fit_residual >= 0:
            raise ValueError(f"fit_residual must be nonnegative, got {self.fit_residual!r}")
        if self.samples < 4:
            raise ValueError(f"need at least 4 samples (two complex unknowns), got {self.samples}")


def sample_mu(fp: FaddeevParams, radius: float | None = None, count: int = DEFAULT_SAMPLE_COUNT) -> MuSamples:
    """mu = psi e^{-lambda z} - 1 at `count` equispaced points on |z| = radius.

    Default radius is 1e4 * max(1, max |root|), far enough out that modes
    beyond the fitted ones sit below double-precision resolution.  mu is
    evaluated in closed form, so the huge circle costs nothing in accuracy.
    """
    if count < 8:
        raise ValueError(f"need at least 8 circle samples, got {count}")
    max_root = max((abs(r) for r in fp.roots), default=0.0)
    if radius is None:
        radius = DEFAULT_RADIUS_FACTOR * max(1.0, max_root)
    if not (math.isfinite(radius) and radius > 2.0 * max_root and radius > 0):
        raise RadiusTooSmall(
            f"sampling radius {radius!r} must exceed twice the largest root magnitude {max_root!r}",
            radius=radius,
            max_root=max_root,
        )
    out: MuSamples = []
    for j in range(count):
        z = cmath.rect(radius, 2.0 * math.pi * j / count)
        out.append((z, fp.mu(z)))
    return out


def _dot(x: Sequence[complex], y: Sequence[complex]) -> complex:
    return sum(xi.conjugate() * yi for xi, yi in zip(x, y))


def fit_scattering(samples: Sequence[tuple[complex, complex]], lam: complex) -> ScatteringEstimate:
    """Least-squares (a, b) from (z, mu) pairs on a common circle.

    Solves min over (a, b) of sum |mu - a/z - b e^{lambda_bar z_bar - lambda z}/z_bar|^2
    with holomorphic nuisance modes 1/z^2 .. 1/z^6 projected out first (as
    many as the sample count supports), then an explicit 2x2 normal-equation
    solve.  Accumulation order is canonicalized by sorting the samples, so
    the result is independent of input order.
    """
    lam = complex(lam)
    if lam == 0:
        raise ZeroLambda("scattering data is defined for nonzero lambda")
    if len(samples) < 4:
        raise ValueError(f"need at least 4 samples, got {len(samples)}")
    ordered = sorted(((complex(z), complex(mu)) for z, mu in samples), key=lambda t: (t[0].real, t[0].imag))
    zs = [z for z, _ in ordered]
    data = [mu for _, mu in ordered]
    n = len(zs)
    radius = sum(abs(z) for z in zs) / n
    if radius == 0 or any(z == 0 for z in zs):
        raise ValueError("samples must lie on a circle of positive radius")
    if any(abs(abs(z) - radius) > 1e-6 * radius for z in zs):
        raise ValueError("samples must lie on a common circle")

    u = [1.0 / z for z in zs]
    v = [cmath.exp(complex(0.0, -2.0 * (lam * z).imag)) / z.conjugate() for z in zs]

    # Orthonormalize the nuisance block (modified Gram-Schmidt), then project
    # it out of both design columns and the data; the 2x2 solve below then
    # yields the same (a, b) as the full augmented least squares.
    nuisance: list[list[complex]] = []
    for mode in range(2, min(MAX_NUISANCE_MODE, n // 4) + 1):
        w = [z ** (-mode) for z in zs]
        for q in nuisance:
            coef = _dot(q, w)
            w = [wi - coef * qi for wi, qi in zip(w, q)]
        nrm = math.sqrt(_dot(w, w).real)
        if nrm > 1e-14 * radius ** (-mode) * math.sqrt(n):
            nuisance.append([wi / nrm for wi in w])

    def deflate(x: list[complex]) -> list[complex]:
        for q in nuisance:
            coef = _dot(q, x)
            x = [xi - coef * qi for xi, qi in zip(x, q)]
        return x

    ud, vd, md = deflate(list(u)), deflate(list(v)), deflate(list(data))

    guu = _dot(ud, ud).real
    gvv = _dot(vd, vd).real
    guv = _dot(ud, vd)
    det = guu * gvv - (guv * guv.conjugate()).real
    if det <= 1e-20 * guu * gvv or guu == 0 or gvv == 0:
        raise DegenerateDesign(
            "the 1/z and conjugate-phase columns are numerically collinear; "
            "change lambda, the radius, or the sample count",
            collinearity=abs(guv) / math.sqrt(guu * gvv) if guu > 0 and gvv > 0 else math.inf,
        )
    bu = _dot(ud, md)
    bv = _dot(vd, md)
    a = (gvv * bu - guv * bv) / det
    b = (guu * bv - guv.conjugate() * bu) / det

    misfit = math.sqrt(sum(abs(m - a * ui - b * vi) ** 2 for m, ui, vi in zip(data, u, v)) / n)
    return ScatteringEstimate(a=a, b=b, fit_residual=misfit, radius=radius, samples=n)


def expected_a(n: int, lam: complex) -> complex:
    """Predicted forward amplitude -2n/lambda for a degree-n generator."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    lam = complex(lam)
    if lam == 0:
        raise ZeroLambda("expected_a requires nonzero lambda")
    return -2.0 * n / lam


def count_deltas(a: complex, lam: complex) -> int:
    """Number of point masses recovered from a fitted forward amplitude.

    Inverts a = -2N/lambda; InconsistentData when -lambda*a/2 is not within
    0.1 of a nonnegative integer (the input cannot then come from a monic
    polynomial generator).
    """
    lam = complex(lam)
    if lam == 0:
        raise ZeroLambda("count_deltas requires nonzero lambda")
    w = -lam * complex(a) / 2.0
    n = round(w.real)
    if abs(w.imag) > 0.1 or abs(w.real - n) > 0.1 or n < 0:
        raise InconsistentData(
            f"-lambda*a/2 = {w!r} is not within 0.1 of a nonnegative integer",
            value=w,
        )
    return int(n)
