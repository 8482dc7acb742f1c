"""Complex polynomial arithmetic tuned for verification work.

Polynomials are monic and stored densely in ascending coefficient order,
matching the generating functions P(z) = prod(z - z_k) used throughout the
toolkit.  Evaluation is Horner, differentiation is exact coefficient
arithmetic, and root finding is a deterministic Aberth-Ehrlich simultaneous
iteration so repeated runs give bit-identical output.

Everything here is pure and immutable; instances are safe to share across
threads.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InsufficientRoots, NonConvergence

_EPS = sys.float_info.epsilon
# Fractional part of the golden ratio; used to rotate the initial root guesses
# off any axis of symmetry of the polynomial.
_GOLDEN_FRAC = 0.6180339887498949

DEFAULT_ROOT_TOL = 1e-12
DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class ComplexPoly:
    """Monic complex polynomial, coefficients in ascending degree order.

    ``coeffs[j]`` multiplies z**j and the last entry is exactly 1.  Use
    :func:`from_roots` or :meth:`from_coefficients` instead of spelling out
    coefficient tuples by hand.
    """

    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        if coeffs[-1] != 1:
            raise ValueError(
                f"leading coefficient must be exactly 1, got {coeffs[-1]!r}"
            )
        if not all(cmath.isfinite(c) for c in coeffs):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[complex]) -> "ComplexPoly":
        """Build from an arbitrary coefficient list, normalizing to monic.

        Trailing (highest-degree) zeros are stripped first; the remaining
        coefficients are divided by the leading one.
        """
        cs = [complex(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ValueError("the zero polynomial has no monic form")
        lead = cs[-1]
        return cls(tuple(c / lead for c in cs[:-1]) + (1 + 0j,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, z: complex) -> complex:
        return horner(self.coeffs, z)

    __call__ = evaluate

    def derivative(self, k: int = 1) -> tuple[complex, ...]:
        """k-th derivative as a plain (generally non-monic) coefficient tuple."""
        return differentiate(self.coeffs, k)


@dataclass(frozen=True)
class RootSet:
    """All roots of a polynomial, multiplicity by repetition.

    The order is deterministic for a given input but carries no meaning.
    """

    roots: tuple[complex, ...]

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


def from_roots(roots: Sequence[complex]) -> ComplexPoly:
    """Monic polynomial with exactly the given roots; [] gives the constant 1."""
    coeffs = [1 + 0j]
    for r in roots:
        rc = complex(r)
        coeffs.insert(0, 0j)
        for j in range(len(coeffs) - 1):
            coeffs[j] -= rc * coeffs[j + 1]
    return ComplexPoly(tuple(coeffs))


def horner(coeffs: Sequence[complex], z: complex) -> complex:
    """Evaluate an ascending coefficient sequence at z by nested multiplication."""
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def evaluate(p: ComplexPoly, z: complex) -> complex:
    return p.evaluate(z)


def differentiate(coeffs: Sequence[complex], k: int = 1) -> tuple[complex, ...]:
    """k-th derivative of an ascending coefficient sequence, exact factors.

    Dropping below degree 0 yields the zero polynomial, represented as (0j,).
    """
    if k < 0:
        raise ValueError("derivative order must be >= 0")
    cs = tuple(complex(c) for c in coeffs)
    for _ in range(k):
        if len(cs) <= 1:
            return (0j,)
        cs = tuple(cs[j + 1] * (j + 1) for j in range(len(cs) - 1))
    return cs


def derivative(p: ComplexPoly, k: int = 1) -> tuple[complex, ...]:
    """Free-function alias for :meth:`ComplexPoly.derivative`."""
    return p.derivative(k)


def _horner_full(coeffs: Sequence[complex], x: complex) -> tuple[complex, complex, float]:
    """One pass returning p(x), p'(x), and the evaluation scale sum |c_j||x|^j.

    The scale is the standard backward-error yardstick: a computed value with
    |p(x)| at or below eps * scale is numerically indistinguishable from an
    exact root.
    """
    ax = abs(x)
    acc = coeffs[-1]
    dacc = 0j
    scale = abs(coeffs[-1])
    for j in range(len(coeffs) - 2, -1, -1):
        dacc = dacc * x + acc
        acc = acc * x + coeffs[j]
        scale = scale * ax + abs(coeffs[j])
    return acc, dacc, scale


def roots(
    p: ComplexPoly,
    tol: float = DEFAULT_ROOT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> RootSet:
    """All roots of p via deterministic Aberth-Ehrlich simultaneous iteration.

    Initial guesses sit on a circle of radius 1 + max|coeff|, rotated by an
    irrational fraction of a turn so they never align with axes of symmetry.
    Sweeps update the guesses in place until every residual reaches its
    rounding floor or the corrections stagnate at machine precision.

    ``tol`` bounds the scaled residual |p(x)| / max(1, sum_j |c_j||x|^j); the
    scaling makes the gate meaningful for polynomials whose coefficients are
    large, where an absolute bound on |p(x)| is unattainable in double
    precision.  Raises NonConvergence if any root misses the gate after
    ``max_iter`` sweeps.
    """
    n = p.degree
    if n == 0:
        return RootSet(())
    coeffs = p.coeffs

    radius = 1.0 + max(abs(c) for c in coeffs)
    xs = [
        radius * cmath.exp(2j * math.pi * (k / n + _GOLDEN_FRAC))
        for k in range(n)
    ]

    stagnate = 2.0 ** -50
    sweeps = 0
    for sweeps in range(1, max_iter + 1):
        finished = True
        for i in range(n):
            x = xs[i]
            pv, dv, scale = _horner_full(coeffs, x)
            if abs(pv) <= 4.0 * _EPS * scale:
                continue  # at the rounding floor; moving would add noise
            if dv == 0:
                # Dead center of a symmetric cluster; nudge deterministically.
                xs[i] = x + (stagnate + stagnate * abs(x)) * (1 + 1j)
                finished = False
                continue
            newton = pv / dv
            repulse = 0j
            for j in range(n):
                if j != i:
                    diff = x - xs[j]
                    if diff == 0:
                        diff = stagnate * (1 + abs(x)) * (1 + 1j)
                    repulse += 1 / diff
            denom = 1 - newton * repulse
            if denom == 0:
                xs[i] = x + (stagnate + stagnate * abs(x)) * (1 + 1j)
                finished = False
                continue
            delta = newton / denom
            xs[i] = x - delta
            if abs(delta) > stagnate * (1 + abs(x)):
                finished = False
        if finished:
            break

    worst = 0.0
    for x in xs:
        pv, _, scale = _horner_full(coeffs, x)
        worst = max(worst, abs(pv) / max(1.0, scale))
    if worst >= tol:
        raise NonConvergence(sweeps, worst)
    return RootSet(tuple(xs))


def min_root_separation(r: RootSet | Sequence[complex]) -> float:
    """Minimum pairwise distance between roots; needs at least two."""
    pts = tuple(r.roots if isinstance(r, RootSet) else r)
    if len(pts) < 2:
        raise InsufficientRoots(
            f"separation needs at least 2 roots, got {len(pts)}"
        )
    return min(
        abs(pts[i] - pts[j])
        for i in range(len(pts))
        for j in range(i + 1, len(pts))
    )
