"""Exact time evolution of the generating polynomial and its roots.

The generating polynomial is carried by the linear flow

    dP/dt = d^3 P / dz^3

(optionally with the opposite sign; see ``flow_sign``).  Triple
differentiation is nilpotent on polynomials, so the solution operator is the
finite exponential sum

    P(., t) = sum_{m >= 0} (t^m / m!) (d^3/dz^3)^m P0,

which terminates after at most ceil(degree/3) + 1 terms: the evolution is
exact (up to floating-point rounding in the t^m/m! weights), monic stays
monic, and the degree never changes.  Each coefficient is a polynomial in t,
so root trajectories are algebraic curves; this module samples them, matches
roots across consecutive times by greedy nearest-neighbour assignment, and
annotates close encounters instead of pretending labels survive a collision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import cpoly
from .errors import AmbiguousMatching
from .transform import DeltaPotential, transformed_potential


@dataclass(frozen=True)
class FlowState:
    """A generating polynomial at one instant of flow time."""

    poly: cpoly.ComplexPoly
    t: float

    def advance(self, dt: float, flow_sign: int = 1) -> "FlowState":
        return FlowState(evolve(self.poly, dt, flow_sign), self.t + dt)


@dataclass(frozen=True)
class CollisionEvent:
    """A time-window where some roots came closer than the collision tolerance."""

    t_approx: float
    roots_involved: tuple[int, ...]
    min_separation: float


@dataclass(frozen=True)
class RootTrajectory:
    """Root paths sampled on a uniform time grid.

    ``paths[i][k]`` is the position of root i at ``times[k]``; path labels are
    only meaningful between collision events.
    """

    times: tuple[float, ...]
    paths: tuple[tuple[complex, ...], ...]
    events: tuple[CollisionEvent, ...]


def d3_apply(p: cpoly.ComplexPoly | Sequence[complex]) -> tuple[complex, ...]:
    """Coefficients of the third derivative (exact integer-factor arithmetic)."""
    coeffs = p.coeffs if isinstance(p, cpoly.ComplexPoly) else tuple(complex(c) for c in p)
    return cpoly.differentiate(coeffs, 3)


def _check_sign(flow_sign: int) -> int:
    if flow_sign not in (1, -1):
        raise ValueError(f"flow_sign must be +1 or -1, got {flow_sign!r}")
    return flow_sign


def evolve(p0: cpoly.ComplexPoly, t: float, flow_sign: int = 1) -> cpoly.ComplexPoly:
    """P(., t) by the terminating exponential sum; no time stepping.

    ``flow_sign=-1`` runs dP/dt = -d^3P/dz^3 instead (the two conventions
    differ only by t -> -t).
    """
    s = float(t) * _check_sign(flow_sign)
    out = list(p0.coeffs)
    term = p0.coeffs
    weight = 1.0
    m = 0
    while True:
        term = cpoly.differentiate(term, 3)
        if term == (0j,):
            break
        m += 1
        weight *= s / m
        for j, c in enumerate(term):
            out[j] += weight * c
    return cpoly.ComplexPoly(tuple(out))


def verify_flow(p0: cpoly.ComplexPoly, t: float, dt: float, flow_sign: int = 1) -> float:
    """Max coefficient defect of the flow ODE at time t.

    Compares the central difference [P(t+dt) - P(t-dt)] / (2 dt) against the
    configured sign times the third derivative of P(t); a small value
    certifies that evolve integrates the stated equation.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    sign = _check_sign(flow_sign)
    ahead = evolve(p0, t + dt, sign).coeffs
    behind = evolve(p0, t - dt, sign).coeffs
    rhs = d3_apply(evolve(p0, t, sign))
    worst = 0.0
    for j in range(len(ahead)):
        diff = (ahead[j] - behind[j]) / (2.0 * dt)
        expect = sign * rhs[j] if j < len(rhs) else 0j
        worst = max(worst, abs(diff - expect))
    return worst


def _pairwise_min(positions: Sequence[complex]) -> tuple[float, tuple[int, ...]]:
    """Smallest pairwise separation and the indices achieving-or-tying it."""
    best = math.inf
    for i in range(len(positions)):
        for j in range(i + 1, len(positions)):
            best = min(best, abs(positions[i] - positions[j]))
    involved = set()
    for i in range(len(positions)):
        for j in range(i + 1, len(positions)):
            if abs(positions[i] - positions[j]) <= 2.0 * best:
                involved.update((i, j))
    return best, tuple(sorted(involved))


def _greedy_match(prev: Sequence[complex], cur: Sequence[complex], margin: float, lenient: bool) -> list[complex]:
    """Assign each previous root the nearest unclaimed current root.

    Pairs are consumed globally closest first.  If at any pick the best
    conflicting alternative is within ``margin`` of the chosen pair, the
    assignment is not trustworthy; that raises AmbiguousMatching unless
    ``lenient`` (set next to a flagged collision, where label loss is
    expected and annotated instead).
    """
    n = len(prev)
    pairs = sorted(
        ((abs(prev[i] - cur[j]), i, j) for i in range(n) for j in range(n)),
        key=lambda t: (t[0], t[1], t[2]),
    )
    taken_prev: set[int] = set()
    taken_cur: set[int] = set()
    out: list[complex] = [0j] * n
    for dist, i, j in pairs:
        if i in taken_prev or j in taken_cur:
            continue
        if not lenient:
            rival = next(
                (d for d, i2, j2 in pairs
                 if (i2 == i) != (j2 == j)
                 and i2 not in taken_prev and j2 not in taken_cur),
                math.inf,
            )
            if rival - dist < margin:
                raise AmbiguousMatching(
                    "root matching between consecutive times is ambiguous "
                    f"(competing assignments differ by {rival - dist:.3e} < margin {margin:.3e}); "
                    "increase steps",
                    distance=dist,
                    rival=rival,
                    margin=margin,
                )
        out[i] = cur[j]
        taken_prev.add(i)
        taken_cur.add(j)
        if len(taken_prev) == n:
            break
    return out


def trajectory(
    p0: cpoly.ComplexPoly,
    t0: float,
    t1: float,
    steps: int,
    collision_tol: float = 1e-3,
    flow_sign: int = 1,
) -> RootTrajectory:
    """Sampled root paths of the evolving polynomial on [t0, t1].

    Roots at the first time are ordered by (real, imag); afterwards each
    time's roots inherit labels from the previous time by greedy
    nearest-neighbour matching with margin 0.25 * (previous minimum
    separation).  Whenever the minimum separation drops below
    ``collision_tol`` the time is folded into a CollisionEvent (consecutive
    flagged times merge into one event) and matching at and immediately
    after it is exempt from the ambiguity check, since labels may genuinely
    permute there.
    """
    sign = _check_sign(flow_sign)
    if not t1 > t0:
        raise ValueError(f"need t0 < t1, got {t0!r} >= {t1!r}")
    if steps < 1:
        raise ValueError(f"need steps >= 1, got {steps}")
    if p0.degree < 1:
        raise ValueError("trajectory needs a generating polynomial of degree >= 1")
    n = p0.degree
    times = tuple(t0 + (t1 - t0) * k / steps for k in range(steps + 1))

    columns: list[list[complex]] = []
    flagged: list[tuple[int, float, tuple[int, ...]]] = []  # (time index, min sep, labels)
    prev: list[complex] = []
    for k, t in enumerate(times):
        rts = list(cpoly.roots(evolve(p0, t, sign)).roots)
        if k == 0:
            cur = sorted(rts, key=lambda r: (r.real, r.imag))
        elif n == 1:
            cur = rts
        else:
            # Matching is exempt from the ambiguity check when either end of
            # the step sits at a collision: labels genuinely permute there,
            # and the CollisionEvent already marks them unreliable.
            sep_prev = cpoly.min_root_separation(prev)
            lenient = sep_prev < collision_tol or _pairwise_min(rts)[0] < collision_tol
            cur = _greedy_match(prev, rts, 0.25 * sep_prev, lenient=lenient)
        if n >= 2:
            sep, involved = _pairwise_min(cur)
            if sep < collision_tol:
                flagged.append((k, sep, involved))
        columns.append(cur)
        prev = cur

    events: list[CollisionEvent] = []
    run: list[tuple[int, float, tuple[int, ...]]] = []
    for entry in flagged:
        if run and entry[0] != run[-1][0] + 1:
            events.append(_merge_run(run, times))
            run = []
        run.append(entry)
    if run:
        events.append(_merge_run(run, times))

    paths = tuple(tuple(columns[k][i] for k in range(len(times))) for i in range(n))
    return RootTrajectory(times=times, paths=paths, events=tuple(events))


def _merge_run(run: list[tuple[int, float, tuple[int, ...]]], times: tuple[float, ...]) -> CollisionEvent:
    tightest = min(run, key=lambda e: e[1])
    involved = sorted(set().union(*(e[2] for e in run)))
    return CollisionEvent(
        t_approx=times[tightest[0]],
        roots_involved=tuple(involved),
        min_separation=tightest[1],
    )


def potential_at(p0: cpoly.ComplexPoly, t: float, flow_sign: int = 1) -> DeltaPotential:
    """The moving delta potential at flow time t: -8*pi at each root of P(., t)."""
    return transformed_potential(evolve(p0, t, flow_sign))
