"""Closed forms for bounded position functions, their witnesses, and property checkers.

The position functions here satisfy g(pos+n) = w(n)*g(pos) + b(n) with witnesses
that depend on the offset n only, never on pos, and stay bounded on all of N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cplx import complex_multiply
from .errors import InconclusiveWitnessError, PreconditionError, SingularityError
from .report import VerificationReport

SINGULAR_GAP = 1e-9


@dataclass(frozen=True)
class GeneralSolutionParams:
    """Parameters (z1, z2, z3) of g(pos) = (z3 - z2/(1-z1)) * z1^pos + z2/(1-z1).

    z1 is the transformation base, z2 the constant-term seed b(1), z3 the
    initial value g(0).
    """

    z1: complex
    z2: complex
    z3: complex

    def __post_init__(self):
        object.__setattr__(self, "z1", complex(self.z1))
        object.__setattr__(self, "z2", complex(self.z2))
        object.__setattr__(self, "z3", complex(self.z3))
        if abs(self.z1) > 1.0 + 1e-12:
            raise PreconditionError(f"|z1| = {abs(self.z1):.12g} > 1: g would be unbounded")
        if abs(1.0 - self.z1) < SINGULAR_GAP and abs(self.z2) > 0.0:
            raise SingularityError("z1 ~ 1 with nonzero z2: the general form is singular")

    def constant_term(self) -> complex:
        """Fixed point z2/(1-z1); 0 when z2 = 0 (valid even at z1 = 1)."""
        if self.z2 == 0:
            return 0j
        return self.z2 / (1.0 - self.z1)

    def modulus_bound(self) -> float:
        """|z3 - c| + |c| with c the fixed point; |g(pos)| never exceeds it."""
        c = self.constant_term()
        return abs(self.z3 - c) + abs(c)


@dataclass(frozen=True)
class SimplifiedSolutionParams:
    """Unit-base parameters of g(pos) = r * e^{i(omega*pos + theta)}."""

    r: float
    omega: float
    theta: float

    def __post_init__(self):
        if self.r < 0:
            raise PreconditionError(f"amplitude r = {self.r} must be >= 0")

    @property
    def period(self) -> float:
        """Positions per full revolution, 2*pi/omega; inf at omega = 0."""
        return math.inf if self.omega == 0 else 2.0 * math.pi / self.omega


def witness_w(n: int, z1: complex) -> complex:
    """z1^n by repeated squaring; w(0) = 1 exactly."""
    if n < 0 or n != int(n):
        raise PreconditionError(f"offset n = {n} must be a non-negative integer")
    n = int(n)
    result = complex(1.0, 0.0)
    base = complex(z1)
    while n:
        if n & 1:
            result *= base
        base *= base
        n >>= 1
    return result


def witness_b(n: int, z1: complex, z2: complex) -> complex:
    """Geometric-sum constant term (1 - z1^n)/(1 - z1) * z2; b(0) = 0, b(1) = z2."""
    z1 = complex(z1)
    if abs(1.0 - z1) < SINGULAR_GAP:
        raise SingularityError("witness_b undefined for z1 ~ 1 (denominator vanishes)")
    return (1.0 - witness_w(n, z1)) / (1.0 - z1) * complex(z2)


def general_g(pos: int, p: GeneralSolutionParams) -> complex:
    """Closed-form value at a non-negative integer position; g(0) = z3."""
    if pos < 0:
        raise PreconditionError(f"pos = {pos} must be >= 0")
    if p.z2 == 0:
        return p.z3 * witness_w(pos, p.z1)
    if abs(1.0 - p.z1) < SINGULAR_GAP:
        raise SingularityError("z1 ~ 1 with nonzero z2: the general form is singular")
    c = p.z2 / (1.0 - p.z1)
    return (p.z3 - c) * witness_w(pos, p.z1) + c


def general_g_grid(p: GeneralSolutionParams, positions: np.ndarray) -> np.ndarray:
    """Vectorized general_g over an integer position array."""
    positions = np.asarray(positions)
    if np.any(positions < 0):
        raise PreconditionError("positions must be >= 0")
    powers = np.power(np.complex128(p.z1), positions)
    if p.z2 == 0:
        return p.z3 * powers
    if abs(1.0 - p.z1) < SINGULAR_GAP:
        raise SingularityError("z1 ~ 1 with nonzero z2: the general form is singular")
    c = p.z2 / (1.0 - p.z1)
    return (p.z3 - c) * powers + c


def simplified_g(pos: int, p: SimplifiedSolutionParams) -> complex:
    """r * (cos(omega*pos + theta) + i*sin(omega*pos + theta))."""
    a = p.omega * pos + p.theta
    return complex(p.r * math.cos(a), p.r * math.sin(a))


def simplified_to_general(p: SimplifiedSolutionParams) -> GeneralSolutionParams:
    """The z2 = 0, |z1| = 1 specialization: z1 = e^{i*omega}, z3 = r*e^{i*theta}."""
    z1 = complex(math.cos(p.omega), math.sin(p.omega))
    z3 = complex(p.r * math.cos(p.theta), p.r * math.sin(p.theta))
    return GeneralSolutionParams(z1, 0j, z3)


def check_position_free(g, max_pos: int, max_n: int, tol: float) -> VerificationReport:
    """Verify g(pos+n) = w(n)*g(pos) + b(n) with witnesses recovered from g itself.

    Witnesses come from finite differences: w(n) = (g(n+1) - g(n))/(g(1) - g(0)),
    b(n) = g(n) - w(n)*g(0). A constant g short-circuits to w = 1, b = 0.
    """
    if max_pos < 1 or max_n < 1:
        raise PreconditionError("max_pos and max_n must be >= 1")
    grid = {"max_pos": max_pos, "max_n": max_n, "tol": tol}
    vals = np.array([complex(g(k)) for k in range(max_pos + max_n + 1)],
                    dtype=np.complex128)
    if vals[1] == vals[0]:
        if not np.all(vals == vals[0]):
            raise InconclusiveWitnessError(
                "g(1) = g(0) but g is not constant; no witness is recoverable")
        details = [{"n": n, "worst_residual": 0.0} for n in range(max_n + 1)]
        return VerificationReport("position-free-offset", grid, 0.0, True, details)
    ns = np.arange(max_n + 1)
    w = (vals[ns + 1] - vals[ns]) / (vals[1] - vals[0])
    b = vals[ns] - w * vals[0]
    pos = np.arange(max_pos + 1)
    resid = np.abs(vals[ns[:, None] + pos[None, :]]
                   - (w[:, None] * vals[pos][None, :] + b[:, None]))
    per_n = resid.max(axis=1)
    details = [{"n": int(n), "worst_residual": float(r)} for n, r in zip(ns, per_n)]
    worst = float(per_n.max())
    return VerificationReport("position-free-offset", grid, worst, worst <= tol, details)


def check_bounded(g, horizon: int, bound: float) -> tuple[bool, float]:
    """Max modulus of g over pos in [0, horizon] against bound (+1e-9 slack)."""
    if horizon < 1:
        raise PreconditionError("horizon must be >= 1")
    max_mod = max(abs(complex(g(k))) for k in range(horizon + 1))
    return max_mod <= bound + 1e-9, max_mod


def sample_params(rng: np.random.Generator, min_gap: float = 1e-3,
                  circle_frac: float = 0.3) -> GeneralSolutionParams:
    """Random valid params: |z1| <= 1, |1 - z1| >= min_gap, z2/z3 in the unit box.

    A circle_frac share of draws puts z1 exactly on the unit circle, the
    regime where g never decays.
    """
    while True:
        phi = rng.uniform(0.0, 2.0 * math.pi)
        rad = 1.0 if rng.random() < circle_frac else math.sqrt(rng.random())
        z1 = complex(rad * math.cos(phi), rad * math.sin(phi))
        if abs(1.0 - z1) >= min_gap:
            break
    z2 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    z3 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return GeneralSolutionParams(z1, z2, z3)


def _witness_arrays(p: GeneralSolutionParams, max_n: int):
    w = np.array([witness_w(n, p.z1) for n in range(max_n + 1)])
    b = np.array([witness_b(n, p.z1, p.z2) for n in range(max_n + 1)])
    return w, b


def run_verification(seed: int = 0, trials: int = 200,
                     max_pos: int = 64, max_n: int = 32) -> list[VerificationReport]:
    """The full closed-form suite: witness algebra, recurrences, boundedness."""
    rng = np.random.default_rng(seed)
    params = [sample_params(rng) for _ in range(trials)]

    reports = []

    worst = 0.0
    for p in params:
        n1, n2 = rng.integers(0, max_n, size=2)
        r = abs(witness_w(int(n1 + n2), p.z1)
                - complex_multiply(witness_w(int(n1), p.z1), witness_w(int(n2), p.z1)))
        worst = max(worst, r)
    reports.append(VerificationReport(
        "witness-multiplicativity",
        {"trials": trials, "max_n": max_n, "tol": 1e-10}, worst, worst <= 1e-10))

    worst = 0.0
    for p in params:
        n1, n2 = (int(v) for v in rng.integers(0, max_n, size=2))
        lhs = witness_b(n1 + n2, p.z1, p.z2)
        rhs = witness_w(n1, p.z1) * witness_b(n2, p.z1, p.z2) + witness_b(n1, p.z1, p.z2)
        worst = max(worst, abs(lhs - rhs))
    reports.append(VerificationReport(
        "witness-offset-recurrence",
        {"trials": trials, "max_n": max_n, "tol": 1e-10}, worst, worst <= 1e-10))

    positions = np.arange(max_pos + max_n + 1)
    ns = np.arange(max_n + 1)
    pos = np.arange(max_pos + 1)
    worst = 0.0
    for p in params:
        gv = general_g_grid(p, positions)
        w, b = _witness_arrays(p, max_n)
        lhs = gv[ns[:, None] + pos[None, :]]
        rhs = w[:, None] * gv[pos][None, :] + b[:, None]
        scaled = np.abs(lhs - rhs) / (1.0 + np.abs(lhs))
        worst = max(worst, float(scaled.max()))
    reports.append(VerificationReport(
        "closed-form-recurrence",
        {"trials": trials, "max_pos": max_pos, "max_n": max_n, "tol": 1e-9},
        worst, worst <= 1e-9))

    worst = 0.0
    for p in params[: min(trials, 50)]:
        gv = general_g_grid(p, pos)
        acc = p.z3
        for k in range(max_pos + 1):
            worst = max(worst, abs(gv[k] - acc))
            acc = p.z1 * acc + p.z2
    reports.append(VerificationReport(
        "closed-form-vs-unrolled",
        {"trials": min(trials, 50), "max_pos": max_pos, "tol": 1e-9},
        worst, worst <= 1e-9))

    worst = 0.0
    for p in params[: min(trials, 20)]:
        rep = check_position_free(lambda k: general_g(k, p), max_pos, max_n, 1e-9)
        worst = max(worst, rep.worst_residual)
    reports.append(VerificationReport(
        "position-free-witness-recovery",
        {"trials": min(trials, 20), "max_pos": max_pos, "max_n": max_n, "tol": 1e-9},
        worst, worst <= 1e-9))

    horizon = np.arange(10_001)
    worst = -math.inf
    for p in params:
        max_mod = float(np.abs(general_g_grid(p, horizon)).max())
        worst = max(worst, max_mod - p.modulus_bound())
    reports.append(VerificationReport(
        "boundedness",
        {"trials": trials, "horizon": 10_000, "slack": 1e-9}, worst, worst <= 1e-9))

    worst = 0.0
    for _ in range(min(trials, 50)):
        sp = SimplifiedSolutionParams(r=rng.uniform(0, 2), omega=rng.uniform(-2, 2),
                                      theta=rng.uniform(0, 2 * math.pi))
        gp = simplified_to_general(sp)
        for k in range(0, 200, 7):
            gs = simplified_g(k, sp)
            worst = max(worst, abs(abs(gs) - sp.r), abs(gs - general_g(k, gp)))
    reports.append(VerificationReport(
        "simplified-form-agreement",
        {"trials": min(trials, 50), "max_pos": 200, "tol": 1e-12}, worst, worst <= 1e-12))

    return reports
