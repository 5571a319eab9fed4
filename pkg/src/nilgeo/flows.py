"""Floating-point checks: Levi-Civita connection, geodesics, Killing orbits.

Everything here lives on a 2-step group in exponential coordinates, where
p * q = p + q + 1/2 [p, q].  Connection coefficients are computed exactly and
only converted to floats for integration.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .algebra import MetricNilAlgebra, nilpotency_class
from .ratlinalg import ZERO, RatMatrix, Vector, to_rational, unit_vector, vec


class ClassTooHigh(ValueError):
    """The closed-form group law and Killing field need nilpotency class <= 2."""


class ToleranceExceeded(ArithmeticError):
    def __init__(self, deviation: float, worst_t: float, tol: float):
        super().__init__(f"max deviation {deviation:.3e} at t = {worst_t:.6g} exceeds {tol:.1e}")
        self.deviation = deviation
        self.worst_t = worst_t
        self.tol = tol


def require_two_step(alg: MetricNilAlgebra) -> None:
    c = nilpotency_class(alg)
    if c is None or c > 2:
        raise ClassTooHigh(f"{alg.name}: nilpotency class {c} (need <= 2)")


# ---------------------------------------------------------------------------
# connection


@dataclass(frozen=True)
class ConnectionTable:
    """``gamma[i][j]`` holds the coordinates of nabla_{e_i} e_j."""

    algebra: MetricNilAlgebra
    gamma: tuple

    def nabla(self, x: Sequence, y: Sequence) -> Vector:
        x, y = vec(x), vec(y)
        n = self.algebra.dim
        out = [ZERO] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                c = x[i] * y[j]
                for k, g in enumerate(self.gamma[i][j]):
                    if g:
                        out[k] += c * g
        return tuple(out)

    def as_array(self) -> np.ndarray:
        """Float array ``G[i, j, k] = Gamma^k_ij``."""
        n = self.algebra.dim
        arr = np.zeros((n, n, n))
        for i in range(n):
            for j in range(n):
                arr[i, j, :] = [float(g) for g in self.gamma[i][j]]
        return arr


def connection_table(alg: MetricNilAlgebra) -> ConnectionTable:
    """Koszul formula for left-invariant fields, solved against the metric exactly.

    2<nabla_i e_j, e_k> = <[e_i, e_j], e_k> - <[e_j, e_k], e_i> + <[e_k, e_i], e_j>
    """
    n = alg.dim
    g = alg.metric
    ginv = g.inverse()
    e = [unit_vector(n, i) for i in range(n)]
    br = [[alg.bracket(e[i], e[j]) for j in range(n)] for i in range(n)]
    half = Fraction(1, 2)
    gamma = []
    for i in range(n):
        row = []
        for j in range(n):
            lowered = tuple(
                half * (alg.inner(br[i][j], e[k]) - alg.inner(br[j][k], e[i])
                        + alg.inner(br[k][i], e[j]))
                for k in range(n)
            )
            row.append(ginv.apply(lowered))
        gamma.append(tuple(row))
    return ConnectionTable(alg, tuple(gamma))


# ---------------------------------------------------------------------------
# group law and Killing fields


def _structure_array(alg: MetricNilAlgebra) -> np.ndarray:
    n = alg.dim
    c = alg.tensor
    return np.array([[[float(c[i][j][k]) for k in range(n)] for j in range(n)] for i in range(n)])


def group_product(alg: MetricNilAlgebra, p: Sequence, q: Sequence):
    """p * q in exponential coordinates; exact for rational input, float for arrays."""
    require_two_step(alg)
    if isinstance(p, np.ndarray) or isinstance(q, np.ndarray):
        c = _structure_array(alg)
        p, q = np.asarray(p, float), np.asarray(q, float)
        return p + q + 0.5 * np.einsum("ijk,i,j->k", c, p, q)
    p, q = vec(p), vec(q)
    b = alg.bracket(p, q)
    return tuple(a + c + b_ / 2 for a, c, b_ in zip(p, q, b))


def group_inverse(p: Sequence):
    if isinstance(p, np.ndarray):
        return -p
    return tuple(-to_rational(a) for a in p)


def killing_field(alg: MetricNilAlgebra, d: RatMatrix | None, y: Sequence, p: Sequence):
    """X*(p) = Y + D(p) + 1/2 [Y, p]: velocity at s = 0 of exp(sY) * e^{sD} p."""
    require_two_step(alg)
    if isinstance(p, np.ndarray):
        c = _structure_array(alg)
        yf = np.array([float(a) for a in y])
        dp = np.zeros_like(p) if d is None else np.array(d.to_float()) @ p
        return yf + dp + 0.5 * np.einsum("ijk,i,j->k", c, yf, p)
    y, p = vec(y), vec(p)
    dp = (ZERO,) * len(p) if d is None else d.apply(p)
    b = alg.bracket(y, p)
    return tuple(a + c + b_ / 2 for a, c, b_ in zip(y, dp, b))


# ---------------------------------------------------------------------------
# integration


@dataclass(frozen=True)
class Trajectory:
    """Samples of a curve from the identity.

    ``times`` is the uniform grid the curve was sampled on.  ``parameter``
    holds the curve's own parameter at those times when it differs (a
    geodesic sampled at s(t)); ``body_velocity`` is the left-trivialised
    velocity with respect to that parameter.
    """

    times: np.ndarray
    points: np.ndarray
    body_velocity: np.ndarray
    step: float
    parameter: np.ndarray | None = None

    def to_csv(self, path) -> None:
        n = self.points.shape[1]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t"] + [f"x{i + 1}" for i in range(n)] + [f"v{i + 1}" for i in range(n)])
            for t, x, v in zip(self.times, self.points, self.body_velocity):
                w.writerow([repr(float(t))] + [repr(float(a)) for a in x] + [repr(float(a)) for a in v])


def rk4_step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def time_grid(T: float, dt: float) -> np.ndarray:
    if dt <= 0 or T < 0:
        raise ValueError("need dt > 0 and T >= 0")
    steps = max(1, round(T / dt))
    return np.linspace(0.0, T, steps + 1)


def _geodesic_rhs(alg: MetricNilAlgebra):
    n = alg.dim
    gamma = connection_table(alg).as_array()
    c = _structure_array(alg)

    def f(state: np.ndarray) -> np.ndarray:
        x, v = state[:n], state[n:]
        acc = -np.einsum("ijk,i,j->k", gamma, v, v)
        xdot = v + 0.5 * np.einsum("ijk,i,j->k", c, x, v)
        return np.concatenate([xdot, acc])

    return f


def integrate_geodesic(alg: MetricNilAlgebra, v0: Sequence, T: float, dt: float,
                       reparam: Callable[[np.ndarray], np.ndarray] | None = None) -> Trajectory:
    """Geodesic from the identity with body velocity v0, RK4 in the affine parameter.

    With ``reparam`` the curve is sampled at s = reparam(t) on the uniform t
    grid; RK4 then steps over the (non-uniform) s increments.
    """
    require_two_step(alg)
    n = alg.dim
    f = _geodesic_rhs(alg)
    times = time_grid(T, dt)
    params = times if reparam is None else np.asarray(reparam(times), float)
    state = np.concatenate([np.zeros(n), np.array([float(a) for a in v0])])
    out = np.empty((len(times), 2 * n))
    out[0] = state
    for i in range(1, len(times)):
        state = rk4_step(f, state, params[i] - params[i - 1])
        out[i] = state
    return Trajectory(times, out[:, :n], out[:, n:], float(times[1] - times[0]),
                      None if reparam is None else params)


def integrate_orbit(alg: MetricNilAlgebra, d: RatMatrix | None, y: Sequence,
                    T: float, dt: float) -> Trajectory:
    """alpha' = X*(alpha), alpha(0) = identity: the orbit exp(t(D + Y)) . o."""
    require_two_step(alg)
    n = alg.dim
    c = _structure_array(alg)
    yf = np.array([float(a) for a in y])
    dm = np.zeros((n, n)) if d is None else np.array(d.to_float())
    a = dm + 0.5 * np.einsum("ijk,i->kj", c, yf)

    def f(p: np.ndarray) -> np.ndarray:
        return yf + a @ p

    times = time_grid(T, dt)
    pts = np.empty((len(times), n))
    vel = np.empty((len(times), n))
    p = np.zeros(n)
    for i, _ in enumerate(times):
        if i:
            p = rk4_step(f, p, times[i] - times[i - 1])
        pts[i] = p
        # left-trivialise: dL_{p^{-1}} w = w - 1/2 [p, w]
        w = f(p)
        vel[i] = w - 0.5 * np.einsum("ijk,i,j->k", c, p, w)
    return Trajectory(times, pts, vel, float(times[1] - times[0]))


def reparametrization(k) -> Callable[[np.ndarray], np.ndarray]:
    """s(t) = (1 - e^{-kt}) / k, the affine parameter with s(0) = 0, s'(0) = 1 (s = t for k = 0)."""
    k = float(k)
    if k == 0:
        return lambda t: np.asarray(t, float)
    return lambda t: -np.expm1(-k * np.asarray(t, float)) / k


@dataclass(frozen=True)
class Comparison:
    max_deviation: float
    worst_t: float
    k: float
    final_parameter: float
    dt: float
    T: float
    orbit: Trajectory
    geodesic: Trajectory


def compare_orbit_geodesic(alg: MetricNilAlgebra, d: RatMatrix | None, y: Sequence, k,
                           T: float = 1.0, dt: float = 1e-4,
                           tol: float | None = None) -> Comparison:
    """Max pointwise distance between the orbit alpha(t) and the geodesic gamma(s(t)).

    Raises ToleranceExceeded when ``tol`` is given and the deviation exceeds it.
    """
    orbit = integrate_orbit(alg, d, y, T, dt)
    geo = integrate_geodesic(alg, y, T, dt, reparametrization(k))
    dev = np.max(np.abs(orbit.points - geo.points), axis=1)
    i = int(np.argmax(dev))
    result = Comparison(float(dev[i]), float(orbit.times[i]), float(k),
                        float(geo.parameter[-1]), dt, T, orbit, geo)
    if tol is not None and (result.max_deviation > tol or math.isnan(result.max_deviation)):
        raise ToleranceExceeded(result.max_deviation, result.worst_t, tol)
    return result


def energy_drift(alg: MetricNilAlgebra, traj: Trajectory) -> float:
    """max |<v(t), v(t)> - <v0, v0>| along a trajectory."""
    g = np.array(alg.metric.to_float())
    e = np.einsum("ti,ij,tj->t", traj.body_velocity, g, traj.body_velocity)
    return float(np.max(np.abs(e - e[0])))


def xi3_limit_scan(y: Sequence, t_values: Sequence[float]) -> list[float]:
    """xi3 of the geodesic graph along the curve through Y in V that enters U for t > 0."""
    from .h3xh3 import norm_X, xi3_along_curve

    if norm_X(y) != 0:
        raise ValueError("the scan starts from a vector with <X, X> = 0")
    return [xi3_along_curve(y, t) for t in t_values]
