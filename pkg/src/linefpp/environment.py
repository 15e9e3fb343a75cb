"""Deterministic lazily-sampled random environment.

Every integer line gets a passage time that is a pure function of
(seed, line id): the line id is hashed with SplitMix64 into a 64-bit key, the
key is mapped to a uniform in (0,1), and the uniform is pushed through the
inverse CDF of the configured distribution.  No state is stored, so the
infinite lattice can be sampled on demand and concurrent queries always agree.

Hash chain (documented, never to be changed):
    h = seed
    h = mix64(h XOR axis)
    for each transverse coordinate t (in increasing coordinate-index order):
        h = mix64(h XOR zigzag(t))
where zigzag(n) = 2n for n >= 0 and -2n-1 for n < 0, and mix64 is the
SplitMix64 finalizer:
    z = x + 0x9E3779B97F4A7C15            (mod 2^64)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .lattice import LineId, check_dim

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

U53 = 2.0**-53

INF = math.inf


class DistributionError(ValueError):
    pass


def mix64(x: int) -> int:
    z = (x + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def zigzag(n: int) -> int:
    return 2 * n if n >= 0 else -2 * n - 1


def line_key(seed: int, line: LineId) -> int:
    h = seed & MASK64
    h = mix64(h ^ line.axis)
    for t in line.transverse:
        h = mix64(h ^ zigzag(t))
    return h


def uniform01(key: int) -> float:
    """Map a 64-bit key to (0,1): top 53 bits scaled, zero remapped to 2^-53."""
    u = (key >> 11) * U53
    return u if u > 0.0 else U53


def _mix64_np(x: np.ndarray) -> np.ndarray:
    z = (x + np.uint64(_GOLDEN)).astype(np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def _zigzag_np(n: np.ndarray) -> np.ndarray:
    n = n.astype(np.int64)
    return np.where(n >= 0, 2 * n, -2 * n - 1).astype(np.uint64)


def line_keys_1d(seed: int, axis: int, coords: np.ndarray) -> np.ndarray:
    """Vectorized line_key for d=2 lines (one transverse coordinate each)."""
    h0 = mix64((seed & MASK64) ^ axis)
    with np.errstate(over="ignore"):
        return _mix64_np(np.uint64(h0) ^ _zigzag_np(coords))


def uniform01_np(keys: np.ndarray) -> np.ndarray:
    u = (keys >> np.uint64(11)).astype(np.float64) * U53
    return np.where(u > 0.0, u, U53)


# ---------------------------------------------------------------------------
# Distribution zoo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    c: float

    def infimum(self) -> float:
        return self.c

    def inv_cdf(self, u: float) -> float:
        _check_u(u)
        return self.c

    def cdf(self, t: float) -> float:
        return 1.0 if t >= self.c else 0.0

    def atomless(self) -> bool:
        return False

    def mass_at(self, t: float) -> float:
        return 1.0 if t == self.c else 0.0

    def p_infinity(self) -> float:
        return 0.0

    def to_json(self) -> dict:
        return {"kind": "constant", "c": self.c}


@dataclass(frozen=True)
class ShiftedBernoulli:
    """a + b * Bernoulli(p): value a with probability 1-p, a+b with probability p."""

    a: float
    b: float
    p: float

    def infimum(self) -> float:
        return self.a

    def inv_cdf(self, u: float) -> float:
        _check_u(u)
        # threshold u > 1-p so that increasing p raises the chance of a+b
        return self.a + self.b if u > 1.0 - self.p else self.a

    def cdf(self, t: float) -> float:
        if t < self.a:
            return 0.0
        if t < self.a + self.b:
            return 1.0 - self.p
        return 1.0

    def atomless(self) -> bool:
        return False

    def mass_at(self, t: float) -> float:
        m = 0.0
        if t == self.a:
            m += 1.0 - self.p
        if t == self.a + self.b:
            m += self.p
        return m

    def p_infinity(self) -> float:
        return 0.0

    def to_json(self) -> dict:
        return {"kind": "shifted_bernoulli", "a": self.a, "b": self.b, "p": self.p}


@dataclass(frozen=True)
class Power:
    """CDF F(t) = (t/scale)^beta on [0, scale]; infimum 0, atomless."""

    beta: float
    scale: float = 1.0

    def infimum(self) -> float:
        return 0.0

    def inv_cdf(self, u: float) -> float:
        _check_u(u)
        # numpy's array power ufunc, so scalar and vectorized sampling agree
        # bitwise (python pow rounds differently in the last ulp)
        return float((self.scale * np.array([u]) ** (1.0 / self.beta))[0])

    def cdf(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        if t >= self.scale:
            return 1.0
        return (t / self.scale) ** self.beta

    def atomless(self) -> bool:
        return True

    def mass_at(self, t: float) -> float:
        return 0.0

    def p_infinity(self) -> float:
        return 0.0

    def to_json(self) -> dict:
        return {"kind": "power", "beta": self.beta, "scale": self.scale}


@dataclass(frozen=True)
class ShiftedExponential:
    a: float
    lam: float

    def infimum(self) -> float:
        return self.a

    def inv_cdf(self, u: float) -> float:
        _check_u(u)
        # numpy's log1p ufunc, so scalar and vectorized sampling agree bitwise
        return float((self.a - np.log1p(np.array([-u])) / self.lam)[0])

    def cdf(self, t: float) -> float:
        if t <= self.a:
            return 0.0
        return -math.expm1(-self.lam * (t - self.a))

    def atomless(self) -> bool:
        return True

    def mass_at(self, t: float) -> float:
        return 0.0

    def p_infinity(self) -> float:
        return 0.0

    def to_json(self) -> dict:
        return {"kind": "shifted_exponential", "a": self.a, "lambda": self.lam}


@dataclass(frozen=True)
class WithInfinity:
    """Mixture: +infinity with probability p_inf, otherwise the base law."""

    p_inf: float
    base: "Dist"

    def infimum(self) -> float:
        if self.p_inf >= 1.0:
            raise DistributionError("with_infinity(p_inf=1) is degenerate")
        return self.base.infimum()

    def inv_cdf(self, u: float) -> float:
        _check_u(u)
        if u <= self.p_inf:
            return INF
        # clamp against rounding onto the endpoints of (0,1)
        v = (u - self.p_inf) / (1.0 - self.p_inf)
        return self.base.inv_cdf(min(max(v, U53), 1.0 - U53))

    def cdf(self, t: float) -> float:
        if t == INF:
            return 1.0
        return (1.0 - self.p_inf) * self.base.cdf(t)

    def atomless(self) -> bool:
        return False

    def mass_at(self, t: float) -> float:
        if t == INF:
            return self.p_inf
        return (1.0 - self.p_inf) * self.base.mass_at(t)

    def p_infinity(self) -> float:
        return self.p_inf

    def to_json(self) -> dict:
        return {"kind": "with_infinity", "p_inf": self.p_inf, "base": self.base.to_json()}


Dist = Union[Constant, ShiftedBernoulli, Power, ShiftedExponential, WithInfinity]


def _check_u(u: float) -> None:
    if not (0.0 < u < 1.0):
        raise DistributionError(f"inverse CDF argument must be in (0,1), got {u!r}")


def _validate(dist: Dist) -> Dist:
    if isinstance(dist, Constant):
        if dist.c < 0:
            raise DistributionError("constant value must be nonnegative")
    elif isinstance(dist, ShiftedBernoulli):
        if dist.a < 0 or dist.b < 0:
            raise DistributionError("shifted_bernoulli parameters must be nonnegative")
        if not (0.0 <= dist.p <= 1.0):
            raise DistributionError("shifted_bernoulli p must be in [0,1]")
    elif isinstance(dist, Power):
        if dist.beta <= 0 or dist.scale <= 0:
            raise DistributionError("power requires beta > 0 and scale > 0")
    elif isinstance(dist, ShiftedExponential):
        if dist.a < 0 or dist.lam <= 0:
            raise DistributionError("shifted_exponential requires a >= 0 and lambda > 0")
    elif isinstance(dist, WithInfinity):
        if not (0.0 <= dist.p_inf < 1.0):
            raise DistributionError("with_infinity requires p_inf in [0,1)")
        _validate(dist.base)
    else:
        raise DistributionError(f"unknown distribution object {dist!r}")
    return dist


def parse_distribution(obj) -> Dist:
    """Parse a distribution from a JSON object (or JSON string).

    Schema: {"kind": "constant", "c": ...}
            {"kind": "shifted_bernoulli", "a": ..., "b": ..., "p": ...}
            {"kind": "power", "beta": ..., "scale": ...}
            {"kind": "shifted_exponential", "a": ..., "lambda": ...}
            {"kind": "with_infinity", "p_inf": ..., "base": {...}}
    """
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise DistributionError(f"invalid distribution JSON: {exc}") from exc
    if not isinstance(obj, dict) or "kind" not in obj:
        raise DistributionError(f"distribution spec must be an object with a 'kind': {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "constant":
            dist: Dist = Constant(float(obj["c"]))
        elif kind == "shifted_bernoulli":
            dist = ShiftedBernoulli(float(obj["a"]), float(obj["b"]), float(obj["p"]))
        elif kind == "power":
            dist = Power(float(obj["beta"]), float(obj.get("scale", 1.0)))
        elif kind == "shifted_exponential":
            dist = ShiftedExponential(float(obj["a"]), float(obj["lambda"]))
        elif kind == "with_infinity":
            dist = WithInfinity(float(obj["p_inf"]), parse_distribution(obj["base"]))
        else:
            raise DistributionError(f"unknown distribution kind {kind!r}")
    except KeyError as exc:
        raise DistributionError(f"missing parameter {exc} for kind {kind!r}") from exc
    return _validate(dist)


def inv_cdf_np(dist: Dist, u: np.ndarray) -> np.ndarray:
    """Vectorized inverse CDF; agrees elementwise with Dist.inv_cdf."""
    if isinstance(dist, Constant):
        return np.full(u.shape, dist.c)
    if isinstance(dist, ShiftedBernoulli):
        return dist.a + np.where(u > 1.0 - dist.p, dist.b, 0.0)
    if isinstance(dist, Power):
        return dist.scale * u ** (1.0 / dist.beta)
    if isinstance(dist, ShiftedExponential):
        return dist.a - np.log1p(-u) / dist.lam
    if isinstance(dist, WithInfinity):
        rescaled = np.clip((u - dist.p_inf) / (1.0 - dist.p_inf), U53, 1.0 - U53)
        base = inv_cdf_np(dist.base, rescaled)
        return np.where(u <= dist.p_inf, INF, base)
    raise DistributionError(f"unknown distribution object {dist!r}")


def infimum(dist: Dist) -> float:
    return _validate(dist).infimum()


def inv_cdf(dist: Dist, u: float) -> float:
    return dist.inv_cdf(u)


# ---------------------------------------------------------------------------
# Environment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Environment:
    """Immutable environment: passage time of a line = f(seed, line id)."""

    seed: int
    dist: Dist
    d: int

    def __post_init__(self):
        check_dim(self.d)
        if not (0 <= self.seed <= MASK64):
            raise DistributionError("seed must fit in 64 unsigned bits")
        _validate(self.dist)
        if self.dist.mass_at(0.0) > 0.0:
            # zero-cost lines would make search termination probabilistic
            raise DistributionError("distributions with an atom at 0 are not supported")

    @property
    def a(self) -> float:
        return self.dist.infimum()

    def tau(self, line: LineId) -> float:
        return self.dist.inv_cdf(uniform01(line_key(self.seed, line)))

    def tau_edge(self, edge) -> float:
        from .lattice import line_of_edge

        return self.tau(line_of_edge(edge))

    def line_weights_1d(self, axis: int, lo: int, hi: int) -> np.ndarray:
        """Weights of d=2 lines with transverse coordinate in [lo, hi] (inclusive)."""
        if self.d != 2:
            raise DistributionError("line_weights_1d is only defined for d=2")
        coords = np.arange(lo, hi + 1, dtype=np.int64)
        u = uniform01_np(line_keys_1d(self.seed, axis, coords))
        return inv_cdf_np(self.dist, u)


def tau(env: Environment, line: LineId) -> float:
    return env.tau(line)


def derive_seed(master_seed: int, index: int, d: int) -> int:
    """Replica seed: hash of a pseudo-line with axis=index and zero transverse."""
    return line_key(master_seed, LineId(index, (0,) * (d - 1)))


def replica_environment(master_seed: int, dist: Dist, d: int, index: int) -> Environment:
    return Environment(derive_seed(master_seed, index, d), dist, d)
