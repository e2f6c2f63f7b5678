"""Synthetic input models with hidden group structure.

A model partitions the positions ``0..n-1`` into groups.  All positions in
a group are deterministic functions of one hidden per-group parameter, and
the parameters of distinct groups are drawn independently.  Sorting models
map a scalar parameter through piecewise-monotone curves; triangulation
models map a planar parameter through pairs of bivariate polynomials.
"""

from __future__ import annotations

import io
import json
import math
import struct
from dataclasses import dataclass, field

import numpy as np


class ModelError(ValueError):
    """Raised when a requested model violates its structural constraints."""


# --------------------------------------------------------------------------
# parameter distributions (absolutely continuous only)

class ParamDist:
    """Scalar or planar distribution of a hidden group parameter."""

    dim = 1

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass
class Uniform(ParamDist):
    lo: float = 0.0
    hi: float = 1.0

    def sample(self, rng, size):
        return rng.uniform(self.lo, self.hi, size)

    def to_json(self):
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass
class TruncGauss(ParamDist):
    """Gaussian clipped by rejection to [lo, hi]; stays absolutely continuous."""

    mean: float = 0.5
    std: float = 0.15
    lo: float = 0.0
    hi: float = 1.0

    def sample(self, rng, size):
        out = rng.normal(self.mean, self.std, size)
        bad = (out < self.lo) | (out > self.hi)
        while bad.any():
            out[bad] = rng.normal(self.mean, self.std, int(bad.sum()))
            bad = (out < self.lo) | (out > self.hi)
        return out

    def to_json(self):
        return {"kind": "truncgauss", "mean": self.mean, "std": self.std,
                "lo": self.lo, "hi": self.hi}


@dataclass
class MixtureOfUniforms(ParamDist):
    """Finite mixture of uniform slabs; absolutely continuous by construction."""

    pieces: tuple[tuple[float, float, float], ...] = ((0.5, 0.0, 1.0),)

    def __post_init__(self):
        w = sum(p[0] for p in self.pieces)
        if not math.isclose(w, 1.0, rel_tol=1e-9):
            raise ModelError(f"mixture weights sum to {w}, expected 1")

    def sample(self, rng, size):
        weights = np.array([p[0] for p in self.pieces])
        idx = rng.choice(len(self.pieces), size=size, p=weights)
        los = np.array([p[1] for p in self.pieces])[idx]
        his = np.array([p[2] for p in self.pieces])[idx]
        return los + rng.random(size) * (his - los)

    def to_json(self):
        return {"kind": "mixture", "pieces": [list(p) for p in self.pieces]}


@dataclass
class PlanarBox(ParamDist):
    """Uniform distribution over an axis-aligned box in the plane."""

    lo: tuple[float, float] = (0.0, 0.0)
    hi: tuple[float, float] = (1.0, 1.0)
    dim = 2

    def sample(self, rng, size):
        out = rng.random((size, 2))
        out[:, 0] = self.lo[0] + out[:, 0] * (self.hi[0] - self.lo[0])
        out[:, 1] = self.lo[1] + out[:, 1] * (self.hi[1] - self.lo[1])
        return out

    def to_json(self):
        return {"kind": "planarbox", "lo": list(self.lo), "hi": list(self.hi)}


def dist_from_json(d: dict) -> ParamDist:
    kind = d["kind"]
    if kind == "uniform":
        return Uniform(d["lo"], d["hi"])
    if kind == "truncgauss":
        return TruncGauss(d["mean"], d["std"], d["lo"], d["hi"])
    if kind == "mixture":
        return MixtureOfUniforms(tuple(tuple(p) for p in d["pieces"]))
    if kind == "planarbox":
        return PlanarBox(tuple(d["lo"]), tuple(d["hi"]))
    raise ModelError(f"unknown distribution kind {kind!r}")


# --------------------------------------------------------------------------
# piecewise-monotone curves for the sorting model

@dataclass
class MonotoneCurve:
    """Continuous curve, strictly monotone between consecutive breakpoints.

    ``knots`` are parameter values, ``values`` the curve values there, and
    ``bends`` a per-piece shape weight in [0, 1] blending a straight ramp
    with a smoothstep.  Monotone direction may flip at interior knots; each
    flip is one extremum.  Outside the knot range the ends extend linearly.
    """

    knots: np.ndarray
    values: np.ndarray
    bends: np.ndarray

    def __post_init__(self):
        self.knots = np.asarray(self.knots, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.bends = np.asarray(self.bends, dtype=float)
        if len(self.knots) < 2 or len(self.values) != len(self.knots):
            raise ModelError("curve needs at least two knots")
        if not (np.diff(self.knots) > 0).all():
            raise ModelError("curve knots must strictly increase")
        if (np.diff(self.values) == 0).any():
            raise ModelError("flat curve piece (monotonicity would fail)")

    def extrema_count(self) -> int:
        d = np.sign(np.diff(self.values))
        return int((d[1:] != d[:-1]).sum())

    def __call__(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        t, v, w = self.knots, self.values, self.bends
        piece = np.clip(np.searchsorted(t, u, side="right") - 1, 0, len(t) - 2)
        t0, t1 = t[piece], t[piece + 1]
        v0, v1 = v[piece], v[piece + 1]
        s = (u - t0) / (t1 - t0)
        inside = (s >= 0.0) & (s <= 1.0)
        sc = np.clip(s, 0.0, 1.0)
        g = (1.0 - w[piece]) * sc + w[piece] * sc * sc * (3.0 - 2.0 * sc)
        out = v0 + (v1 - v0) * g
        # linear extension keeps the ends strictly monotone with no new extrema
        slope0 = (v[1] - v[0]) / (t[1] - t[0])
        slope1 = (v[-1] - v[-2]) / (t[-1] - t[-2])
        out = np.where(s < 0.0, v0 + slope0 * (u - t0), out)
        out = np.where(s > 1.0, v1 + slope1 * (u - t1), out)
        return out if out.shape else float(out)

    def to_json(self):
        return {"knots": self.knots.tolist(), "values": self.values.tolist(),
                "bends": self.bends.tolist()}

    @classmethod
    def from_json(cls, d: dict) -> "MonotoneCurve":
        return cls(np.array(d["knots"]), np.array(d["values"]), np.array(d["bends"]))

    @classmethod
    def identity(cls) -> "MonotoneCurve":
        return cls(np.array([0.0, 1.0]), np.array([0.0, 1.0]), np.array([0.0]))


def _count_intersections(c1: MonotoneCurve, c2: MonotoneCurve, lo: float,
                         hi: float, grid: int = 512) -> int:
    u = np.linspace(lo, hi, grid)
    d = np.asarray(c1(u)) - np.asarray(c2(u))
    sign = np.sign(d)
    sign[sign == 0] = 1
    return int((sign[1:] != sign[:-1]).sum())


# --------------------------------------------------------------------------
# bivariate polynomials for the triangulation model

@dataclass
class Poly2:
    """Bivariate polynomial as a map from exponent pairs to coefficients."""

    coeffs: dict[tuple[int, int], float]

    def degree(self) -> int:
        live = [i + j for (i, j), c in self.coeffs.items() if c != 0.0]
        return max(live, default=0)

    def is_constant(self) -> bool:
        return all(c == 0.0 for (i, j), c in self.coeffs.items() if i + j > 0)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        u = np.atleast_2d(np.asarray(u, dtype=float))
        out = np.zeros(len(u))
        for (i, j), c in self.coeffs.items():
            if c != 0.0:
                out += c * u[:, 0] ** i * u[:, 1] ** j
        return out

    def to_json(self):
        return {f"{i},{j}": c for (i, j), c in self.coeffs.items()}

    @classmethod
    def from_json(cls, d: dict) -> "Poly2":
        return cls({tuple(int(t) for t in k.split(",")): v for k, v in d.items()})

    @classmethod
    def constant(cls, c: float) -> "Poly2":
        return cls({(0, 0): c})


# --------------------------------------------------------------------------
# models

@dataclass
class SortModel:
    """Hidden grouping plus per-position curves for real-valued instances."""

    n: int
    groups: list[frozenset[int]]
    curves: dict[int, MonotoneCurve]          # position -> curve
    param_dists: list[ParamDist]              # one per group
    c0: int

    def __post_init__(self):
        _check_partition(self.n, self.groups)
        for i, c in self.curves.items():
            if c.extrema_count() > self.c0:
                raise ModelError(f"curve at position {i} exceeds c0={self.c0} extrema")
        for d in self.param_dists:
            if d.dim != 1:
                raise ModelError("sorting model needs scalar parameter distributions")

    @property
    def group_of(self) -> np.ndarray:
        out = np.empty(self.n, dtype=int)
        for k, g in enumerate(self.groups):
            for i in g:
                out[i] = k
        return out


@dataclass
class DtModel:
    """Hidden grouping plus per-position coordinate polynomials for point instances."""

    n: int
    groups: list[frozenset[int]]
    polys: dict[int, tuple[Poly2, Poly2]]     # position -> (x poly, y poly)
    param_dists: list[ParamDist]
    d0: int

    def __post_init__(self):
        _check_partition(self.n, self.groups)
        for i, (px, py) in self.polys.items():
            if max(px.degree(), py.degree()) > self.d0:
                raise ModelError(f"polynomial degree at position {i} exceeds d0={self.d0}")
        for d in self.param_dists:
            if d.dim != 2:
                raise ModelError("triangulation model needs planar parameter distributions")

    @property
    def const_set(self) -> frozenset[int]:
        return frozenset(i for i, (px, py) in self.polys.items()
                         if px.is_constant() and py.is_constant())


def _check_partition(n: int, groups) -> None:
    seen: set[int] = set()
    for g in groups:
        if seen & set(g):
            raise ModelError("groups overlap")
        seen |= set(g)
    if seen != set(range(n)):
        raise ModelError("groups do not cover 0..n-1")


@dataclass
class Instance:
    """One draw from a model: values plus the draw index that produced it."""

    values: np.ndarray
    seed_tag: int


# --------------------------------------------------------------------------
# generation

def make_sort_model(spec: dict, rng: np.random.Generator) -> SortModel:
    """Build a sorting model from a generator config.

    The config gives ``n``, ``groups`` (list of 1-based index lists),
    ``c0``, ``family`` and optionally ``dist``.  Families:

    - ``identity``: every curve is the identity (useful for product-like baselines)
    - ``monotone``: random strictly monotone curves, zero extrema
    - ``piecewise``: random curves with up to ``c0`` extrema
    - ``interleave``: monotone curves whose value bands overlap, so the
      sorted order of a group genuinely depends on the parameter

    Generation retries until every same-group curve pair intersects at most
    ``intersection_cap`` times; exhausting the retry budget is an error.
    """
    n = int(spec["n"])
    groups = [frozenset(i - 1 for i in g) for g in spec["groups"]]
    c0 = int(spec.get("c0", 0))
    family = spec.get("family", "monotone")
    cap = int(spec.get("intersection_cap", max(8, 4 * (c0 + 1) ** 2)))
    budget = int(spec.get("retry_budget", 64))
    dist_spec = spec.get("dist")

    dists: list[ParamDist] = []
    for _ in groups:
        dists.append(dist_from_json(dist_spec) if dist_spec else Uniform(0.0, 1.0))

    curves: dict[int, MonotoneCurve] = {}
    for g in groups:
        members = sorted(g)
        for attempt in range(budget):
            cand = {i: _random_curve(family, c0, rng, i, n) for i in members}
            ok = True
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    if _count_intersections(cand[members[a]], cand[members[b]],
                                            -0.25, 1.25) > cap:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                curves.update(cand)
                break
        else:
            raise ModelError(
                f"could not generate curves for group {sorted(i + 1 for i in g)}: "
                f"intersection cap {cap} exceeded in {budget} attempts")
    return SortModel(n, groups, curves, dists, c0)


def _random_curve(family: str, c0: int, rng: np.random.Generator,
                  pos: int, n: int) -> MonotoneCurve:
    if family == "identity":
        return MonotoneCurve.identity()
    if family == "monotone":
        lo = rng.uniform(-2.0, 2.0)
        span = rng.uniform(0.5, 2.0) * (1 if rng.random() < 0.5 else -1)
        knots = np.array([0.0, 1.0])
        return MonotoneCurve(knots, np.array([lo, lo + span]), np.array([rng.uniform(0, 1)]))
    if family == "interleave":
        # overlapping bands: offsets are close so order flips with u
        base = pos * 0.05
        span = 1.0 if rng.random() < 0.7 else -1.0
        return MonotoneCurve(np.array([0.0, 1.0]),
                             np.array([base, base + span]),
                             np.array([rng.uniform(0, 1)]))
    if family == "piecewise":
        e = int(rng.integers(0, c0 + 1))
        knots = np.sort(rng.uniform(0.05, 0.95, e))
        knots = np.concatenate(([0.0], knots, [1.0]))
        up = rng.random() < 0.5
        vals = [rng.uniform(-1.0, 1.0)]
        for _ in range(len(knots) - 1):
            step = rng.uniform(0.3, 1.2)
            vals.append(vals[-1] + (step if up else -step))
            up = not up
        bends = rng.uniform(0.0, 1.0, len(knots) - 1)
        return MonotoneCurve(knots, np.array(vals), bends)
    raise ModelError(f"unknown curve family {family!r}")


def make_dt_model(spec: dict, rng: np.random.Generator) -> DtModel:
    """Build a planar model from a generator config.

    Families:

    - ``constant``: every point fixed (positions drawn once from ``rng``)
    - ``linear``: coordinates are random affine forms of the group parameter
    - ``quadratic``: coordinates drawn from a small monomial family of
      degree <= 2, so that low-degree dependence tests apply
    - ``mixed``: constants for groups of size 1 flagged in ``const_groups``,
      linear/quadratic for the rest
    """
    n = int(spec["n"])
    groups = [frozenset(i - 1 for i in g) for g in spec["groups"]]
    d0 = int(spec.get("d0", 2))
    family = spec.get("family", "linear")
    const_groups = set(spec.get("const_groups", []))
    dist_spec = spec.get("dist")
    scale = float(spec.get("scale", 1.0))

    dists: list[ParamDist] = []
    polys: dict[int, tuple[Poly2, Poly2]] = {}
    for k, g in enumerate(groups):
        dists.append(dist_from_json(dist_spec) if dist_spec else PlanarBox())
        make_const = family == "constant" or (family == "mixed" and (k + 1) in const_groups)
        for i in sorted(g):
            if make_const:
                polys[i] = (Poly2.constant(rng.uniform(0, scale)),
                            Poly2.constant(rng.uniform(0, scale)))
            elif family == "linear" or (family == "mixed" and rng.random() < 0.5):
                polys[i] = (_affine(rng, scale), _affine(rng, scale))
            elif family in ("quadratic", "mixed"):
                polys[i] = (_quad_monomial(rng, scale), _quad_monomial(rng, scale))
            else:
                raise ModelError(f"unknown point family {family!r}")
    return DtModel(n, groups, polys, dists, d0)


def _affine(rng, scale) -> Poly2:
    return Poly2({(0, 0): rng.uniform(0, scale),
                  (1, 0): rng.uniform(-scale, scale),
                  (0, 1): rng.uniform(-scale, scale)})


_QUAD_CHOICES = [(2, 0), (0, 2), (1, 1), (1, 0), (0, 1)]


def _quad_monomial(rng, scale) -> Poly2:
    e = _QUAD_CHOICES[rng.integers(0, len(_QUAD_CHOICES))]
    return Poly2({(0, 0): rng.uniform(0, scale), e: rng.uniform(0.2, 1.0) * scale})


# --------------------------------------------------------------------------
# sampling

class InstanceSampler:
    """Draws instances from a model; owns its RNG and numbers every draw."""

    def __init__(self, model, seed: int = 0):
        self.model = model
        self.rng = np.random.default_rng(seed)
        self._draws = 0

    def take(self, count: int) -> np.ndarray:
        """Vectorized batch of ``count`` instances, shape (count, n[, 2])."""
        m = self.model
        if isinstance(m, SortModel):
            out = np.empty((count, m.n))
            for k, g in enumerate(m.groups):
                u = m.param_dists[k].sample(self.rng, count)
                for i in g:
                    out[:, i] = m.curves[i](u)
        else:
            out = np.empty((count, m.n, 2))
            for k, g in enumerate(m.groups):
                u = m.param_dists[k].sample(self.rng, count)
                for i in g:
                    out[:, i, 0] = m.polys[i][0](u)
                    out[:, i, 1] = m.polys[i][1](u)
        self._draws += count
        return out

    def one(self) -> Instance:
        tag = self._draws
        return Instance(self.take(1)[0], tag)


def sample_instance(model, rng: np.random.Generator) -> np.ndarray:
    """Single draw with caller-owned RNG state."""
    s = InstanceSampler.__new__(InstanceSampler)
    s.model, s.rng, s._draws = model, rng, 0
    return s.take(1)[0]


# --------------------------------------------------------------------------
# entropy

def plugin_entropy(counts) -> float:
    """Plug-in entropy (bits) of a frequency table.

    Accepts a mapping outcome -> count or an iterable of counts.  Zero
    counts are skipped; an empty or all-zero table is an error.
    """
    if hasattr(counts, "values"):
        arr = np.array(list(counts.values()), dtype=float)
    else:
        arr = np.array(list(counts), dtype=float)
    if arr.size == 0:
        raise ValueError("empty frequency table")
    if (arr < 0).any():
        raise ValueError("negative count")
    total = arr.sum()
    if total <= 0:
        raise ValueError("no observations")
    p = arr[arr > 0] / total
    return float(-(p * np.log2(p)).sum())


# --------------------------------------------------------------------------
# serialization

_MAGIC = b"SIIN"
_VERSION = 1


def write_instances(path, values: np.ndarray) -> None:
    """Binary instance stream: header then row-major little-endian float64."""
    values = np.asarray(values, dtype="<f8")
    mode = 2 if values.ndim == 3 else 1
    count, n = values.shape[0], values.shape[1]
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<IBIQ", _VERSION, mode, n, count))
        f.write(values.tobytes())


def read_instances(path) -> np.ndarray:
    with open(path, "rb") as f:
        if f.read(4) != _MAGIC:
            raise ValueError(f"{path}: not an instance file")
        version, mode, n, count = struct.unpack("<IBIQ", f.read(17))
        if version != _VERSION:
            raise ValueError(f"{path}: unsupported version {version}")
        flat = np.frombuffer(f.read(), dtype="<f8")
    if mode == 2:
        return flat.reshape(count, n, 2)
    return flat.reshape(count, n)


def write_instances_csv(path, values: np.ndarray) -> None:
    values = np.asarray(values)
    flat = values.reshape(values.shape[0], -1)
    np.savetxt(path, flat, delimiter=",", fmt="%.17g")


def read_instances_csv(path, planar: bool = False) -> np.ndarray:
    flat = np.loadtxt(path, delimiter=",", ndmin=2)
    if planar:
        return flat.reshape(flat.shape[0], -1, 2)
    return flat


def model_to_json(model) -> dict:
    groups = [sorted(i + 1 for i in g) for g in model.groups]
    if isinstance(model, SortModel):
        return {"mode": "sort", "n": model.n, "groups": groups, "c0": model.c0,
                "dists": [d.to_json() for d in model.param_dists],
                "curves": {str(i + 1): c.to_json() for i, c in model.curves.items()}}
    return {"mode": "dt", "n": model.n, "groups": groups, "d0": model.d0,
            "dists": [d.to_json() for d in model.param_dists],
            "polys": {str(i + 1): [p.to_json(), q.to_json()]
                      for i, (p, q) in model.polys.items()}}


def model_from_json(d: dict):
    groups = [frozenset(i - 1 for i in g) for g in d["groups"]]
    dists = [dist_from_json(x) for x in d["dists"]]
    if d["mode"] == "sort":
        curves = {int(k) - 1: MonotoneCurve.from_json(v) for k, v in d["curves"].items()}
        return SortModel(d["n"], groups, curves, dists, d["c0"])
    polys = {int(k) - 1: (Poly2.from_json(v[0]), Poly2.from_json(v[1]))
             for k, v in d["polys"].items()}
    return DtModel(d["n"], groups, polys, dists, d["d0"])


def save_model(path, model) -> None:
    with open(path, "w") as f:
        json.dump(model_to_json(model), f, indent=1)


def load_model(path):
    with open(path) as f:
        return model_from_json(json.load(f))
