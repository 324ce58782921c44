"""Time scales: nonempty closed subsets of the real line.

Every scale answers the same questions about one of its points: where the
next and previous points are (``sigma``/``rho``), how far away the next one
is (``graininess``), whether the point is dense or scattered on either side,
and whether derivatives are defined there (``in_kappa``).

Points passed in are snapped onto the scale first (within a relative
tolerance of 1e-12) and every answer is computed from the snapped value.
"""

from __future__ import annotations

import bisect
import enum
import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

from tsfrac.errors import (
    InvalidArgument,
    NoPointOnSide,
    PointNotInScale,
    ScaleSpecError,
)

REL_TOL = 1e-12


def default_tol(t: float) -> float:
    return REL_TOL * max(1.0, abs(t))


class Direction(enum.Enum):
    FromLeft = "left"
    FromRight = "right"


@dataclass(frozen=True)
class PointClass:
    right_scattered: bool
    right_dense: bool
    left_scattered: bool
    left_dense: bool
    is_max: bool
    is_min: bool

    @property
    def label(self) -> str:
        """Compact description such as ``right-scattered+left-dense+max``."""
        parts = [
            "right-scattered" if self.right_scattered else "right-dense",
            "left-scattered" if self.left_scattered else "left-dense",
        ]
        if self.is_max:
            parts.append("max")
        if self.is_min:
            parts.append("min")
        return "+".join(parts)


class TimeScale(ABC):
    """Common interface of every time-scale variant."""

    @abstractmethod
    def _snap(self, t: float, tol: float) -> float | None:
        """Nearest member of the scale if it lies within ``tol``, else None."""

    @abstractmethod
    def _sigma(self, t: float) -> float: ...

    @abstractmethod
    def _rho(self, t: float) -> float: ...

    @property
    @abstractmethod
    def inf(self) -> float: ...

    @property
    @abstractmethod
    def sup(self) -> float: ...

    def member(self, t: float, tol: float | None = None) -> bool:
        if not math.isfinite(t):
            return False
        if tol is None:
            tol = default_tol(t)
        elif tol < 0:
            raise InvalidArgument(f"negative membership tolerance {tol}")
        return self._snap(t, tol) is not None

    def locate(self, t: float) -> float:
        """Snap ``t`` onto the scale, raising :class:`PointNotInScale` if it is off."""
        t = float(t)
        snapped = self._snap(t, default_tol(t)) if math.isfinite(t) else None
        if snapped is None:
            raise PointNotInScale(f"t={t!r} is not a point of {self}")
        return snapped

    def sigma(self, t: float) -> float:
        return self._sigma(self.locate(t))

    def rho(self, t: float) -> float:
        return self._rho(self.locate(t))

    def graininess(self, t: float) -> float:
        t = self.locate(t)
        return self._sigma(t) - t

    def classify(self, t: float) -> PointClass:
        t = self.locate(t)
        fwd, back = self._sigma(t), self._rho(t)
        return PointClass(
            right_scattered=fwd > t,
            right_dense=fwd == t,
            left_scattered=back < t,
            left_dense=back == t,
            is_max=t == self.sup,
            is_min=t == self.inf,
        )

    def in_kappa(self, t: float) -> bool:
        t = self.locate(t)
        return not (t == self.sup and self._rho(t) < t)

    def approach_directions(self, t: float) -> frozenset[Direction]:
        cls = self.classify(t)
        sides = set()
        if cls.right_dense and not cls.is_max:
            sides.add(Direction.FromRight)
        if cls.left_dense and not cls.is_min:
            sides.add(Direction.FromLeft)
        return frozenset(sides)

    def sample_toward(self, t: float, direction: Direction, h: float) -> float:
        """A point of the scale within ``h`` of ``t`` on the given side."""
        if not h > 0:
            raise InvalidArgument(f"probe distance must be positive, got {h}")
        t = self.locate(t)
        if direction not in self.approach_directions(t):
            raise NoPointOnSide(f"no points of {self} accumulate at {t!r} {direction.value}")
        s = self._sample(t, direction, h)
        if s is None or s == t or abs(s - t) > h:
            raise NoPointOnSide(f"no point of {self} within {h!r} of {t!r} {direction.value}")
        return s

    def _sample(self, t: float, direction: Direction, h: float) -> float | None:
        return None

    def in_interval(self, t: float) -> bool:
        """True when ``t`` sits in a nondegenerate interval of the scale."""
        return False

    @abstractmethod
    def points(self, lo: float, hi: float, step: float | None = None) -> list[float]:
        """Members of the scale in ``[lo, hi]``; continua are sampled every ``step``."""


def _grid(lo: float, hi: float, step: float | None) -> list[float]:
    if step is None:
        raise InvalidArgument("a --step is required to sample a continuum")
    if not step > 0:
        raise InvalidArgument(f"step must be positive, got {step}")
    n = math.floor((hi - lo) / step + 1e-9)
    return [lo + i * step for i in range(n + 1)]


@dataclass(frozen=True)
class Reals(TimeScale):
    def _snap(self, t, tol):
        return t

    def _sigma(self, t):
        return t

    def _rho(self, t):
        return t

    @property
    def inf(self):
        return -math.inf

    @property
    def sup(self):
        return math.inf

    def _sample(self, t, direction, h):
        return t + h if direction is Direction.FromRight else t - h

    def in_interval(self, t):
        return True

    def points(self, lo, hi, step=None):
        return _grid(lo, hi, step)

    def __str__(self):
        return "R"


@dataclass(frozen=True)
class HStep(TimeScale):
    """The lattice ``{offset + k*h : k integer}``."""

    h: float
    offset: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0):
            raise ScaleSpecError(f"step h must be positive and finite, got {self.h}")
        if not math.isfinite(self.offset):
            raise ScaleSpecError(f"offset must be finite, got {self.offset}")

    def _snap(self, t, tol):
        k = round((t - self.offset) / self.h)
        p = self.offset + k * self.h
        return p if abs(t - p) <= tol else None

    def _sigma(self, t):
        return t + self.h

    def _rho(self, t):
        return t - self.h

    def graininess(self, t):
        self.locate(t)
        return self.h

    @property
    def inf(self):
        return -math.inf

    @property
    def sup(self):
        return math.inf

    def points(self, lo, hi, step=None):
        k0 = math.ceil((lo - self.offset) / self.h - 1e-9)
        k1 = math.floor((hi - self.offset) / self.h + 1e-9)
        return [self.offset + k * self.h for k in range(k0, k1 + 1)]

    def __str__(self):
        if self.offset == 0:
            return f"hZ:{self.h!r}"
        return f"hZ:{self.h!r}:{self.offset!r}"


@dataclass(frozen=True)
class Integers(HStep):
    h: float = field(default=1.0, init=False)
    offset: float = field(default=0.0, init=False)

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class QScale(TimeScale):
    """``{q**k : k integer} | {0}``; zero is right-dense."""

    q: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and self.q > 1):
            raise ScaleSpecError(f"q must be finite and > 1, got {self.q}")

    def _index(self, t: float) -> int:
        return round(math.log(t) / math.log(self.q))

    def _snap(self, t, tol):
        best = 0.0
        if t > 0:
            k = self._index(t)
            for p in (self.q ** (k - 1), self.q**k, self.q ** (k + 1)):
                if abs(t - p) < abs(t - best):
                    best = p
        return best if abs(t - best) <= tol else None

    def _sigma(self, t):
        return 0.0 if t == 0 else self.q ** (self._index(t) + 1)

    def _rho(self, t):
        return 0.0 if t == 0 else self.q ** (self._index(t) - 1)

    @property
    def inf(self):
        return 0.0

    @property
    def sup(self):
        return math.inf

    def _sample(self, t, direction, h):
        # only t == 0 from the right gets here
        k = math.floor(math.log(h) / math.log(self.q))
        while self.q**k > h:
            k -= 1
        while self.q ** (k + 1) <= h:
            k += 1
        p = self.q**k
        return p if p > 0 else None

    def points(self, lo, hi, step=None):
        if hi < 0 or lo > hi:
            return []
        if lo <= 0:
            if hi > 0:
                raise InvalidArgument(
                    f"{self} has infinitely many points in [{lo}, {hi}]; use a positive lower bound"
                )
            return [0.0]
        k = math.floor(math.log(lo) / math.log(self.q)) - 1
        out = []
        while self.q**k <= hi * (1 + REL_TOL):
            if self.q**k >= lo * (1 - REL_TOL):
                out.append(self.q**k)
            k += 1
        return out

    def __str__(self):
        return f"qZ:{self.q!r}"


@dataclass(frozen=True)
class FiniteSet(TimeScale):
    points_: tuple[float, ...]

    def __init__(self, points):
        object.__setattr__(self, "points_", tuple(float(p) for p in points))
        if not self.points_:
            raise ScaleSpecError("a finite time scale needs at least one point")
        if not all(math.isfinite(p) for p in self.points_):
            raise ScaleSpecError("points must be finite")
        if any(a >= b for a, b in zip(self.points_, self.points_[1:])):
            raise ScaleSpecError("points must be strictly increasing")

    def _snap(self, t, tol):
        pts = self.points_
        i = bisect.bisect_left(pts, t)
        nearest = min(pts[max(i - 1, 0) : i + 1], key=lambda p: abs(p - t))
        return nearest if abs(nearest - t) <= tol else None

    def _sigma(self, t):
        i = bisect.bisect_right(self.points_, t)
        return self.points_[i] if i < len(self.points_) else t

    def _rho(self, t):
        i = bisect.bisect_left(self.points_, t)
        return self.points_[i - 1] if i > 0 else t

    @property
    def inf(self):
        return self.points_[0]

    @property
    def sup(self):
        return self.points_[-1]

    def points(self, lo, hi, step=None):
        return [p for p in self.points_ if lo <= p <= hi]

    def __str__(self):
        return "{" + ",".join(repr(p) for p in self.points_) + "}"


@dataclass(frozen=True)
class IntervalUnion(TimeScale):
    """Sorted, pairwise-disjoint closed intervals; ``(p, p)`` is an isolated point."""

    parts: tuple[tuple[float, float], ...]

    def __init__(self, parts):
        parts = tuple((float(a), float(b)) for a, b in parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ScaleSpecError("an interval union needs at least one part")
        for a, b in parts:
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ScaleSpecError("interval endpoints must be finite")
            if a > b:
                raise ScaleSpecError(f"empty interval [{a}, {b}]")
        for (_, b), (a, _) in zip(parts, parts[1:]):
            if not b < a:
                raise ScaleSpecError("parts must be sorted and pairwise disjoint")

    def _part(self, t: float) -> int:
        i = bisect.bisect_right([a for a, _ in self.parts], t) - 1
        return max(i, 0)

    def _snap(self, t, tol):
        i = self._part(t)
        best = None
        for a, b in self.parts[i : i + 2]:
            p = min(max(t, a), b)
            if best is None or abs(p - t) < abs(best - t):
                best = p
        return best if abs(best - t) <= tol else None

    def _sigma(self, t):
        i = self._part(t)
        if t < self.parts[i][1]:
            return t
        return self.parts[i + 1][0] if i + 1 < len(self.parts) else t

    def _rho(self, t):
        i = self._part(t)
        if t > self.parts[i][0]:
            return t
        return self.parts[i - 1][1] if i > 0 else t

    @property
    def inf(self):
        return self.parts[0][0]

    @property
    def sup(self):
        return self.parts[-1][1]

    def _sample(self, t, direction, h):
        a, b = self.parts[self._part(t)]
        return min(t + h, b) if direction is Direction.FromRight else max(t - h, a)

    def in_interval(self, t):
        a, b = self.parts[self._part(t)]
        return a < b and a <= t <= b

    def points(self, lo, hi, step=None):
        out = {a for a, b in self.parts if a == b and lo <= a <= hi}
        if any(a < b and a <= hi and b >= lo for a, b in self.parts):
            for p in _grid(lo, hi, step):
                if self.member(p):
                    out.add(self.locate(p))
        return sorted(out)

    def __str__(self):
        return "u".join(
            "{" + repr(a) + "}" if a == b else f"[{a!r},{b!r}]" for a, b in self.parts
        )


_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_INTERVAL = re.compile(rf"\[\s*({_NUM})\s*,\s*({_NUM})\s*\]")
_POINTS = re.compile(rf"\{{\s*({_NUM}(?:\s*,\s*{_NUM})*)\s*\}}")
_HSTEP = re.compile(rf"hZ:({_NUM})(?::({_NUM}))?")
_QSCALE = re.compile(rf"qZ:({_NUM})")


def parse_scale(spec: str) -> TimeScale:
    """Parse a scale-spec string such as ``"Z"``, ``"hZ:0.5"`` or ``"[0,1]u{2}"``."""
    text = spec.strip()
    if text == "R":
        return Reals()
    if text == "Z":
        return Integers()
    if m := _HSTEP.fullmatch(text):
        return HStep(float(m[1]), float(m[2]) if m[2] else 0.0)
    if m := _QSCALE.fullmatch(text):
        return QScale(float(m[1]))

    intervals: list[tuple[float, float]] = []
    isolated: list[float] = []
    for chunk in text.split("u"):
        chunk = chunk.strip()
        if m := _INTERVAL.fullmatch(chunk):
            intervals.append((float(m[1]), float(m[2])))
        elif m := _POINTS.fullmatch(chunk):
            isolated.extend(float(x) for x in m[1].split(","))
        else:
            raise ScaleSpecError(f"cannot parse scale component {chunk!r} in {spec!r}")

    if not intervals:
        pts = sorted(isolated)
        if len(set(pts)) != len(pts):
            raise ScaleSpecError(f"duplicate points in {spec!r}")
        return FiniteSet(pts)
    parts = sorted(intervals + [(p, p) for p in isolated])
    return IntervalUnion(parts)
