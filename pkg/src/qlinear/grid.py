"""Domain types: grid parameters, windows, sampled grid functions, measures.

The q-linear grid is the point set {q^k : k integer} for a fixed base
0 < q < 1.  A GridFunction is a finite window of samples on that grid and is
the basic signal object consumed by the transform and concentration code.
"""

import io
import math
from dataclasses import dataclass, field

from .errors import DomainError, InvalidSpec

# measure kinds
Q_MEASURE_0A = "q-0a"          # Jackson measure on (0, a)
Q_MEASURE_0INF = "q-0inf"      # Jackson measure on (0, inf)
LEBESGUE_01 = "lebesgue-01"    # ordinary dx on (0, 1)

_CSV_HEADER = "k,grid_point,value"


@dataclass(frozen=True)
class QParams:
    """Global numerical knobs: the base q, truncation tolerance and term cap."""

    q: float = 0.5
    tol: float = 1e-12
    max_terms: int = 512

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise InvalidSpec(f"q must lie strictly in (0,1), got {self.q}")
        if not self.tol > 0.0:
            raise InvalidSpec(f"tol must be positive, got {self.tol}")
        if self.max_terms < 8:
            raise InvalidSpec(f"max_terms must be at least 8, got {self.max_terms}")


@dataclass(frozen=True)
class GridWindow:
    """Exponent range covering the grid points {q^k : k_min <= k <= k_max}."""

    k_min: int
    k_max: int

    def __post_init__(self):
        if self.k_min > self.k_max:
            raise InvalidSpec(f"empty window: k_min={self.k_min} > k_max={self.k_max}")

    def __contains__(self, k):
        return self.k_min <= k <= self.k_max

    def exponents(self):
        return range(self.k_min, self.k_max + 1)

    def __len__(self):
        return self.k_max - self.k_min + 1


@dataclass
class GridFunction:
    """Samples f(q^k) on a finite window of the q-linear grid."""

    q: float
    samples: dict = field(default_factory=dict)
    window: GridWindow = None

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise InvalidSpec(f"q must lie strictly in (0,1), got {self.q}")
        if self.window is None:
            if not self.samples:
                raise InvalidSpec("GridFunction needs samples or an explicit window")
            ks = sorted(self.samples)
            self.window = GridWindow(ks[0], ks[-1])
        for k, v in self.samples.items():
            if k not in self.window:
                raise InvalidSpec(f"sample exponent {k} outside window {self.window}")
            if not math.isfinite(v):
                raise InvalidSpec(f"non-finite sample at k={k}: {v}")

    @classmethod
    def from_callable(cls, fn, q, window):
        samples = {k: float(fn(q**k)) for k in window.exponents()}
        return cls(q=q, samples=samples, window=window)

    def __call__(self, k):
        """Sample at exponent k; zero outside the stored support."""
        return self.samples.get(k, 0.0)

    def value_at_point(self, x, rel_tol=1e-9):
        k = round(math.log(x) / math.log(self.q))
        if not math.isclose(self.q**k, x, rel_tol=rel_tol):
            raise DomainError(f"{x} is not a grid point of base {self.q}")
        return self(k)

    def norm(self, p=2.0):
        """L_q^p(0, inf) norm over the stored window."""
        total = sum(abs(v) ** p * self.q**k for k, v in self.samples.items())
        return ((1.0 - self.q) * total) ** (1.0 / p)

    def normalized(self, p=2.0):
        n = self.norm(p)
        if n == 0.0:
            raise DomainError("cannot normalize the zero function")
        return GridFunction(
            q=self.q,
            samples={k: v / n for k, v in self.samples.items()},
            window=self.window,
        )

    def scaled(self, c):
        return GridFunction(
            q=self.q,
            samples={k: c * v for k, v in self.samples.items()},
            window=self.window,
        )

    def to_csv(self):
        """CSV rows (k, q^k, value), k descending, 17 significant digits."""
        out = io.StringIO()
        out.write(_CSV_HEADER + "\n")
        for k in sorted(self.samples, reverse=True):
            out.write(f"{k},{self.q ** k:.17g},{self.samples[k]:.17g}\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text, q):
        samples = {}
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise InvalidSpec("empty CSV input")
        start = 1 if lines[0].lower().startswith("k,") else 0
        for ln in lines[start:]:
            parts = ln.split(",")
            if len(parts) != 3:
                raise InvalidSpec(f"malformed CSV row: {ln!r}")
            samples[int(parts[0])] = float(parts[2])
        return cls(q=q, samples=samples)


@dataclass(frozen=True)
class MeasureSpec:
    """Which measure an integral or Gram matrix runs over."""

    kind: str = Q_MEASURE_0A
    a: float = 1.0
    quadrature_order: int = 64

    def __post_init__(self):
        if self.kind not in (Q_MEASURE_0A, Q_MEASURE_0INF, LEBESGUE_01):
            raise InvalidSpec(f"unknown measure kind {self.kind!r}")
        if self.kind == Q_MEASURE_0A and not self.a > 0.0:
            raise InvalidSpec(f"endpoint a must be positive, got {self.a}")
        if self.kind == LEBESGUE_01 and self.quadrature_order < 4:
            raise InvalidSpec("quadrature_order must be at least 4")
