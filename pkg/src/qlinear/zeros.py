"""Locating positive real zeros of even entire functions by scan + bisection."""

import math
from dataclasses import dataclass, field

from .errors import InvalidSpec, ScanExhausted
from .grid import QParams

REFINEMENT_TOL = 1e-12


@dataclass(frozen=True)
class GeometricScan:
    """Probe points start, start*ratio, start*ratio^2, ... (ratio > 1)."""

    start: float
    ratio: float

    def __post_init__(self):
        if not self.start > 0 or not self.ratio > 1:
            raise InvalidSpec("geometric scan needs start > 0 and ratio > 1")

    def points(self):
        x = self.start
        while True:
            yield x
            x *= self.ratio


@dataclass(frozen=True)
class LinearScan:
    """Probe points start, start+step, start+2*step, ..."""

    start: float
    step: float

    def __post_init__(self):
        if not self.start > 0 or not self.step > 0:
            raise InvalidSpec("linear scan needs positive start and step")

    def points(self):
        x = self.start
        while True:
            yield x
            x += self.step


@dataclass
class ZeroList:
    """Ascending positive zeros of a named source function."""

    values: list
    source: str = ""
    refinement_tol: float = REFINEMENT_TOL

    def __post_init__(self):
        prev = 0.0
        for z in self.values:
            if not z > prev:
                raise InvalidSpec("zeros must be positive and strictly increasing")
            prev = z

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def _bisect(F, lo, hi, flo, rel_tol):
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = F(mid)
        if fm == 0.0:
            return mid
        if (flo < 0) != (fm < 0):
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def find_zeros(F, count, scan, params=QParams(), refinement_tol=REFINEMENT_TOL):
    """First `count` positive zeros of F in ascending order.

    Scans the probe points for sign changes and refines each bracket by
    bisection to relative width refinement_tol.  Bisection only needs the
    sign of F, so it tolerates the limited relative accuracy the series
    evaluations have extremely close to their zeros.
    """
    if count < 1:
        raise InvalidSpec(f"count must be positive, got {count}")
    zeros = []
    gen = scan.points()
    x_prev = next(gen)
    f_prev = F(x_prev)
    for _ in range(params.max_terms):
        x = next(gen)
        f = F(x)
        if f == 0.0:
            zeros.append(x)
        elif f_prev == 0.0:
            pass  # already recorded at the previous probe
        elif (f_prev < 0) != (f < 0):
            zeros.append(_bisect(F, x_prev, x, f_prev, refinement_tol))
        if len(zeros) >= count:
            return ZeroList(values=zeros[:count], source=getattr(F, "__name__", str(F)),
                            refinement_tol=refinement_tol)
        x_prev, f_prev = x, f
    raise ScanExhausted(
        f"found {len(zeros)} sign changes in {params.max_terms} scan steps, "
        f"needed {count}; the scan may be too coarse"
    )


def default_q_scan(q, start=None):
    """Geometric scan matched to q-Bessel zero spreads (ratio q^(-1/2))."""
    return GeometricScan(start=start if start is not None else q,
                         ratio=1.0 / math.sqrt(q))


def default_classical_scan():
    """Linear scan matched to classical Bessel zeros (step pi/4)."""
    return LinearScan(start=math.pi / 4.0, step=math.pi / 4.0)


def check_interlacing(A: ZeroList, B: ZeroList):
    """True iff A[n] <= B[n] for all n up to the shorter length."""
    m = min(len(A), len(B))
    return all(A[n] <= B[n] for n in range(m))
