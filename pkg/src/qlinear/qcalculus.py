"""q-arithmetic primitives: Pochhammer symbols, Jackson integrals, D_q, norms.

Everything here works on the q-linear grid {q^k}.  The Jackson integral over
(0, a) is the weighted sum (1-q) a sum_n f(a q^n) q^n; over (0, inf) it is
the bi-infinite version, which this module only ever evaluates on explicit
finite windows.
"""

import math

import numpy as np

from .errors import DomainError, NonConvergence
from .grid import (
    LEBESGUE_01,
    Q_MEASURE_0A,
    Q_MEASURE_0INF,
    GridFunction,
    MeasureSpec,
    QParams,
)

_MIN_TERMS = 8


def qpochhammer_finite(a, q, n):
    """(a;q)_n = prod_{k=1..n} (1 - a q^(k-1)); n = 0 gives exactly 1."""
    if not (0.0 < q < 1.0):
        raise DomainError(f"base q must lie in (0,1), got {q}")
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    p = 1.0
    for k in range(int(n)):
        p *= 1.0 - a * q**k
    return p


def qpochhammer_inf(a, params=QParams()):
    """(a;q)_inf, truncated once the factors are within tol of 1."""
    q, tol = params.q, params.tol
    p = 1.0
    for k in range(params.max_terms):
        p *= 1.0 - a * q**k
        if k + 1 >= _MIN_TERMS and abs(a) * q**k < tol:
            return p
    raise NonConvergence(
        f"(a;q)_inf factors not within {tol} of 1 after {params.max_terms} terms"
    )


def qintegral_0a(f, a, params=QParams()):
    """Jackson integral of a callable over (0, a): (1-q) a sum f(a q^n) q^n.

    Truncates when the geometric tail bound (recent sup of |f| times the
    remaining geometric mass) drops below tol times the running scale.
    """
    if not a > 0:
        raise DomainError(f"endpoint a must be positive, got {a}")
    q, tol = params.q, params.tol
    partial = 0.0
    peak = 0.0
    recent = []
    for n in range(params.max_terms):
        fv = f(a * q**n)
        term = (1.0 - q) * a * fv * q**n
        partial += term
        peak = max(peak, abs(term))
        recent.append(abs(fv))
        if len(recent) > _MIN_TERMS:
            recent.pop(0)
        if n + 1 >= _MIN_TERMS:
            tail = a * max(recent) * q ** (n + 1)
            if tail <= tol * max(abs(partial), peak):
                return partial
    raise NonConvergence(f"tail criterion not reached in {params.max_terms} terms")


def qintegral_0inf(f: GridFunction):
    """Jackson integral over (0, inf) of a finitely supported grid function.

    Exact finite sum (1-q) sum_k f(q^k) q^k over the window, ascending k.
    """
    q = f.q
    total = 0.0
    for k in f.window.exponents():
        total += f(k) * q**k
    return (1.0 - q) * total


def qdiff(f, x, q):
    """q-difference operator: (f(x) - f(qx)) / ((1-q) x)."""
    if x == 0:
        raise DomainError("D_q is not defined at x = 0")
    return (f(x) - f(q * x)) / ((1.0 - q) * x)


def _gauss_01(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def lebesgue_integral_01(f, params=QParams(), order=64):
    """Integral of f over (0,1) with Gauss-Legendre, order-refined until stable."""
    prev = None
    while order <= 4096:
        xs, ws = _gauss_01(order)
        val = float(np.dot(ws, [f(x) for x in xs]))
        if prev is not None and abs(val - prev) <= params.tol * max(1.0, abs(val)):
            return val
        prev = val
        order = (3 * order) // 2
    raise NonConvergence("Gauss quadrature did not stabilize by order 4096")


def qnorm(f, p, domain: MeasureSpec, params=QParams(), window=None):
    """(integral of |f|^p over the measure)^(1/p)."""
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    if isinstance(f, GridFunction):
        if domain.kind == Q_MEASURE_0INF:
            return f.norm(p)
        if domain.kind == Q_MEASURE_0A:
            q = f.q
            m = round(math.log(domain.a) / math.log(q))
            if not math.isclose(q**m, domain.a, rel_tol=1e-9):
                raise DomainError("endpoint a must be a grid point for sampled input")
            total = sum(
                abs(f(k)) ** p * q**k for k in f.window.exponents() if k >= m
            )
            return ((1.0 - q) * total) ** (1.0 / p)
        raise DomainError("Lebesgue norm of a grid function is not defined")
    if domain.kind == Q_MEASURE_0A:
        return qintegral_0a(lambda t: abs(f(t)) ** p, domain.a, params) ** (1.0 / p)
    if domain.kind == Q_MEASURE_0INF:
        if window is None:
            raise DomainError("free-function norm over (0,inf) needs a window")
        g = GridFunction.from_callable(lambda t: abs(f(t)) ** p, params.q, window)
        return qintegral_0inf(g) ** (1.0 / p)
    return lebesgue_integral_01(
        lambda t: abs(f(t)) ** p, params, domain.quadrature_order
    ) ** (1.0 / p)


def check_qparts(f, G, params=QParams(), f0=None, G0=None):
    """Residual of the q-integration-by-parts identity on (0,1).

    |int G(qx) D_q f(x) d_q x  -  [f(1)G(1) - f(0)G(0) - int f(x) D_q G(x) d_q x]|

    The limit values f(0), G(0) default to the value at the smallest grid
    point the truncation tolerance reaches, since 0 is not a grid point.
    """
    q = params.q
    if f0 is None or G0 is None:
        n_probe = min(params.max_terms, max(_MIN_TERMS, int(math.log(params.tol) / math.log(q)) + 1))
        x_probe = q**n_probe
        if f0 is None:
            f0 = f(x_probe)
        if G0 is None:
            G0 = G(x_probe)
    lhs = qintegral_0a(lambda x: G(q * x) * qdiff(f, x, q), 1.0, params)
    rhs = f(1.0) * G(1.0) - f0 * G0 - qintegral_0a(
        lambda x: f(x) * qdiff(G, x, q), 1.0, params
    )
    return abs(lhs - rhs)
