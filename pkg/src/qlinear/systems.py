"""Dilated function systems {f(lambda_n x)}: Gram matrices, least-squares
completeness diagnostics, and the order-raising integral identity used to
transfer completeness between neighbouring Bessel orders.

Both supported measures on (0,1) are handled through one sampled-matrix
representation: each system element becomes a column of samples scaled by
square-root quadrature weights, so Gram matrices are exact Gramians of those
columns and least-squares residuals come from a rank-revealing solve instead
of squared normal equations.
"""

import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IllConditioned, InvalidSpec
from .grid import LEBESGUE_01, Q_MEASURE_0A, GridFunction, MeasureSpec, QParams
from .qcalculus import qpochhammer_inf
from .series import (
    FAMILY_CLASSICAL,
    FAMILY_JACKSON2,
    FAMILY_JACKSON3,
    BesselSpec,
    bessel_eval,
)
from .zeros import ZeroList, default_classical_scan, default_q_scan, find_zeros

SPECTRAL_CUTOFF = 1e-10

EXAMPLE_IDS = ("ex1", "ex2a", "ex2b", "ex3a", "ex3b", "ex4")


@dataclass
class FunctionSystem:
    """A family x -> weight(x) * generator(lambda_n * x) over a measure."""

    generator: object            # callable of one positive real
    multipliers: object          # ZeroList or sequence of positive reals
    measure: MeasureSpec
    weight: object = None        # optional callable of x
    label: str = ""

    def __post_init__(self):
        vals = list(self.multipliers)
        if not vals:
            raise InvalidSpec("system needs at least one multiplier")
        prev = 0.0
        for v in vals:
            if not v > 0:
                raise InvalidSpec("multipliers must be positive")
            if v < prev:
                raise InvalidSpec("multipliers must be non-decreasing")
            prev = v

    def multiplier_values(self, N):
        vals = list(self.multipliers)
        if N > len(vals):
            raise InvalidSpec(f"system has {len(vals)} multipliers, needed {N}")
        return vals[:N]

    def element(self, n):
        lam = list(self.multipliers)[n]
        w = self.weight
        g = self.generator
        if w is None:
            return lambda x: g(lam * x)
        return lambda x: w(x) * g(lam * x)


def _qgrid_nodes(q, tol):
    depth = int(math.ceil(-math.log(tol * 1e-5) / math.log(1.0 / q))) + 8
    ks = np.arange(0, depth)
    xs = q**ks
    sw = np.sqrt((1.0 - q) * xs)
    return xs, sw


def _gauss01_nodes(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return 0.5 * (nodes + 1.0), np.sqrt(0.5 * weights)


def sampling_grid(S: FunctionSystem, params=QParams(), order=None):
    """Quadrature nodes and square-root weights realizing the system measure."""
    if S.measure.kind == Q_MEASURE_0A:
        if not math.isclose(S.measure.a, 1.0):
            raise InvalidSpec("systems are defined over (0,1); need a = 1")
        return _qgrid_nodes(params.q, params.tol)
    if S.measure.kind == LEBESGUE_01:
        return _gauss01_nodes(order if order is not None else S.measure.quadrature_order)
    raise InvalidSpec("system measures live on (0,1)")


def _sampled_columns(S, N, params, order=None):
    xs, sw = sampling_grid(S, params, order)
    cols = np.empty((len(xs), N))
    for n in range(N):
        fn = S.element(n)
        cols[:, n] = [fn(x) for x in xs]
    return cols * sw[:, None], xs, sw


def _stable_columns(S, N, params):
    """Sampled columns, with Lebesgue quadrature order refined until the
    Gram matrix stabilizes within tol."""
    if S.measure.kind != LEBESGUE_01:
        F, xs, sw = _sampled_columns(S, N, params)
        return F, xs, sw
    order = max(S.measure.quadrature_order, 4 * N)
    F, xs, sw = _sampled_columns(S, N, params, order)
    G = F.T @ F
    while order <= 4096:
        order2 = (3 * order) // 2
        F2, xs2, sw2 = _sampled_columns(S, N, params, order2)
        G2 = F2.T @ F2
        if np.max(np.abs(G2 - G)) <= params.tol * max(1.0, np.max(np.abs(G2))):
            return F2, xs2, sw2
        F, xs, sw, G, order = F2, xs2, sw2, G2, order2
    raise DomainError("quadrature did not stabilize; integrand too rough")


def gram_matrix(S: FunctionSystem, N, params=QParams()):
    """N x N matrix of inner products of the first N system elements."""
    S.multiplier_values(N)
    F, _, _ = _stable_columns(S, N, params)
    G = F.T @ F
    return 0.5 * (G + G.T)


@dataclass
class LeastSquaresFit:
    """Distance from a target to the span of the first N system elements."""

    residual: float
    ill_conditioned: bool
    coefficients: np.ndarray

    def __float__(self):
        return self.residual


def ls_residual(target, S: FunctionSystem, N, params=QParams()):
    """L^2(mu) norm of target minus its best approximation from the span.

    Solved by a rank-revealing least squares on the sampled columns with
    relative singular-value cutoff 1e-10; the ill_conditioned flag reports
    whether the cutoff discarded directions.
    """
    S.multiplier_values(N)
    F, xs, sw = _stable_columns(S, N, params)
    tau = np.asarray([target(x) for x in xs]) * sw
    coef, _, rank, _ = np.linalg.lstsq(F, tau, rcond=SPECTRAL_CUTOFF)
    resid = float(np.linalg.norm(tau - F @ coef))
    return LeastSquaresFit(residual=resid, ill_conditioned=rank < N, coefficients=coef)


def _j3_zeros(alpha, base_q2, count, params):
    spec = BesselSpec(FAMILY_JACKSON3, nu=alpha, q=base_q2)
    F = lambda x: bessel_eval(spec, x, params)
    scan = default_q_scan(math.sqrt(base_q2), start=base_q2)
    zl = find_zeros(F, count, scan, params)
    return ZeroList(values=list(zl.values), source=f"jackson3 nu={alpha} q={base_q2}")


def _j2_zeros(alpha, base_q2, count, params):
    spec = BesselSpec(FAMILY_JACKSON2, nu=alpha, q=base_q2)
    F = lambda x: bessel_eval(spec, x, params)
    scan = default_q_scan(math.sqrt(base_q2), start=base_q2)
    zl = find_zeros(F, count, scan, params)
    return ZeroList(values=list(zl.values), source=f"jackson2 nu={alpha} q={base_q2}")


def classical_zeros(alpha, count, params=QParams()):
    spec = BesselSpec(FAMILY_CLASSICAL, nu=alpha)
    F = lambda x: bessel_eval(spec, x, params)
    zl = find_zeros(F, count, default_classical_scan(), params)
    return ZeroList(values=list(zl.values), source=f"classical nu={alpha}")


def build_system(example, nu, alpha, q, count, params=None, weight=None):
    """Construct one of the study systems over (0,1).

    ex1:  (q lambda_n^2 x^2; q)_inf products, lambda_n = q^(-n/2)
    ex2a: third q-Bessel, lambda_n = q * j(n, alpha) of the third family
    ex2b: third q-Bessel, lambda_n = q^(-n)
    ex3a: second q-Bessel (argument shifted by q), lambda_n = j(n, alpha)
    ex3b: second q-Bessel (argument shifted by q), lambda_n = q^(-n/2)
    ex4:  classical Bessel over Lebesgue measure, lambda_n = j(n, alpha),
          requires 0 < alpha < nu

    weight is an optional multiplicative factor of x applied to every element
    (e.g. math.sqrt for the orthogonal arrangement of the third family).
    """
    if example not in EXAMPLE_IDS:
        raise InvalidSpec(f"unknown example id {example!r}")
    if params is None:
        params = QParams(q=q)
    if count < 1:
        raise InvalidSpec("count must be positive")
    if not nu > -1:
        raise InvalidSpec(f"nu must exceed -1, got {nu}")
    qmeas = MeasureSpec(kind=Q_MEASURE_0A, a=1.0)
    b = q * q

    if example == "ex1":
        lams = [q ** (-n / 2.0) for n in range(count)]
        poch_params = QParams(q=q, tol=params.tol, max_terms=max(params.max_terms, 256))
        gen = lambda u: qpochhammer_inf(q * u * u, poch_params)
        return FunctionSystem(gen, lams, qmeas, weight, label=f"ex1 q={q}")

    if example in ("ex2a", "ex2b"):
        spec = BesselSpec(FAMILY_JACKSON3, nu=nu, q=b)
        gen = lambda u: bessel_eval(spec, u, params)
        if example == "ex2a":
            if not alpha > -1:
                raise InvalidSpec(f"alpha must exceed -1, got {alpha}")
            zl = _j3_zeros(alpha, b, count, params)
            lams = [q * z for z in zl.values]
        else:
            lams = [q ** (-float(n)) for n in range(count)]
        return FunctionSystem(gen, lams, qmeas, weight,
                              label=f"{example} nu={nu} q={q}")

    if example in ("ex3a", "ex3b"):
        spec = BesselSpec(FAMILY_JACKSON2, nu=nu, q=b)
        gen = lambda u: bessel_eval(spec, q * u, params)
        if example == "ex3a":
            if not alpha > -1:
                raise InvalidSpec(f"alpha must exceed -1, got {alpha}")
            zl = _j2_zeros(alpha, b, count, params)
            lams = list(zl.values)
        else:
            lams = [q ** (-n / 2.0) for n in range(count)]
        return FunctionSystem(gen, lams, qmeas, weight,
                              label=f"{example} nu={nu} q={q}")

    # ex4: classical Bessel on Lebesgue measure
    if not (0 < alpha < nu):
        raise InvalidSpec(f"ex4 needs 0 < alpha < nu, got alpha={alpha}, nu={nu}")
    spec = BesselSpec(FAMILY_CLASSICAL, nu=nu)
    gen = lambda u: bessel_eval(spec, u, params)
    zl = classical_zeros(alpha, count, params)
    return FunctionSystem(gen, list(zl.values), MeasureSpec(kind=LEBESGUE_01),
                          weight, label=f"ex4 nu={nu} alpha={alpha}")


def gram_csv(G, multipliers):
    """Row-major CSV with a header row carrying the multipliers."""
    out = io.StringIO()
    out.write(",".join(f"{m:.17g}" for m in multipliers) + "\n")
    for row in np.atleast_2d(G):
        out.write(",".join(f"{v:.17g}" for v in row) + "\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# order-raising integral identity for the second q-Bessel family
# ---------------------------------------------------------------------------

@dataclass
class RaisingIdentityCheck:
    """Residuals of the order-raising identity: integral form and the
    pointwise difference-operator form it rests on."""

    integral_residual: float
    pointwise_residual: float


def raising_identity_residual(nu, q, lam, y: GridFunction, params=None):
    """Verify the q-integration-by-parts identity that raises the order of
    the second q-Bessel family by one, against a sampled y on (0,1).

    Integral form (both sides evaluated by direct grid summation):

      int_0^1 y(x) x^(-nu) Jnu(lam q x; q^2) d_q x
        = q^nu Jnu(lam; q^2) * Y(1)
          + lam q^(2 nu + 1)/(1-q) * int_0^1 x^(-nu) Jnu1(lam q x; q^2) Y(x) d_q x

    with Y(x) = int_0^x y d_q t and Jnu1 the order nu+1 function.  Pointwise
    form, checked at every sample exponent of y:

      D_q[x^(-nu) Jnu(lam x; q^2)]
        = -(lam q^(nu+1)/(1-q)) x^(-nu) Jnu1(lam q x; q^2).
    """
    if not nu > -1:
        raise InvalidSpec(f"nu must exceed -1, got {nu}")
    if not lam > 0:
        raise InvalidSpec(f"lambda must be positive, got {lam}")
    if y.window.k_min < 0:
        raise DomainError("y must be supported on (0,1): exponents k >= 0")
    if params is None:
        params = QParams(q=q)
    b = q * q
    j_nu = BesselSpec(FAMILY_JACKSON2, nu=nu, q=b)
    j_nu1 = BesselSpec(FAMILY_JACKSON2, nu=nu + 1.0, q=b)
    K = y.window.k_max

    def J(spec, x):
        return bessel_eval(spec, x, params)

    lhs = (1.0 - q) * sum(
        y(n) * q ** (n * (1.0 - nu)) * J(j_nu, lam * q ** (n + 1))
        for n in range(0, K + 1)
    )

    # Y(q^n) = (1-q) sum_{i>=n} y(q^i) q^i
    Yvals = {}
    acc = 0.0
    for n in range(K, -1, -1):
        acc += y(n) * q**n
        Yvals[n] = (1.0 - q) * acc

    inner = (1.0 - q) * sum(
        q ** (n * (1.0 - nu)) * J(j_nu1, lam * q ** (n + 1)) * Yvals[n]
        for n in range(0, K + 1)
    )
    rhs = q**nu * J(j_nu, lam) * Yvals[0] + lam * q ** (2 * nu + 1) / (1.0 - q) * inner

    pointwise = 0.0
    for kk in y.window.exponents():
        x = q**kk
        u_x = x ** (-nu) * J(j_nu, lam * x)
        u_qx = (q * x) ** (-nu) * J(j_nu, lam * q * x)
        dq = (u_x - u_qx) / ((1.0 - q) * x)
        target = -(lam * q ** (nu + 1.0) / (1.0 - q)) * x ** (-nu) * J(j_nu1, lam * q * x)
        pointwise = max(pointwise, abs(dq - target))

    return RaisingIdentityCheck(
        integral_residual=abs(lhs - rhs), pointwise_residual=pointwise
    )
