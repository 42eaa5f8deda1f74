"""Even entire functions: generic coefficient series, Euler products, Bessel
families (classical plus the second and third Jackson q-analogues), order
estimation from Taylor coefficients, and the coefficient-ratio test.

All functions here are of the form prefactor(x) * sum (-1)^n a_n x^(2n) with
a_n >= 0.  Family-backed series are evaluated through the adaptive-precision
engine in _precision, which survives the enormous term cancellation these
series exhibit at large arguments.
"""

import math
from dataclasses import dataclass, field

import mpmath as mp

from ._precision import sum_alternating
from .errors import DomainError, InvalidSpec, NonConvergence
from .grid import QParams
from .qcalculus import qpochhammer_finite, qpochhammer_inf

FAMILY_CLASSICAL = "classical"
FAMILY_JACKSON2 = "jackson2"
FAMILY_JACKSON3 = "jackson3"
FAMILY_EULER = "euler-product"

_FAMILIES = (FAMILY_CLASSICAL, FAMILY_JACKSON2, FAMILY_JACKSON3, FAMILY_EULER)

_MIN_TERMS = 8
_EVAL_CACHE = {}
_PREF_CACHE = {}


@dataclass(frozen=True)
class BesselSpec:
    """Which Bessel-type function: family, order, and q-base.

    printed_exponent switches the second Jackson family to the linear
    exponent variant (finite radius of convergence) for comparison; the
    default is the quadratic exponent, which is the entire function whose
    coefficient ratios and difference identities are consistent.
    """

    family: str
    nu: float = 0.0
    q: float = 0.5
    printed_exponent: bool = False

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise InvalidSpec(f"unknown family {self.family!r}")
        if self.family != FAMILY_EULER and not self.nu > -1.0:
            raise InvalidSpec(f"order nu must exceed -1, got {self.nu}")
        if self.family != FAMILY_CLASSICAL and not (0.0 < self.q < 1.0):
            raise InvalidSpec(f"base q must lie in (0,1), got {self.q}")
        if self.printed_exponent and self.family != FAMILY_JACKSON2:
            raise InvalidSpec("printed_exponent only applies to jackson2")


@dataclass
class EvenEntireSeries:
    """Coefficients a_n of f(x) = prefactor(x) * sum (-1)^n a_n x^(2n)."""

    coeffs: object                 # callable n -> a_n, or a finite sequence
    prefactor: object = None       # callable of x, or None for 1
    label: str = ""
    family_spec: BesselSpec = field(default=None, repr=False)

    def coeff(self, n):
        if callable(self.coeffs):
            a = self.coeffs(n)
        else:
            a = self.coeffs[n] if n < len(self.coeffs) else 0.0
        if a < 0:
            raise InvalidSpec(f"coefficient a_{n} = {a} is negative")
        return a


def _power(x, nu):
    """x^nu with the domain rules of this package: x<=0 needs integer nu."""
    if x > 0:
        return x**nu
    n = round(nu)
    if not math.isclose(nu, n, abs_tol=1e-12):
        raise DomainError(f"x^nu undefined for x={x} with non-integer nu={nu}")
    if x == 0:
        if n > 0:
            return 0.0
        if n == 0:
            return 1.0
        raise DomainError("x^nu undefined at x=0 for negative nu")
    return float(x) ** int(n)


def _q_prefactor(nu, b):
    key = (float(nu), float(b))
    if key not in _PREF_CACHE:
        p = QParams(q=b, tol=1e-17, max_terms=4096)
        _PREF_CACHE[key] = qpochhammer_inf(b ** (nu + 1.0), p) / qpochhammer_inf(b, p)
    return _PREF_CACHE[key]


def _engine_sum(spec, x, params, x_pow=None):
    """sum (-1)^n a_n x^(2n) for a family spec, via the adaptive engine.

    x_pow, when given, is a pair (base, k) declaring x = base**k; the square
    x^2 is then recomputed as base^(2k) inside each working precision, which
    matters on the far grid where the function passes astronomically close
    to its zeros and the float rounding of x alone would land on the
    oscillation envelope instead.
    """
    fam, nu, b = spec.family, spec.nu, spec.q
    if x_pow is None:
        xf = float(x)
        if xf == 0.0:
            return 1.0
        lx2 = 2.0 * math.log10(abs(xf))

        def x2_mp():
            return mp.mpf(xf) ** 2
    else:
        pbase, pk = x_pow
        lx2 = 2.0 * pk * math.log10(pbase)

        def x2_mp():
            return mp.mpf(pbase) ** (2 * int(pk))

    x2_memo = {}

    def x2_cur():
        prec = mp.mp.prec
        if prec not in x2_memo:
            x2_memo[prec] = x2_mp()
        return x2_memo[prec]

    if fam == FAMILY_CLASSICAL:
        def log10_ratio(k):
            return lx2 - math.log10(4.0 * (k + 1) * (k + nu + 1))

        def ratio_mp(k, _nu=nu):
            return -x2_cur() / (4 * (k + 1) * (k + _nu + 1))

    elif fam == FAMILY_JACKSON3:
        lb = math.log10(b)

        def log10_ratio(k):
            return lx2 + (k + 1) * lb - math.log10(
                (1.0 - b ** (nu + k + 1)) * (1.0 - b ** (k + 1))
            )

        def ratio_mp(k, _nu=nu, _b=b):
            bb = mp.mpf(_b)
            return -x2_cur() * bb ** (k + 1) / (
                (1 - bb ** (mp.mpf(_nu) + k + 1)) * (1 - bb ** (k + 1))
            )

    elif fam == FAMILY_JACKSON2:
        lb = math.log10(b)
        if spec.printed_exponent:
            if lx2 + (nu + 1.0) * lb >= 0.0:
                raise NonConvergence(
                    "printed-exponent variant diverges: |x|^2 q^(nu+1) >= 1"
                )

            def log10_ratio(k):
                return lx2 + (nu + 1) * lb - math.log10(
                    (1.0 - b ** (nu + k + 1)) * (1.0 - b ** (k + 1))
                )

            def ratio_mp(k, _nu=nu, _b=b):
                bb = mp.mpf(_b)
                return -x2_cur() * bb ** (mp.mpf(_nu) + 1) / (
                    (1 - bb ** (mp.mpf(_nu) + k + 1)) * (1 - bb ** (k + 1))
                )
        else:
            def log10_ratio(k):
                return lx2 + (2 * k + 1 + nu) * lb - math.log10(
                    (1.0 - b ** (nu + k + 1)) * (1.0 - b ** (k + 1))
                )

            def ratio_mp(k, _nu=nu, _b=b):
                bb = mp.mpf(_b)
                return -x2_cur() * bb ** (2 * k + 1 + mp.mpf(_nu)) / (
                    (1 - bb ** (mp.mpf(_nu) + k + 1)) * (1 - bb ** (k + 1))
                )

    elif fam == FAMILY_EULER:
        lb = math.log10(b)

        def log10_ratio(k):
            return lx2 + k * lb - math.log10(1.0 - b ** (k + 1))

        def ratio_mp(k, _b=b):
            bb = mp.mpf(_b)
            return -x2_cur() * bb**k / (1 - bb ** (k + 1))

    else:  # pragma: no cover
        raise InvalidSpec(fam)

    return sum_alternating(
        lambda: mp.mpf(1), ratio_mp, log10_ratio, params.max_terms, _MIN_TERMS
    )


def bessel_eval(spec: BesselSpec, x, params=QParams(), x_pow=None):
    """Evaluate the function described by spec at real x.

    Pass x_pow = (base, k) when x is the grid point base**k; the argument is
    then reconstructed exactly inside the extended-precision summation,
    which is essential at deep grid exponents (see _engine_sum).
    """
    if x_pow is not None:
        x = float(x_pow[0]) ** int(x_pow[1])
        arg_key = ("pow", float(x_pow[0]), int(x_pow[1]))
    else:
        arg_key = float(x)
    key = (spec.family, spec.nu, spec.q, spec.printed_exponent, arg_key)
    if key in _EVAL_CACHE:
        return _EVAL_CACHE[key]
    if spec.family == FAMILY_EULER:
        # (x^2; q)_inf is an always-stable product
        val = qpochhammer_inf(
            x * x, QParams(q=spec.q, tol=params.tol, max_terms=max(params.max_terms, 256))
        )
    else:
        pw = _power(x, spec.nu)
        if pw == 0.0:
            val = 0.0
        else:
            s = _engine_sum(spec, x, params, x_pow)
            if spec.family == FAMILY_CLASSICAL:
                pref = 1.0 / (2.0**spec.nu * math.gamma(spec.nu + 1.0))
            else:
                pref = _q_prefactor(spec.nu, spec.q)
            val = pref * pw * s
    _EVAL_CACHE[key] = val
    return val


def jackson3_int_order(n, x, b, params=QParams()):
    """Third Jackson q-Bessel of integer order n (any sign), base b, at x > 0.

    Negative orders use the limit form of the series, whose first |n| terms
    vanish; no reflection relation is assumed.
    """
    if x <= 0:
        raise DomainError("integer-order evaluation requires x > 0")
    n = int(n)
    if n >= 0:
        return bessel_eval(BesselSpec(FAMILY_JACKSON3, nu=float(n), q=b), x, params)
    m = -n
    key = ("jackson3-int", m, b, False, float(x))
    if key in _EVAL_CACHE:
        return _EVAL_CACHE[key]
    x2 = float(x) * float(x)
    lx2, lb = math.log10(x2), math.log10(b)

    def log10_ratio(j):
        return lx2 + (j + m + 1) * lb - math.log10(
            (1.0 - b ** (j + 1)) * (1.0 - b ** (j + 1 + m))
        )

    def ratio_mp(j, _x2=x2, _b=b, _m=m):
        bb = mp.mpf(_b)
        return -mp.mpf(_x2) * bb ** (j + _m + 1) / (
            (1 - bb ** (j + 1)) * (1 - bb ** (j + 1 + _m))
        )

    def term0(_x=float(x), _b=b, _m=m):
        bb = mp.mpf(_b)
        t = (-1) ** _m * bb ** (_m * (_m + 1) // 2) * mp.mpf(_x) ** _m
        for i in range(_m):
            t /= 1 - bb ** (i + 1)
        return t

    val = sum_alternating(term0, ratio_mp, log10_ratio, params.max_terms, _MIN_TERMS)
    _EVAL_CACHE[key] = val
    return val


def eval_even_series(s: EvenEntireSeries, x, params=QParams()):
    """prefactor(x) * sum (-1)^n a_n x^(2n), adaptive for family-backed series."""
    if s.family_spec is not None:
        return bessel_eval(s.family_spec, x, params)
    pref = s.prefactor(x) if s.prefactor is not None else 1.0
    if pref == 0.0:
        return 0.0
    x2 = x * x
    total = 0.0
    peak = 0.0
    power = 1.0
    for n in range(params.max_terms):
        a = s.coeff(n)
        term = a * power
        total += -term if n % 2 else term
        peak = max(peak, abs(term))
        if n + 1 >= _MIN_TERMS and term <= params.tol * max(abs(total), peak):
            return pref * total
        power *= x2
    raise NonConvergence(f"series tail not below tol in {params.max_terms} terms")


def coeffs_for(spec: BesselSpec) -> EvenEntireSeries:
    """Coefficient sequence and prefactor for a Bessel-type family."""
    fam, nu, b = spec.family, spec.nu, spec.q
    if fam == FAMILY_CLASSICAL:
        def a(n):
            return math.exp(-((2 * n + nu) * math.log(2.0)
                              + math.lgamma(n + 1.0) + math.lgamma(nu + n + 1.0)))

        return EvenEntireSeries(a, lambda x: _power(x, nu),
                                label=f"classical-J nu={nu}", family_spec=spec)
    if fam == FAMILY_JACKSON3:
        def a(n):
            return b ** (n * (n + 1) / 2.0) / (
                qpochhammer_finite(b ** (nu + 1.0), b, n) * qpochhammer_finite(b, b, n)
            )

        pref = _q_prefactor(nu, b)
        return EvenEntireSeries(a, lambda x: pref * _power(x, nu),
                                label=f"jackson3 nu={nu} q={b}", family_spec=spec)
    if fam == FAMILY_JACKSON2:
        expo = (lambda n: n * (nu + 1.0)) if spec.printed_exponent else (
            lambda n: n * (n + nu))

        def a(n):
            return b ** expo(n) / (
                qpochhammer_finite(b ** (nu + 1.0), b, n) * qpochhammer_finite(b, b, n)
            )

        pref = _q_prefactor(nu, b)
        return EvenEntireSeries(a, lambda x: pref * _power(x, nu),
                                label=f"jackson2 nu={nu} q={b}", family_spec=spec)
    # euler-product: coefficients of (x^2; q)_inf
    def a(n):
        return b ** (n * (n - 1) / 2.0) / qpochhammer_finite(b, b, n)

    return EvenEntireSeries(a, None, label=f"euler-product q={b}", family_spec=spec)


def euler_series_sum(x, q, n_terms=40):
    """The series form of (x;q)_inf truncated at exactly n_terms terms.

    Summed at extended precision so the returned float is correct to the
    last bit even when intermediate terms dwarf the result.
    """
    with mp.workdps(60 + int(max(0.0, n_terms * abs(math.log10(abs(x))) if x else 0.0))):
        qq, xx = mp.mpf(q), mp.mpf(x)
        s = mp.mpf(0)
        t = mp.mpf(1)
        for n in range(n_terms):
            s += t
            t *= -xx * qq**n / (1 - qq ** (n + 1))
        return float(s)


def log_inv_coeffs(spec: BesselSpec, N):
    """log(1/a_n) for the plain power-series coefficients of a family, n<=N.

    Returns a dict indexed by plain power-series degree; even functions get
    entries only at even degrees (odd coefficients vanish and are skipped by
    estimate_order).  Computed in logs so very small coefficients survive.
    """
    fam, nu, b = spec.family, spec.nu, spec.q
    out = {}
    if fam == FAMILY_CLASSICAL:
        for n in range(1, N // 2 + 1):
            out[2 * n] = ((2 * n) * math.log(2.0) + math.lgamma(n + 1.0)
                          + math.lgamma(nu + n + 1.0) - math.lgamma(nu + 1.0))
        return out
    lq = math.log(1.0 / b)
    if fam == FAMILY_EULER:
        acc = 0.0
        for n in range(1, N + 1):
            acc += math.log(1.0 - b**n)
            out[n] = (n * (n - 1) / 2.0) * lq + acc
        return out
    acc1 = acc2 = 0.0
    for n in range(1, N // 2 + 1):
        acc1 += math.log(1.0 - b ** (nu + n))
        acc2 += math.log(1.0 - b ** float(n))
        if fam == FAMILY_JACKSON3:
            e = n * (n + 1) / 2.0
        else:
            e = n * (nu + 1.0) if spec.printed_exponent else n * (n + nu)
        out[2 * n] = e * lq + acc1 + acc2
    return out


def estimate_order(coeffs, N, log_inv=False):
    """Finite-N estimate of the growth order from power-series coefficients.

    coeffs maps plain series index n to a_n (or to log(1/a_n) when log_inv is
    set); indices with vanishing/missing coefficients are skipped.  For each n
    in the top half of the range the estimate pairs n with m ~ n/2:

        rho_n = n log(n/m) / (log(1/a_n) - (n/m) log(1/a_m))

    which cancels the linear-in-n bias of the raw n log n / log(1/a_n)
    quotient, and returns max rho_n (upward-biased limsup semantics).
    """
    if N < 16:
        raise DomainError(f"need N >= 16, got {N}")

    def log_inv_at(n):
        if isinstance(coeffs, dict):
            v = coeffs.get(n)
        elif callable(coeffs):
            v = coeffs(n)
        else:
            v = coeffs[n] if n < len(coeffs) else None
        if v is None:
            return None
        if log_inv:
            return float(v)
        if v < 0:
            raise InvalidSpec(f"negative coefficient at n={n}")
        if v == 0.0:
            return None
        return -math.log(v)

    table = {n: log_inv_at(n) for n in range(2, N + 1)}
    table = {n: v for n, v in table.items() if v is not None}
    if not table:
        raise DomainError("all coefficients in range vanish")
    best = None
    for n in range(max(4, N // 2), N + 1):
        if n not in table:
            continue
        m = n // 2
        while m >= 2 and m not in table:
            m -= 1
        if m < 2:
            continue
        denom = table[n] - (n / m) * table[m]
        if denom <= 0:
            continue
        est = n * math.log(n / m) / denom
        if best is None or est > best:
            best = est
    if best is None:
        raise DomainError("no usable coefficient pairs in the top half")
    return best


@dataclass
class RatioReport:
    """a_n/b_n sample and a monotone-tail verdict for the ratio -> 0 test."""

    ratios: list
    tends_to_zero: bool


def ratio_condition(a, b, N, threshold=0.1):
    """Ratios a_n/b_n for n <= N and whether they decay toward zero.

    Verdict: every ratio in the last quarter lies strictly below the first
    quarter's minimum and below the threshold.
    """
    def at(seq, n):
        return seq(n) if callable(seq) else seq[n]

    ratios = []
    for n in range(N + 1):
        bn = at(b, n)
        if bn == 0:
            raise DomainError(f"b_{n} = 0 in ratio test")
        ratios.append(at(a, n) / bn)
    quarter = max(1, (N + 1) // 4)
    head_min = min(abs(r) for r in ratios[:quarter])
    tail = [abs(r) for r in ratios[-quarter:]]
    verdict = all(r < head_min and r < threshold for r in tail)
    return RatioReport(ratios=ratios, tends_to_zero=verdict)


def generating_function_residual(x, t, N, params=QParams()):
    """|product side - two-sided Laurent sum| of the integer-order relation

        (q x / t; q)_inf / (x t; q)_inf = sum_n J_n(x; q) t^n,  |xt| < 1,

    with the sum truncated to |n| <= N.
    """
    if t == 0:
        raise DomainError("t must be nonzero")
    if abs(x * t) >= 1:
        raise DomainError(f"|xt| must be < 1, got {abs(x * t)}")
    q = params.q
    lhs = qpochhammer_inf(q * x / t, params) / qpochhammer_inf(x * t, params)
    rhs = 0.0
    for n in range(-N, N + 1):
        rhs += jackson3_int_order(n, x, q, params) * t ** n
    return abs(lhs - rhs)


@dataclass
class BoundCheck:
    """One evaluation of the grid magnitude bound for the third family."""

    value: float
    bound: float
    holds: bool


def jackson3_grid_bound(nu, q, k, params=QParams()):
    """Check |J_nu(q^k; q)| <= q^(k nu) / (q; q^2)_inf^2 at the grid point q^k."""
    if nu < 0:
        raise DomainError(f"the bound needs nu >= 0, got {nu}")
    x = q ** k
    val = abs(bessel_eval(BesselSpec(FAMILY_JACKSON3, nu=nu, q=q), x, params,
                          x_pow=(q, k)))
    c = qpochhammer_inf(q, QParams(q=q * q, tol=1e-16, max_terms=2048)) ** 2
    bound = q ** (k * nu) / c
    return BoundCheck(value=val, bound=bound, holds=val <= bound)
