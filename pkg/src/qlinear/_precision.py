"""Adaptive-precision summation of alternating series with huge term cancellation.

Series like the q-Bessel ones evaluated at large arguments have terms that
grow to 10^100 and beyond before decaying, while the sum itself can be
astronomically small (the functions nearly vanish on the far grid).  Plain
float64 summation returns pure noise there.  This module sums such series
with mpmath, choosing the working precision from an a-priori estimate of the
largest term and escalating when the computed sum is indistinguishable from
cancellation noise.
"""

import math

import mpmath as mp

from .errors import NonConvergence

# terms below 10^(peak - dps + _CUT_MARGIN) cannot affect the rounded result
_CUT_MARGIN = 10.0
# a sum smaller than 10^(peak - dps + _NOISE_MARGIN) is treated as noise
_NOISE_MARGIN = 25.0
_MAX_ESCALATIONS = 6


def peak_term_log10(log10_ratio, max_terms):
    """Running-max of log10|t_k| with t_0 = 1 and |t_{k+1}/t_k| from log10_ratio.

    Returns (peak, k_peak). Raises NonConvergence when the ratio has not
    dropped below 1 within max_terms (the series never starts converging).
    """
    cur = 0.0
    peak = 0.0
    k_peak = 0
    growing = True
    for k in range(max_terms):
        r = log10_ratio(k)
        if r < 0.0:
            growing = False
        cur += r
        if cur > peak:
            peak, k_peak = cur, k + 1
        if not growing and cur < peak - 400.0:
            return peak, k_peak
    if growing:
        raise NonConvergence("series terms still growing at max_terms")
    return peak, k_peak


def sum_alternating(term0, ratio, log10_ratio, max_terms, min_terms=8):
    """Sum t_0 * (1 + sum of products of ratios) adaptively; returns a float.

    term0():      first term in the current mp context (mpf)
    ratio(k):     t_{k+1}/t_k in the current mp context (mpf, sign included)
    log10_ratio:  float estimate of log10|ratio(k)| for sizing the precision

    The value is exact to ~20 significant digits unless the true sum sits
    below the escalated noise floor (practically: the argument is within
    ~1e-40 of a zero of the function), in which case the last best-effort
    value is returned.
    """
    peak, _ = peak_term_log10(log10_ratio, max_terms)
    allowance = 60.0
    best = 0.0
    for _ in range(_MAX_ESCALATIONS):
        dps = max(25, int(peak + allowance))
        cut_log10 = peak - dps + _CUT_MARGIN
        noise_log10 = peak - dps + _NOISE_MARGIN
        with mp.workdps(dps):
            t = term0()
            s = mp.mpf(0)
            cut = mp.mpf(10) ** cut_log10
            converged = False
            for k in range(max_terms):
                s += t
                t *= ratio(k)
                if k + 1 >= min_terms and abs(t) < cut:
                    converged = True
                    break
            if not converged:
                raise NonConvergence(
                    "tail criterion not reached within max_terms=%d" % max_terms
                )
            best = float(s)
            if s == 0 or abs(s) > mp.mpf(10) ** noise_log10:
                return best
        allowance = 2.0 * allowance + 40.0
    return best
