"""Numerics on q-linear grids: q-calculus, q-Bessel special functions,
zero-based function systems with completeness diagnostics, the self-inverse
q-Hankel transform, and concentration uncertainty bounds."""

from .concentration import (
    ConcentrationReport,
    concentration,
    kernel_truncated_norm,
    sweep,
    uncertainty_report,
)
from .errors import (
    DomainError,
    IllConditioned,
    InvalidSpec,
    NonConvergence,
    NotNormalized,
    QLinearError,
    ScanExhausted,
    WindowTooSmall,
)
from .grid import GridFunction, GridWindow, MeasureSpec, QParams
from .qcalculus import (
    check_qparts,
    qdiff,
    qintegral_0a,
    qintegral_0inf,
    qnorm,
    qpochhammer_finite,
    qpochhammer_inf,
)
from .series import (
    BesselSpec,
    EvenEntireSeries,
    bessel_eval,
    coeffs_for,
    estimate_order,
    eval_even_series,
    euler_series_sum,
    generating_function_residual,
    jackson3_grid_bound,
    jackson3_int_order,
    log_inv_coeffs,
    ratio_condition,
)
from .systems import (
    FunctionSystem,
    LeastSquaresFit,
    build_system,
    classical_zeros,
    gram_matrix,
    ls_residual,
    raising_identity_residual,
)
from .transform import (
    PwReport,
    RecoveryReport,
    VanishingReport,
    hankel_q,
    pw_membership,
    recovery_demo,
    roundtrip_error,
    sample_sonine,
    sonine_pair,
    vanishing_demo,
)
from .zeros import (
    GeometricScan,
    LinearScan,
    ZeroList,
    check_interlacing,
    default_classical_scan,
    default_q_scan,
    find_zeros,
)

__version__ = "0.1.0"
