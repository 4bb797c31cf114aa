"""Square and rectangular (anisotropic tensor-product) wavelet transforms
with non-linear N-term compression and approximation-rate benchmarks."""

from ._backend import available_backends, get_backend, set_backend
from .approx import (CompressionReport, SelectionOutcome, TheoremThreshold,
                     ThresholdSchedule, TopN, apply_selection, compress_report,
                     estimate_mixed_norm, select_top_n, theorem_thresholds)
from .dwt1d import (CoeffLevels, analysis_step, forward, inverse,
                    synthesis_step)
from .errors import (CoeffDumpError, FilterSpecError, FilterValidationError,
                     PgmError, RectwaveError, SelectionError, TransformError,
                     UnknownBankError)
from .filterbank import (FilterBank, ValidationReport, builtin, builtin_names,
                         discrete_vanishing_moments, load_filter_spec,
                         serialize_filter_spec, validate_biorthogonality)
from .imageio import (dump_coeffs, load_coeffs, load_pgm, read_pgm,
                      render_composite, save_pgm, write_pgm)
from .ratelab import (RateCurve, coefficient_bound_check,
                      coefficient_identity_check, fit_loglog_slope,
                      haar_psi_antiderivative, rate_curve, sample_function)
from .transform2d import (EnergyTable, RectGrid, SquarePyramid, coeff_stream,
                          energy_distribution, rect_forward, rect_inverse,
                          square_forward, square_inverse)

__version__ = "0.1.0"
