"""Reaction/edge PDE binarization of degraded document images."""
from ._backend import available as available_backends
from ._backend import current as current_backend
from .binarizer import (ThresholdCurve, ThresholdSpec, binarize, binarize_fixed,
                        otsu_threshold, sweep_thresholds)
from .edge_field import (EdgeField, EdgeParams, compute_edge_field, edge_indicator,
                         edge_term, gaussian_smooth, gradient)
from .errors import DegenerateDataError, ImageIOError, ParameterError, PdeBinError
from .image_model import (DatasetEntry, load_ground_truth, load_image, normalize_signed,
                          rgb_to_hsi, scan_dataset, select_channel, to_grayscale)
from .metrics import (ConfusionCounts, MetricsReport, confusion, drd, evaluate,
                      f_measure, nrm, pseudo_f_measure, psnr)
from .pipeline import RunConfig, run_pipeline
from .solver import (SolverParams, euler_step, evolve, evolve_fractional, gl_weights,
                     rhs, source_term)

__version__ = "0.1.0"
