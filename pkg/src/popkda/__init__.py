"""Two-class kernel discriminant analysis: population polynomial and Gaussian fits, sample fits, random features."""
from .eigen import SingularWithinClass, rank_one_geig
from .kernels import Gaussian, HomoPoly, InhomoPoly, parse_kernel
from .moments import DiagonalGaussian, Empirical, FullGaussian, TwoClassProblem
from .population import (DiscriminantModel, GridSpec, fit_gaussian_truncated, fit_homogeneous, fit_inhomogeneous,
                         grid_eval, lambda_curve)
from .sample import LabeledSample, SampleKdaModel, choose_threshold, classify, fit, fit_moment_space
from .scenarios import draw, scenario

__version__ = "0.1.0"
