"""Nonlocal nu-perimeters: exact covariograms, singular quadrature, and
limit-regime sweeps.

The core objects are shapes (geometry), interaction measures (measures),
and the quadrature engine gluing them (quadrature); per_nu and friends in
perimeter are the public entry points, asymptotics drives the normalized
limits, and cli/config expose everything to the command line.
"""

__version__ = "0.1.0"

from .asymptotics import (LimitTarget, SweepResult, aniso_sobolev_sweep,
                          aniso_sweep, dyadic_divergence_study, limit_target,
                          sweep, universal_constants)
from .constants import directional_average, sphere_area, unit_ball_volume
from .convex import (ConvexBody, anisotropic_perimeter, body_volume,
                     box_body, ellipsoid, gauge_norm, inradius, lp_ball,
                     moment_body_norm, outradius, perimeter_wrt_moment_body,
                     polar_body, polar_gauge, polygon_sym)
from .errors import (ConfigError, DivergenceError, GateFailure,
                     NonAdmissibleError, NuperimError, QuadratureError,
                     UnsupportedShapeError)
from .geometry import (Ball, Box, Covariogram, IntervalUnion, Polygon,
                       VoxelSet, boundary_decomposition, classical_perimeter,
                       covariogram_exact, covariogram_grid,
                       cross_covariogram_grid, dyadic_set, l_shape,
                       rasterize, regular_polygon, unit_square)
from .measures import (Kernel, MeasureSpec, RadialProfile, ScalingFamily,
                       SphericalMeasure, admissibility_check,
                       anisotropic_stable_measure, atom_profile, cone_kernel,
                       density_profile, fractional_measure, gaussian_kernel,
                       gauge_weighted_sphere, indicator_ball_kernel,
                       inverse_power_kernel, kernel_measure, lambda_tail,
                       levy_measure, normalization_constant, power_profile,
                       radial_spherical_measure, shrink_kernel,
                       sphere_atoms, sphere_projection, stable_measure,
                       stretch_kernel, tail_mass, uniform_sphere)
from .perimeter import (PerimeterResult, StepFunction, coarea_rhs,
                        dyadic_example_inner, dyadic_inner_exact,
                        dyadic_per_nu_exact, f_nu, frac_perimeter,
                        frac_perimeter_interval, j_perimeter, per_nu,
                        per_nu_interval_exact, per_nu_mc_oracle,
                        resolve_covariogram, symmetry_check)
from .quadrature import (DifferenceFn, QuadratureSpec,
                         integrate_difference, power_integral_piecewise_linear)
