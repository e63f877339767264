"""Edge detection through an overcomplete piecewise-polynomial image model.

The pipeline: build a separable polynomial basis, solve a group-sparse
constrained denoising problem with a primal-dual (Condat) iteration, and
extract edges either from the synthesized image or from the pixelwise l2
norm of the parameter-map gradients.
"""

from .basis import (
    Basis1D,
    Basis2D,
    ORTHONORMAL,
    STANDARD,
    make_basis,
    make_basis2d,
    make_orthonormal_basis,
    make_standard_basis,
    sample_grid,
)
from .edges import (
    EdgeMap,
    GradMap,
    edges_from_parameter_maps,
    edges_from_synthesis,
    parameter_map_gradient,
    sobel_magnitude,
    synthesis_gradient,
    threshold_map,
)
from .errors import (
    ConfigurationError,
    DegenerateBasisError,
    DivergenceError,
    PnmFormatError,
    PolyedgeError,
)
from .evaluation import (
    EdgeScore,
    NoiseSpec,
    add_gaussian_noise,
    best_threshold,
    score_edges,
    sweep_thresholds,
)
from .model import (
    SynthesisOperator,
    field_shape,
    flatten_field,
    unflatten_field,
    zero_field,
)
from .pnm import read_image, read_pgm, write_image, write_mask, write_mosaic, write_pgm
from .prox import (
    diff_horizontal,
    diff_horizontal_adjoint,
    diff_vertical,
    diff_vertical_adjoint,
    dual_ball_step,
    group_soft_threshold,
    norm_l21,
    project_l2_ball,
)
from .solver import (
    ProblemSpec,
    SolverConfig,
    SolverState,
    condat_step,
    default_config,
    feasibility_gap,
    initial_state,
    objective,
    solve,
    step_bound,
    write_history_csv,
)

__version__ = "0.1.0"
