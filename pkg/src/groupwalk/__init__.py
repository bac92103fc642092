"""Convergence in distribution of products of i.i.d. group-valued random variables.

Exact answers on finite groups (coset obstructions, convolution powers,
spectra of the transition operator) and moment-operator diagnostics on
compact matrix groups.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .group import (  # noqa: E402
    Coset,
    FiniteGroup,
    Subgroup,
    build_from_cayley,
    build_from_permutations,
    cyclic,
    dihedral,
    direct_product,
    enumerate_subgroups,
    left_cosets,
    normal_closure,
    normalizer,
    parse_preset,
    preset,
    quaternion8,
    subgroup_generated,
    symmetric,
)
from .measure import (  # noqa: E402
    Distribution,
    convolution_power,
    convolve,
    decay_trace,
    point_mass,
    support_subgroup,
    tv_distance,
    uniform_on,
)
from .obstruction import (  # noqa: E402
    Converges,
    Diverges,
    Obstruction,
    brute_force_obstruction,
    detect_obstruction,
    verdict,
)
from .spectral import (  # noqa: E402
    decay_rate_fit,
    jordan_power,
    spectral_verdict,
    spectrum,
    transition_operator,
)
from .matrix_walk import (  # noqa: E402
    MatrixMeasure,
    MomentOperator,
    classify_finite_orbit,
    estimate_moment,
    moment_check,
    moment_operator,
    moment_power_norm,
)
