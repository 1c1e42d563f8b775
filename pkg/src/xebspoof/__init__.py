"""Classical spoofing of the linear cross-entropy benchmark on shallow circuits.

Exact light-cone marginals feed a product distribution whose XEB score admits
a closed form; a Pauli-basis Markov chain gives circuit-averaged values
exactly, and a brute-force statevector path cross-checks everything at small
sizes.
"""

from .bounds import (
    BoundInputs,
    bounds_report,
    chebyshev_samples,
    success_prob_bound,
    theorem_bound,
    type1_path_bound,
    variance_cp_bound,
)
from .errors import ArchitectureError, ResourceLimitError
from .gates import fourth_moment_reference, haar_sample
from .pauli_chain import (
    expected_fidelity_exact,
    expected_scaled_collision,
    expected_trace_squared,
    lower_bound_assignment_weight,
    single_qubit_expected_sos,
)
from .skeleton import (
    LightCone,
    Skeleton,
    build_1d_brickwork,
    build_2d_grid,
    greedy_disjoint,
    light_cone,
    light_cone_size,
    skeleton_from_json,
    skeleton_to_json,
)
from .spoofer import (
    SpoofPlan,
    XEBSpoofer,
    closed_form_fidelity,
    light_cone_marginal,
    plan,
    plan_from_json,
    plan_to_json,
    sample,
    spoof_pdf,
)
from .statevector import (
    Circuit,
    bits_to_index,
    circuit_from_json,
    circuit_to_json,
    collision_probability,
    index_to_bits,
    joint_marginal,
    marginal,
    output_probability,
    pauli_z_expectation,
    probabilities,
    simulate,
    xeb_instance,
)

__version__ = "0.1.0"

__all__ = [
    "ArchitectureError",
    "BoundInputs",
    "Circuit",
    "LightCone",
    "ResourceLimitError",
    "Skeleton",
    "SpoofPlan",
    "XEBSpoofer",
    "bits_to_index",
    "bounds_report",
    "build_1d_brickwork",
    "build_2d_grid",
    "chebyshev_samples",
    "circuit_from_json",
    "circuit_to_json",
    "closed_form_fidelity",
    "collision_probability",
    "expected_fidelity_exact",
    "expected_scaled_collision",
    "expected_trace_squared",
    "fourth_moment_reference",
    "greedy_disjoint",
    "haar_sample",
    "index_to_bits",
    "joint_marginal",
    "light_cone",
    "light_cone_marginal",
    "light_cone_size",
    "lower_bound_assignment_weight",
    "marginal",
    "output_probability",
    "pauli_z_expectation",
    "plan",
    "plan_from_json",
    "plan_to_json",
    "probabilities",
    "sample",
    "simulate",
    "single_qubit_expected_sos",
    "skeleton_from_json",
    "skeleton_to_json",
    "spoof_pdf",
    "success_prob_bound",
    "theorem_bound",
    "type1_path_bound",
    "variance_cp_bound",
    "xeb_instance",
    "__version__",
]
