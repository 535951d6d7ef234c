"""Variable-length stop-feedback codes with K decoding times over the AWGN channel."""

__version__ = "0.1.0"

from vlsf.errors import (
    ConvergenceError,
    DomainError,
    InfeasibleError,
    ResourceError,
    ValidationError,
    VLSFError,
)
from vlsf.channel import (
    ChannelParams,
    MomentSet,
    a_moments,
    binary_entropy,
    capacity,
    dispersion,
    info_density_increment,
    j_constant,
    nested_log,
    q_func,
    q_inverse,
)
from vlsf.codebook import Codebook, Schedule, check_power, generate_codebook, sample_sphere_point
from vlsf.bounds import (
    AsymptoticPoint,
    BoundReport,
    asymptotic_rate,
    bound_design,
    converse_rate,
    petrov_tail,
    tail_prob_mc,
    random_coding_bound,
)
from vlsf.optimizer import (
    CodeDesign,
    KKTReport,
    design_vlsf_code,
    k_infinity_design,
    kkt_refine,
    newton_root,
    solve_decoding_times,
)
from vlsf.simulator import (
    RenewalStats,
    SimStats,
    martingale_check,
    simulate_code,
    simulate_renewal,
)
