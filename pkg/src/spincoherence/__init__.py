"""Spin coherence scale A^2 for SU(2) and SU(n) systems."""
from ._errors import DegenerateStateError, DomainError, ValidationError
from .cg import clebsch_gordan, log_cg_top
from .channel import (
    FlaggedValue,
    MultipoleTable,
    decay_rates,
    decompose,
    evolve,
    lindblad_rhs,
    monotonicity_report,
    purity_trajectory,
    reconstruct,
    scs_from_purity,
    scs_trajectory,
    tensor_operator,
)
from .coherence import (
    CoherenceReport,
    classical_distance,
    classical_sample,
    scs,
    scs_commutator,
    scs_offdiagonal,
    scs_pure,
    scs_simple,
    witness,
)
from .metrology import (
    SensingReport,
    axis_averaged_crb,
    axis_averaged_qfi,
    covariance_matrix,
    multiparameter_bound,
    qfi_theta,
    sensing_report,
)
from .quasiprob import (
    SphereField,
    SphereGrid,
    cg_asymptotics,
    husimi,
    overlap,
    s_shift_check,
    scs_quasiprob,
    wigner_s,
)
from .spin import (
    SpinLabel,
    angular_momentum_ops,
    eigenbasis,
    rotation_matrix,
    rotation_unitary,
    spin_coherent_state,
)
from .sun import (
    IrrepLabel,
    fundamental_equivalence_check,
    scs_sun,
    scs_sun_invariance_check,
    sun_casimir,
    sun_classical_bound_check,
    sun_coherent_state,
    sun_depol_rhs,
    sun_evolve,
    sun_generators,
)

__version__ = "0.1.0"
