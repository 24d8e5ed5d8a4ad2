"""relaxforge: exact constructions and certificates for quadratic feasibility
problems, their semidefinite relaxations, and the protocol models they induce."""

from .scalar import Scalar
from .symmatrix import (
    LdlFactorization,
    NegativeWitness,
    SymMatrixQ,
    psd_certificate,
)
from .space import (
    Atom,
    FlowerFamily,
    InnerProductSpace,
    TensorProductSpace,
    Vec,
    flower_space,
    gram_of,
    inner,
    norm2,
)
from .conic import (
    Constraint,
    DualWitness,
    FeasibilityProblem,
    PrimalSolution,
    relax,
    verify_dual,
    verify_primal,
)
from .polynomial import Polynomial
from .sos import Degree2SoSCert, sos_from_dual, verify_sos
from .qphp import (
    PigeonFamily,
    check_quantitative_bound,
    classical_family,
    iterate_weak_qphp,
    max_overlap,
    php_negation_hqfp,
    qphp_dual_witness,
    symmetrize,
    tight_example,
    verify_family,
    weak_qphp_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
