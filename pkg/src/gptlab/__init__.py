"""gptlab: polyhedral computations for generalized probabilistic theories.

Single systems are state/effect polytope pairs; joint systems are built as
maximal or generalized maximal tensor products by exact vertex enumeration;
CHSH correlation bounds are computed by exhaustive search over extreme
points. See the README for the CLI and file formats.
"""

from gptlab.arith import EXACT, ApproxArith, ExactArith, approx
from gptlab.cones import ConeH, ConeV, Polytope, dual_cone, facet_enumeration, intersect, kron, member, vertex_enumeration
from gptlab.errors import (
    BudgetExceededError,
    GptLabError,
    InvalidEffectError,
    InvalidInputError,
    InvalidRestrictionError,
    SingularMapError,
    UnboundedError,
)

__version__ = "0.1.0"
