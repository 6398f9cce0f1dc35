"""folint: exact decision procedure for rational first integrals of
non-degenerate algebraic foliations of the projective plane."""

from .errors import (AmbiguousChain, BasePointCollision, DegenerateFoliation,
                     EulerViolation, FactorDegreeCap, FolintError,
                     InhomogeneousInput, MixedFields, NonIsolated, NotCoprime,
                     NotReduced, NotSquarefreeExtension, ParseError,
                     SingularJacobian, UnequalDegrees, UnsupportedExtension,
                     ZeroPolynomial)
from .fields import FieldElement, NumberField
from .foliation import (Foliation, IrrationalRatio, SingularLocus,
                        SingularPoint, classify, cota_test, eigen_ratio,
                        milnor_at, singular_locus)
from .forms import (ProjOneForm, TwoForm, chart_restrict, euler_check,
                    foliation_degree, homogenize, pencil_differential,
                    translate_to_origin, wedge)
from .integrate import (DegreeBound, DiophantineSolution, IntegrabilityReport,
                        PencilCandidate, certify_wedge, cluster_conditions,
                        find_first_integral, linear_system, solve_diophantine,
                        verify_condition_d, verify_condition_e)
from .linalg import ExactMatrix, nullspace, rank
from .poly import MultiPoly, mp_gcd, resultant
from .resolution import (Cluster, Germ, InfinitelyNearPoint, colength,
                         equisingular, euclid_multiplicities,
                         foliation_cluster, germ_milnor, germ_mult_sequence,
                         germ_tjurina, is_nodal, type_check_S)
from .unipoly import UniPoly, factor_over_field, factor_rational

__version__ = "0.1.0"
