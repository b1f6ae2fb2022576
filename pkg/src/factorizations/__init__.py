"""Finite Boolean algebras of type I factors on finite-dimensional Hilbert spaces."""

__version__ = "0.1.0"

from .errors import (CapacityError, ContractViolation, FactorizationError, InternalError,
                     NumericalInconsistency, UnitCertificationError)
from .matcore import DEFAULT_TOL, Tolerance
from .vnalg import (AlgebraBasis, commutant, generate_algebra, is_factor, join_algebras,
                    meet_algebras, tensor_split)
from .factorization import (FactorizationSpec, SiteSpec, build_from_product_probability,
                            from_sites, product_factorization, verify_factorization)
from .unital import (UnitalSpec, classify_vector, find_factorizable_vector, is_additive,
                     is_factorizable, is_multiplicative, partition_split)
from .spectrum import (SpectralProbability, SpectralResolution, counting_map,
                       is_spectral_independence_probability, spectral_projection,
                       spectral_resolution, vector_measure)
from .fock import (FockSpace, build_dfock, classify_to_fock, exp_inner_product, exp_map,
                   exponential_vector)
from .lemmas import (DiscreteComplexMeasure, classicality_limit, dissecting_product_limit,
                     dominance_check, poisson_binomial_pmf, remainder_inequality_check)
