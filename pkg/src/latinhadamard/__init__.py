"""Signed Latin squares, Pearson chi-square components, and the algebra
that decides when they exist.

The package constructs structured power-of-two Latin squares, enumerates
their +/-1 colorings, certifies symbolic orthogonality, connects valid
colorings to division algebras and zero divisors, embeds the order-16
nine-variable orthogonal design, and decomposes the Pearson statistic
into asymptotically independent single-degree components with a seeded
Monte Carlo power harness.
"""

from .algebra import (AlgebraTable, ZeroDivisorPair, cayley_dickson_table,
                      find_zero_divisors, radon, table_from_signed_square)
from .chisq import (CellCounts, Decomposition, Eigenbasis, ProbabilityVector,
                    alternate_signed_square_8, canonical_signed_square_8,
                    component_formulas_t2_t6_t8, decompose,
                    eigen_interlacing_check, eigenbasis_from_latin_hadamard,
                    eigenbasis_from_sign_matrix, jacobi_eigenvalues,
                    pearson_x2, scaled_residuals, sigma, sigma_star,
                    sylvester_hadamard)
from .coloring import (SignedLatinSquare, SymbolicGram, choices_from_bitstring,
                       choices_to_bitstring, color, enumerate_colorings,
                       is_latin_hadamard, num_free_choices,
                       partial_orthogonality_report, sign_pattern_is_hadamard,
                       symbolic_gram)
from .design import (OrthogonalDesign, builtin_design_16, design_to_eigenbasis,
                     verify_design)
from .errors import InternalConsistencyError, SizeError, ValidationError
from .latin import (CornerQuad, LatinSquare, construct_latin_square,
                    enumerate_abba_quads, find_abba_partner)
from .power import (BinningScheme, DistributionSpec, PowerSimConfig,
                    PowerSimResult, bin_edges, chi_square_critical,
                    matched_normal_null, normal_critical, normal_quantile,
                    preset_probability, simulate_power)

__version__ = "0.1.0"
