"""Exact and sampled loss variances for parametrized matchgate circuits."""

from .circuit import CircuitSpec, McEstimate, apply_circuit, estimate_variance, sample_loss
from .dla import (
    CommutatorGraph,
    GeneratorSet,
    QuadraticSymmetry,
    commutator_graph,
    lie_closure,
    linear_symmetries,
    matchgate_generators,
    matchgate_Q_basis,
    quadratic_symmetry_basis,
)
from .entanglement import ContractionMatrices, contraction_matrices, g_purity_via_entropy, linear_entropy
from .majorana import (
    MajoranaMonomial,
    ScaledMonomial,
    hermitian_basis_element,
    majorana,
    monomial_to_pauli,
    parity_operator,
    pauli_to_monomial,
)
from .modules import (
    ModuleDecomposition,
    PuritySpectrum,
    apply_T,
    decompose,
    kappa_coherence,
    kappa_purity,
    parity_sector_decompose,
    sector_coherence,
    sector_purity,
)
from .operators import PauliSumOperator
from .oracle import weingarten_oracle
from .pauli import PauliTerm, commutes, half_commutator, multiply, to_dense
from .variance import (
    VarianceReport,
    closed_form,
    mean_exact,
    variance_corollary,
    variance_exact,
    variance_parity_basis,
)

__version__ = "0.1.0"
