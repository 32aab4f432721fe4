"""Continuous-time quantum walks with a quadratic Laplacian perturbation.

Simulation of H = L + lambda * L^2 on simple graphs, closed-form dynamics for
the ring, fully connected, and hub topologies, plus the Fisher-information
machinery for estimating the coupling from a snapshot of the walk.
"""

from .dynamics import (
    CompleteIprBound,
    CycleVariance,
    PeriodReport,
    PerturbedWalk,
    ProbDist,
    WalkerState,
    angular_frequency,
    average_probability,
    closed_form_probability,
    coherence,
    complete_ipr_bound,
    cycle_coherence_short_time,
    cycle_variance,
    evolve,
    ipr,
    localized_state,
    probability_distribution,
    star_periodicity,
)
from .fisher import (
    CRBReport,
    FisherRecord,
    ProbeSpec,
    build_probe,
    closed_form_fisher,
    crb_monte_carlo,
    fi_phase_shifted,
    fi_position,
    max_qfi_probe,
    parthasarathy_m,
    qfi_fidelity_limit,
    qfi_variance_formula,
)
from .graphs import (
    Graph,
    GraphFamily,
    adjacency,
    build_family,
    complement,
    complete_graph,
    connected_component_count,
    cycle_graph,
    frobenius_delta,
    laplacian,
    read_edge_list,
    star_graph,
    write_edge_list,
)
from .spectra import (
    EigvecChoice,
    Spectrum,
    complement_spectrum,
    max_qfi_graph_predicate,
    spectrum_closed_form,
    spectrum_numeric,
    top_level_vector,
)

__version__ = "0.1.0"

__all__ = [
    "CompleteIprBound",
    "CRBReport",
    "CycleVariance",
    "EigvecChoice",
    "FisherRecord",
    "Graph",
    "GraphFamily",
    "PeriodReport",
    "PerturbedWalk",
    "ProbDist",
    "ProbeSpec",
    "Spectrum",
    "WalkerState",
    "adjacency",
    "angular_frequency",
    "average_probability",
    "build_family",
    "build_probe",
    "closed_form_fisher",
    "closed_form_probability",
    "coherence",
    "complement",
    "complement_spectrum",
    "complete_graph",
    "complete_ipr_bound",
    "connected_component_count",
    "crb_monte_carlo",
    "cycle_coherence_short_time",
    "cycle_graph",
    "cycle_variance",
    "evolve",
    "fi_phase_shifted",
    "fi_position",
    "frobenius_delta",
    "ipr",
    "laplacian",
    "localized_state",
    "max_qfi_graph_predicate",
    "max_qfi_probe",
    "parthasarathy_m",
    "probability_distribution",
    "qfi_fidelity_limit",
    "qfi_variance_formula",
    "read_edge_list",
    "spectrum_closed_form",
    "spectrum_numeric",
    "star_graph",
    "star_periodicity",
    "top_level_vector",
    "write_edge_list",
]
