// observables.hpp — Recurrence/swap probabilities, coherence-decay factors,
// decoherence and correlation times, find-state probabilities, linear entropies

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscnet/closed_form.hpp"

namespace oscnet {

struct NoDissipationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::string label;
};

enum class StateKind { ProductCat, EigenMinus, EigenPlus };

struct DecoherenceReport {
    double tau_D = 0.0;           // joint product-cat decoherence time
    double tau_D_reference = 0.0; // isolated-mode benchmark tau_R / (2|alpha|^2)
    double ratio = 0.0;           // tau_D / reference
    std::optional<double> tau_C;  // correlation time; empty when unbounded
    std::optional<double> tau_ratio; // tau_C / tau_D
    bool tau_C_unbounded = false; // cross-decay channel vanished (gamma+ == gamma-)
};

// P_R = Tr[rho_12(t) rho_12(0)]
double recurrence_probability(const InitialSuperposition& init, const JointStateSnapshot& snapshot);

// P_S = Tr[rho_12(t) rho_12(0)|_{1<->2}]
double swap_probability(const InitialSuperposition& init, const JointStateSnapshot& snapshot);

// Joint coherence-decay factor of the three reference initial states.
double coherence_factor_joint(StateKind kind, const DampingRates& rates, cplx alpha, double t);

// Reduced-mode coherence-decay factor; phase pi between the two modes. Covers
// equal and unequal damping through the rate sums.
double coherence_factor_reduced(int mode, const DampingRates& rates, double lambda,
                                cplx alpha, double t);

// Coherence decay of a cat in a single isolated mode with damping scale Gamma.
double coherence_factor_isolated(double gamma_scale, cplx alpha, double t);

// Linearized decoherence time of the given initial state.
double decoherence_time(StateKind kind, const DampingRates& rates, cplx alpha);

// Numeric alternative: time where the factor reaches e^-1 of its coherence
// gap, found by bisection; provided for curve-fitting comparisons.
double decoherence_time_efold(StateKind kind, const DampingRates& rates, cplx alpha);

DecoherenceReport decoherence_report(const DampingRates& rates, cplx alpha,
                                     double gamma_scale_1, double gamma_scale_2);

// P_l(t) = <psi|rho_l(t)|psi> for a coherent-superposition target.
double find_state_probability(const ReducedStateSnapshot& reduced,
                              const CoherentSuperposition& target);

struct EntropyReport {
    double S12 = 0.0;
    double S1 = 0.0;
    double S2 = 0.0;
    double excess = 0.0; // S1 + S2 - S12
};

EntropyReport linear_entropies(const JointStateSnapshot& snapshot);

} // namespace oscnet
