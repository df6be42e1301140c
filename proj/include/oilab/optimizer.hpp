#pragma once

// Optimal-measurement machinery: certificates for the two optimality
// conditions (orthogonal support, pairwise commutation), simultaneous
// diagonalization of commuting ensembles, discord minimization over
// projective measurement bases via Givens-style coordinate descent, and the
// best-effort search over pre-query states.

#include "oilab/ensembles.hpp"
#include "oilab/problems.hpp"
#include "oilab/simulator.hpp"

#include <cstdint>
#include <vector>

namespace oilab {

struct OptimalityCertificate {
    bool orthogonal_support = false;
    bool pairwise_commuting = false;
    std::vector<std::vector<double>> gram_overlaps;     // tr(sigma_j sigma_j')
    std::vector<std::vector<double>> commutator_norms;  // ||[sigma_j, sigma_j']||_max
};

// Off-diagonal overlaps <= 1e-10 certify orthogonal support; commutator
// max-norms <= 1e-9 certify pairwise commutation.
OptimalityCertificate certify(const ClassEnsemble& post_query);

struct MeasurementBasis {
    ComplexMatrix W;  // rows are the measurement bras; W sigma W^dagger is measured diagonally
};

// Common eigenbasis of a pairwise-commuting ensemble: eigendecompose a
// random positive combination and split degenerate blocks recursively with
// fresh coefficients. Requires the commutation certificate.
MeasurementBasis simultaneous_diagonalizer(const ClassEnsemble& e, std::uint64_t seed = 20250810);

// Fixed-basis discord after rotating the ensemble by W.
double discord_in_basis(const ClassEnsemble& e, const ComplexMatrix& w);

struct DiscordMinimum {
    MeasurementBasis basis;
    double d_min = 0.0;
    bool converged = false;
    std::size_t restarts_run = 0;
    std::size_t evaluations = 0;
};

// Coordinate descent over two-level rotations with phases, golden-section
// line search per pair, best over random restarts (restart 0 is the
// identity, so d_min never exceeds the fixed-basis discord).
DiscordMinimum minimize_discord(const ClassEnsemble& e, std::size_t restarts = 32,
                                double tol = 1e-7, std::uint64_t seed = 20250810);

// I_max = chi - D_min of the post-query ensemble.
double i_max(const ClassEnsemble& post_query, std::size_t restarts = 32, double tol = 1e-7,
             std::uint64_t seed = 20250810);

struct Psi1Search {
    CVec psi1;
    double i_max_best = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

// Random-restart hill climbing over pure pre-query states, scoring each
// candidate by i_max of the induced post-query ensemble. Heuristic only; no
// global-optimality claim. Supported up to the small-instance cap (2^5).
Psi1Search search_psi1(const OracleProblem& problem, std::size_t trials, std::size_t restarts,
                       double tol = 1e-7, std::uint64_t seed = 20250810);

// True iff the unitary has exactly one nonzero entry per row and column.
bool monomial_check(const ComplexMatrix& v);

// Post-query ensemble sigma_j(psi1) for an enumerated problem, measured on
// all qubits by default.
ClassEnsemble post_query_ensemble(const OracleProblem& problem, const CVec& psi1);

} // namespace oilab
