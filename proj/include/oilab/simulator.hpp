#pragma once

// The pipeline: initialize, apply V, query (possibly as a t-fold tensor
// power), apply W, and report the class ensemble at the pre-query,
// post-query and final stages. Per-oracle pure states are streamed into the
// class accumulators; the full per-oracle state set is never stored.

#include "oilab/ensembles.hpp"
#include "oilab/infometrics.hpp"
#include "oilab/problems.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace oilab {

struct AlgorithmSpec {
    std::size_t n_qubits = 0;
    CVec psi0;
    ComplexMatrix V;
    ComplexMatrix W;
    std::vector<std::size_t> measured;  // qubit indices, 0 = leftmost
    std::size_t queries = 1;

    void validate(const OracleProblem& problem) const;
};

// The textbook circuit for a problem (QDJ / QBV Hadamard sandwich, the
// standard HSP routine, phase estimation's H / inverse-QFT pair), lifted to
// the problem's query count.
AlgorithmSpec canonical_spec(const OracleProblem& problem);

// All three stage ensembles on the full register (analytic problems return
// their measured-register ensembles directly).
std::map<StageLabel, ClassEnsemble> run_stages(const OracleProblem& problem,
                                               const AlgorithmSpec& spec);

// Convenience: run the canonical algorithm.
std::map<StageLabel, ClassEnsemble> run_stages(const OracleProblem& problem);

struct OutputRule {
    std::vector<std::size_t> assignment;  // y -> class index
    double p_success = 0.0;
};

// g(y) = argmax_j Pr(J=j | Y=y), ties to the lexicographically smallest
// class label; p_success = sum_y max_j Pr(j, y).
OutputRule optimal_output_rule(const ClassEnsemble& final_stage);

// Same problem with the oracle replaced by its t-th tensor power.
OracleProblem lift_t_queries(const OracleProblem& problem, std::size_t t);

struct StageReport {
    StageLabel stage = StageLabel::PreQuery;
    MetricsRow metrics;
    double p_success = 0.0;
    std::uint64_t ensemble_digest = 0;
};

StageReport analyze_stage(StageLabel stage, const ClassEnsemble& ensemble,
                          bool full_register = false);

} // namespace oilab
