#pragma once

// Oracle classification problems: the index set F, its partition into
// classes, the prior, and the oracle unitaries. Enumerated problems carry
// bit-oracle truth tables; Simon and phase estimation come with analytic
// class-state constructions that never enumerate the oracle set.

#include "oilab/densemat.hpp"
#include "oilab/ensembles.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oilab {

enum class PriorKind { UniformOverF, PartitionUniform, Custom };

struct ProblemCaps {
    std::size_t dj_max_k = 4;
    std::size_t bv_max_n = 6;
    std::size_t simon_max_n = 4;
    std::size_t phase_max_n = 8;
    std::size_t phase_max_t = 10;
};

ProblemCaps problem_caps();
void set_problem_caps(const ProblemCaps& caps);

struct OracleProblem {
    enum class Kind { Enumerated, SimonAnalytic, PhaseAnalytic };
    // Which textbook circuit canonical_spec() builds for this problem.
    enum class CanonicalAlgo { HadamardSandwich, HspStandard };

    std::string name;
    Kind kind = Kind::Enumerated;
    CanonicalAlgo canonical = CanonicalAlgo::HadamardSandwich;
    std::size_t oracle_qubits = 0;  // m for one query
    std::size_t queries = 1;        // tensor-power lift factor

    std::vector<std::string> class_labels;
    std::vector<double> class_prior;

    // Enumerated bit oracles: U_f |x>|y> = |x>|y xor f(x)>.
    std::size_t input_bits = 0;
    std::size_t output_bits = 0;
    std::vector<std::vector<std::uint32_t>> truth_tables;  // per oracle, lexicographic x
    std::vector<std::size_t> oracle_class;
    std::vector<double> oracle_prob;

    std::size_t simon_n = 0;
    std::size_t phase_n = 0;
    std::size_t phase_t = 0;

    std::size_t num_classes() const { return class_labels.size(); }
    std::size_t num_oracles() const { return truth_tables.size(); }
    std::size_t total_oracle_qubits() const { return oracle_qubits * queries; }

    // Applies U_f^(x queries) tensor I to a state on `total_qubits` qubits.
    void apply_oracle(std::size_t f, const CVec& in, CVec& out, std::size_t total_qubits) const;

    // Dense matrix of the (lifted) oracle on the oracle registers only.
    ComplexMatrix oracle_matrix(std::size_t f) const;

    // Bit oracles are permutation matrices by construction.
    bool is_permutation_oracle() const { return kind == Kind::Enumerated; }

    void validate() const;
};

// Deutsch-Jozsa with k input bits: two constant plus C(2^k, 2^(k-1))
// balanced functions on m = k+1 qubits, partition-uniform prior, classes
// ordered (balanced, constant); oracles in lexicographic truth-table order.
OracleProblem build_dj(std::size_t k);

// Bernstein-Vazirani: F = {a}, f_a(x) = a.x mod 2, singleton classes.
OracleProblem build_bv(std::size_t n);

// Simon's problem over (Z/2)^n, hidden subgroups H_s = {0, s} including
// s = 0, uniform prior over s. Class states come from the hspkit analytic
// path (the reduced states are hiding-function independent).
OracleProblem build_simon(std::size_t n);

// Phase estimation as an oracle problem: F = [0,1) uniform, classes are the
// 2^n dyadic intervals, U_f = diag(e^{2 pi i f k}) on t qubits.
OracleProblem build_phase_estimation(std::size_t n, std::size_t t);

// One concrete hiding function per Simon class (f_s(x) = min(x, x xor s)),
// as an enumerated problem; used to cross-check the analytic path.
OracleProblem explicit_simon(std::size_t n);

// Custom enumerated bit-oracle problem.
OracleProblem make_custom_problem(std::string name, std::size_t input_bits,
                                  std::size_t output_bits,
                                  std::vector<std::vector<std::uint32_t>> truth_tables,
                                  std::vector<std::string> oracle_class_names,
                                  PriorKind prior, std::vector<double> custom_weights = {});

// Analytic class state of phase estimation. Post-query entries are exact
// interval integrals (sigma_j)_{k,k'} = 2^{n-t} int e^{2 pi i f (k-k')} df
// over [j/2^n, (j+1)/2^n); the final stage conjugates by the inverse QFT.
// PreQuery returns the f-independent |+>^t state.
ComplexMatrix sigma_phase_analytic(std::size_t n, std::size_t t, std::size_t j, StageLabel stage);

// Diagonal oracle for a concrete phase f (tests and brute-force checks).
ComplexMatrix phase_oracle_matrix(std::size_t t, double f);

// DFT matrix (1/sqrt(dim)) e^{+-2 pi i kl / dim}; inverse=true gives the
// minus sign used as the phase-estimation W.
ComplexMatrix unitary_dft(std::size_t dim, bool inverse);

} // namespace oilab
