#pragma once

// Finite abelian group machinery for the hidden subgroup problem: character
// tables, annihilators, closed-form class states, eigenvalue spectra, and
// t-query information quantities evaluated by streaming over character
// tuples without materializing the tensor-power state.

#include "oilab/densemat.hpp"
#include "oilab/ensembles.hpp"
#include "oilab/infometrics.hpp"

#include <cstddef>
#include <vector>

namespace oilab::hsp {

struct FiniteAbelianGroup {
    std::vector<std::size_t> cycle_orders;  // G = prod Z/p_i, each p_i >= 2

    explicit FiniteAbelianGroup(std::vector<std::size_t> orders);

    std::size_t order() const { return order_; }
    std::size_t num_factors() const { return cycle_orders.size(); }
    std::vector<std::size_t> tuple(std::size_t index) const;
    std::size_t index_of(const std::vector<std::size_t>& tuple) const;
    std::size_t add(std::size_t a, std::size_t b) const;
    std::size_t neg(std::size_t a) const;

private:
    std::size_t order_ = 1;
};

struct Subgroup {
    std::vector<std::size_t> elements;  // sorted element indices, contains 0
    std::size_t order() const { return elements.size(); }
    bool contains(std::size_t g) const;
};

bool is_subgroup(const FiniteAbelianGroup& g, const std::vector<std::size_t>& elements);
Subgroup make_subgroup(const FiniteAbelianGroup& g, std::vector<std::size_t> elements);
Subgroup span_subgroup(const FiniteAbelianGroup& g, const std::vector<std::size_t>& generators);
// Full subgroup lattice; supported for |G| <= 64.
std::vector<Subgroup> all_subgroups(const FiniteAbelianGroup& g);

// chi_g(x) = prod_i exp(2 pi i g_i x_i / p_i); the phase numerator is exact
// integer arithmetic mod lcm(p_i), so trivial restrictions are exact.
cplx character_value(const FiniteAbelianGroup& g, std::size_t chi, std::size_t x);
bool character_trivial_on(const FiniteAbelianGroup& g, std::size_t chi, const Subgroup& h);

struct CharacterSet {
    std::vector<std::size_t> characters;  // indices into G-hat (identified with G)
};

// H-perp: the characters restricting trivially to H. |H-perp| = |G|/|H|.
CharacterSet annihilator(const FiniteAbelianGroup& g, const Subgroup& h);

// Entry (g, l) = chi_g(l); unitary after division by sqrt|G|.
ComplexMatrix character_table(const FiniteAbelianGroup& g);
ComplexMatrix qft_matrix(const FiniteAbelianGroup& g);

// Reduced class state of the first register after tracing the output
// register. PostQuery is the coset block form; Final is diagonal with
// weight |H|/|G| on every character in H-perp.
ComplexMatrix hsp_class_state(const FiniteAbelianGroup& g, const Subgroup& h, StageLabel stage);

// lambda_chi = (1/|G|) sum over subgroups containing chi in H_j-perp of
// p_j |H_j|; sums to 1.
std::vector<double> lambda_spectrum(const FiniteAbelianGroup& g,
                                    const std::vector<Subgroup>& subgroups,
                                    const std::vector<double>& priors);

// Row-vector cross-check form for a uniform prior:
// lambda_chi = (1/(sqrt|G| |J|)) <c|v_chi>.
std::vector<double> lambda_spectrum_rowform(const FiniteAbelianGroup& g,
                                            const std::vector<Subgroup>& subgroups);

std::size_t tuple_cap();
void set_tuple_cap(std::size_t cap);

// t-query eigenvalues indexed by chi-tuples (materialized; |G|^t cap-checked).
std::vector<double> lambda_spectrum_t(const FiniteAbelianGroup& g,
                                      const std::vector<Subgroup>& subgroups,
                                      const std::vector<double>& priors, std::size_t t);

// Final-stage t-query quantities: streams the |G|^t spectrum, never holding
// it in memory. C and D are identically zero for the diagonal construction.
MetricsRow hsp_metrics_t(const FiniteAbelianGroup& g, const std::vector<Subgroup>& subgroups,
                         const std::vector<double>& priors, std::size_t t);

// Stage ensembles on the first register for the analytic HSP path.
ClassEnsemble hsp_stage_ensemble(const FiniteAbelianGroup& g,
                                 const std::vector<Subgroup>& subgroups,
                                 const std::vector<double>& priors,
                                 const std::vector<std::string>& labels, StageLabel stage);

// Simon's problem: G = (Z/2)^n with subgroups H_s = {0, s} (H_0 = {0}).
FiniteAbelianGroup simon_group(std::size_t n);
std::vector<Subgroup> simon_subgroups(std::size_t n);

} // namespace oilab::hsp
