#pragma once

// Information-theoretic quantities of a class ensemble: Shannon entropies of
// the measurement statistics, Holevo quantity, relative entropy of
// coherence, the fixed-basis (computational) discord, irrealism, and the
// Fano-type success-probability bounds. All entropies are in bits.

#include "oilab/ensembles.hpp"

#include <cstddef>

namespace oilab {

struct ShannonQuantities {
    double H_Y = 0.0;
    double H_Y_given_J = 0.0;
    double I_JY = 0.0;
};

// H(Y), H(Y|J) and I(J;Y) from the computational-basis statistics of the
// measured registers. The ensemble is reduced to its measured mask first.
ShannonQuantities shannon_quantities(const ClassEnsemble& e);

// chi = S(sum_j p_j sigma_j) - sum_j p_j S(sigma_j), clamped to >= 0.
double holevo(const ClassEnsemble& e);

// C = H(Y) - S(rho_Y), clamped to >= 0.
double coherence(const ClassEnsemble& e);

// Non-optimized discord with the measurement fixed to the computational
// basis. Evaluated two ways (chi - I, and the definitional route through
// S(rho_JY) and the post-measurement conditional entropy); throws if the
// routes diverge by more than 1e-6.
double discord_fixed_basis(const ClassEnsemble& e);

// C + D; vanishes iff the mutual-information sandwich is tight on both sides.
double irrealism(const ClassEnsemble& e);

struct FanoBounds {
    double upper_ps = 0.0;  // (I+1)/log2|J|, valid for uniform J
    double lower_ps = 0.0;  // 2^(I - log2|J|)
};

FanoBounds fano_bounds(double I_JY, std::size_t J_card);

struct MetricsRow {
    double H_Y = 0.0;
    double S_rhoY = 0.0;
    double C = 0.0;
    double H_Y_given_J = 0.0;
    double chi = 0.0;
    double I_JY = 0.0;
    double D_Y = 0.0;
    double irrealism = 0.0;
    double lower_bound = 0.0;  // S(rho_Y) - H(Y|J) <= I(J;Y)
    double upper_bound = 0.0;  // I(J;Y) <= chi
};

// The full seven-quantity row plus bounds. `full_register` skips the
// reduction to the measured mask.
MetricsRow stage_metrics(const ClassEnsemble& e, bool full_register = false);

} // namespace oilab
