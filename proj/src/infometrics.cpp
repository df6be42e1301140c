#include "oilab/infometrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace oilab {

namespace {

ClassEnsemble reduced_copy(const ClassEnsemble& e) {
    return e.fully_measured() ? e : e.reduce_to_measured();
}

double class_entropy_average(const ClassEnsemble& e) {
    double h = 0.0;
    for (const ClassState& c : e.classes()) h += c.weight * von_neumann_entropy(c.state);
    return h;
}

} // namespace

ShannonQuantities shannon_quantities(const ClassEnsemble& ensemble) {
    const ClassEnsemble e = reduced_copy(ensemble);
    const JointPmf pmf = e.diagonal_distribution();

    ShannonQuantities q;
    q.H_Y = shannon_entropy(pmf.marginal_y());
    for (std::size_t j = 0; j < pmf.pr.size(); ++j) {
        const double pj = pmf.class_weights[j];
        std::vector<double> cond(pmf.pr[j].size());
        for (std::size_t y = 0; y < cond.size(); ++y) cond[y] = pmf.pr[j][y] / pj;
        q.H_Y_given_J += pj * shannon_entropy(cond);
    }
    q.I_JY = q.H_Y - q.H_Y_given_J;
    return q;
}

double holevo(const ClassEnsemble& ensemble) {
    const ClassEnsemble e = reduced_copy(ensemble);
    const double chi = von_neumann_entropy(e.mix()) - class_entropy_average(e);
    if (chi < -kTraceTol)
        throw numerical_error("holevo: negative chi " + std::to_string(chi));
    return std::max(chi, 0.0);
}

double coherence(const ClassEnsemble& ensemble) {
    const ClassEnsemble e = reduced_copy(ensemble);
    const double c = shannon_entropy(e.mix().real_diagonal()) - von_neumann_entropy(e.mix());
    if (c < -kTraceTol)
        throw numerical_error("coherence: negative value " + std::to_string(c));
    return std::max(c, 0.0);
}

double discord_fixed_basis(const ClassEnsemble& ensemble) {
    const ClassEnsemble e = reduced_copy(ensemble);

    const ShannonQuantities q = shannon_quantities(e);
    const double s_rho = von_neumann_entropy(e.mix());
    const double avg_class_entropy = class_entropy_average(e);
    const double chi = s_rho - avg_class_entropy;
    const double route_identity = chi - q.I_JY;

    // Definitional route: S(rho_Y) - S(rho_JY) + H(J|Y), with
    // S(rho_JY) = H(J) + sum_j p_j S(sigma_j) for a classical-quantum state
    // and the post-measurement term evaluated directly from the joint pmf.
    const JointPmf pmf = e.diagonal_distribution();
    double h_j = 0.0;
    for (double pj : pmf.class_weights) h_j -= pj * std::log2(pj);
    const double s_rho_jy = h_j + avg_class_entropy;

    const std::vector<double> py = pmf.marginal_y();
    double h_j_given_y = 0.0;
    for (std::size_t y = 0; y < py.size(); ++y) {
        if (py[y] <= kEigClamp) continue;
        for (std::size_t j = 0; j < pmf.pr.size(); ++j) {
            const double joint = pmf.pr[j][y];
            if (joint <= kEigClamp) continue;
            h_j_given_y -= joint * std::log2(joint / py[y]);
        }
    }
    const double route_definitional = s_rho - s_rho_jy + h_j_given_y;

    if (std::abs(route_identity - route_definitional) > 1e-6)
        throw numerical_error("discord_fixed_basis: cross-check divergence " +
                                 std::to_string(std::abs(route_identity - route_definitional)));

    return std::max(route_identity, 0.0);
}

double irrealism(const ClassEnsemble& ensemble) {
    const ClassEnsemble e = reduced_copy(ensemble);
    const double c = coherence(e);
    const double d = discord_fixed_basis(e);

    // The sum must equal the total slack of the mutual-information sandwich.
    const ShannonQuantities q = shannon_quantities(e);
    const double s_rho = von_neumann_entropy(e.mix());
    const double upper_slack = (s_rho - class_entropy_average(e)) - q.I_JY;
    const double lower_slack = q.I_JY - (s_rho - q.H_Y_given_J);
    if (std::abs((c + d) - (upper_slack + lower_slack)) > 1e-8)
        throw numerical_error("irrealism: slack consistency check failed");

    return c + d;
}

FanoBounds fano_bounds(double I_JY, std::size_t J_card) {
    if (J_card <= 1) throw std::invalid_argument("fano_bounds: |J| must exceed 1");
    const double log_j = std::log2(static_cast<double>(J_card));
    FanoBounds b;
    b.upper_ps = (I_JY + 1.0) / log_j;
    b.lower_ps = std::exp2(I_JY - log_j);
    return b;
}

MetricsRow stage_metrics(const ClassEnsemble& ensemble, bool full_register) {
    ClassEnsemble e = ensemble;
    if (full_register) {
        // Re-mask every subsystem as measured so the per-quantity reductions
        // become no-ops.
        std::vector<std::size_t> all(ensemble.subsystem_dims().size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        std::vector<ClassState> classes(ensemble.classes().begin(), ensemble.classes().end());
        e = ClassEnsemble(std::move(classes), ensemble.subsystem_dims(), std::move(all));
    } else {
        e = reduced_copy(ensemble);
    }

    MetricsRow row;
    const ShannonQuantities q = shannon_quantities(e);
    row.H_Y = q.H_Y;
    row.H_Y_given_J = q.H_Y_given_J;
    row.I_JY = q.I_JY;
    row.S_rhoY = von_neumann_entropy(e.mix());
    row.C = coherence(e);
    row.chi = holevo(e);
    row.D_Y = discord_fixed_basis(e);
    row.irrealism = irrealism(e);
    row.lower_bound = row.S_rhoY - row.H_Y_given_J;
    row.upper_bound = row.chi;

    if (row.lower_bound > row.I_JY + 1e-8 || row.I_JY > row.upper_bound + 1e-8)
        throw numerical_error("stage_metrics: mutual-information sandwich violated");
    return row;
}

} // namespace oilab
