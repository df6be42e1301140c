#include <doctest.h>

#include "oilab/infometrics.hpp"
#include "oilab/simulator.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace oilab;

namespace {

ClassEnsemble random_ensemble(std::mt19937_64& rng, std::size_t dim, std::size_t num_classes,
                              bool uniform_weights = false) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    std::vector<double> w(num_classes);
    double total = 0.0;
    for (auto& x : w) {
        x = uniform_weights ? 1.0 : u(rng);
        total += x;
    }
    std::vector<ClassState> classes;
    for (std::size_t j = 0; j < num_classes; ++j)
        classes.push_back({"c" + std::to_string(j), w[j] / total,
                           testing::random_density(rng, dim, 1 + j % dim)});
    return ClassEnsemble(std::move(classes), {dim}, {0});
}

} // namespace

TEST_CASE("uniform-diagonal class states carry no information") {
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= cplx{0.5, 0.0};
    ClassEnsemble e({{"a", 0.5, half}, {"b", 0.5, half}}, {2}, {0});
    ShannonQuantities q = shannon_quantities(e);
    CHECK(q.I_JY == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(holevo(e) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pure-state ensembles have chi = S(rho_Y)") {
    std::mt19937_64 rng(17);
    std::vector<ClassState> classes;
    for (int j = 0; j < 3; ++j)
        classes.push_back({"c" + std::to_string(j), j == 2 ? 0.5 : 0.25,
                           outer(testing::random_state(rng, 4))});
    ClassEnsemble e(classes, {4}, {0});
    CHECK(holevo(e) == doctest::Approx(von_neumann_entropy(e.mix())).epsilon(1e-9));
}

TEST_CASE("DJ k=2 final shannon quantities match the published block") {
    auto stages = run_stages(build_dj(2));
    ShannonQuantities q = shannon_quantities(stages.at(StageLabel::Final));
    CHECK(q.H_Y == doctest::Approx(1.7925).epsilon(5e-5));
    CHECK(q.H_Y_given_J == doctest::Approx(0.7925).epsilon(5e-5));
    CHECK(q.I_JY == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("classical diagonal ensembles have zero discord and coherence") {
    ComplexMatrix d0 = ComplexMatrix::diagonal(std::vector<double>{0.9, 0.1});
    ComplexMatrix d1 = ComplexMatrix::diagonal(std::vector<double>{0.3, 0.7});
    ClassEnsemble e({{"a", 0.4, d0}, {"b", 0.6, d1}}, {2}, {0});
    CHECK(discord_fixed_basis(e) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(coherence(e) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(irrealism(e) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("BV post-query: D = n, C = 0, irrealism = n") {
    const std::size_t n = 3;
    auto stages = run_stages(build_bv(n));
    const ClassEnsemble& post = stages.at(StageLabel::PostQuery);
    CHECK(discord_fixed_basis(post) == doctest::Approx(double(n)).epsilon(1e-9));
    CHECK(coherence(post) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(irrealism(post) == doctest::Approx(double(n)).epsilon(1e-9));
}

TEST_CASE("phase estimation n=2 t=4 final discord matches the published 0.3022") {
    auto stages = run_stages(build_phase_estimation(2, 4));
    CHECK(discord_fixed_basis(stages.at(StageLabel::Final)) ==
          doctest::Approx(0.3022).epsilon(2e-4));
}

TEST_CASE("coherence of uniform superpositions is the qubit count") {
    for (std::size_t n : {std::size_t{1}, std::size_t{3}}) {
        const std::size_t dim = std::size_t{1} << n;
        CVec plus(dim, cplx{1.0 / std::sqrt(double(dim)), 0.0});
        ClassEnsemble e({{"only", 1.0, outer(plus)}}, std::vector<std::size_t>(n, 2),
                        [n] {
                            std::vector<std::size_t> m(n);
                            for (std::size_t i = 0; i < n; ++i) m[i] = i;
                            return m;
                        }());
        CHECK(coherence(e) == doctest::Approx(double(n)).epsilon(1e-9));
    }
}

TEST_CASE("fano bounds: saturation and edge cases") {
    FanoBounds sat = fano_bounds(2.0, 4);
    CHECK(sat.lower_ps == doctest::Approx(1.0).epsilon(1e-12));

    FanoBounds zero = fano_bounds(0.0, 2);
    CHECK(zero.lower_ps == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(fano_bounds(0.0, 1), std::invalid_argument);
}

TEST_CASE("fano bracket is consistent with the DJ success probability") {
    auto stages = run_stages(build_dj(2));
    MetricsRow row = stage_metrics(stages.at(StageLabel::Final));
    OutputRule rule = optimal_output_rule(stages.at(StageLabel::Final));
    FanoBounds b = fano_bounds(row.I_JY, 2);
    CHECK(rule.p_success >= b.lower_ps - 1e-9);
    CHECK(rule.p_success <= b.upper_ps + 1e-9);
    CHECK(b.lower_ps == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("randomized ensembles satisfy the sandwich and positivity") {
    std::mt19937_64 rng(2025);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t dim = 2 + trial % 7;
        const std::size_t classes = 2 + trial % 3;
        ClassEnsemble e = random_ensemble(rng, dim, classes);
        MetricsRow row = stage_metrics(e);
        CHECK(row.lower_bound <= row.I_JY + 1e-8);
        CHECK(row.I_JY <= row.upper_bound + 1e-8);
        CHECK(row.C >= 0.0);
        CHECK(row.D_Y >= 0.0);
        CHECK(std::abs(row.D_Y - (row.chi - row.I_JY)) < 1e-8);
    }
}

TEST_CASE("fano bracket holds for uniform-class random ensembles") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t classes = 2 + trial % 3;
        ClassEnsemble e = random_ensemble(rng, 4, classes, true);
        MetricsRow row = stage_metrics(e);
        OutputRule rule = optimal_output_rule(e);
        FanoBounds b = fano_bounds(row.I_JY, classes);
        CHECK(rule.p_success >= b.lower_ps - 1e-9);
        CHECK(rule.p_success <= b.upper_ps + 1e-9);
    }
}

TEST_CASE("full-register metrics are available behind the flag") {
    auto stages = run_stages(build_dj(2));
    MetricsRow reduced = stage_metrics(stages.at(StageLabel::Final));
    MetricsRow full = stage_metrics(stages.at(StageLabel::Final), true);
    // the ancilla adds one bit of measured entropy at the final stage
    CHECK(full.H_Y == doctest::Approx(reduced.H_Y + 1.0).epsilon(1e-9));
    CHECK(full.I_JY == doctest::Approx(reduced.I_JY).epsilon(1e-9));
}
