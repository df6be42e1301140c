#include <doctest.h>

#include "oilab/hspkit.hpp"
#include "oilab/simulator.hpp"

#include <cmath>

using namespace oilab;

namespace {

OracleProblem identity_oracle_problem() {
    // Single oracle f == 0: U_f is the identity.
    return make_custom_problem("idoracle", 1, 1, {{0, 0}}, {"only"}, PriorKind::UniformOverF);
}

} // namespace

TEST_CASE("trivial pipeline: V = W = I and identity oracle") {
    OracleProblem p = identity_oracle_problem();
    AlgorithmSpec spec;
    spec.n_qubits = 2;
    spec.psi0 = {cplx{0, 0}, cplx{1, 0}, cplx{0, 0}, cplx{0, 0}};
    spec.V = ComplexMatrix::identity(4);
    spec.W = ComplexMatrix::identity(4);
    spec.measured = {0, 1};

    auto stages = run_stages(p, spec);
    const ComplexMatrix expect = outer(spec.psi0);
    for (auto& [stage, e] : stages) {
        CHECK(e.num_classes() == 1);
        CHECK(max_abs_diff(e.classes()[0].state, expect) < 1e-12);
    }
}

TEST_CASE("canonical QDJ structure") {
    OracleProblem p = build_dj(2);
    AlgorithmSpec spec = canonical_spec(p);
    CHECK(spec.n_qubits == 3);
    CHECK(spec.measured == std::vector<std::size_t>{0, 1});
    // psi0 = |001>
    CHECK(std::abs(spec.psi0[1] - cplx{1, 0}) < 1e-15);
    CHECK(max_abs_diff(spec.V, hadamard_n(3)) < 1e-15);
    CHECK(max_abs_diff(spec.W, tensor(hadamard_n(2), ComplexMatrix::identity(2))) < 1e-15);
}

TEST_CASE("pre-query class states are oracle independent") {
    auto stages = run_stages(build_dj(2));
    const ClassEnsemble& pre = stages.at(StageLabel::PreQuery);
    CHECK(max_abs_diff(pre.classes()[0].state, pre.classes()[1].state) == 0.0);
}

TEST_CASE("DJ k=3 post-query mixed-state entropy matches the published 2.4037") {
    auto stages = run_stages(build_dj(3));
    const ClassEnsemble post = stages.at(StageLabel::PostQuery).reduce_to_measured();
    CHECK(von_neumann_entropy(post.mix()) == doctest::Approx(2.4037).epsilon(5e-5));
}

TEST_CASE("DJ constant class is pure after the query") {
    auto stages = run_stages(build_dj(2));
    const ClassEnsemble post = stages.at(StageLabel::PostQuery).reduce_to_measured();
    CHECK(post.classes()[1].label == "constant");
    CHECK(von_neumann_entropy(post.classes()[1].state) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("DJ k=2 final statistics are deterministic per class") {
    auto stages = run_stages(build_dj(2));
    const ClassEnsemble fin = stages.at(StageLabel::Final).reduce_to_measured();
    JointPmf pmf = fin.diagonal_distribution();
    // constant class concentrates on y = 00
    CHECK(pmf.pr[1][0] == doctest::Approx(0.5).epsilon(1e-12));
    for (std::size_t y = 1; y < 4; ++y) CHECK(pmf.pr[1][y] == doctest::Approx(0.0));
    // balanced class never lands on y = 00
    CHECK(pmf.pr[0][0] == doctest::Approx(0.0));
}

TEST_CASE("DJ k=2 constant-class final distribution by direct matrix multiplication") {
    // Independent expansion of the 3-qubit circuit for f == 0 and f == 1.
    OracleProblem p = build_dj(2);
    const ComplexMatrix v = hadamard_n(3);
    const ComplexMatrix w = tensor(hadamard_n(2), ComplexMatrix::identity(2));
    CVec psi0(8, cplx{0, 0});
    psi0[1] = cplx{1, 0};

    // oracles 6 and 7 are the constants in lexicographic order (all-zeros, all-ones)
    for (std::size_t f : {std::size_t{6}, std::size_t{7}}) {
        CHECK(p.oracle_class[f] == 1);
        CVec fin = matvec(w, matvec(p.oracle_matrix(f), matvec(v, psi0)));
        // probability of the first two qubits reading 00: indices 0 and 1
        const double p00 = std::norm(fin[0]) + std::norm(fin[1]);
        CHECK(p00 == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("optimal output rule on DJ k=2") {
    auto stages = run_stages(build_dj(2));
    OutputRule rule = optimal_output_rule(stages.at(StageLabel::Final));
    CHECK(rule.p_success == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rule.assignment[0] == 1);  // y = 00 -> constant
    for (std::size_t y = 1; y < 4; ++y) CHECK(rule.assignment[y] == 0);
}

TEST_CASE("optimal output rule: deterministic BV and single class") {
    auto stages = run_stages(build_bv(3));
    CHECK(optimal_output_rule(stages.at(StageLabel::Final)).p_success ==
          doctest::Approx(1.0).epsilon(1e-12));

    OracleProblem trivial = identity_oracle_problem();
    auto tstages = run_stages(trivial);
    CHECK(optimal_output_rule(tstages.at(StageLabel::Final)).p_success ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mixture equals the direct average over total circuits") {
    OracleProblem p = build_dj(2);
    AlgorithmSpec spec = canonical_spec(p);
    auto stages = run_stages(p, spec);

    ComplexMatrix direct(8, 8);
    CVec psi0 = spec.psi0;
    for (std::size_t f = 0; f < p.num_oracles(); ++f) {
        CVec fin = matvec(spec.W, matvec(p.oracle_matrix(f), matvec(spec.V, psi0)));
        kernels::rank1_update(direct.data(), fin.data(), p.oracle_prob[f], 8);
    }
    CHECK(max_abs_diff(stages.at(StageLabel::Final).mix(), direct) < 1e-12);
}

TEST_CASE("Holevo quantity is invariant under the post-query unitary") {
    for (auto problem : {build_dj(2), build_bv(2)}) {
        auto stages = run_stages(problem);
        // full-register chi at both stages
        MetricsRow post = stage_metrics(stages.at(StageLabel::PostQuery), true);
        MetricsRow fin = stage_metrics(stages.at(StageLabel::Final), true);
        CHECK(std::abs(post.chi - fin.chi) < 1e-8);
    }
}

TEST_CASE("lift with t=1 is the identity transformation") {
    OracleProblem p = build_dj(1);
    OracleProblem lifted = lift_t_queries(p, 1);
    CHECK(lifted.queries == 1);
    auto a = run_stages(p);
    auto b = run_stages(lifted);
    CHECK(max_abs_diff(a.at(StageLabel::Final).mix(), b.at(StageLabel::Final).mix()) == 0.0);
}

TEST_CASE("two-query DJ k=1 equals the explicit tensor-square simulation") {
    OracleProblem p = build_dj(1);
    OracleProblem lifted = lift_t_queries(p, 2);
    AlgorithmSpec spec = canonical_spec(lifted);
    auto stages = run_stages(lifted, spec);

    // Independent route: dense tensor squares throughout.
    AlgorithmSpec base = canonical_spec(p);
    std::map<StageLabel, ComplexMatrix> mixes;
    ComplexMatrix post_direct(16, 16), fin_direct(16, 16);
    for (std::size_t f = 0; f < p.num_oracles(); ++f) {
        ComplexMatrix uf = tensor(p.oracle_matrix(f), p.oracle_matrix(f));
        CVec psi1 = matvec(tensor(base.V, base.V), tensor(base.psi0, base.psi0));
        CVec psi2 = matvec(uf, psi1);
        CVec fin = matvec(tensor(base.W, base.W), psi2);
        kernels::rank1_update(post_direct.data(), psi2.data(), p.oracle_prob[f], 16);
        kernels::rank1_update(fin_direct.data(), fin.data(), p.oracle_prob[f], 16);
    }
    CHECK(max_abs_diff(stages.at(StageLabel::PostQuery).mix(), post_direct) < 1e-12);
    CHECK(max_abs_diff(stages.at(StageLabel::Final).mix(), fin_direct) < 1e-12);
}

TEST_CASE("analytic Simon stages match the explicit hiding-function simulation") {
    for (std::size_t n : {std::size_t{2}, std::size_t{3}}) {
        auto analytic = run_stages(build_simon(n));
        auto explicit_run = run_stages(explicit_simon(n));
        for (StageLabel stage : {StageLabel::PreQuery, StageLabel::PostQuery, StageLabel::Final}) {
            ClassEnsemble a = analytic.at(stage);
            ClassEnsemble b = explicit_run.at(stage).reduce_to_measured();
            REQUIRE(a.num_classes() == b.num_classes());
            for (std::size_t j = 0; j < a.num_classes(); ++j) {
                CHECK(a.classes()[j].label == b.classes()[j].label);
                CHECK(max_abs_diff(a.classes()[j].state, b.classes()[j].state) < 1e-10);
            }
        }
    }
}

TEST_CASE("Simon n=2 t=2 final mutual information matches the published 1.1157") {
    OracleProblem lifted = lift_t_queries(build_simon(2), 2);
    auto stages = run_stages(lifted);
    MetricsRow row = stage_metrics(stages.at(StageLabel::Final));
    CHECK(row.I_JY == doctest::Approx(1.1157).epsilon(5e-5));
    CHECK(row.C == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(row.D_Y == doctest::Approx(0.0).epsilon(1e-10));

    // and agrees with the streamed spectrum route
    MetricsRow streamed = hsp::hsp_metrics_t(hsp::simon_group(2), hsp::simon_subgroups(2),
                                             std::vector<double>(4, 0.25), 2);
    CHECK(row.I_JY == doctest::Approx(streamed.I_JY).epsilon(1e-9));
}

TEST_CASE("analytic problems reject non-canonical algorithms") {
    OracleProblem p = build_simon(2);
    AlgorithmSpec spec = canonical_spec(p);
    spec.V = ComplexMatrix::identity(16);  // wrong gate
    CHECK_THROWS_AS(run_stages(p, spec), std::invalid_argument);
}

TEST_CASE("spec validation rejects bad inputs") {
    OracleProblem p = build_dj(1);
    AlgorithmSpec spec = canonical_spec(p);

    AlgorithmSpec bad = spec;
    bad.psi0[0] += cplx{0.5, 0};
    CHECK_THROWS_AS(run_stages(p, bad), std::invalid_argument);

    bad = spec;
    bad.V(0, 0) += cplx{0.1, 0};
    CHECK_THROWS_AS(run_stages(p, bad), std::invalid_argument);

    bad = spec;
    bad.measured = {7};
    CHECK_THROWS_AS(run_stages(p, bad), std::invalid_argument);

    bad = spec;
    bad.measured.clear();
    CHECK_THROWS_AS(run_stages(p, bad), std::invalid_argument);
}

TEST_CASE("phase-estimation lift is rejected with guidance") {
    CHECK_THROWS_AS(lift_t_queries(build_phase_estimation(2, 2), 2), std::invalid_argument);
}

TEST_CASE("stage reports carry consistent identities") {
    auto stages = run_stages(build_dj(2));
    for (auto& [stage, e] : stages) {
        StageReport r = analyze_stage(stage, e);
        CHECK(std::abs(r.metrics.D_Y - (r.metrics.chi - r.metrics.I_JY)) < 1e-8);
        CHECK(std::abs(r.metrics.C - (r.metrics.H_Y - r.metrics.S_rhoY)) < 1e-8);
        CHECK(r.ensemble_digest != 0);
    }
}
