#include <doctest.h>

#include "oilab/problems.hpp"

#include <cmath>
#include <numbers>

using namespace oilab;

namespace {

// Independent binomial via Pascal's rule.
std::size_t binomial(std::size_t n, std::size_t k) {
    std::vector<std::size_t> row{1};
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<std::size_t> next(i + 1, 1);
        for (std::size_t j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
        row = std::move(next);
    }
    return row[k];
}

bool is_permutation_matrix(const ComplexMatrix& u) {
    if (!u.is_square()) return false;
    for (std::size_t i = 0; i < u.rows(); ++i) {
        std::size_t row_ones = 0;
        for (std::size_t j = 0; j < u.cols(); ++j) {
            const cplx z = u(i, j);
            if (std::abs(z) < 1e-12) continue;
            if (std::abs(z - cplx{1.0, 0.0}) > 1e-12) return false;
            ++row_ones;
        }
        if (row_ones != 1) return false;
    }
    return u.unitary_error() <= kUnitaryTol;
}

} // namespace

TEST_CASE("DJ oracle counts") {
    CHECK(build_dj(1).num_oracles() == 4);  // two constant, two balanced
    CHECK(build_dj(2).num_oracles() == 2 + binomial(4, 2));
    CHECK(build_dj(3).num_oracles() == 2 + binomial(8, 4));
}

TEST_CASE("DJ k=4 balanced class size is C(16,8)") {
    OracleProblem p = build_dj(4);
    std::size_t balanced = 0;
    for (std::size_t f = 0; f < p.num_oracles(); ++f)
        if (p.oracle_class[f] == 0) ++balanced;
    CHECK(balanced == binomial(16, 8));
    CHECK(balanced == 12870);
}

TEST_CASE("partition-uniform prior weights the classes equally") {
    OracleProblem p = build_dj(3);
    CHECK(p.class_prior[0] == 0.5);
    CHECK(p.class_prior[1] == 0.5);
    double balanced = 0.0, constant = 0.0;
    for (std::size_t f = 0; f < p.num_oracles(); ++f)
        (p.oracle_class[f] == 0 ? balanced : constant) += p.oracle_prob[f];
    CHECK(balanced == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(constant == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("DJ rejects out-of-range k") {
    CHECK_THROWS_AS(build_dj(0), std::invalid_argument);
    CHECK_THROWS_AS(build_dj(5), std::invalid_argument);
}

TEST_CASE("BV oracles are the inner-product functions") {
    OracleProblem p = build_bv(2);
    CHECK(p.num_oracles() == 4);
    CHECK(p.num_classes() == 4);  // oracle identification: singleton classes

    // a = 0 gives the identity oracle
    CHECK(max_abs_diff(p.oracle_matrix(0), ComplexMatrix::identity(8)) == 0.0);
}

TEST_CASE("BV n=1, a=1 is CNOT") {
    OracleProblem p = build_bv(1);
    ComplexMatrix u = p.oracle_matrix(1);
    ComplexMatrix cnot(4, 4);
    cnot(0, 0) = 1;
    cnot(1, 1) = 1;
    cnot(2, 3) = 1;
    cnot(3, 2) = 1;
    CHECK(max_abs_diff(u, cnot) == 0.0);
}

TEST_CASE("bit oracles are permutation matrices") {
    for (std::size_t f : {std::size_t{0}, std::size_t{3}, std::size_t{5}})
        CHECK(is_permutation_matrix(build_dj(2).oracle_matrix(f)));
    CHECK(is_permutation_matrix(build_bv(2).oracle_matrix(3)));
    CHECK(is_permutation_matrix(explicit_simon(2).oracle_matrix(3)));
}

TEST_CASE("explicit Simon oracles hide their subgroup") {
    OracleProblem p = explicit_simon(3);
    for (std::size_t s = 0; s < 8; ++s) {
        const auto& table = p.truth_tables[s];
        for (std::size_t x = 0; x < 8; ++x)
            for (std::size_t y = 0; y < 8; ++y) {
                const bool collide = table[x] == table[y];
                const bool in_subgroup = (x ^ y) == 0 || (x ^ y) == s;
                CHECK(collide == in_subgroup);
            }
    }
}

TEST_CASE("simon analytic problem shape") {
    OracleProblem p = build_simon(2);
    CHECK(p.num_classes() == 4);
    CHECK(p.class_prior[0] == doctest::Approx(0.25));
    CHECK(p.oracle_qubits == 4);
}

TEST_CASE("phase estimation problem shape") {
    OracleProblem p = build_phase_estimation(2, 3);
    CHECK(p.num_classes() == 4);
    for (double pj : p.class_prior) CHECK(pj == doctest::Approx(0.25));
    CHECK_THROWS_AS(build_phase_estimation(3, 2), std::invalid_argument);  // t < n
}

TEST_CASE("phase oracle for f=0 is the identity") {
    CHECK(max_abs_diff(phase_oracle_matrix(3, 0.0), ComplexMatrix::identity(8)) == 0.0);
}

TEST_CASE("analytic phase states: diagonal entries and trace") {
    for (std::size_t j : {std::size_t{0}, std::size_t{2}}) {
        ComplexMatrix sigma = sigma_phase_analytic(2, 3, j, StageLabel::PostQuery);
        for (std::size_t k = 0; k < 8; ++k)
            CHECK(sigma(k, k).real() == doctest::Approx(1.0 / 8).epsilon(1e-12));
        CHECK(std::abs(sigma.trace() - cplx{1.0, 0.0}) < 1e-12);
        CHECK(sigma.hermitian_error() < 1e-12);
    }
}

TEST_CASE("analytic phase states match the Riemann-sum oracle") {
    // Midpoint rule with 1e5 grid points over the class interval.
    const std::size_t grid = 100000;
    struct Case {
        std::size_t n, t, j;
    };
    for (auto [n, t, j] : {Case{2, 2, 1}, Case{2, 4, 3}, Case{3, 5, 5}}) {
        const std::size_t dim = std::size_t{1} << t;
        const double a = static_cast<double>(j) / std::exp2(static_cast<double>(n));
        const double width = std::exp2(-static_cast<double>(n));

        ComplexMatrix brute(dim, dim);
        for (std::size_t g = 0; g < grid; ++g) {
            const double f = a + width * (static_cast<double>(g) + 0.5) / static_cast<double>(grid);
            for (std::size_t k = 0; k < dim; ++k)
                for (std::size_t kp = 0; kp < dim; ++kp) {
                    const double angle = 2.0 * std::numbers::pi * f *
                                         (static_cast<double>(k) - static_cast<double>(kp));
                    brute(k, kp) += cplx{std::cos(angle), std::sin(angle)};
                }
        }
        brute *= cplx{1.0 / (static_cast<double>(dim) * static_cast<double>(grid)), 0.0};

        ComplexMatrix analytic = sigma_phase_analytic(n, t, j, StageLabel::PostQuery);
        CHECK(max_abs_diff(analytic, brute) < 1e-6);
    }
}

TEST_CASE("phase n=2, t=3 final conditional entropy matches the published value") {
    double h = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        ComplexMatrix fin = sigma_phase_analytic(2, 3, j, StageLabel::Final);
        h += 0.25 * shannon_entropy(fin.real_diagonal());
    }
    CHECK(h == doctest::Approx(1.9096).epsilon(5e-5));
}

TEST_CASE("phase pre-query state is the uniform projector") {
    ComplexMatrix pre = sigma_phase_analytic(2, 2, 3, StageLabel::PreQuery);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            CHECK(pre(a, b) == cplx{0.25, 0.0});
}

TEST_CASE("custom problems: priors and validation") {
    std::vector<std::vector<std::uint32_t>> tables{{0, 0}, {0, 1}, {1, 0}};
    std::vector<std::string> classes{"x", "y", "y"};

    OracleProblem uniform =
        make_custom_problem("toy", 1, 1, tables, classes, PriorKind::UniformOverF);
    CHECK(uniform.class_prior[0] == doctest::Approx(1.0 / 3));
    CHECK(uniform.class_prior[1] == doctest::Approx(2.0 / 3));

    OracleProblem partition =
        make_custom_problem("toy", 1, 1, tables, classes, PriorKind::PartitionUniform);
    CHECK(partition.class_prior[0] == doctest::Approx(0.5));
    CHECK(partition.oracle_prob[1] == doctest::Approx(0.25));

    OracleProblem custom = make_custom_problem("toy", 1, 1, tables, classes, PriorKind::Custom,
                                               {2.0, 1.0, 1.0});
    CHECK(custom.oracle_prob[0] == doctest::Approx(0.5));

    CHECK_THROWS_AS(
        make_custom_problem("bad", 1, 1, tables, classes, PriorKind::Custom, {1.0}),
        std::invalid_argument);
    CHECK_THROWS_AS(make_custom_problem("bad", 1, 1, {}, {}, PriorKind::UniformOverF),
                    std::invalid_argument);
}

TEST_CASE("unitary_dft is unitary and matches the inverse-QFT convention") {
    ComplexMatrix w = unitary_dft(8, true);
    CHECK(w.unitary_error() < 1e-12);
    // <k|W|l> = 2^{-t/2} e^{-2 pi i k l / 2^t}
    const double angle = -2.0 * std::numbers::pi * 3.0 * 5.0 / 8.0;
    CHECK(std::abs(w(3, 5) - cplx{std::cos(angle) / std::sqrt(8.0), std::sin(angle) / std::sqrt(8.0)}) <
          1e-12);
}
