#include <doctest.h>

#include "oilab/ensembles.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace oilab;

namespace {

ClassEnsemble two_orthogonal_pures() {
    CVec e0{{1, 0}, {0, 0}};
    CVec e1{{0, 0}, {1, 0}};
    return ClassEnsemble({{"a", 0.5, outer(e0)}, {"b", 0.5, outer(e1)}}, {2}, {0});
}

} // namespace

TEST_CASE("mixing a single class returns the class state") {
    std::mt19937_64 rng(3);
    ComplexMatrix sigma = testing::random_density(rng, 4, 2);
    ClassEnsemble e({{"only", 1.0, sigma}}, {2, 2}, {0, 1});
    CHECK(max_abs_diff(e.mix(), sigma) == 0.0);
}

TEST_CASE("two orthogonal pure states at p=1/2 mix to entropy 1") {
    ClassEnsemble e = two_orthogonal_pures();
    CHECK(von_neumann_entropy(e.mix()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("construction rejects zero-probability classes") {
    CVec e0{{1, 0}, {0, 0}};
    CHECK_THROWS_AS(ClassEnsemble({{"a", 1.0, outer(e0)}, {"b", 0.0, outer(e0)}}, {2}, {0}),
                    std::invalid_argument);
}

TEST_CASE("construction rejects weights not summing to one") {
    CVec e0{{1, 0}, {0, 0}};
    CHECK_THROWS_AS(ClassEnsemble({{"a", 0.7, outer(e0)}}, {2}, {0}), std::invalid_argument);
}

TEST_CASE("construction rejects an empty measured mask") {
    CVec e0{{1, 0}, {0, 0}};
    CHECK_THROWS_AS(ClassEnsemble({{"a", 1.0, outer(e0)}}, {2}, {}), std::invalid_argument);
}

TEST_CASE("reduce_to_measured with a full mask is the identity map") {
    ClassEnsemble e = two_orthogonal_pures();
    ClassEnsemble r = e.reduce_to_measured();
    CHECK(max_abs_diff(r.classes()[0].state, e.classes()[0].state) == 0.0);
    CHECK(max_abs_diff(r.classes()[1].state, e.classes()[1].state) == 0.0);
}

TEST_CASE("a product class state reduces to its kept factor") {
    std::mt19937_64 rng(5);
    ComplexMatrix tau = testing::random_density(rng, 2, 2);
    ComplexMatrix omega = testing::random_density(rng, 2, 1);
    ClassEnsemble e({{"j", 1.0, tensor(tau, omega)}}, {2, 2}, {0});
    ClassEnsemble r = e.reduce_to_measured();
    CHECK(r.subsystem_dims().size() == 1);
    CHECK(max_abs_diff(r.classes()[0].state, tau) < 1e-12);
}

TEST_CASE("mix and reduce commute") {
    std::mt19937_64 rng(9);
    std::vector<ClassState> classes;
    classes.push_back({"x", 0.25, testing::random_density(rng, 8, 2)});
    classes.push_back({"y", 0.75, testing::random_density(rng, 8, 3)});
    ClassEnsemble e(classes, {2, 2, 2}, {0, 2});

    ComplexMatrix route_a = e.reduce_to_measured().mix();
    ComplexMatrix route_b = partial_trace(e.mix(), {2, 2, 2}, {0, 2});
    CHECK(max_abs_diff(route_a, route_b) < 1e-12);
}

TEST_CASE("diagonal distribution of diagonal states is exact") {
    ComplexMatrix d0 = ComplexMatrix::diagonal(std::vector<double>{0.25, 0.75});
    ComplexMatrix d1 = ComplexMatrix::diagonal(std::vector<double>{1.0, 0.0});
    ClassEnsemble e({{"a", 0.5, d0}, {"b", 0.5, d1}}, {2}, {0});
    JointPmf pmf = e.diagonal_distribution();
    CHECK(pmf.pr[0][0] == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(pmf.pr[0][1] == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(pmf.pr[1][0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pmf.pr[1][1] == doctest::Approx(0.0));
}

TEST_CASE("joint pmf marginals agree with class weights and mixed diagonal") {
    std::mt19937_64 rng(13);
    std::vector<ClassState> classes;
    classes.push_back({"p", 0.4, testing::random_density(rng, 4, 2)});
    classes.push_back({"q", 0.6, testing::random_density(rng, 4, 2)});
    ClassEnsemble e(classes, {2, 2}, {0, 1});

    JointPmf pmf = e.diagonal_distribution();
    for (std::size_t j = 0; j < pmf.pr.size(); ++j) {
        double row = 0.0;
        for (double v : pmf.pr[j]) row += v;
        CHECK(row == doctest::Approx(pmf.class_weights[j]).epsilon(1e-12));
    }

    std::vector<double> my = pmf.marginal_y();
    std::vector<double> diag = e.mix().real_diagonal();
    for (std::size_t y = 0; y < my.size(); ++y)
        CHECK(my[y] == doctest::Approx(diag[y]).epsilon(1e-12));
}

TEST_CASE("digest is stable and order-sensitive") {
    ClassEnsemble e = two_orthogonal_pures();
    CHECK(e.digest() == two_orthogonal_pures().digest());
}
