#include "oilab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace oilab {

const char* stage_name(StageLabel s) {
    switch (s) {
        case StageLabel::PreQuery: return "pre-query";
        case StageLabel::PostQuery: return "post-query";
        case StageLabel::Final: return "final";
    }
    return "?";
}

std::vector<double> JointPmf::marginal_y() const {
    if (pr.empty()) return {};
    std::vector<double> m(pr.front().size(), 0.0);
    for (const auto& row : pr)
        for (std::size_t y = 0; y < row.size(); ++y) m[y] += row[y];
    return m;
}

ClassEnsemble::ClassEnsemble(std::vector<ClassState> classes,
                             std::vector<std::size_t> subsystem_dims,
                             std::vector<std::size_t> measured_mask)
    : classes_(std::move(classes)),
      subsystem_dims_(std::move(subsystem_dims)),
      measured_mask_(std::move(measured_mask)) {
    if (classes_.empty()) throw std::invalid_argument("ClassEnsemble: no classes");

    double total = 0.0;
    const std::size_t d = classes_.front().state.rows();
    for (const ClassState& c : classes_) {
        if (c.weight <= 0.0)
            throw std::invalid_argument("ClassEnsemble: class '" + c.label +
                                        "' has non-positive probability");
        total += c.weight;
        if (!c.state.is_square() || c.state.rows() != d)
            throw std::invalid_argument("ClassEnsemble: class states must share one dimension");
        c.state.assert_finite("ClassEnsemble");
        if (c.state.hermitian_error() > kHermTol)
            throw std::invalid_argument("ClassEnsemble: class state not Hermitian");
        if (std::abs(c.state.trace() - cplx{1.0, 0.0}) > kTraceTol)
            throw std::invalid_argument("ClassEnsemble: class state trace differs from 1");
    }
    if (std::abs(total - 1.0) > kTraceTol)
        throw std::invalid_argument("ClassEnsemble: class probabilities sum to " +
                                    std::to_string(total));

    std::size_t prod = 1;
    for (std::size_t s : subsystem_dims_) prod *= s;
    if (prod != d)
        throw std::invalid_argument("ClassEnsemble: subsystem dims do not factor the state dim");

    if (measured_mask_.empty()) throw std::invalid_argument("ClassEnsemble: empty measured mask");
    std::sort(measured_mask_.begin(), measured_mask_.end());
    if (std::adjacent_find(measured_mask_.begin(), measured_mask_.end()) != measured_mask_.end())
        throw std::invalid_argument("ClassEnsemble: duplicate subsystem in measured mask");
    if (measured_mask_.back() >= subsystem_dims_.size())
        throw std::invalid_argument("ClassEnsemble: measured mask out of range");
}

ComplexMatrix ClassEnsemble::mix() const {
    ComplexMatrix rho(dim(), dim());
    for (const ClassState& c : classes_)
        kernels::axpy(rho.data(), c.state.data(), c.weight, rho.rows() * rho.cols());
    return rho;
}

ClassEnsemble ClassEnsemble::reduce_to_measured() const {
    if (fully_measured()) return *this;
    std::vector<ClassState> reduced;
    reduced.reserve(classes_.size());
    for (const ClassState& c : classes_)
        reduced.push_back({c.label, c.weight, partial_trace(c.state, subsystem_dims_, measured_mask_)});
    std::vector<std::size_t> dims;
    dims.reserve(measured_mask_.size());
    for (std::size_t s : measured_mask_) dims.push_back(subsystem_dims_[s]);
    std::vector<std::size_t> all(dims.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return ClassEnsemble(std::move(reduced), std::move(dims), std::move(all));
}

JointPmf ClassEnsemble::diagonal_distribution() const {
    JointPmf pmf;
    double total = 0.0;
    for (const ClassState& c : classes_) {
        pmf.class_labels.push_back(c.label);
        pmf.class_weights.push_back(c.weight);
        std::vector<double> row(c.state.rows());
        for (std::size_t y = 0; y < row.size(); ++y) {
            double v = c.weight * c.state(y, y).real();
            if (v < -1e-12)
                throw std::runtime_error("diagonal_distribution: negative probability " +
                                         std::to_string(v));
            row[y] = std::max(v, 0.0);
            total += row[y];
        }
        pmf.pr.push_back(std::move(row));
    }
    if (std::abs(total - 1.0) > kTraceTol)
        throw std::runtime_error("diagonal_distribution: joint pmf sums to " +
                                 std::to_string(total));
    return pmf;
}

void ClassEnsemble::validate_full() const {
    for (const ClassState& c : classes_) {
        HermitianEigenDecomposition eig = hermitian_eig(c.state);
        if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < -kPsdSlack * 100)
            throw std::runtime_error("ClassEnsemble: class '" + c.label +
                                     "' has negative eigenvalue " +
                                     std::to_string(eig.eigenvalues.front()));
    }
}

std::uint64_t ClassEnsemble::digest() const {
    // FNV-1a over the exact double bit patterns.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix_bytes = [&h](const void* p, std::size_t len) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    };
    for (const ClassState& c : classes_) {
        mix_bytes(c.label.data(), c.label.size());
        mix_bytes(&c.weight, sizeof(double));
        mix_bytes(c.state.data(), c.state.rows() * c.state.cols() * sizeof(cplx));
    }
    return h;
}

} // namespace oilab
