#include "oilab/problems.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace oilab {

namespace {

std::mutex g_caps_mutex;
ProblemCaps g_caps;

void check_range(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

ProblemCaps problem_caps() {
    std::lock_guard<std::mutex> lock(g_caps_mutex);
    return g_caps;
}

void set_problem_caps(const ProblemCaps& caps) {
    std::lock_guard<std::mutex> lock(g_caps_mutex);
    g_caps = caps;
}

void OracleProblem::apply_oracle(std::size_t f, const CVec& in, CVec& out,
                                 std::size_t total_qubits) const {
    if (kind != Kind::Enumerated)
        throw std::invalid_argument("apply_oracle: analytic problems have no enumerated oracles");
    if (f >= truth_tables.size()) throw std::invalid_argument("apply_oracle: oracle index");
    const std::size_t dim = std::size_t{1} << total_qubits;
    if (in.size() != dim) throw std::invalid_argument("apply_oracle: state dimension");
    if (total_qubits < total_oracle_qubits())
        throw std::invalid_argument("apply_oracle: fewer qubits than the oracle needs");
    out.assign(dim, cplx{0.0, 0.0});

    const auto& table = truth_tables[f];
    const std::size_t m = oracle_qubits;
    const std::size_t out_mask = (std::size_t{1} << output_bits) - 1;

    for (std::size_t idx = 0; idx < dim; ++idx) {
        if (in[idx] == cplx{0.0, 0.0}) continue;
        std::size_t target = idx;
        for (std::size_t copy = 0; copy < queries; ++copy) {
            const std::size_t shift = total_qubits - (copy + 1) * m;
            const std::size_t block = (target >> shift) & ((std::size_t{1} << m) - 1);
            const std::size_t x = block >> output_bits;
            const std::size_t y = block & out_mask;
            const std::size_t y2 = y ^ table[x];
            const std::size_t block2 = (x << output_bits) | y2;
            target ^= (block ^ block2) << shift;
        }
        out[target] += in[idx];
    }
}

ComplexMatrix OracleProblem::oracle_matrix(std::size_t f) const {
    const std::size_t nq = total_oracle_qubits();
    const std::size_t dim = std::size_t{1} << nq;
    if (dim > dimension_cap()) throw dimension_cap_error("oracle_matrix: dimension cap");
    ComplexMatrix u(dim, dim);
    CVec basis(dim), image;
    for (std::size_t col = 0; col < dim; ++col) {
        std::fill(basis.begin(), basis.end(), cplx{0.0, 0.0});
        basis[col] = cplx{1.0, 0.0};
        apply_oracle(f, basis, image, nq);
        for (std::size_t row = 0; row < dim; ++row) u(row, col) = image[row];
    }
    return u;
}

void OracleProblem::validate() const {
    if (class_labels.size() != class_prior.size())
        throw std::invalid_argument("OracleProblem: class labels/prior mismatch");
    double sum = 0.0;
    for (double p : class_prior) {
        if (p <= 0.0) throw std::invalid_argument("OracleProblem: empty or zero-weight class");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kTraceTol)
        throw std::invalid_argument("OracleProblem: class prior sums to " + std::to_string(sum));

    if (kind == Kind::Enumerated) {
        if (input_bits + output_bits != oracle_qubits)
            throw std::invalid_argument("OracleProblem: oracle register layout mismatch");
        if (truth_tables.size() != oracle_class.size() ||
            truth_tables.size() != oracle_prob.size())
            throw std::invalid_argument("OracleProblem: oracle arrays mismatch");
        double fsum = 0.0;
        std::vector<bool> class_seen(class_labels.size(), false);
        const std::size_t table_len = std::size_t{1} << input_bits;
        for (std::size_t f = 0; f < truth_tables.size(); ++f) {
            if (truth_tables[f].size() != table_len)
                throw std::invalid_argument("OracleProblem: truth table length");
            for (std::uint32_t v : truth_tables[f])
                if (v >> output_bits)
                    throw std::invalid_argument("OracleProblem: truth table value out of range");
            if (oracle_class[f] >= class_labels.size())
                throw std::invalid_argument("OracleProblem: oracle class out of range");
            class_seen[oracle_class[f]] = true;
            fsum += oracle_prob[f];
        }
        if (std::abs(fsum - 1.0) > kTraceTol)
            throw std::invalid_argument("OracleProblem: oracle prior sums to " +
                                        std::to_string(fsum));
        for (bool seen : class_seen)
            if (!seen) throw std::invalid_argument("OracleProblem: empty class");
    }
}

namespace {

std::string bitstring(std::size_t value, std::size_t bits) {
    std::string s(bits, '0');
    for (std::size_t i = 0; i < bits; ++i)
        if (value >> (bits - 1 - i) & 1) s[i] = '1';
    return s;
}

} // namespace

OracleProblem build_dj(std::size_t k) {
    check_range(k >= 1 && k <= problem_caps().dj_max_k, "build_dj: k out of supported range");
    const std::size_t inputs = std::size_t{1} << k;

    OracleProblem p;
    p.name = "dj" + std::to_string(k);
    p.kind = OracleProblem::Kind::Enumerated;
    p.oracle_qubits = k + 1;
    p.input_bits = k;
    p.output_bits = 1;
    p.class_labels = {"balanced", "constant"};

    // Lexicographic truth-table order within each class; the table is the
    // bit pattern of an `inputs`-bit integer.
    std::vector<std::uint64_t> balanced;
    for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << inputs); ++pattern)
        if (static_cast<std::size_t>(std::popcount(pattern)) == inputs / 2) balanced.push_back(pattern);
    std::vector<std::uint64_t> constant{0, (std::uint64_t{1} << inputs) - 1};

    // Partition-uniform prior: p_f = 1 / (|J| |A_j|).
    const double p_class = 0.5;
    auto add_oracles = [&](const std::vector<std::uint64_t>& patterns, std::size_t cls) {
        const double pf = p_class / static_cast<double>(patterns.size());
        for (std::uint64_t pattern : patterns) {
            std::vector<std::uint32_t> table(inputs);
            for (std::size_t x = 0; x < inputs; ++x)
                table[x] = static_cast<std::uint32_t>((pattern >> x) & 1);
            p.truth_tables.push_back(std::move(table));
            p.oracle_class.push_back(cls);
            p.oracle_prob.push_back(pf);
        }
    };
    add_oracles(balanced, 0);
    add_oracles(constant, 1);
    p.class_prior = {p_class, p_class};
    p.validate();
    return p;
}

OracleProblem build_bv(std::size_t n) {
    check_range(n >= 1 && n <= problem_caps().bv_max_n, "build_bv: n out of supported range");
    const std::size_t inputs = std::size_t{1} << n;

    OracleProblem p;
    p.name = "bv" + std::to_string(n);
    p.kind = OracleProblem::Kind::Enumerated;
    p.oracle_qubits = n + 1;
    p.input_bits = n;
    p.output_bits = 1;

    const double pf = 1.0 / static_cast<double>(inputs);
    for (std::size_t a = 0; a < inputs; ++a) {
        std::vector<std::uint32_t> table(inputs);
        for (std::size_t x = 0; x < inputs; ++x)
            table[x] = static_cast<std::uint32_t>(std::popcount(a & x) & 1);
        p.truth_tables.push_back(std::move(table));
        p.class_labels.push_back(bitstring(a, n));
        p.class_prior.push_back(pf);
        p.oracle_class.push_back(a);
        p.oracle_prob.push_back(pf);
    }
    p.validate();
    return p;
}

OracleProblem build_simon(std::size_t n) {
    check_range(n >= 2 && n <= problem_caps().simon_max_n,
                "build_simon: n out of supported range");
    OracleProblem p;
    p.name = "simon" + std::to_string(n);
    p.kind = OracleProblem::Kind::SimonAnalytic;
    p.oracle_qubits = 2 * n;
    p.simon_n = n;
    const std::size_t count = std::size_t{1} << n;
    const double pj = 1.0 / static_cast<double>(count);
    for (std::size_t s = 0; s < count; ++s) {
        p.class_labels.push_back(bitstring(s, n));
        p.class_prior.push_back(pj);
    }
    p.validate();
    return p;
}

OracleProblem explicit_simon(std::size_t n) {
    check_range(n >= 2 && n <= problem_caps().simon_max_n,
                "explicit_simon: n out of supported range");
    const std::size_t inputs = std::size_t{1} << n;

    OracleProblem p;
    p.name = "simon" + std::to_string(n) + "-explicit";
    p.kind = OracleProblem::Kind::Enumerated;
    p.canonical = OracleProblem::CanonicalAlgo::HspStandard;
    p.oracle_qubits = 2 * n;
    p.input_bits = n;
    p.output_bits = n;

    const double pj = 1.0 / static_cast<double>(inputs);
    for (std::size_t s = 0; s < inputs; ++s) {
        std::vector<std::uint32_t> table(inputs);
        for (std::size_t x = 0; x < inputs; ++x)
            table[x] = static_cast<std::uint32_t>(s == 0 ? x : std::min(x, x ^ s));
        p.truth_tables.push_back(std::move(table));
        p.class_labels.push_back(bitstring(s, n));
        p.class_prior.push_back(pj);
        p.oracle_class.push_back(s);
        p.oracle_prob.push_back(pj);
    }
    p.validate();
    return p;
}

OracleProblem build_phase_estimation(std::size_t n, std::size_t t) {
    const ProblemCaps caps = problem_caps();
    check_range(n >= 2 && n <= caps.phase_max_n, "build_phase_estimation: n out of range");
    check_range(t >= n && t <= caps.phase_max_t,
                "build_phase_estimation: t must satisfy n <= t <= cap");
    OracleProblem p;
    p.name = "phase" + std::to_string(n) + "x" + std::to_string(t);
    p.kind = OracleProblem::Kind::PhaseAnalytic;
    p.oracle_qubits = t;
    p.phase_n = n;
    p.phase_t = t;
    const std::size_t count = std::size_t{1} << n;
    const double pj = 1.0 / static_cast<double>(count);
    for (std::size_t j = 0; j < count; ++j) {
        p.class_labels.push_back(std::to_string(j));
        p.class_prior.push_back(pj);
    }
    p.validate();
    return p;
}

OracleProblem make_custom_problem(std::string name, std::size_t input_bits,
                                  std::size_t output_bits,
                                  std::vector<std::vector<std::uint32_t>> truth_tables,
                                  std::vector<std::string> oracle_class_names, PriorKind prior,
                                  std::vector<double> custom_weights) {
    if (truth_tables.empty()) throw std::invalid_argument("custom problem: no oracles");
    if (truth_tables.size() != oracle_class_names.size())
        throw std::invalid_argument("custom problem: class names per oracle required");
    if (input_bits == 0 || output_bits == 0)
        throw std::invalid_argument("custom problem: need input and output bits");

    OracleProblem p;
    p.name = std::move(name);
    p.kind = OracleProblem::Kind::Enumerated;
    p.oracle_qubits = input_bits + output_bits;
    p.input_bits = input_bits;
    p.output_bits = output_bits;
    p.truth_tables = std::move(truth_tables);

    // Classes in first-appearance order.
    std::map<std::string, std::size_t> class_index;
    for (const std::string& cname : oracle_class_names) {
        if (!class_index.count(cname)) {
            class_index.emplace(cname, p.class_labels.size());
            p.class_labels.push_back(cname);
        }
    }
    for (const std::string& cname : oracle_class_names)
        p.oracle_class.push_back(class_index.at(cname));

    const std::size_t num_f = p.truth_tables.size();
    std::vector<std::size_t> class_sizes(p.class_labels.size(), 0);
    for (std::size_t cls : p.oracle_class) ++class_sizes[cls];

    p.class_prior.assign(p.class_labels.size(), 0.0);
    p.oracle_prob.assign(num_f, 0.0);
    switch (prior) {
        case PriorKind::UniformOverF: {
            const double pf = 1.0 / static_cast<double>(num_f);
            for (std::size_t f = 0; f < num_f; ++f) {
                p.oracle_prob[f] = pf;
                p.class_prior[p.oracle_class[f]] += pf;
            }
            break;
        }
        case PriorKind::PartitionUniform: {
            const double pj = 1.0 / static_cast<double>(p.class_labels.size());
            for (std::size_t f = 0; f < num_f; ++f) {
                p.oracle_prob[f] = pj / static_cast<double>(class_sizes[p.oracle_class[f]]);
                p.class_prior[p.oracle_class[f]] += p.oracle_prob[f];
            }
            break;
        }
        case PriorKind::Custom: {
            if (custom_weights.size() != num_f)
                throw std::invalid_argument("custom problem: need one weight per oracle");
            double total = 0.0;
            for (double w : custom_weights) {
                if (w <= 0.0)
                    throw std::invalid_argument("custom problem: weights must be positive");
                total += w;
            }
            for (std::size_t f = 0; f < num_f; ++f) {
                p.oracle_prob[f] = custom_weights[f] / total;
                p.class_prior[p.oracle_class[f]] += p.oracle_prob[f];
            }
            break;
        }
    }
    p.validate();
    return p;
}

ComplexMatrix unitary_dft(std::size_t dim, bool inverse) {
    if (dim > dimension_cap()) throw dimension_cap_error("unitary_dft: dimension cap");
    ComplexMatrix w(dim, dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    const double sign = inverse ? -1.0 : 1.0;
    for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t l = 0; l < dim; ++l) {
            // reduce k*l mod dim before the trig call
            const double angle = sign * 2.0 * std::numbers::pi *
                                 static_cast<double>((k * l) % dim) / static_cast<double>(dim);
            w(k, l) = norm * cplx{std::cos(angle), std::sin(angle)};
        }
    return w;
}

ComplexMatrix phase_oracle_matrix(std::size_t t, double f) {
    const std::size_t dim = std::size_t{1} << t;
    if (dim > dimension_cap()) throw dimension_cap_error("phase_oracle_matrix: dimension cap");
    ComplexMatrix u(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
        const double angle = 2.0 * std::numbers::pi * f * static_cast<double>(k);
        u(k, k) = cplx{std::cos(angle), std::sin(angle)};
    }
    return u;
}

ComplexMatrix sigma_phase_analytic(std::size_t n, std::size_t t, std::size_t j,
                                   StageLabel stage) {
    if (t < n) throw std::invalid_argument("sigma_phase_analytic: t < n");
    if (j >= (std::size_t{1} << n)) throw std::invalid_argument("sigma_phase_analytic: class");
    const std::size_t dim = std::size_t{1} << t;
    if (dim > dimension_cap()) throw dimension_cap_error("sigma_phase_analytic: dimension cap");

    if (stage == StageLabel::PreQuery) {
        // f-independent |+>^t density matrix
        ComplexMatrix sigma(dim, dim);
        const double w = 1.0 / static_cast<double>(dim);
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) sigma(a, b) = w;
        return sigma;
    }

    // Post-query entries: (sigma_j)_{k,k'} = 2^{-t} 2^n int_a^b e^{2 pi i f D} df
    // with D = k - k', a = j/2^n, b = (j+1)/2^n. Depends on D only.
    const double a = static_cast<double>(j) / std::exp2(static_cast<double>(n));
    const double width = std::exp2(-static_cast<double>(n));
    const double scale = 1.0 / static_cast<double>(dim);  // 2^{-t}, interval factor folded below
    std::vector<cplx> by_delta(2 * dim - 1);
    for (std::ptrdiff_t delta = -(std::ptrdiff_t)dim + 1; delta < (std::ptrdiff_t)dim; ++delta) {
        cplx value;
        if (delta == 0) {
            value = cplx{scale, 0.0};
        } else {
            const double d = static_cast<double>(delta);
            const double two_pi_d = 2.0 * std::numbers::pi * d;
            // (1/width) int_a^{a+width} e^{2 pi i f d} df
            const cplx start{std::cos(two_pi_d * a), std::sin(two_pi_d * a)};
            const cplx sweep{std::cos(two_pi_d * width) - 1.0, std::sin(two_pi_d * width)};
            const cplx integral = start * sweep / cplx{0.0, two_pi_d};
            value = scale / width * integral;
        }
        by_delta[static_cast<std::size_t>(delta + (std::ptrdiff_t)dim - 1)] = value;
    }

    ComplexMatrix sigma(dim, dim);
    for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t kp = 0; kp < dim; ++kp) {
            const std::ptrdiff_t delta = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(kp);
            sigma(k, kp) = by_delta[static_cast<std::size_t>(delta + (std::ptrdiff_t)dim - 1)];
        }

    if (stage == StageLabel::Final) {
        const ComplexMatrix w = unitary_dft(dim, true);
        sigma = conjugate_by(w, sigma);
        sigma.hermitize();
    }
    return sigma;
}

} // namespace oilab
