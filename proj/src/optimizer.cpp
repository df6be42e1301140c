#include "oilab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace oilab {

namespace {

constexpr double kOrthTol = 1e-10;
constexpr double kCommTol = 1e-9;

ClassEnsemble reduced_copy(const ClassEnsemble& e) {
    return e.fully_measured() ? e : e.reduce_to_measured();
}

double xlogx(double x) { return x > kEigClamp ? -x * std::log2(x) : 0.0; }

ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = cplx{g(rng), g(rng)};
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            cplx overlap{0.0, 0.0};
            for (std::size_t r = 0; r < dim; ++r) overlap += std::conj(m(r, prev)) * m(r, c);
            for (std::size_t r = 0; r < dim; ++r) m(r, c) -= overlap * m(r, prev);
        }
        double nrm = 0.0;
        for (std::size_t r = 0; r < dim; ++r) nrm += std::norm(m(r, c));
        nrm = std::sqrt(nrm);
        for (std::size_t r = 0; r < dim; ++r) m(r, c) /= nrm;
    }
    return m;
}

// Holevo quantity of the (reduced) ensemble; basis independent.
double chi_of(const ClassEnsemble& e) {
    double avg = 0.0;
    for (const ClassState& c : e.classes()) avg += c.weight * von_neumann_entropy(c.state);
    return std::max(von_neumann_entropy(e.mix()) - avg, 0.0);
}

// I(J;Y) from the diagonals of the rotated class states.
double mutual_information_diag(const std::vector<ComplexMatrix>& rotated,
                               const std::vector<double>& weights) {
    const std::size_t dim = rotated.front().rows();
    std::vector<double> mixdiag(dim, 0.0);
    double h_cond = 0.0;
    for (std::size_t j = 0; j < rotated.size(); ++j) {
        for (std::size_t y = 0; y < dim; ++y) {
            const double d = std::max(rotated[j](y, y).real(), 0.0);
            mixdiag[y] += weights[j] * d;
            h_cond += weights[j] * xlogx(d);
        }
    }
    double h_mix = 0.0;
    for (double d : mixdiag) h_mix += xlogx(d);
    return h_mix - h_cond;
}

// --- coordinate-descent state ------------------------------------------------

struct PairLine {
    // Diagonal entries of A' after the rotation G(theta, phi) on (p, q):
    //   d_p' = c^2 app + s^2 aqq + 2 c s Re(e^{-i phi} apq)
    double app, aqq;
    cplx apq;

    double dp(double c, double s, double re_apq) const {
        return c * c * app + s * s * aqq + 2.0 * c * s * re_apq;
    }
};

struct DescentState {
    std::vector<ComplexMatrix> a;  // rotated class states
    ComplexMatrix mix;             // rotated mixture
    std::vector<double> w;         // class weights
    ComplexMatrix basis;           // accumulated W
    std::size_t dim = 0;

    double pair_objective(std::size_t p, std::size_t q, double theta, double phi) const {
        const double c = std::cos(theta), s = std::sin(theta);
        const double cph = std::cos(phi), sph = std::sin(phi);
        double h_cond = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const cplx apq = a[j](p, q);
            const double re = cph * apq.real() + sph * apq.imag();
            PairLine line{a[j](p, p).real(), a[j](q, q).real(), apq};
            const double dp = line.dp(c, s, re);
            const double dq = line.app + line.aqq - dp;
            h_cond += w[j] * (xlogx(dp) + xlogx(dq));
        }
        const cplx mpq = mix(p, q);
        const double re_m = cph * mpq.real() + sph * mpq.imag();
        PairLine mline{mix(p, p).real(), mix(q, q).real(), mpq};
        const double mp = mline.dp(c, s, re_m);
        const double mq = mline.app + mline.aqq - mp;
        return (xlogx(mp) + xlogx(mq)) - h_cond;  // pair contribution to I
    }

    void apply_rotation(std::size_t p, std::size_t q, double theta, double phi) {
        const double c = std::cos(theta), s = std::sin(theta);
        const cplx eip{std::cos(phi), std::sin(phi)};
        auto rotate = [&](ComplexMatrix& m, bool both_sides) {
            // rows: row_p' = c row_p + s e^{i phi} row_q ; row_q' = -s e^{-i phi} row_p + c row_q
            for (std::size_t col = 0; col < m.cols(); ++col) {
                const cplx rp = m(p, col), rq = m(q, col);
                m(p, col) = c * rp + s * eip * rq;
                m(q, col) = -s * std::conj(eip) * rp + c * rq;
            }
            if (!both_sides) return;
            // columns: col_p' = c col_p + s e^{-i phi} col_q ; col_q' = -s e^{i phi} col_p + c col_q
            for (std::size_t row = 0; row < m.rows(); ++row) {
                const cplx cp = m(row, p), cq = m(row, q);
                m(row, p) = c * cp + s * std::conj(eip) * cq;
                m(row, q) = -s * eip * cp + c * cq;
            }
        };
        for (ComplexMatrix& m : a) rotate(m, true);
        rotate(mix, true);
        rotate(basis, false);
    }

    double current_mutual_information() const { return mutual_information_diag(a, w); }
};

// Golden-section maximization on [lo, hi].
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, int iters) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

struct SweepResult {
    double improvement = 0.0;
    std::size_t evaluations = 0;
};

SweepResult descent_sweep(DescentState& st) {
    SweepResult result;
    const double quarter_pi = std::numbers::pi / 4.0;
    for (std::size_t p = 0; p + 1 < st.dim; ++p) {
        for (std::size_t q = p + 1; q < st.dim; ++q) {
            // Skip pairs with no coupling anywhere.
            double coupling = std::abs(st.mix(p, q));
            for (const ComplexMatrix& m : st.a) coupling = std::max(coupling, std::abs(m(p, q)));
            if (coupling < 1e-15) continue;

            const double base = st.pair_objective(p, q, 0.0, 0.0);
            double best_gain = 0.0, best_theta = 0.0, best_phi = 0.0;
            for (double phi : {0.0, quarter_pi, 2.0 * quarter_pi, 3.0 * quarter_pi}) {
                auto line = [&](double theta) {
                    ++result.evaluations;
                    return st.pair_objective(p, q, theta, phi);
                };
                auto [theta, value] = golden_max(line, -quarter_pi, quarter_pi, 40);
                if (value - base > best_gain) {
                    best_gain = value - base;
                    best_theta = theta;
                    best_phi = phi;
                }
            }
            if (best_gain > 0.0) {
                auto phi_line = [&](double phi) {
                    ++result.evaluations;
                    return st.pair_objective(p, q, best_theta, phi);
                };
                auto [phi_refined, value] =
                    golden_max(phi_line, best_phi - quarter_pi, best_phi + quarter_pi, 40);
                if (value - base > best_gain) {
                    best_gain = value - base;
                    best_phi = phi_refined;
                }
                st.apply_rotation(p, q, best_theta, best_phi);
                result.improvement += best_gain;
            }
        }
    }
    return result;
}

} // namespace

OptimalityCertificate certify(const ClassEnsemble& post_query) {
    const ClassEnsemble e = reduced_copy(post_query);
    const std::size_t k = e.num_classes();

    OptimalityCertificate cert;
    cert.gram_overlaps.assign(k, std::vector<double>(k, 0.0));
    cert.commutator_norms.assign(k, std::vector<double>(k, 0.0));
    cert.orthogonal_support = true;
    cert.pairwise_commuting = true;

    const std::size_t dim = e.dim();
    for (std::size_t i = 0; i < k; ++i) {
        const ComplexMatrix& si = e.classes()[i].state;
        for (std::size_t j = i; j < k; ++j) {
            const ComplexMatrix& sj = e.classes()[j].state;
            ComplexMatrix prod = si * sj;
            const double overlap = prod.trace().real();
            cert.gram_overlaps[i][j] = overlap;
            cert.gram_overlaps[j][i] = overlap;
            double comm = 0.0;
            for (std::size_t r = 0; r < dim; ++r)
                for (std::size_t c = 0; c < dim; ++c)
                    comm = std::max(comm, std::abs(prod(r, c) - std::conj(prod(c, r))));
            cert.commutator_norms[i][j] = comm;
            cert.commutator_norms[j][i] = comm;
            if (i != j && overlap > kOrthTol) cert.orthogonal_support = false;
            if (comm > kCommTol) cert.pairwise_commuting = false;
        }
    }
    return cert;
}

namespace {

// Recursive split of degenerate blocks; `family` holds the projected class
// states, returns a unitary whose columns diagonalize the whole family.
ComplexMatrix common_eigenbasis(const std::vector<ComplexMatrix>& family, std::mt19937_64& rng,
                                int depth) {
    const std::size_t dim = family.front().rows();
    if (dim == 1) return ComplexMatrix::identity(1);
    if (depth > 64)
        throw std::runtime_error("simultaneous_diagonalizer: recursion depth exceeded");

    std::uniform_real_distribution<double> coeff(0.5, 1.5);
    ComplexMatrix combo(dim, dim);
    for (const ComplexMatrix& m : family) {
        const double c = coeff(rng);
        kernels::axpy(combo.data(), m.data(), c, dim * dim);
    }
    combo.hermitize();
    HermitianEigenDecomposition eig = hermitian_eig(combo);

    const double scale = std::max(combo.max_abs(), 1.0);
    ComplexMatrix q = eig.eigenvectors;

    std::size_t start = 0;
    while (start < dim) {
        std::size_t end = start + 1;
        while (end < dim && eig.eigenvalues[end] - eig.eigenvalues[end - 1] <= 1e-9 * scale) ++end;
        const std::size_t blk = end - start;
        if (blk > 1) {
            // Project the family into the block.
            ComplexMatrix qblk(dim, blk);
            for (std::size_t c = 0; c < blk; ++c)
                for (std::size_t r = 0; r < dim; ++r) qblk(r, c) = q(r, start + c);
            std::vector<ComplexMatrix> sub;
            sub.reserve(family.size());
            double off = 0.0;
            for (const ComplexMatrix& m : family) {
                ComplexMatrix b = qblk.adjoint() * m * qblk;
                b.hermitize();
                for (std::size_t r = 0; r < blk; ++r)
                    for (std::size_t c = 0; c < blk; ++c)
                        if (r != c) off = std::max(off, std::abs(b(r, c)));
                sub.push_back(std::move(b));
            }
            if (blk == dim) {
                // The combination did not split; a commuting family can only
                // do this if every member is scalar on the block.
                if (off > 1e-8)
                    throw std::runtime_error(
                        "simultaneous_diagonalizer: ensemble is not simultaneously diagonalizable");
                start = end;
                continue;
            }
            if (off > 1e-12) {
                ComplexMatrix qsub = common_eigenbasis(sub, rng, depth + 1);
                ComplexMatrix refined = qblk * qsub;
                for (std::size_t c = 0; c < blk; ++c)
                    for (std::size_t r = 0; r < dim; ++r) q(r, start + c) = refined(r, c);
            }
        }
        start = end;
    }
    return q;
}

} // namespace

MeasurementBasis simultaneous_diagonalizer(const ClassEnsemble& ensemble, std::uint64_t seed) {
    const ClassEnsemble e = reduced_copy(ensemble);
    const OptimalityCertificate cert = certify(e);
    if (!cert.pairwise_commuting)
        throw std::invalid_argument("simultaneous_diagonalizer: ensemble does not pairwise commute");

    std::mt19937_64 rng(seed);
    std::vector<ComplexMatrix> family;
    family.reserve(e.num_classes());
    for (const ClassState& c : e.classes()) family.push_back(c.state);

    const ComplexMatrix q = common_eigenbasis(family, rng, 0);
    MeasurementBasis basis{q.adjoint()};

    // The returned basis must actually diagonalize every class state.
    for (const ClassState& c : e.classes()) {
        ComplexMatrix rotated = basis.W * c.state * q;
        for (std::size_t r = 0; r < rotated.rows(); ++r)
            for (std::size_t col = 0; col < rotated.cols(); ++col)
                if (r != col && std::abs(rotated(r, col)) > 1e-8)
                    throw std::runtime_error(
                        "simultaneous_diagonalizer: residual off-diagonal mass " +
                        std::to_string(std::abs(rotated(r, col))));
    }
    return basis;
}

double discord_in_basis(const ClassEnsemble& ensemble, const ComplexMatrix& w) {
    const ClassEnsemble e = reduced_copy(ensemble);
    if (w.rows() != e.dim() || w.cols() != e.dim())
        throw std::invalid_argument("discord_in_basis: basis dimension mismatch");
    if (w.unitary_error() > kUnitaryTol)
        throw std::invalid_argument("discord_in_basis: basis not unitary");

    std::vector<ComplexMatrix> rotated;
    std::vector<double> weights;
    for (const ClassState& c : e.classes()) {
        rotated.push_back(conjugate_by(w, c.state));
        weights.push_back(c.weight);
    }
    const double chi = chi_of(e);
    return std::max(chi - mutual_information_diag(rotated, weights), 0.0);
}

DiscordMinimum minimize_discord(const ClassEnsemble& ensemble, std::size_t restarts, double tol,
                                std::uint64_t seed) {
    if (restarts < 1) throw std::invalid_argument("minimize_discord: restarts must be >= 1");
    const ClassEnsemble e = reduced_copy(ensemble);
    const std::size_t dim = e.dim();
    const double chi = chi_of(e);

    std::mt19937_64 rng(seed);
    const std::size_t max_sweeps = 200;

    DiscordMinimum best;
    best.d_min = chi + 1.0;

    for (std::size_t r = 0; r < restarts; ++r) {
        DescentState st;
        st.dim = dim;
        st.w.reserve(e.num_classes());
        // Restart 0 starts from the identity so the result can never exceed
        // the fixed-basis discord.
        st.basis = r == 0 ? ComplexMatrix::identity(dim) : random_unitary(rng, dim).adjoint();
        for (const ClassState& c : e.classes()) {
            st.a.push_back(r == 0 ? c.state : conjugate_by(st.basis, c.state));
            st.w.push_back(c.weight);
        }
        st.mix = ComplexMatrix(dim, dim);
        for (std::size_t j = 0; j < st.a.size(); ++j)
            kernels::axpy(st.mix.data(), st.a[j].data(), st.w[j], dim * dim);

        bool converged = false;
        std::size_t evals = 0;
        for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
            SweepResult sr = descent_sweep(st);
            evals += sr.evaluations;
            for (ComplexMatrix& m : st.a) m.hermitize();
            st.mix.hermitize();
            if (sr.improvement < tol) {
                converged = true;
                break;
            }
        }

        const double d = std::max(chi - st.current_mutual_information(), 0.0);
        best.evaluations += evals;
        ++best.restarts_run;
        if (d < best.d_min) {
            best.d_min = d;
            best.basis = MeasurementBasis{st.basis};
            best.converged = converged;
        }
    }
    return best;
}

double i_max(const ClassEnsemble& post_query, std::size_t restarts, double tol,
             std::uint64_t seed) {
    const ClassEnsemble e = reduced_copy(post_query);
    const double chi = chi_of(e);
    const DiscordMinimum d = minimize_discord(e, restarts, tol, seed);
    return std::max(chi - d.d_min, 0.0);
}

ClassEnsemble post_query_ensemble(const OracleProblem& problem, const CVec& psi1) {
    if (problem.kind != OracleProblem::Kind::Enumerated)
        throw std::invalid_argument("post_query_ensemble: enumerated problems only");
    std::size_t n_qubits = 0;
    while ((std::size_t{1} << n_qubits) < psi1.size()) ++n_qubits;
    if ((std::size_t{1} << n_qubits) != psi1.size())
        throw std::invalid_argument("post_query_ensemble: state dimension not a power of 2");
    if (n_qubits < problem.total_oracle_qubits())
        throw std::invalid_argument("post_query_ensemble: state smaller than the oracle");
    if (std::abs(vec_norm(psi1) - 1.0) > kUnitaryTol)
        throw std::invalid_argument("post_query_ensemble: psi1 not normalized");

    const std::size_t dim = psi1.size();
    std::vector<ComplexMatrix> acc(problem.num_classes(), ComplexMatrix(dim, dim));
    CVec psi2(dim);
    for (std::size_t f = 0; f < problem.num_oracles(); ++f) {
        problem.apply_oracle(f, psi1, psi2, n_qubits);
        const double weight = problem.oracle_prob[f] / problem.class_prior[problem.oracle_class[f]];
        kernels::rank1_update(acc[problem.oracle_class[f]].data(), psi2.data(), weight, dim);
    }

    std::vector<ClassState> classes;
    classes.reserve(acc.size());
    for (std::size_t j = 0; j < acc.size(); ++j) {
        acc[j].hermitize();
        classes.push_back({problem.class_labels[j], problem.class_prior[j], std::move(acc[j])});
    }
    std::vector<std::size_t> dims(n_qubits, 2), mask(n_qubits);
    for (std::size_t i = 0; i < n_qubits; ++i) mask[i] = i;
    return ClassEnsemble(std::move(classes), std::move(dims), std::move(mask));
}

Psi1Search search_psi1(const OracleProblem& problem, std::size_t trials, std::size_t restarts,
                       double tol, std::uint64_t seed) {
    if (problem.kind != OracleProblem::Kind::Enumerated)
        throw std::invalid_argument("search_psi1: enumerated problems only");
    const std::size_t n_qubits = problem.total_oracle_qubits();
    if (n_qubits > 5)
        throw dimension_cap_error("search_psi1: instance above the small-instance cap (2^5)");
    const std::size_t dim = std::size_t{1} << n_qubits;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);

    auto normalize = [](CVec v) {
        const double nrm = vec_norm(v);
        for (cplx& z : v) z /= nrm;
        return v;
    };
    auto random_dir = [&]() {
        CVec v(dim);
        for (cplx& z : v) z = cplx{g(rng), g(rng)};
        return v;
    };

    Psi1Search result;
    auto evaluate = [&](const CVec& psi) {
        ++result.evaluations;
        return i_max(post_query_ensemble(problem, psi), restarts, tol, seed + result.evaluations);
    };

    // Structured starting points: generalized-Hadamard style states are the
    // natural first guesses; monomial-like starts are known-bad but cheap.
    std::vector<CVec> starts;
    {
        CVec uniform(dim, cplx{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
        starts.push_back(uniform);
        CVec kicked = uniform;  // uniform with |-> on the last qubit
        for (std::size_t i = 0; i < dim; ++i)
            if (i & 1) kicked[i] = -kicked[i];
        starts.push_back(normalize(std::move(kicked)));
        CVec zero(dim, cplx{0.0, 0.0});
        zero[0] = cplx{1.0, 0.0};
        starts.push_back(std::move(zero));
    }
    for (std::size_t tr = 0; tr < trials; ++tr) starts.push_back(normalize(random_dir()));

    result.i_max_best = -1.0;
    for (const CVec& start : starts) {
        CVec current = start;
        double score = evaluate(current);
        double step = 0.35;
        std::size_t rejects = 0;
        while (step > 1e-3 && rejects < 12) {
            CVec dir = random_dir();
            CVec candidate(dim);
            for (std::size_t i = 0; i < dim; ++i) candidate[i] = current[i] + step * dir[i];
            candidate = normalize(std::move(candidate));
            const double cand_score = evaluate(candidate);
            if (cand_score > score + 1e-12) {
                current = std::move(candidate);
                score = cand_score;
                rejects = 0;
            } else if (++rejects % 4 == 0) {
                step *= 0.5;
            }
        }
        if (score > result.i_max_best) {
            result.i_max_best = score;
            result.psi1 = current;
        }
    }
    return result;
}

bool monomial_check(const ComplexMatrix& v) {
    if (!v.is_square()) throw std::invalid_argument("monomial_check: matrix not square");
    const std::size_t n = v.rows();
    std::vector<std::size_t> row_count(n, 0), col_count(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(v(i, j)) > kOrthTol) {
                ++row_count[i];
                ++col_count[j];
            }
    for (std::size_t i = 0; i < n; ++i)
        if (row_count[i] != 1 || col_count[i] != 1) return false;
    return true;
}

} // namespace oilab
