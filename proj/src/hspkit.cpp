#include "oilab/hspkit.hpp"

#include "oilab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

namespace oilab::hsp {

namespace {

std::size_t lcm_of(const std::vector<std::size_t>& v) {
    std::size_t l = 1;
    for (std::size_t p : v) l = std::lcm(l, p);
    return l;
}

// Exact phase numerator of chi_g(x) as a fraction num / L with L = lcm(p_i).
std::size_t phase_numerator(const FiniteAbelianGroup& g, std::size_t chi, std::size_t x,
                            std::size_t l) {
    std::size_t num = 0;
    std::size_t chi_rem = chi, x_rem = x;
    for (std::size_t i = g.num_factors(); i-- > 0;) {
        const std::size_t p = g.cycle_orders[i];
        const std::size_t gi = chi_rem % p;
        const std::size_t xi = x_rem % p;
        chi_rem /= p;
        x_rem /= p;
        num = (num + (gi * xi % p) * (l / p)) % l;
    }
    return num;
}

} // namespace

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::size_t> orders)
    : cycle_orders(std::move(orders)) {
    if (cycle_orders.empty())
        throw std::invalid_argument("FiniteAbelianGroup: no cyclic factors");
    for (std::size_t p : cycle_orders) {
        if (p < 2) throw std::invalid_argument("FiniteAbelianGroup: cycle order must be >= 2");
        order_ *= p;
    }
}

std::vector<std::size_t> FiniteAbelianGroup::tuple(std::size_t index) const {
    std::vector<std::size_t> t(num_factors());
    for (std::size_t i = num_factors(); i-- > 0;) {
        t[i] = index % cycle_orders[i];
        index /= cycle_orders[i];
    }
    return t;
}

std::size_t FiniteAbelianGroup::index_of(const std::vector<std::size_t>& t) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < num_factors(); ++i) idx = idx * cycle_orders[i] + t[i] % cycle_orders[i];
    return idx;
}

std::size_t FiniteAbelianGroup::add(std::size_t a, std::size_t b) const {
    std::vector<std::size_t> digits(num_factors());
    for (std::size_t i = num_factors(); i-- > 0;) {
        const std::size_t p = cycle_orders[i];
        digits[i] = (a % p + b % p) % p;
        a /= p;
        b /= p;
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < num_factors(); ++i) out = out * cycle_orders[i] + digits[i];
    return out;
}

std::size_t FiniteAbelianGroup::neg(std::size_t a) const {
    std::vector<std::size_t> digits(num_factors());
    for (std::size_t i = num_factors(); i-- > 0;) {
        const std::size_t p = cycle_orders[i];
        const std::size_t d = a % p;
        digits[i] = d == 0 ? 0 : p - d;
        a /= p;
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < num_factors(); ++i) out = out * cycle_orders[i] + digits[i];
    return out;
}

bool Subgroup::contains(std::size_t g) const {
    return std::binary_search(elements.begin(), elements.end(), g);
}

bool is_subgroup(const FiniteAbelianGroup& g, const std::vector<std::size_t>& elements) {
    if (elements.empty()) return false;
    std::set<std::size_t> s(elements.begin(), elements.end());
    if (!s.count(0)) return false;
    for (std::size_t a : s) {
        if (a >= g.order()) return false;
        if (!s.count(g.neg(a))) return false;
        for (std::size_t b : s)
            if (!s.count(g.add(a, b))) return false;
    }
    return true;
}

Subgroup make_subgroup(const FiniteAbelianGroup& g, std::vector<std::size_t> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    if (!is_subgroup(g, elements))
        throw std::invalid_argument("make_subgroup: element list is not a subgroup");
    if (g.order() % elements.size() != 0)
        throw std::invalid_argument("make_subgroup: order does not divide |G|");
    return Subgroup{std::move(elements)};
}

Subgroup span_subgroup(const FiniteAbelianGroup& g, const std::vector<std::size_t>& generators) {
    std::set<std::size_t> s{0};
    std::vector<std::size_t> frontier{0};
    for (std::size_t gen : generators) {
        if (gen >= g.order()) throw std::invalid_argument("span_subgroup: generator out of range");
        if (s.insert(gen).second) frontier.push_back(gen);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::size_t> current(s.begin(), s.end());
        for (std::size_t a : current)
            for (std::size_t b : current)
                if (s.insert(g.add(a, b)).second) grew = true;
    }
    return Subgroup{std::vector<std::size_t>(s.begin(), s.end())};
}

std::vector<Subgroup> all_subgroups(const FiniteAbelianGroup& g) {
    if (g.order() > 64)
        throw std::invalid_argument("all_subgroups: supported only for |G| <= 64");
    std::set<std::vector<std::size_t>> seen;
    std::vector<Subgroup> out;
    std::vector<Subgroup> worklist{span_subgroup(g, {})};
    seen.insert(worklist.front().elements);
    while (!worklist.empty()) {
        Subgroup h = std::move(worklist.back());
        worklist.pop_back();
        out.push_back(h);
        for (std::size_t gen = 0; gen < g.order(); ++gen) {
            if (h.contains(gen)) continue;
            std::vector<std::size_t> gens = h.elements;
            gens.push_back(gen);
            Subgroup bigger = span_subgroup(g, gens);
            if (seen.insert(bigger.elements).second) worklist.push_back(bigger);
        }
    }
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.elements.size() != b.elements.size()) return a.elements.size() < b.elements.size();
        return a.elements < b.elements;
    });
    return out;
}

cplx character_value(const FiniteAbelianGroup& g, std::size_t chi, std::size_t x) {
    const std::size_t l = lcm_of(g.cycle_orders);
    const std::size_t num = phase_numerator(g, chi, x, l);
    if (num == 0) return cplx{1.0, 0.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(l);
    return cplx{std::cos(angle), std::sin(angle)};
}

bool character_trivial_on(const FiniteAbelianGroup& g, std::size_t chi, const Subgroup& h) {
    const std::size_t l = lcm_of(g.cycle_orders);
    for (std::size_t el : h.elements)
        if (phase_numerator(g, chi, el, l) != 0) return false;
    return true;
}

CharacterSet annihilator(const FiniteAbelianGroup& g, const Subgroup& h) {
    if (!is_subgroup(g, h.elements))
        throw std::invalid_argument("annihilator: H is not a subgroup");
    CharacterSet set;
    for (std::size_t chi = 0; chi < g.order(); ++chi)
        if (character_trivial_on(g, chi, h)) set.characters.push_back(chi);
    if (set.characters.size() * h.order() != g.order())
        throw numerical_error("annihilator: |H-perp| |H| != |G|");
    return set;
}

ComplexMatrix character_table(const FiniteAbelianGroup& g) {
    if (g.order() > dimension_cap())
        throw dimension_cap_error("character_table: |G| exceeds dimension cap");
    ComplexMatrix m(g.order(), g.order());
    for (std::size_t chi = 0; chi < g.order(); ++chi)
        for (std::size_t x = 0; x < g.order(); ++x) m(chi, x) = character_value(g, chi, x);
    return m;
}

ComplexMatrix qft_matrix(const FiniteAbelianGroup& g) {
    ComplexMatrix m = character_table(g);
    m *= cplx{1.0 / std::sqrt(static_cast<double>(g.order())), 0.0};
    return m;
}

ComplexMatrix hsp_class_state(const FiniteAbelianGroup& g, const Subgroup& h, StageLabel stage) {
    const std::size_t n = g.order();
    ComplexMatrix sigma(n, n);
    switch (stage) {
        case StageLabel::PostQuery: {
            // (1/|G|) sum over cosets of sum_{h,h'} |s+h><s+h'|
            std::vector<bool> visited(n, false);
            const double w = 1.0 / static_cast<double>(n);
            for (std::size_t s = 0; s < n; ++s) {
                if (visited[s]) continue;
                std::vector<std::size_t> coset;
                coset.reserve(h.order());
                for (std::size_t el : h.elements) {
                    const std::size_t member = g.add(s, el);
                    coset.push_back(member);
                    visited[member] = true;
                }
                for (std::size_t a : coset)
                    for (std::size_t b : coset) sigma(a, b) += w;
            }
            return sigma;
        }
        case StageLabel::Final: {
            const CharacterSet perp = annihilator(g, h);
            const double w = static_cast<double>(h.order()) / static_cast<double>(n);
            for (std::size_t chi : perp.characters) sigma(chi, chi) = w;
            return sigma;
        }
        case StageLabel::PreQuery:
            break;
    }
    throw std::invalid_argument("hsp_class_state: stage must be PostQuery or Final");
}

std::vector<double> lambda_spectrum(const FiniteAbelianGroup& g,
                                    const std::vector<Subgroup>& subgroups,
                                    const std::vector<double>& priors) {
    if (subgroups.size() != priors.size())
        throw std::invalid_argument("lambda_spectrum: priors/subgroups size mismatch");
    double total_p = 0.0;
    for (double p : priors) total_p += p;
    if (std::abs(total_p - 1.0) > kTraceTol)
        throw std::invalid_argument("lambda_spectrum: priors do not sum to 1");

    std::vector<double> lambda(g.order(), 0.0);
    for (std::size_t j = 0; j < subgroups.size(); ++j) {
        const CharacterSet perp = annihilator(g, subgroups[j]);
        const double w = priors[j] * static_cast<double>(subgroups[j].order()) /
                         static_cast<double>(g.order());
        for (std::size_t chi : perp.characters) lambda[chi] += w;
    }
    double sum = 0.0;
    for (double v : lambda) sum += v;
    if (std::abs(sum - 1.0) > 1e-12)
        throw numerical_error("lambda_spectrum: eigenvalues sum to " + std::to_string(sum));
    return lambda;
}

std::vector<double> lambda_spectrum_rowform(const FiniteAbelianGroup& g,
                                            const std::vector<Subgroup>& subgroups) {
    // c_g = number of subgroups containing g; lambda_chi = <c|v_chi>/(sqrt|G| |J|).
    const std::size_t n = g.order();
    std::vector<double> c(n, 0.0);
    for (const Subgroup& h : subgroups)
        for (std::size_t el : h.elements) c[el] += 1.0;

    std::vector<double> lambda(n, 0.0);
    for (std::size_t chi = 0; chi < n; ++chi) {
        cplx acc{0.0, 0.0};
        for (std::size_t x = 0; x < n; ++x) acc += c[x] * std::conj(character_value(g, chi, x));
        lambda[chi] = acc.real() / (static_cast<double>(n) * static_cast<double>(subgroups.size()));
    }
    return lambda;
}

namespace {

std::atomic_size_t g_tuple_cap{std::size_t{1} << 24};

struct TupleStream {
    // Per-character membership masks over the subgroup list plus the
    // t-th-power weights; lambda(chi_1..chi_t) is the weight sum over the
    // AND of the per-digit masks.
    std::size_t num_chars = 0;
    std::size_t words = 0;
    std::vector<std::uint64_t> masks;  // per chi, `words` words
    std::vector<double> weights;       // per subgroup

    const std::uint64_t* mask(std::size_t chi) const { return masks.data() + chi * words; }

    double lambda_for(const std::uint64_t* m) const {
        double acc = 0.0;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t bits = m[w];
            while (bits) {
                const unsigned b = static_cast<unsigned>(__builtin_ctzll(bits));
                acc += weights[w * 64 + b];
                bits &= bits - 1;
            }
        }
        return acc;
    }
};

TupleStream build_stream(const FiniteAbelianGroup& g, const std::vector<Subgroup>& subgroups,
                         const std::vector<double>& priors, std::size_t t) {
    TupleStream st;
    st.num_chars = g.order();
    st.words = (subgroups.size() + 63) / 64;
    st.masks.assign(st.num_chars * st.words, 0);
    st.weights.resize(st.words * 64, 0.0);
    for (std::size_t j = 0; j < subgroups.size(); ++j) {
        const double ratio = static_cast<double>(subgroups[j].order()) / static_cast<double>(g.order());
        st.weights[j] = priors[j] * std::pow(ratio, static_cast<double>(t));
        const CharacterSet perp = annihilator(g, subgroups[j]);
        for (std::size_t chi : perp.characters)
            st.masks[chi * st.words + j / 64] |= std::uint64_t{1} << (j % 64);
    }
    return st;
}

std::size_t checked_tuple_count(const FiniteAbelianGroup& g, std::size_t t) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < t; ++i) {
        if (total > tuple_cap() / g.order())
            throw dimension_cap_error("lambda_spectrum_t: |G|^t exceeds the tuple cap");
        total *= g.order();
    }
    return total;
}

// Iterate tuples [begin, end) in odometer order, calling sink(lambda).
template <typename Sink>
void scan_range(const TupleStream& st, std::size_t t, std::size_t begin, std::size_t end,
                Sink&& sink) {
    const std::size_t base = st.num_chars;
    std::vector<std::size_t> digits(t, 0);
    {
        std::size_t rem = begin;
        for (std::size_t d = t; d-- > 0;) {
            digits[d] = rem % base;
            rem /= base;
        }
    }
    // prefix[d] = AND of masks of digits 0..d
    std::vector<std::uint64_t> prefix((t + 1) * st.words, ~std::uint64_t{0});
    auto recompute_from = [&](std::size_t d) {
        for (std::size_t k = d; k < t; ++k) {
            const std::uint64_t* prev = prefix.data() + k * st.words;
            const std::uint64_t* m = st.mask(digits[k]);
            std::uint64_t* cur = prefix.data() + (k + 1) * st.words;
            for (std::size_t w = 0; w < st.words; ++w) cur[w] = prev[w] & m[w];
        }
    };
    recompute_from(0);

    for (std::size_t idx = begin; idx < end; ++idx) {
        sink(st.lambda_for(prefix.data() + t * st.words));
        // odometer increment, rightmost digit fastest
        std::size_t d = t;
        while (d-- > 0) {
            if (++digits[d] < base) {
                recompute_from(d);
                break;
            }
            digits[d] = 0;
        }
    }
}

} // namespace

std::size_t tuple_cap() { return g_tuple_cap.load(std::memory_order_relaxed); }
void set_tuple_cap(std::size_t cap) { g_tuple_cap.store(cap, std::memory_order_relaxed); }

std::vector<double> lambda_spectrum_t(const FiniteAbelianGroup& g,
                                      const std::vector<Subgroup>& subgroups,
                                      const std::vector<double>& priors, std::size_t t) {
    if (t == 0) throw std::invalid_argument("lambda_spectrum_t: t must be >= 1");
    if (subgroups.size() != priors.size())
        throw std::invalid_argument("lambda_spectrum_t: priors/subgroups size mismatch");
    const std::size_t total = checked_tuple_count(g, t);
    const TupleStream st = build_stream(g, subgroups, priors, t);

    std::vector<double> lambda(total);
    const std::size_t chunk = std::size_t{1} << 16;
    parallel_chunks(total, chunk, [&](std::size_t, std::size_t begin, std::size_t end) {
        std::size_t i = begin;
        scan_range(st, t, begin, end, [&](double v) { lambda[i++] = v; });
    });

    double sum = 0.0;
    for (double v : lambda) sum += v;
    if (std::abs(sum - 1.0) > 1e-10)
        throw numerical_error("lambda_spectrum_t: eigenvalues sum to " + std::to_string(sum));
    return lambda;
}

MetricsRow hsp_metrics_t(const FiniteAbelianGroup& g, const std::vector<Subgroup>& subgroups,
                         const std::vector<double>& priors, std::size_t t) {
    if (t == 0) throw std::invalid_argument("hsp_metrics_t: t must be >= 1");
    if (subgroups.size() != priors.size())
        throw std::invalid_argument("hsp_metrics_t: priors/subgroups size mismatch");
    const std::size_t total = checked_tuple_count(g, t);
    const TupleStream st = build_stream(g, subgroups, priors, t);

    const std::size_t chunk = std::size_t{1} << 16;
    const std::size_t num_chunks = (total + chunk - 1) / chunk;
    std::vector<double> chunk_entropy(num_chunks, 0.0), chunk_sum(num_chunks, 0.0);
    parallel_chunks(total, chunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
        double ent = 0.0, sum = 0.0;
        scan_range(st, t, begin, end, [&](double v) {
            sum += v;
            if (v > kEigClamp) ent -= v * std::log2(v);
        });
        chunk_entropy[c] = ent;
        chunk_sum[c] = sum;
    });

    double s = 0.0, sum = 0.0;
    for (std::size_t c = 0; c < num_chunks; ++c) {
        s += chunk_entropy[c];
        sum += chunk_sum[c];
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw numerical_error("hsp_metrics_t: spectrum sums to " + std::to_string(sum));

    const double log_g = std::log2(static_cast<double>(g.order()));
    double h_y_given_j = 0.0;
    for (std::size_t j = 0; j < subgroups.size(); ++j)
        h_y_given_j += priors[j] * (log_g - std::log2(static_cast<double>(subgroups[j].order())));
    h_y_given_j *= static_cast<double>(t);

    MetricsRow row;
    row.H_Y = s;
    row.S_rhoY = s;
    row.C = 0.0;
    row.H_Y_given_J = h_y_given_j;
    row.I_JY = s - h_y_given_j;
    row.chi = row.I_JY;
    row.D_Y = 0.0;
    row.irrealism = 0.0;
    row.lower_bound = row.I_JY;
    row.upper_bound = row.chi;
    return row;
}

ClassEnsemble hsp_stage_ensemble(const FiniteAbelianGroup& g,
                                 const std::vector<Subgroup>& subgroups,
                                 const std::vector<double>& priors,
                                 const std::vector<std::string>& labels, StageLabel stage) {
    if (subgroups.size() != priors.size() || subgroups.size() != labels.size())
        throw std::invalid_argument("hsp_stage_ensemble: size mismatch");
    const std::size_t n = g.order();
    if (n > dimension_cap()) throw dimension_cap_error("hsp_stage_ensemble: |G| exceeds cap");

    std::vector<ClassState> classes;
    classes.reserve(subgroups.size());
    if (stage == StageLabel::PreQuery) {
        // Uniform superposition over G, identical in every class.
        ComplexMatrix uniform(n, n);
        const double w = 1.0 / static_cast<double>(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) uniform(a, b) = w;
        for (std::size_t j = 0; j < subgroups.size(); ++j)
            classes.push_back({labels[j], priors[j], uniform});
    } else {
        for (std::size_t j = 0; j < subgroups.size(); ++j)
            classes.push_back({labels[j], priors[j], hsp_class_state(g, subgroups[j], stage)});
    }

    std::vector<std::size_t> mask(g.num_factors());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = i;
    return ClassEnsemble(std::move(classes), g.cycle_orders, std::move(mask));
}

FiniteAbelianGroup simon_group(std::size_t n) {
    return FiniteAbelianGroup(std::vector<std::size_t>(n, 2));
}

std::vector<Subgroup> simon_subgroups(std::size_t n) {
    const std::size_t count = std::size_t{1} << n;
    std::vector<Subgroup> subs;
    subs.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        if (s == 0)
            subs.push_back(Subgroup{{0}});
        else
            subs.push_back(Subgroup{{0, s}});
    }
    return subs;
}

} // namespace oilab::hsp
