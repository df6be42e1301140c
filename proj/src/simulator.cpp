#include "oilab/simulator.hpp"

#include "oilab/hspkit.hpp"
#include "oilab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oilab {

namespace {

constexpr double kSpecMatchTol = 1e-9;

std::vector<std::size_t> qubit_dims(std::size_t n) { return std::vector<std::size_t>(n, 2); }

CVec basis_state(std::size_t dim, std::size_t index) {
    CVec v(dim, cplx{0.0, 0.0});
    v[index] = cplx{1.0, 0.0};
    return v;
}

// measured mask of a lifted algorithm: per-copy offsets of the base mask
std::vector<std::size_t> lift_mask(const std::vector<std::size_t>& base, std::size_t n_per_copy,
                                   std::size_t t) {
    std::vector<std::size_t> out;
    out.reserve(base.size() * t);
    for (std::size_t copy = 0; copy < t; ++copy)
        for (std::size_t q : base) out.push_back(copy * n_per_copy + q);
    return out;
}

AlgorithmSpec lift_spec(AlgorithmSpec base, std::size_t t) {
    if (t <= 1) return base;
    AlgorithmSpec s;
    s.n_qubits = base.n_qubits * t;
    s.psi0 = base.psi0;
    s.V = base.V;
    s.W = base.W;
    for (std::size_t c = 1; c < t; ++c) {
        s.psi0 = tensor(s.psi0, base.psi0);
        s.V = tensor(s.V, base.V);
        s.W = tensor(s.W, base.W);
    }
    s.measured = lift_mask(base.measured, base.n_qubits, t);
    s.queries = t;
    return s;
}

AlgorithmSpec canonical_single_query(const OracleProblem& p) {
    AlgorithmSpec s;
    switch (p.kind) {
        case OracleProblem::Kind::Enumerated: {
            const std::size_t m = p.oracle_qubits;
            s.n_qubits = m;
            if (p.canonical == OracleProblem::CanonicalAlgo::HspStandard) {
                // |0...0>, V = H^{in} x I, W = H^{in} x I, measure the input register.
                s.psi0 = basis_state(std::size_t{1} << m, 0);
                ComplexMatrix gate =
                    tensor(hadamard_n(p.input_bits), ComplexMatrix::identity(std::size_t{1} << p.output_bits));
                s.V = gate;
                s.W = std::move(gate);
            } else {
                // |0...0 1...1>, V = H^m, W = H^{in} x I, measure the input register.
                const std::size_t ones = (std::size_t{1} << p.output_bits) - 1;
                s.psi0 = basis_state(std::size_t{1} << m, ones);
                s.V = hadamard_n(m);
                s.W = tensor(hadamard_n(p.input_bits),
                             ComplexMatrix::identity(std::size_t{1} << p.output_bits));
            }
            for (std::size_t q = 0; q < p.input_bits; ++q) s.measured.push_back(q);
            return s;
        }
        case OracleProblem::Kind::SimonAnalytic: {
            const std::size_t n = p.simon_n;
            s.n_qubits = 2 * n;
            s.psi0 = basis_state(std::size_t{1} << (2 * n), 0);
            ComplexMatrix gate = tensor(hadamard_n(n), ComplexMatrix::identity(std::size_t{1} << n));
            s.V = gate;
            s.W = std::move(gate);
            for (std::size_t q = 0; q < n; ++q) s.measured.push_back(q);
            return s;
        }
        case OracleProblem::Kind::PhaseAnalytic: {
            const std::size_t t = p.phase_t;
            s.n_qubits = t;
            s.psi0 = basis_state(std::size_t{1} << t, 0);
            s.V = hadamard_n(t);
            s.W = unitary_dft(std::size_t{1} << t, true);
            for (std::size_t q = 0; q < t; ++q) s.measured.push_back(q);
            return s;
        }
    }
    throw std::logic_error("canonical_single_query: unknown kind");
}

} // namespace

void AlgorithmSpec::validate(const OracleProblem& problem) const {
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (psi0.size() != dim) throw std::invalid_argument("AlgorithmSpec: psi0 dimension");
    if (std::abs(vec_norm(psi0) - 1.0) > kUnitaryTol)
        throw std::invalid_argument("AlgorithmSpec: psi0 not normalized");
    if (V.rows() != dim || V.cols() != dim || W.rows() != dim || W.cols() != dim)
        throw std::invalid_argument("AlgorithmSpec: gate dimensions");
    if (V.unitary_error() > kUnitaryTol) throw std::invalid_argument("AlgorithmSpec: V not unitary");
    if (W.unitary_error() > kUnitaryTol) throw std::invalid_argument("AlgorithmSpec: W not unitary");
    if (queries != problem.queries)
        throw std::invalid_argument("AlgorithmSpec: query count differs from the problem's");
    if (n_qubits < problem.total_oracle_qubits())
        throw std::invalid_argument("AlgorithmSpec: n must be at least m*t");
    if (measured.empty()) throw std::invalid_argument("AlgorithmSpec: empty measured set");
    for (std::size_t q : measured)
        if (q >= n_qubits) throw std::invalid_argument("AlgorithmSpec: measured qubit out of range");
}

AlgorithmSpec canonical_spec(const OracleProblem& problem) {
    OracleProblem base = problem;
    base.queries = 1;
    return lift_spec(canonical_single_query(base), problem.queries);
}

namespace {

void require_canonical(const OracleProblem& problem, const AlgorithmSpec& spec) {
    const AlgorithmSpec ref = canonical_spec(problem);
    bool same = spec.n_qubits == ref.n_qubits && spec.measured == ref.measured;
    if (same) {
        for (std::size_t i = 0; i < ref.psi0.size() && same; ++i)
            same = std::abs(spec.psi0[i] - ref.psi0[i]) <= kSpecMatchTol;
        same = same && max_abs_diff(spec.V, ref.V) <= kSpecMatchTol &&
               max_abs_diff(spec.W, ref.W) <= kSpecMatchTol;
    }
    if (!same)
        throw std::invalid_argument(
            "run_stages: analytic problem '" + problem.name +
            "' supports only its canonical algorithm; use canonical_spec()");
}

std::map<StageLabel, ClassEnsemble> run_enumerated(const OracleProblem& p,
                                                   const AlgorithmSpec& spec) {
    const std::size_t dim = std::size_t{1} << spec.n_qubits;
    const std::size_t num_classes = p.num_classes();
    const CVec psi1 = matvec(spec.V, spec.psi0);

    // sigma_j^2 accumulation: static worker ranges over the oracle list,
    // per-worker per-class partials merged in worker order.
    const std::size_t workers = parallel_range_workers(p.num_oracles());
    std::vector<std::vector<ComplexMatrix>> partial(
        workers, std::vector<ComplexMatrix>(num_classes, ComplexMatrix(dim, dim)));

    parallel_ranges(p.num_oracles(), [&](std::size_t w, std::size_t begin, std::size_t end) {
        CVec psi2(dim);
        for (std::size_t f = begin; f < end; ++f) {
            p.apply_oracle(f, psi1, psi2, spec.n_qubits);
            const double weight = p.oracle_prob[f] / p.class_prior[p.oracle_class[f]];
            kernels::rank1_update(partial[w][p.oracle_class[f]].data(), psi2.data(), weight, dim);
        }
    });

    std::vector<ClassState> post(num_classes);
    for (std::size_t j = 0; j < num_classes; ++j) {
        ComplexMatrix acc(dim, dim);
        for (std::size_t w = 0; w < workers; ++w) acc += partial[w][j];
        acc.hermitize();
        acc.assert_finite("run_stages post-query");
        post[j] = {p.class_labels[j], p.class_prior[j], std::move(acc)};
    }

    std::vector<ClassState> pre(num_classes);
    const ComplexMatrix rho1 = outer(psi1);
    for (std::size_t j = 0; j < num_classes; ++j)
        pre[j] = {p.class_labels[j], p.class_prior[j], rho1};

    std::vector<ClassState> fin(num_classes);
    for (std::size_t j = 0; j < num_classes; ++j) {
        ComplexMatrix rotated = conjugate_by(spec.W, post[j].state);
        rotated.hermitize();
        fin[j] = {p.class_labels[j], p.class_prior[j], std::move(rotated)};
    }

    std::map<StageLabel, ClassEnsemble> out;
    out.emplace(StageLabel::PreQuery,
                ClassEnsemble(std::move(pre), qubit_dims(spec.n_qubits), spec.measured));
    out.emplace(StageLabel::PostQuery,
                ClassEnsemble(std::move(post), qubit_dims(spec.n_qubits), spec.measured));
    out.emplace(StageLabel::Final,
                ClassEnsemble(std::move(fin), qubit_dims(spec.n_qubits), spec.measured));
    return out;
}

std::map<StageLabel, ClassEnsemble> run_simon_analytic(const OracleProblem& p) {
    const hsp::FiniteAbelianGroup g = hsp::simon_group(p.simon_n);
    const std::vector<hsp::Subgroup> subs = hsp::simon_subgroups(p.simon_n);

    std::map<StageLabel, ClassEnsemble> out;
    for (StageLabel stage : {StageLabel::PreQuery, StageLabel::PostQuery, StageLabel::Final}) {
        ClassEnsemble single =
            hsp::hsp_stage_ensemble(g, subs, p.class_prior, p.class_labels, stage);
        if (p.queries == 1) {
            out.emplace(stage, std::move(single));
        } else {
            // The reduced per-class state is hiding-function independent, so
            // the t-query class state is its exact tensor power.
            std::vector<ClassState> classes;
            classes.reserve(single.num_classes());
            for (const ClassState& c : single.classes())
                classes.push_back({c.label, c.weight, tensor_power(c.state, p.queries)});
            std::vector<std::size_t> dims;
            for (std::size_t copy = 0; copy < p.queries; ++copy)
                dims.insert(dims.end(), single.subsystem_dims().begin(),
                            single.subsystem_dims().end());
            std::vector<std::size_t> mask(dims.size());
            for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = i;
            out.emplace(stage, ClassEnsemble(std::move(classes), std::move(dims), std::move(mask)));
        }
    }
    return out;
}

std::map<StageLabel, ClassEnsemble> run_phase_analytic(const OracleProblem& p) {
    std::vector<std::size_t> mask(p.phase_t);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = i;

    std::map<StageLabel, ClassEnsemble> out;
    for (StageLabel stage : {StageLabel::PreQuery, StageLabel::PostQuery, StageLabel::Final}) {
        std::vector<ClassState> classes(p.num_classes());
        parallel_ranges(p.num_classes(), [&](std::size_t, std::size_t begin, std::size_t end) {
            for (std::size_t j = begin; j < end; ++j)
                classes[j] = {p.class_labels[j], p.class_prior[j],
                              sigma_phase_analytic(p.phase_n, p.phase_t, j, stage)};
        });
        out.emplace(stage, ClassEnsemble(std::move(classes), qubit_dims(p.phase_t), mask));
    }
    return out;
}

} // namespace

std::map<StageLabel, ClassEnsemble> run_stages(const OracleProblem& problem,
                                               const AlgorithmSpec& spec) {
    spec.validate(problem);
    switch (problem.kind) {
        case OracleProblem::Kind::Enumerated:
            return run_enumerated(problem, spec);
        case OracleProblem::Kind::SimonAnalytic:
            require_canonical(problem, spec);
            return run_simon_analytic(problem);
        case OracleProblem::Kind::PhaseAnalytic:
            require_canonical(problem, spec);
            return run_phase_analytic(problem);
    }
    throw std::logic_error("run_stages: unknown problem kind");
}

std::map<StageLabel, ClassEnsemble> run_stages(const OracleProblem& problem) {
    return run_stages(problem, canonical_spec(problem));
}

OutputRule optimal_output_rule(const ClassEnsemble& final_stage) {
    const ClassEnsemble e =
        final_stage.fully_measured() ? final_stage : final_stage.reduce_to_measured();
    const JointPmf pmf = e.diagonal_distribution();
    const std::size_t dim = pmf.pr.front().size();

    OutputRule rule;
    rule.assignment.resize(dim);
    for (std::size_t y = 0; y < dim; ++y) {
        double best = -1.0;
        for (std::size_t j = 0; j < pmf.pr.size(); ++j) best = std::max(best, pmf.pr[j][y]);
        std::size_t pick = pmf.pr.size();
        for (std::size_t j = 0; j < pmf.pr.size(); ++j) {
            if (pmf.pr[j][y] < best - 1e-12) continue;
            if (pick == pmf.pr.size() || pmf.class_labels[j] < pmf.class_labels[pick]) pick = j;
        }
        rule.assignment[y] = pick;
        rule.p_success += pmf.pr[pick][y];
    }
    return rule;
}

OracleProblem lift_t_queries(const OracleProblem& problem, std::size_t t) {
    if (t < 1) throw std::invalid_argument("lift_t_queries: t must be >= 1");
    if (problem.kind == OracleProblem::Kind::PhaseAnalytic && t > 1)
        throw std::invalid_argument(
            "lift_t_queries: the analytic phase family does not support tensor-power lifts; "
            "raise t (the register width) instead");
    if (problem.queries != 1) throw std::invalid_argument("lift_t_queries: problem already lifted");
    const std::size_t total_qubits = problem.oracle_qubits * t;
    if ((std::size_t{1} << total_qubits) > dimension_cap() &&
        problem.kind == OracleProblem::Kind::Enumerated)
        throw dimension_cap_error("lift_t_queries: lifted oracle exceeds the dimension cap");
    OracleProblem lifted = problem;
    lifted.queries = t;
    return lifted;
}

StageReport analyze_stage(StageLabel stage, const ClassEnsemble& ensemble, bool full_register) {
    StageReport report;
    report.stage = stage;
    report.metrics = stage_metrics(ensemble, full_register);
    const ClassEnsemble reduced =
        full_register || ensemble.fully_measured() ? ensemble : ensemble.reduce_to_measured();
    report.p_success = optimal_output_rule(reduced).p_success;
    report.ensemble_digest = reduced.digest();
    return report;
}

} // namespace oilab
