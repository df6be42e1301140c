#pragma once

// Labeled class ensembles: the classical-quantum state {(j, p_j, sigma_j)}
// kept in per-class form. The class register is never materialized as a
// tensor factor.

#include "oilab/densemat.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oilab {

enum class StageLabel { PreQuery, PostQuery, Final };

const char* stage_name(StageLabel s);

struct ClassState {
    std::string label;
    double weight = 0.0;
    ComplexMatrix state;
};

// Joint pmf Pr(J=j, Y=y) from the computational-basis diagonal.
struct JointPmf {
    std::vector<std::string> class_labels;
    std::vector<double> class_weights;
    std::vector<std::vector<double>> pr;  // pr[j][y]

    std::vector<double> marginal_y() const;
};

class ClassEnsemble {
public:
    ClassEnsemble() = default;
    ClassEnsemble(std::vector<ClassState> classes, std::vector<std::size_t> subsystem_dims,
                  std::vector<std::size_t> measured_mask);

    const std::vector<ClassState>& classes() const { return classes_; }
    const std::vector<std::size_t>& subsystem_dims() const { return subsystem_dims_; }
    const std::vector<std::size_t>& measured_mask() const { return measured_mask_; }
    std::size_t num_classes() const { return classes_.size(); }
    std::size_t dim() const { return classes_.empty() ? 0 : classes_.front().state.rows(); }
    bool fully_measured() const { return measured_mask_.size() == subsystem_dims_.size(); }

    // rho_Y = sum_j p_j sigma_j
    ComplexMatrix mix() const;

    // Partial-trace every class state onto the measured subsystems.
    ClassEnsemble reduce_to_measured() const;

    JointPmf diagonal_distribution() const;

    // Full invariant check including PSD of every class state (costs an
    // eigendecomposition per class; used by tests and at pipeline exits).
    void validate_full() const;

    std::uint64_t digest() const;

private:
    std::vector<ClassState> classes_;
    std::vector<std::size_t> subsystem_dims_;
    std::vector<std::size_t> measured_mask_;
};

} // namespace oilab
