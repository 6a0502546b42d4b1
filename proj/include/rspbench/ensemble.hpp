// ensemble.hpp
// Finite target ensemble {psi_alpha, p_alpha}.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rspbench/errors.hpp"
#include "rspbench/linalg.hpp"

namespace rspbench {

class TargetEnsemble {
public:
    /// Equiprobable ensemble.
    explicit TargetEnsemble(std::vector<PureState> states)
        : TargetEnsemble(std::move(states), {}) {}

    /// An empty probability list means uniform.
    TargetEnsemble(std::vector<PureState> states, std::vector<double> probabilities)
        : states_(std::move(states)), probabilities_(std::move(probabilities)) {
        if (states_.empty()) throw validation_error("target ensemble is empty");
        if (probabilities_.empty()) {
            probabilities_.assign(states_.size(), 1.0 / static_cast<double>(states_.size()));
        }
        if (probabilities_.size() != states_.size()) {
            throw dimension_error("ensemble has " + std::to_string(states_.size()) +
                                  " states but " + std::to_string(probabilities_.size()) +
                                  " probabilities");
        }
        const std::size_t d = states_.front().dim();
        for (std::size_t i = 1; i < states_.size(); ++i) {
            if (states_[i].dim() != d) {
                throw dimension_error("state " + std::to_string(i) + " has dim " +
                                      std::to_string(states_[i].dim()) + ", expected " +
                                      std::to_string(d));
            }
        }
        require_probability_vector(probabilities_, "ensemble probabilities");
    }

    std::size_t size() const noexcept { return states_.size(); }
    std::size_t dim() const noexcept { return states_.front().dim(); }
    const PureState& state(std::size_t i) const { return states_.at(i); }
    const std::vector<PureState>& states() const noexcept { return states_; }
    double probability(std::size_t i) const { return probabilities_.at(i); }
    const std::vector<double>& probabilities() const noexcept { return probabilities_; }

    bool is_uniform() const {
        const double u = 1.0 / static_cast<double>(size());
        for (double p : probabilities_)
            if (std::abs(p - u) > tolerance::probability_sum) return false;
        return true;
    }

    void require_uniform(const char* operation) const {
        if (!is_uniform()) {
            throw unsupported_assumption_error(std::string(operation) +
                                               " assumes equiprobable targets");
        }
    }

private:
    std::vector<PureState> states_;
    std::vector<double> probabilities_;
};

/// The four BB84 qubit states |0>, |1>, |+>, |->, uniform.
inline TargetEnsemble bb84_ensemble() {
    const double h = 1.0 / std::sqrt(2.0);
    return TargetEnsemble({PureState{1.0, 0.0}, PureState{0.0, 1.0}, PureState{h, h},
                           PureState{h, -h}});
}

} // namespace rspbench
