// linalg.hpp
// Small-dimension complex linear algebra: pure states, Hermitian (density)
// matrices, a cyclic Jacobi eigensolver and pure-target fidelity.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rspbench/errors.hpp"

namespace rspbench {

using complex = std::complex<double>;

namespace tolerance {
// Construction silently renormalizes states whose norm is within this of 1.
inline constexpr double renormalize = 1e-6;
inline constexpr double unit_norm = 1e-9;
inline constexpr double hermitian = 1e-12;
inline constexpr double trace = 1e-9;
inline constexpr double eigenvalue_floor = 1e-9;
inline constexpr double probability_sum = 1e-9;
} // namespace tolerance

/// A normalized state vector of dimension >= 2.
class PureState {
public:
    explicit PureState(std::vector<complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() < 2) {
            throw dimension_error("pure state needs dimension >= 2, got " +
                                  std::to_string(amplitudes_.size()));
        }
        double norm2 = 0.0;
        for (const auto& a : amplitudes_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw normalization_error("pure state has a non-finite amplitude");
            }
            norm2 += std::norm(a);
        }
        const double norm = std::sqrt(norm2);
        if (std::abs(norm - 1.0) > tolerance::renormalize) {
            throw normalization_error("pure state norm " + std::to_string(norm) +
                                      " deviates from 1 by more than 1e-6");
        }
        for (auto& a : amplitudes_) a /= norm;
    }

    PureState(std::initializer_list<complex> amplitudes)
        : PureState(std::vector<complex>(amplitudes)) {}

    static PureState basis(std::size_t dim, std::size_t k) {
        std::vector<complex> v(dim);
        if (k < dim) v[k] = 1.0;
        return PureState(std::move(v));
    }

    std::size_t dim() const noexcept { return amplitudes_.size(); }
    const complex& operator[](std::size_t i) const { return amplitudes_[i]; }
    std::span<const complex> amplitudes() const noexcept { return amplitudes_; }

private:
    std::vector<complex> amplitudes_;
};

/// <a|b>
inline complex inner(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) {
        throw dimension_error("inner product of states with dims " + std::to_string(a.dim()) +
                              " and " + std::to_string(b.dim()));
    }
    complex sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) sum += std::conj(a[i]) * b[i];
    return sum;
}

/// Dense d x d Hermitian matrix, row-major. Construction checks Hermiticity.
class HermitianMatrix {
public:
    HermitianMatrix(std::size_t dim, std::vector<complex> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim_ == 0 || entries_.size() != dim_ * dim_) {
            throw dimension_error("Hermitian matrix of dim " + std::to_string(dim_) +
                                  " needs " + std::to_string(dim_ * dim_) + " entries, got " +
                                  std::to_string(entries_.size()));
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = i; j < dim_; ++j) {
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tolerance::hermitian) {
                    throw non_hermitian_error("matrix is not Hermitian at (" + std::to_string(i) +
                                              ", " + std::to_string(j) + ")");
                }
            }
        }
    }

    static HermitianMatrix zero(std::size_t dim) {
        return HermitianMatrix(dim, std::vector<complex>(dim * dim));
    }

    std::size_t dim() const noexcept { return dim_; }
    const complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
    std::span<const complex> entries() const noexcept { return entries_; }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i).real();
        return t;
    }

    std::vector<complex> apply(std::span<const complex> v) const {
        if (v.size() != dim_) throw dimension_error("matrix-vector dimension mismatch");
        std::vector<complex> out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            complex s = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) s += (*this)(i, j) * v[j];
            out[i] = s;
        }
        return out;
    }

    double max_abs_diff(const HermitianMatrix& other) const {
        if (other.dim_ != dim_) throw dimension_error("matrix dimension mismatch");
        double m = 0.0;
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            m = std::max(m, std::abs(entries_[k] - other.entries_[k]));
        }
        return m;
    }

private:
    std::size_t dim_;
    std::vector<complex> entries_;
};

inline HermitianMatrix multiply(const HermitianMatrix& a, const HermitianMatrix& b) {
    // Only used for idempotence checks; the product of commuting Hermitian
    // matrices (e.g. a projector with itself) is Hermitian.
    const std::size_t d = a.dim();
    if (b.dim() != d) throw dimension_error("matrix dimension mismatch");
    std::vector<complex> out(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < d; ++j) out[i * d + j] += a(i, k) * b(k, j);
    return HermitianMatrix(d, std::move(out));
}

/// |psi><psi|
inline HermitianMatrix projector(const PureState& psi) {
    const std::size_t d = psi.dim();
    std::vector<complex> m(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m[i * d + j] = psi[i] * std::conj(psi[j]);
    return HermitianMatrix(d, std::move(m));
}

inline void require_probability_vector(std::span<const double> weights, const char* what) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw probability_error(std::string(what) + " contain a negative or non-finite entry");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > tolerance::probability_sum) {
        throw probability_error(std::string(what) + " sum to " + std::to_string(sum) +
                                ", expected 1");
    }
}

/// sum_i w_i |psi_i><psi_i|
inline HermitianMatrix mixture(std::span<const PureState> states, std::span<const double> weights) {
    if (states.empty()) throw validation_error("mixture of an empty state list");
    if (states.size() != weights.size()) {
        throw dimension_error("mixture has " + std::to_string(states.size()) + " states but " +
                              std::to_string(weights.size()) + " weights");
    }
    require_probability_vector(weights, "mixture weights");
    const std::size_t d = states.front().dim();
    std::vector<complex> m(d * d);
    for (std::size_t s = 0; s < states.size(); ++s) {
        const auto& psi = states[s];
        if (psi.dim() != d) throw dimension_error("mixture states have differing dimensions");
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m[i * d + j] += weights[s] * psi[i] * std::conj(psi[j]);
    }
    return HermitianMatrix(d, std::move(m));
}

/// Full eigendecomposition. Eigenvalues are in Jacobi basis order (not
/// sorted); vectors holds the eigenvectors as columns, row-major d x d.
struct HermitianEigen {
    std::vector<double> values;
    std::vector<complex> vectors;
    int sweeps = 0;
};

namespace detail {
inline constexpr int jacobi_max_sweeps = 100;
inline constexpr double jacobi_offdiag_tol = 1e-12;
} // namespace detail

/// Cyclic complex Jacobi. Each (p, q) rotation first removes the phase of
/// a_pq with diag(1, e^{-i phi}) and then applies the real symmetric Jacobi
/// rotation. Stops once the off-diagonal Frobenius norm drops below
/// 1e-12 * max(1, ||A||_F).
inline HermitianEigen hermitian_eigen(const HermitianMatrix& m) {
    const std::size_t d = m.dim();
    std::vector<complex> a(m.entries().begin(), m.entries().end());
    std::vector<complex> v(d * d);
    for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;
    auto A = [&](std::size_t i, std::size_t j) -> complex& { return a[i * d + j]; };
    auto V = [&](std::size_t i, std::size_t j) -> complex& { return v[i * d + j]; };

    double frob2 = 0.0;
    for (const auto& x : a) frob2 += std::norm(x);
    const double tol = detail::jacobi_offdiag_tol * std::max(1.0, std::sqrt(frob2));

    auto offdiag = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (i != j) s += std::norm(A(i, j));
        return std::sqrt(s);
    };

    int sweep = 0;
    for (; offdiag() >= tol; ++sweep) {
        if (sweep == detail::jacobi_max_sweeps) {
            throw convergence_error("Jacobi eigensolver did not converge in 100 sweeps");
        }
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double r = std::abs(A(p, q));
                if (r == 0.0) continue;
                const complex phase = A(p, q) / r; // e^{i phi}
                const double app = A(p, p).real();
                const double aqq = A(q, q).real();
                const double theta = (aqq - app) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                const complex u00 = c;
                const complex u01 = s;
                const complex u10 = -s * std::conj(phase);
                const complex u11 = c * std::conj(phase);

                for (std::size_t k = 0; k < d; ++k) { // A <- A U
                    const complex akp = A(k, p);
                    const complex akq = A(k, q);
                    A(k, p) = akp * u00 + akq * u10;
                    A(k, q) = akp * u01 + akq * u11;
                }
                for (std::size_t k = 0; k < d; ++k) { // A <- U^H A
                    const complex apk = A(p, k);
                    const complex aqk = A(q, k);
                    A(p, k) = std::conj(u00) * apk + std::conj(u10) * aqk;
                    A(q, k) = std::conj(u01) * apk + std::conj(u11) * aqk;
                }
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                A(p, p) = A(p, p).real();
                A(q, q) = A(q, q).real();
                for (std::size_t k = 0; k < d; ++k) { // V <- V U
                    const complex vkp = V(k, p);
                    const complex vkq = V(k, q);
                    V(k, p) = vkp * u00 + vkq * u10;
                    V(k, q) = vkp * u01 + vkq * u11;
                }
            }
        }
    }

    HermitianEigen out;
    out.values.resize(d);
    for (std::size_t i = 0; i < d; ++i) out.values[i] = A(i, i).real();
    out.vectors = std::move(v);
    out.sweeps = sweep;
    return out;
}

/// Unit trace and no eigenvalue below -1e-9.
inline bool is_density_matrix(const HermitianMatrix& m) {
    if (std::abs(m.trace() - 1.0) > tolerance::trace) return false;
    const auto eig = hermitian_eigen(m);
    return std::all_of(eig.values.begin(), eig.values.end(),
                       [](double x) { return x >= -tolerance::eigenvalue_floor; });
}

struct EigenPair {
    double value;
    PureState vector;
};

/// Largest eigenvalue and a unit eigenvector. Among (numerically) tied top
/// eigenvalues the first Jacobi column wins, and the vector's phase is fixed
/// so that its first nonzero component is real and positive.
inline EigenPair hermitian_eig_max(const HermitianMatrix& m) {
    const std::size_t d = m.dim();
    if (d < 2) throw dimension_error("eigenvector of a 1x1 matrix is not a valid state");
    const auto eig = hermitian_eigen(m);
    const double top = *std::max_element(eig.values.begin(), eig.values.end());
    const double tie = 1e-12 * std::max(1.0, std::abs(top));
    std::size_t col = 0;
    while (eig.values[col] < top - tie) ++col;

    std::vector<complex> vec(d);
    for (std::size_t i = 0; i < d; ++i) vec[i] = eig.vectors[i * d + col];
    const auto lead = std::find_if(vec.begin(), vec.end(),
                                   [](const complex& x) { return std::abs(x) > 1e-12; });
    if (lead != vec.end()) {
        const double mag = std::abs(*lead);
        const complex unphase = std::conj(*lead) / mag;
        for (auto& y : vec) y *= unphase;
        *lead = complex(mag, 0.0);
    }
    return {top, PureState(std::move(vec))};
}

/// <psi|rho|psi>, clamped to [0, 1].
inline double pure_fidelity(const PureState& psi, const HermitianMatrix& rho) {
    if (psi.dim() != rho.dim()) {
        throw dimension_error("fidelity between dim " + std::to_string(psi.dim()) +
                              " state and dim " + std::to_string(rho.dim()) + " matrix");
    }
    const auto rpsi = rho.apply(psi.amplitudes());
    complex f = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) f += std::conj(psi[i]) * rpsi[i];
    return std::clamp(f.real(), 0.0, 1.0);
}

/// |<a|b>|^2, clamped to [0, 1]. Same as pure_fidelity(a, projector(b)).
inline double pure_fidelity(const PureState& a, const PureState& b) {
    return std::clamp(std::norm(inner(a, b)), 0.0, 1.0);
}

} // namespace rspbench
