#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace csvortex {

// Scalar nonlinearity f(u) = e^u (e^u - 1)^5 of the reduced equation, with
// its derivative, truncated positive form and antiderivative. All functions
// are pure; e^u underflows to 0 for very negative u and every formula stays
// finite there.
namespace nonlinearity {

struct Constants {
    static constexpr double u_star = -1.7917594692280550008;  // ln(1/6)
    static constexpr double f_min = -3125.0 / 46656.0;        // -5^5/6^6
    static constexpr double f_prime_bound = 5.0;              // |f'| bound on u <= 0
};

inline double f(double u) {
    const double eu = std::exp(u);
    const double em1 = std::expm1(u);
    return eu * em1 * em1 * em1 * em1 * em1;
}

// f'(u) = e^u (e^u - 1)^4 (6 e^u - 1)
inline double f_prime(double u) {
    const double eu = std::exp(u);
    const double em1 = std::expm1(u);
    const double em4 = (em1 * em1) * (em1 * em1);
    return eu * em4 * (6.0 * eu - 1.0);
}

// g(u) = e^u (1 - e^u)^5 for u <= 0, exactly 0 for u > 0.
inline double g(double u) {
    if (u > 0.0) return 0.0;
    const double eu = std::exp(u);
    const double om = -std::expm1(u);  // 1 - e^u >= 0
    return eu * om * om * om * om * om;
}

// g'(u) = e^u (1 - e^u)^4 (1 - 6 e^u) for u < 0, 0 for u > 0.
inline double g_prime(double u) {
    if (u > 0.0) return 0.0;
    const double eu = std::exp(u);
    const double om = -std::expm1(u);
    const double om4 = (om * om) * (om * om);
    return eu * om4 * (1.0 - 6.0 * eu);
}

// F(u) = (1/6)(e^u - 1)^6, so F' = f, F(0) = 0, F(-inf) = 1/6.
inline double antiderivative_F(double u) {
    const double em1 = std::expm1(u);
    const double em2 = em1 * em1;
    return em2 * em2 * em2 / 6.0;
}

// Quadratic variant e^u (1 - e^u) (truncated), used by the shallow equation
// behind the plane sub-solution.
inline double g_quadratic(double u) {
    if (u > 0.0) return 0.0;
    return std::exp(u) * (-std::expm1(u));
}

inline double f_quadratic(double u) { return std::exp(u) * std::expm1(u); }

inline double f_quadratic_prime(double u) {
    const double eu = std::exp(u);
    return eu * (2.0 * eu - 1.0);
}

} // namespace nonlinearity

struct Coupling {
    double kappa;
    double lambda;  // always 12 / kappa^2

    static Coupling from_kappa(double kappa) {
        if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
        return {kappa, 12.0 / (kappa * kappa)};
    }
    static Coupling from_lambda(double lambda) {
        if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
        return {std::sqrt(12.0 / lambda), lambda};
    }
};

struct Vortex {
    double x = 0.0;
    double y = 0.0;
    int multiplicity = 1;
};

// Prescribed zeros with multiplicities. Points must be pairwise distinct and
// every multiplicity >= 1; the empty set (N = 0) is allowed.
class VortexSet {
public:
    VortexSet() = default;

    explicit VortexSet(std::vector<Vortex> vs) : vortices_(std::move(vs)) {
        for (const auto& v : vortices_) {
            if (v.multiplicity < 1)
                throw std::invalid_argument("vortex multiplicity must be >= 1");
            total_ += v.multiplicity;
        }
        for (std::size_t i = 0; i < vortices_.size(); ++i)
            for (std::size_t j = i + 1; j < vortices_.size(); ++j)
                if (vortices_[i].x == vortices_[j].x && vortices_[i].y == vortices_[j].y)
                    throw std::invalid_argument("vortex points must be pairwise distinct");
    }

    int total_winding() const { return total_; }
    bool empty() const { return vortices_.empty(); }
    std::size_t size() const { return vortices_.size(); }
    const Vortex& operator[](std::size_t i) const { return vortices_[i]; }
    auto begin() const { return vortices_.begin(); }
    auto end() const { return vortices_.end(); }

private:
    std::vector<Vortex> vortices_;
    int total_ = 0;
};

} // namespace csvortex
