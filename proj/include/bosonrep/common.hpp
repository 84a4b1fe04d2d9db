#ifndef BOSONREP_COMMON_HPP
#define BOSONREP_COMMON_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bosonrep {

using Complex = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Complex>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Bad input: violated precondition, malformed file, instance over a cap.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iteration or size budget exhausted before the requested accuracy.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

/// binomial(n, k) saturating at 2^62 so overflow checks stay cheap.
inline std::uint64_t binomial_capped(int n, int k) {
    constexpr std::uint64_t cap = std::uint64_t{1} << 62;
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        if (result > cap / static_cast<std::uint64_t>(n - k + i)) return cap;
        result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return result;
}

/// Deterministic RNG with explicit normal/uniform draws (avoids the
/// implementation-defined std::normal_distribution sequence).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // in [0, 1)
        return std::ldexp(static_cast<double>(engine_()), -64);
    }

    double normal() {  // Box-Muller
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        while (u <= 1e-300) u = uniform();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

    Complex cnormal() { return {normal(), normal()}; }

    std::uint64_t next() { return engine_(); }

    /// index in [0, n)
    std::size_t below(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace bosonrep

#endif  // BOSONREP_COMMON_HPP
