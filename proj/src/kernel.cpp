#include "tapgrowth/kernel.hpp"

#include "tapgrowth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tapgrowth {

namespace {

// Beyond this mean the Poisson draw is taken from its normal limit; the
// relative skew error is below 1e-4 there.
constexpr double kPoissonNormalLimit = 1e9;

bool is_count(double m) { return m >= 0.0 && std::isfinite(m) && std::floor(m) == m; }

double draw_class(double trials, double prob, RandomStream& rng) {
    if (trials <= 0.0 || prob <= 0.0) {
        return 0.0;
    }
    if (trials <= kBinomialTrialLimit) {
        std::binomial_distribution<std::int64_t> dist(static_cast<std::int64_t>(trials),
                                                      std::min(prob, 1.0));
        return static_cast<double>(dist(rng));
    }
    const double mean = prob * trials;
    if (!std::isfinite(mean)) {
        throw DivergenceError("stochastic increment mean is not finite");
    }
    if (mean <= kPoissonNormalLimit) {
        std::poisson_distribution<std::int64_t> dist(mean);
        return static_cast<double>(dist(rng));
    }
    std::normal_distribution<double> dist(0.0, 1.0);
    const double draw = std::round(mean + std::sqrt(mean) * dist(rng));
    return std::max(draw, 0.0);
}

}  // namespace

std::string Verdict::message() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i != 0) {
            os << "; ";
        }
        os << violations[i];
    }
    return os.str();
}

double alpha(int i, const AlphaSchedule& schedule) {
    if (i < 1) {
        throw std::invalid_argument("alpha: combination size must be >= 1");
    }
    if (i > schedule.cutoff) {
        return 0.0;
    }
    return 1.0 / std::pow(static_cast<double>(i) * schedule.theta, schedule.rho);
}

double generalized_choose(double m, int i) {
    if (i < 1) {
        throw std::invalid_argument("generalized_choose: size must be >= 1");
    }
    if (!(m >= static_cast<double>(i - 1))) {
        return 0.0;
    }
    // Multiply before dividing: for integer m every intermediate is an integer,
    // so the result is exact while it stays below 2^53.
    double c = 1.0;
    for (int k = 0; k < i; ++k) {
        c = c * (m - k) / (k + 1);
    }
    return c;
}

Verdict validate_params(const KernelParams& params) {
    Verdict verdict;
    const auto& a = params.alpha;
    if (!(params.p > 0.0) || !std::isfinite(params.p)) {
        verdict.violations.push_back("p must be positive and finite (got " +
                                     std::to_string(params.p) + ")");
    }
    if (!(a.theta > 0.0) || !std::isfinite(a.theta)) {
        verdict.violations.push_back("theta must be positive (got " + std::to_string(a.theta) +
                                     ")");
    }
    if (!(a.rho > 0.0) || !std::isfinite(a.rho)) {
        verdict.violations.push_back("rho must be positive (got " + std::to_string(a.rho) + ")");
    }
    if (a.cutoff < 1) {
        verdict.violations.push_back("cutoff must be >= 1 (got " + std::to_string(a.cutoff) +
                                     ")");
    }
    if (!verdict.ok()) {
        return verdict;
    }
    double previous = alpha(1, a);
    for (int i = 1; i <= a.cutoff; ++i) {
        const double weight = alpha(i, a);
        const double prob = params.p * weight;
        if (!(prob > 0.0 && prob < 1.0)) {
            std::ostringstream os;
            os << "p*alpha_" << i << " must lie in (0, 1) (got " << prob << ")";
            verdict.violations.push_back(os.str());
        }
        if (weight > previous) {
            verdict.violations.push_back("alpha_" + std::to_string(i) + " exceeds alpha_" +
                                         std::to_string(i - 1));
        }
        previous = weight;
    }
    return verdict;
}

double expected_increment(double m, const KernelParams& params) {
    double sum = 0.0;
    for (int i = 1; i <= params.alpha.cutoff; ++i) {
        sum += alpha(i, params.alpha) * generalized_choose(m, i);
    }
    const double increment = params.p * sum;
    if (!std::isfinite(increment)) {
        throw DivergenceError("expected increment is not finite at m = " + std::to_string(m));
    }
    return increment;
}

double stochastic_increment(double m, const KernelParams& params, RandomStream& rng) {
    std::vector<double> probs(static_cast<std::size_t>(std::max(params.alpha.cutoff, 0)));
    for (int i = 1; i <= params.alpha.cutoff; ++i) {
        probs[static_cast<std::size_t>(i - 1)] = params.p * alpha(i, params.alpha);
    }
    return stochastic_increment(m, probs, rng);
}

double stochastic_increment(double m, std::span<const double> success_probability,
                            RandomStream& rng) {
    if (!is_count(m)) {
        throw std::invalid_argument("stochastic_increment: m must be a non-negative integer");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < success_probability.size(); ++k) {
        const int size = static_cast<int>(k) + 1;
        if (m < size) {
            break;
        }
        total += draw_class(generalized_choose(m, size), success_probability[k], rng);
    }
    if (!std::isfinite(total)) {
        throw DivergenceError("stochastic increment is not finite");
    }
    return total;
}

std::optional<double> blowup_estimate(double m, const KernelParams& params) {
    if (params.alpha.cutoff > 4) {
        throw std::invalid_argument("blowup_estimate: requires cutoff <= 4");
    }
    const double quartic = params.p * alpha(4, params.alpha);
    if (quartic <= 0.0 || !(m > 0.0)) {
        return std::nullopt;
    }
    return 8.0 / (quartic * m * m * m);
}

}  // namespace tapgrowth
