#include "swarmring/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swarmring/density.hpp"
#include "swarmring/errors.hpp"

namespace swarmring {

void validate(const EstimatorGains& g) {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!ok(g.alpha)) throw InvalidArgument("estimator gain alpha must be > 0");
    if (!ok(g.sigma_p)) throw InvalidArgument("estimator gain sigma_p must be > 0");
    if (!ok(g.sigma_i)) throw InvalidArgument("estimator gain sigma_i must be > 0");
}

bool EstimatorState::all_finite() const noexcept {
    auto finite = [](const Field& f) { return f.all_finite(); };
    return std::all_of(estimates.begin(), estimates.end(), finite) &&
           std::all_of(integral_terms.begin(), integral_terms.end(), finite);
}

EstimatorState init_estimates(std::span<const Angle> positions, double agent_count, const SmoothingParams& p,
                              const Grid& grid) {
    EstimatorState s;
    s.estimates.reserve(positions.size());
    for (Angle xi : positions) s.estimates.push_back(reference_density(xi, agent_count, p, grid));
    s.integral_terms.assign(positions.size(), Field(grid));
    return s;
}

EstimatorDerivative pi_rhs(const EstimatorState& state, std::span<const Field> refs, const CommGraph& g,
                           const EstimatorGains& gains) {
    validate(gains);
    const std::size_t n = state.agent_count();
    if (refs.size() != n || state.integral_terms.size() != n || g.size() != n) {
        throw InvalidArgument("pi_rhs: agent count mismatch (estimates " + std::to_string(n) + ", refs " +
                              std::to_string(refs.size()) + ", graph " + std::to_string(g.size()) + ")");
    }

    EstimatorDerivative d;
    d.estimates.reserve(n);
    d.integral_terms = state.estimates;

    for (std::size_t i = 0; i < n; ++i) {
        const Field& est = state.estimates[i];
        const Field& w = state.integral_terms[i];
        require_same_grid(est, refs[i], "pi_rhs");
        require_same_grid(est, w, "pi_rhs");

        Field out(est.grid());
        auto o = out.values();
        auto e = est.values();
        auto r = refs[i].values();
        auto wi = w.values();
        const double deg = static_cast<double>(g.degree(i));
        for (std::size_t k = 0; k < o.size(); ++k) {
            o[k] = -gains.alpha * (e[k] - r[k]) - gains.sigma_p * deg * e[k] - gains.sigma_i * deg * wi[k];
        }
        for (std::size_t j : g.neighbors(i)) {
            auto ej = state.estimates[j].values();
            auto wj = state.integral_terms[j].values();
            for (std::size_t k = 0; k < o.size(); ++k) o[k] += gains.sigma_p * ej[k] + gains.sigma_i * wj[k];
        }
        d.estimates.push_back(std::move(out));
    }
    return d;
}

Field field_mean(std::span<const Field> fields) {
    if (fields.empty()) throw InvalidArgument("field_mean: no fields");
    Field acc(fields.front().grid());
    for (const Field& f : fields) acc += f;
    acc *= 1.0 / static_cast<double>(fields.size());
    return acc;
}

double estimate_mean_consistency(const EstimatorState& state, std::span<const Field> refs) {
    return l2_distance(field_mean(state.estimates), field_mean(refs));
}

}  // namespace swarmring
