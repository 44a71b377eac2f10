#include "wpcn/plm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wpcn {

void ScheduleFractions::validate() const {
    if (f.size() == 0)
        throw std::invalid_argument("fractions: must be non-empty");
    if ((f.array() < 0.0).any())
        throw std::invalid_argument("fractions: entries must be >= 0");
    if (std::abs(f.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("fractions: must sum to 1");
}

Eigen::VectorXd encode_schedule(const ScheduleFractions& fractions,
                                const SystemConfig& config) {
    fractions.validate();
    const int k = config.num_users;
    if (fractions.f.size() != k)
        throw std::invalid_argument("encode_schedule: fraction length must equal num_users");
    const double alpha = config.alpha;
    if (alpha <= 0.0 || alpha > 1.0)
        throw std::invalid_argument("encode_schedule: alpha must lie in (0,1]");

    const double pa = config.avg_dl_power_w;
    Eigen::VectorXd p_dl =
        (1.0 - alpha) * pa +
        (alpha * static_cast<double>(k) * pa * fractions.f.array());
    for (int i = 0; i < k; ++i) {
        if (p_dl[i] > config.peak_dl_power_w * (1.0 + 1e-12))
            throw std::invalid_argument(
                "encode_schedule: unrepresentable schedule, user " +
                std::to_string(i) + " needs level above peak power");
    }
    return p_dl;
}

ScheduleFractions decode_schedule(const MeasuredEnergies& energies, double alpha) {
    if (alpha <= 0.0 || alpha > 1.0)
        throw std::invalid_argument("decode_schedule: alpha must lie in (0,1]");
    const int k = static_cast<int>(energies.e.size());
    if (k == 0 || (energies.e.array() < 0.0).any())
        throw std::invalid_argument("decode_schedule: energies must be non-negative");
    const double total = energies.e.sum();
    if (total <= 0.0)
        throw std::invalid_argument("decode_schedule: no energy received");

    const double e_common = (1.0 - alpha) / static_cast<double>(k) * total;
    ScheduleFractions out;
    out.f = (energies.e.array() - e_common) / (alpha * total);
    out.f = out.f.cwiseMax(0.0);
    out.f /= out.f.sum();
    return out;
}

double max_alpha(int num_users, double peak_power_w, double avg_power_w) {
    if (avg_power_w <= 0.0 || peak_power_w < avg_power_w)
        throw std::invalid_argument("max_alpha: need peak_power >= avg_power > 0");
    if (num_users < 2) return 1.0;
    double raw = (peak_power_w / avg_power_w - 1.0) /
                 static_cast<double>(num_users - 1);
    return std::clamp(raw, 0.0, 1.0);
}

int max_users(double alpha, double peak_power_w, double avg_power_w) {
    if (avg_power_w <= 0.0 || peak_power_w < avg_power_w)
        throw std::invalid_argument("max_users: need peak_power >= avg_power > 0");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("max_users: alpha must lie in [0,1]");
    if (alpha == 0.0) return kNoUserLimit;
    double raw = (peak_power_w / avg_power_w - 1.0) / alpha + 1.0;
    return static_cast<int>(std::floor(raw + 1e-9));
}

}  // namespace wpcn
