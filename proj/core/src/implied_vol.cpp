#include "zbdt/implied_vol.hpp"

#include <cmath>
#include <stdexcept>

namespace zbdt {

namespace {

void check_inputs(const BlackInputs& in, bool with_sigma) {
    if (!(in.face_value > 0.0) || !std::isfinite(in.face_value))
        throw std::invalid_argument("black: face value must be finite and positive");
    if (!(in.underlying_bond > 0.0) || !(in.underlying_bond <= in.face_value))
        throw std::invalid_argument("black: underlying bond price must lie in (0, FV]");
    if (!(in.expiry_bond > 0.0) || !(in.expiry_bond <= in.face_value))
        throw std::invalid_argument("black: expiry bond price must lie in (0, FV]");
    if (!(in.strike >= 0.0) || !std::isfinite(in.strike))
        throw std::invalid_argument("black: strike must be finite and >= 0");
    if (!(in.time_to_expiry > 0.0) || !std::isfinite(in.time_to_expiry))
        throw std::invalid_argument("black: time to expiry must be finite and positive");
    if (with_sigma && (!(in.sigma >= 0.0) || !std::isfinite(in.sigma)))
        throw std::invalid_argument("black: sigma must be finite and >= 0");
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double black_call(const BlackInputs& in) {
    check_inputs(in, true);
    const double fv = in.face_value;
    const double b_t = in.underlying_bond / fv;
    const double b_s = in.expiry_bond / fv;
    const double k = in.strike / fv;

    if (k == 0.0) return in.underlying_bond;
    if (in.sigma == 0.0) return fv * std::max(b_t - k * b_s, 0.0);

    const double v = in.sigma * std::sqrt(in.time_to_expiry);
    const double l = std::log(b_t / (k * b_s));
    const double d1 = l / v + 0.5 * v;
    const double d2 = l / v - 0.5 * v;
    return fv * (b_t * normal_cdf(d1) - k * b_s * normal_cdf(d2));
}

double black_put(const BlackInputs& in) {
    const double fv = in.face_value;
    return black_call(in) -
           fv * (in.underlying_bond / fv - (in.strike / fv) * (in.expiry_bond / fv));
}

std::optional<double> implied_vol(double price, const BlackInputs& in,
                                  const ImpliedVolSettings& settings) {
    BlackInputs work = in;
    work.sigma = 0.0;
    check_inputs(work, true);
    if (std::isnan(price) || !(price >= 0.0))
        throw std::invalid_argument("implied_vol: price must be >= 0 and not NaN");
    if (!(settings.sigma_max > 0.0) || !(settings.sigma_tol > 0.0))
        throw std::invalid_argument("implied_vol: settings must be positive");

    const double floor_value = black_call(work);
    if (price <= floor_value + settings.zero_tol_per_face * in.face_value) return 0.0;

    work.sigma = settings.sigma_max;
    if (price > black_call(work)) return std::nullopt;

    double lo = 0.0;
    double hi = settings.sigma_max;
    while (hi - lo > settings.sigma_tol) {
        const double mid = 0.5 * (lo + hi);
        work.sigma = mid;
        if (black_call(work) < price)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace zbdt
