#include "zbdt/payoffs.hpp"

#include <algorithm>
#include <cmath>

namespace zbdt {

const char* to_string(Style s) { return s == Style::european ? "european" : "american"; }
const char* to_string(Kind k) { return k == Kind::call ? "call" : "put"; }

const char* to_string(Family f) {
    switch (f) {
        case Family::vanilla: return "vanilla";
        case Family::up_in: return "up-in";
        case Family::up_out: return "up-out";
        case Family::down_in: return "down-in";
        case Family::down_out: return "down-out";
        case Family::double_in: return "double-in";
        case Family::double_out: return "double-out";
    }
    return "?";
}

Style style_from_string(const std::string& s) {
    if (s == "european") return Style::european;
    if (s == "american") return Style::american;
    throw std::invalid_argument("unknown style '" + s + "', expected 'european' or 'american'");
}

Kind kind_from_string(const std::string& s) {
    if (s == "call") return Kind::call;
    if (s == "put") return Kind::put;
    throw std::invalid_argument("unknown kind '" + s + "', expected 'call' or 'put'");
}

Family family_from_string(const std::string& s) {
    for (Family f : {Family::vanilla, Family::up_in, Family::up_out, Family::down_in,
                     Family::down_out, Family::double_in, Family::double_out})
        if (s == to_string(f)) return f;
    throw std::invalid_argument("unknown family '" + s + "'");
}

bool uses_up_barrier(Family f) {
    return f == Family::up_in || f == Family::up_out || f == Family::double_in ||
           f == Family::double_out;
}

bool uses_down_barrier(Family f) {
    return f == Family::down_in || f == Family::down_out || f == Family::double_in ||
           f == Family::double_out;
}

void validate(const OptionSpec& spec) {
    if (!(spec.strike >= 0.0) || !std::isfinite(spec.strike))
        throw SpecError("option strike must be finite and >= 0");
    if (spec.expiry < 1) throw SpecError("option expiry must be >= 1 period");
    if (spec.expiry >= spec.bond_maturity)
        throw SpecError("option expiry must precede the bond maturity (S < T)");
    if (uses_up_barrier(spec.family) && !spec.barrier_hi)
        throw SpecError(std::string("family '") + to_string(spec.family) +
                        "' requires the upper barrier");
    if (uses_down_barrier(spec.family) && !spec.barrier_lo)
        throw SpecError(std::string("family '") + to_string(spec.family) +
                        "' requires the lower barrier");
    if (uses_up_barrier(spec.family) && !std::isfinite(*spec.barrier_hi))
        throw SpecError("upper barrier must be finite");
    if (uses_down_barrier(spec.family) && !std::isfinite(*spec.barrier_lo))
        throw SpecError("lower barrier must be finite");
    if (uses_up_barrier(spec.family) && uses_down_barrier(spec.family) &&
        !(*spec.barrier_lo < *spec.barrier_hi))
        throw SpecError("lower barrier must lie strictly below the upper barrier");
}

double intrinsic(const OptionSpec& spec, double spot) {
    return spec.kind == Kind::call ? std::max(spot - spec.strike, 0.0)
                                   : std::max(spec.strike - spot, 0.0);
}

double barrier_payoff(const OptionSpec& spec, double spot, BarrierStatus status) {
    bool pays = true;
    switch (spec.family) {
        case Family::vanilla: pays = true; break;
        case Family::up_in: pays = status.hit_up; break;
        case Family::up_out: pays = !status.hit_up; break;
        case Family::down_in: pays = status.hit_down; break;
        case Family::down_out: pays = !status.hit_down; break;
        case Family::double_in: pays = status.hit_up || status.hit_down; break;
        case Family::double_out: pays = !status.hit_up && !status.hit_down; break;
    }
    return pays ? intrinsic(spec, spot) : 0.0;
}

BarrierStatus update_status(BarrierStatus status, const OptionSpec& spec, double spot) {
    if (uses_up_barrier(spec.family) && spot > *spec.barrier_hi) status.hit_up = true;
    if (uses_down_barrier(spec.family) && spot < *spec.barrier_lo) status.hit_down = true;
    return status;
}

}  // namespace zbdt
