#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace zbdt {

enum class Style { european, american };
enum class Kind { call, put };
enum class Family { vanilla, up_in, up_out, down_in, down_out, double_in, double_out };

const char* to_string(Style s);
const char* to_string(Kind k);
const char* to_string(Family f);
Style style_from_string(const std::string& s);
Kind kind_from_string(const std::string& s);
Family family_from_string(const std::string& s);

// Which barrier the payoff family reads. A barrier flag supplied for a
// family that does not read it is ignored.
bool uses_up_barrier(Family f);
bool uses_down_barrier(Family f);

// Semantically invalid option contracts (as opposed to malformed input).
struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Option on the zero-coupon bond of maturity T (the barrier/strike variable
// is that bond's price, quoted on the face-value scale). expiry is S in
// periods; 0 < S < T is required. Barrier levels: barrier_hi = H+,
// barrier_lo = H-.
struct OptionSpec {
    Style style = Style::european;
    Kind kind = Kind::call;
    Family family = Family::vanilla;
    double strike = 0.0;
    int expiry = 1;
    int bond_maturity = 2;
    std::optional<double> barrier_hi;
    std::optional<double> barrier_lo;
};

// Throws SpecError on: strike < 0, expiry < 1, expiry >= bond_maturity,
// a used barrier missing, or lo >= hi when both are used.
void validate(const OptionSpec& spec);

// Path record: whether the running max has exceeded H+ (strictly) and the
// running min has fallen below H- (strictly). Both flags are monotone.
struct BarrierStatus {
    bool hit_up = false;
    bool hit_down = false;

    friend bool operator==(BarrierStatus a, BarrierStatus b) {
        return a.hit_up == b.hit_up && a.hit_down == b.hit_down;
    }
};

// max(spot-K, 0) for calls, max(K-spot, 0) for puts.
double intrinsic(const OptionSpec& spec, double spot);

// intrinsic gated by the family's barrier indicator: knock-in pays when the
// required barrier has been hit, knock-out when it has not; double-in pays
// when either barrier has been hit, double-out when neither has. The status
// must already include the current spot.
double barrier_payoff(const OptionSpec& spec, double spot, BarrierStatus status);

// Folds one observation into the status. Strict comparisons: spot == H+ or
// spot == H- leaves the flags unchanged. Only barriers the family uses are
// monitored.
BarrierStatus update_status(BarrierStatus status, const OptionSpec& spec, double spot);

}  // namespace zbdt
