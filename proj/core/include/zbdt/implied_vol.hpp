#pragma once

#include <optional>

namespace zbdt {

// Φ, the standard normal CDF.
double normal_cdf(double x);

// Inputs to Black's formula for a European option on a zero-coupon bond,
// valued at t = 0. All price-like fields (both bonds and the strike) are
// quoted on the face_value scale; this is the one place the normalization
// lives: internally everything is divided by face_value to unit face, so
// the strike term reads (K/FV)·B(0,S) and results are rescaled by FV.
struct BlackInputs {
    double underlying_bond = 0;  // B(0,T), price of the bond the option is written on
    double expiry_bond = 0;      // B(0,S), price of the bond maturing at the option expiry
    double strike = 0;
    double time_to_expiry = 0;   // S, in years
    double sigma = 0;            // yield vol, decimal per sqrt-year
    double face_value = 100.0;
};

// C = FV·(b_T·Φ(d1) − k·b_S·Φ(d2)) with b_T = B(0,T)/FV, b_S = B(0,S)/FV,
// k = K/FV and d_{1,2} = ln(b_T/(k·b_S))/(σ√S) ± σ√S/2. The σ = 0 limit is
// the forward intrinsic max(B(0,T) − k·B(0,S), 0)·... in face units:
// FV·max(b_T − k·b_S, 0). K = 0 gives exactly B(0,T).
double black_call(const BlackInputs& in);

// Put via parity: P = C − FV·(b_T − k·b_S).
double black_put(const BlackInputs& in);

struct ImpliedVolSettings {
    double sigma_max = 10.0;
    double sigma_tol = 1e-10;          // bisection resolution in sigma
    double zero_tol_per_face = 1e-12;  // prices within this (times FV) of the sigma=0 value map to 0
};

// Inverts black_call for sigma on [0, sigma_max]. Prices at or below the
// sigma = 0 value (within tolerance) return 0, the convention for worthless
// and pure-intrinsic prices. Prices no sigma in the bracket can reach —
// anything above the large-sigma bound B(0,T) — return nullopt. Only
// European vanilla call prices are in contract; in.sigma is ignored.
std::optional<double> implied_vol(double price, const BlackInputs& in,
                                  const ImpliedVolSettings& settings = {});

}  // namespace zbdt
