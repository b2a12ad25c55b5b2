#pragma once

/**
 * @file oracles.hpp
 * @brief Closed-form and brute-force reference prices.
 *
 * These are independent of the transport solver and are used to measure its
 * error: Black-Scholes call/put, the corridor (call spread), the
 * Bjerksund-Stensland (1993) American approximation and a CRR binomial tree.
 */

namespace mpbs::oracles {

struct AnalyticInputs {
    double spot = 0.0;
    double strike = 0.0;
    double r = 0.0;
    double sigma = 0.0;
    double tenure = 0.0;

    /// Throws ConfigError unless spot, strike, sigma, tenure > 0.
    void validate() const;
};

/// Standard normal CDF via erfc.
double norm_cdf(double x);

double bs_call(const AnalyticInputs& in);
double bs_put(const AnalyticInputs& in);

/// Long call at k1, short call at k2.
double corridor_value(double spot, double k1, double k2, double r, double sigma, double tenure);

/**
 * Generalised Bjerksund-Stensland (1993) American call with cost of carry b.
 * Falls back to the European value when b >= r (early exercise never optimal).
 */
double bjerksund_stensland_call(double spot, double strike, double tenure, double r, double b,
                                double sigma);

/// American put through the put-call transformation P(S,K,T,r,b) = C(K,S,T,r-b,-b).
double bjerksund_stensland_put(const AnalyticInputs& in);

/// Cox-Ross-Rubinstein tree; `american` toggles early exercise at every node.
double binomial_put(const AnalyticInputs& in, int n_steps, bool american);

inline double binomial_american_put(const AnalyticInputs& in, int n_steps) {
    return binomial_put(in, n_steps, true);
}

}  // namespace mpbs::oracles
