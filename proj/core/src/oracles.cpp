#include "mpbs/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mpbs/errors.hpp"

namespace mpbs::oracles {

void AnalyticInputs::validate() const {
    if (!(spot > 0.0 && strike > 0.0 && sigma > 0.0 && tenure > 0.0)) {
        throw ConfigError("analytic pricing needs positive spot, strike, volatility and tenure");
    }
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

struct D12 {
    double d1;
    double d2;
};

D12 d_terms(const AnalyticInputs& in) {
    const double vol = in.sigma * std::sqrt(in.tenure);
    const double d1 = (std::log(in.spot / in.strike) + (in.r + 0.5 * in.sigma * in.sigma) * in.tenure) / vol;
    return {d1, d1 - vol};
}

// Generalised Black-Scholes-Merton call with cost of carry b.
double gbsm_call(double s, double k, double t, double r, double b, double v) {
    const double vol = v * std::sqrt(t);
    const double d1 = (std::log(s / k) + (b + 0.5 * v * v) * t) / vol;
    const double d2 = d1 - vol;
    return s * std::exp((b - r) * t) * norm_cdf(d1) - k * std::exp(-r * t) * norm_cdf(d2);
}

double bs93_phi(double s, double t, double gamma, double h, double i, double r, double b, double v) {
    const double vol = v * std::sqrt(t);
    const double lambda = (-r + gamma * b + 0.5 * gamma * (gamma - 1.0) * v * v) * t;
    const double d = -(std::log(s / h) + (b + (gamma - 0.5) * v * v) * t) / vol;
    const double kappa = 2.0 * b / (v * v) + (2.0 * gamma - 1.0);
    return std::exp(lambda) * std::pow(s, gamma) *
           (norm_cdf(d) - std::pow(i / s, kappa) * norm_cdf(d - 2.0 * std::log(i / s) / vol));
}

}  // namespace

double bs_call(const AnalyticInputs& in) {
    in.validate();
    const auto [d1, d2] = d_terms(in);
    return in.spot * norm_cdf(d1) - in.strike * std::exp(-in.r * in.tenure) * norm_cdf(d2);
}

double bs_put(const AnalyticInputs& in) {
    in.validate();
    const auto [d1, d2] = d_terms(in);
    return in.strike * std::exp(-in.r * in.tenure) * norm_cdf(-d2) - in.spot * norm_cdf(-d1);
}

double corridor_value(double spot, double k1, double k2, double r, double sigma, double tenure) {
    if (k2 < k1) throw ConfigError("corridor needs K2 >= K1");
    return bs_call({spot, k1, r, sigma, tenure}) - bs_call({spot, k2, r, sigma, tenure});
}

double bjerksund_stensland_call(double s, double x, double t, double r, double b, double v) {
    if (!(s > 0.0 && x > 0.0 && t > 0.0 && v > 0.0)) {
        throw ConfigError("Bjerksund-Stensland needs positive spot, strike, tenure and volatility");
    }
    if (b >= r) return gbsm_call(s, x, t, r, b, v);

    const double v2 = v * v;
    const double beta = (0.5 - b / v2) + std::sqrt(std::pow(b / v2 - 0.5, 2) + 2.0 * r / v2);
    const double b_inf = beta / (beta - 1.0) * x;
    const double b_zero = std::max(x, r / (r - b) * x);
    const double ht = -(b * t + 2.0 * v * std::sqrt(t)) * b_zero / (b_inf - b_zero);
    const double trigger = b_zero + (b_inf - b_zero) * (1.0 - std::exp(ht));

    if (s >= trigger) return s - x;

    const double alpha = (trigger - x) * std::pow(trigger, -beta);
    return alpha * std::pow(s, beta) - alpha * bs93_phi(s, t, beta, trigger, trigger, r, b, v) +
           bs93_phi(s, t, 1.0, trigger, trigger, r, b, v) - bs93_phi(s, t, 1.0, x, trigger, r, b, v) -
           x * bs93_phi(s, t, 0.0, trigger, trigger, r, b, v) +
           x * bs93_phi(s, t, 0.0, x, trigger, r, b, v);
}

double bjerksund_stensland_put(const AnalyticInputs& in) {
    in.validate();
    const double b = in.r;  // no dividends
    return bjerksund_stensland_call(in.strike, in.spot, in.tenure, in.r - b, -b, in.sigma);
}

double binomial_put(const AnalyticInputs& in, int n_steps, bool american) {
    in.validate();
    if (n_steps < 1) throw ConfigError("binomial tree needs at least one step");

    const double dt = in.tenure / n_steps;
    const double up = std::exp(in.sigma * std::sqrt(dt));
    const double down = 1.0 / up;
    const double growth = std::exp(in.r * dt);
    const double p = (growth - down) / (up - down);
    const double discount = 1.0 / growth;
    if (!std::isfinite(up) || !std::isfinite(p) || up <= down || p < 0.0 || p > 1.0) {
        throw ConfigError("binomial tree parameters are degenerate for this step count");
    }

    const auto n = static_cast<std::size_t>(n_steps);
    std::vector<double> values(n + 1);
    // Node j at level m has spot * up^(2j - m).
    for (std::size_t j = 0; j <= n; ++j) {
        const double s = in.spot * std::pow(up, 2.0 * static_cast<double>(j) - n_steps);
        values[j] = std::max(in.strike - s, 0.0);
    }
    for (std::size_t m = n; m-- > 0;) {
        for (std::size_t j = 0; j <= m; ++j) {
            double v = discount * (p * values[j + 1] + (1.0 - p) * values[j]);
            if (american) {
                const double s = in.spot * std::pow(up, 2.0 * static_cast<double>(j) - static_cast<double>(m));
                v = std::max(v, in.strike - s);
            }
            values[j] = v;
        }
    }
    return values[0];
}

}  // namespace mpbs::oracles
