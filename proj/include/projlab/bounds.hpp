#pragma once

#include "projlab/numeric.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace projlab {

// parameter outside the range where a formula is meaningful
struct BoundDomainError : std::domain_error {
    std::string formula;
    std::string parameter;
    BoundDomainError(std::string f, std::string p, const std::string& why)
        : std::domain_error(f + ": " + p + " " + why), formula(std::move(f)), parameter(std::move(p)) {}
};

double kaufman_bound(double sigma);
double falconer_howroyd_threshold(double gamma, double sigma);
Q falconer_howroyd_threshold(const Q& gamma, const Q& sigma);
double fh_lower(double gamma);
Q fh_lower(const Q& gamma);

// dim_p of {e : dim_p K_e <= sigma} for dim K = gamma in (0,1]
double estimate_bound1(double gamma, double sigma);  // 0 <= sigma <= gamma
double estimate_bound2(double gamma, double sigma);  // gamma/2 <= sigma <= gamma
// min over the applicable estimates; throws if none applies
double estimate_bound_min(double gamma, double sigma);
double estimate_bound1_reformulated(double gamma, double tau);

struct MainPThreshold {
    double threshold = 0.0;
    int cap = 2;
};
MainPThreshold mainP_threshold(double s);

double pss_bound(double gamma);
double rams_bound(double sigma);
double furstenberg_bound(double sigma, double dim_k);
double category_bound(double sigma, double m);

struct BigExParameters {
    long d = 0;
    Q tau_lo;  // open interval (tau_lo, 1)
    Q tau;     // midpoint default
    Q t;       // midpoint of (tau_lo, tau)
};
BigExParameters bigex_parameters(const Q& sigma);

// no closed form is known for kappa(alpha, eta); always empty
std::optional<double> bourgain_kappa(double alpha, double eta);
inline constexpr const char* kBourgainKappaNote = "unspecified in source";

struct BoundQuery {
    std::optional<double> gamma, sigma, s, tau, m, dim_k;
};

std::vector<std::string> bound_formulas();
// evaluates a named formula; missing parameters raise BoundDomainError
double evaluate_bound(const std::string& formula, const BoundQuery& q);
std::string format_bound_params(const std::string& formula, const BoundQuery& q);

}  // namespace projlab
