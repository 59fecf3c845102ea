#include "projlab/bounds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <functional>

namespace projlab {

namespace {
void require(bool ok, const char* formula, const char* param, const char* why) {
    if (!ok) throw BoundDomainError(formula, param, why);
}
bool finite(double x) { return std::isfinite(x); }
}  // namespace

double kaufman_bound(double sigma) {
    require(finite(sigma) && sigma >= 0 && sigma <= 1, "kaufman", "sigma", "must lie in [0,1]");
    return sigma;
}

double falconer_howroyd_threshold(double gamma, double sigma) {
    require(finite(gamma) && gamma >= 0 && gamma <= 2, "falconer-howroyd", "gamma", "must lie in [0,2]");
    require(finite(sigma) && sigma > 0 && sigma <= 1, "falconer-howroyd", "sigma", "must lie in (0,1]");
    return gamma / (1 + (1 / sigma - 0.5) * gamma);
}

Q falconer_howroyd_threshold(const Q& gamma, const Q& sigma) {
    require(gamma >= 0 && gamma <= 2, "falconer-howroyd", "gamma", "must lie in [0,2]");
    require(sigma > 0 && sigma <= 1, "falconer-howroyd", "sigma", "must lie in (0,1]");
    return gamma / (1 + (1 / sigma - Q(1, 2)) * gamma);
}

double fh_lower(double gamma) {
    require(finite(gamma) && gamma >= 0 && gamma <= 2, "fh-lower", "gamma", "must lie in [0,2]");
    return 2 * gamma / (2 + gamma);
}

Q fh_lower(const Q& gamma) {
    require(gamma >= 0 && gamma <= 2, "fh-lower", "gamma", "must lie in [0,2]");
    return 2 * gamma / (2 + gamma);
}

double estimate_bound1(double gamma, double sigma) {
    require(finite(gamma) && gamma > 0 && gamma <= 1, "estimate1", "gamma", "must lie in (0,1]");
    require(finite(sigma) && sigma >= 0 && sigma <= gamma, "estimate1", "sigma", "must lie in [0,gamma]");
    return sigma * gamma / (gamma + sigma * (gamma - 1));
}

double estimate_bound2(double gamma, double sigma) {
    require(finite(gamma) && gamma > 0 && gamma <= 1, "estimate2", "gamma", "must lie in (0,1]");
    require(finite(sigma) && sigma >= gamma / 2 && sigma <= gamma, "estimate2", "sigma", "must lie in [gamma/2,gamma]");
    return (2 * sigma - gamma) * (1 - gamma) / (gamma / 2) + sigma;
}

double estimate_bound_min(double gamma, double sigma) {
    double v = estimate_bound1(gamma, sigma);
    if (sigma >= gamma / 2) v = std::min(v, estimate_bound2(gamma, sigma));
    return v;
}

double estimate_bound1_reformulated(double gamma, double tau) {
    require(finite(gamma) && gamma > 0 && gamma <= 1, "estimate1-tau", "gamma", "must lie in (0,1]");
    require(finite(tau) && tau >= 0 && tau <= 1, "estimate1-tau", "tau", "must lie in [0,1]");
    return tau * gamma / (tau * gamma + (1 - tau));
}

MainPThreshold mainP_threshold(double s) {
    require(finite(s) && s >= 0 && s <= 2, "mainP", "s", "must lie in [0,2]");
    return {s / 2, 2};
}

double pss_bound(double gamma) {
    require(finite(gamma) && gamma >= 0 && gamma <= 2, "pss", "gamma", "must lie in [0,2]");
    return gamma;
}

double rams_bound(double sigma) {
    require(finite(sigma) && sigma >= 0 && sigma <= 1, "rams", "sigma", "must lie in [0,1]");
    return sigma;
}

double furstenberg_bound(double sigma, double dim_k) {
    require(finite(dim_k) && dim_k >= 0 && dim_k <= 2, "furstenberg", "dim_k", "must lie in [0,2]");
    require(finite(sigma) && sigma >= 0 && sigma < dim_k, "furstenberg", "sigma", "must lie in [0,dim_k)");
    return sigma;
}

double category_bound(double sigma, double m) {
    require(finite(m) && m >= 0 && m <= 1, "category", "m", "must lie in [0,1]");
    require(finite(sigma) && sigma >= 0 && sigma <= m, "category", "sigma", "must lie in [0,m]");
    return 1 + sigma - m;
}

BigExParameters bigex_parameters(const Q& sigma) {
    require(sigma > Q(3, 4) && sigma < 1, "bigex", "sigma", "must lie in (3/4,1)");
    BigExParameters p;
    p.d = ceil_q(Q(3) / (1 - sigma)).get_si();
    p.tau_lo = Q(p.d + 1, p.d + 2);
    p.tau = (p.tau_lo + 1) / 2;
    p.t = (p.tau_lo + p.tau) / 2;
    p.tau.canonicalize();
    p.t.canonicalize();
    return p;
}

std::optional<double> bourgain_kappa(double, double) { return std::nullopt; }

namespace {
double need(const std::optional<double>& v, const char* formula, const char* name) {
    if (!v) throw BoundDomainError(formula, name, "is required");
    return *v;
}

struct FormulaDef {
    std::vector<std::string> params;
    std::function<double(const BoundQuery&)> eval;
};

const std::map<std::string, FormulaDef>& registry() {
    static const std::map<std::string, FormulaDef> r = {
        {"kaufman", {{"sigma"}, [](const BoundQuery& q) { return kaufman_bound(need(q.sigma, "kaufman", "sigma")); }}},
        {"falconer-howroyd",
         {{"gamma", "sigma"},
          [](const BoundQuery& q) {
              return falconer_howroyd_threshold(need(q.gamma, "falconer-howroyd", "gamma"),
                                                need(q.sigma, "falconer-howroyd", "sigma"));
          }}},
        {"fh-lower", {{"gamma"}, [](const BoundQuery& q) { return fh_lower(need(q.gamma, "fh-lower", "gamma")); }}},
        {"estimate1",
         {{"gamma", "sigma"},
          [](const BoundQuery& q) {
              return estimate_bound1(need(q.gamma, "estimate1", "gamma"), need(q.sigma, "estimate1", "sigma"));
          }}},
        {"estimate2",
         {{"gamma", "sigma"},
          [](const BoundQuery& q) {
              return estimate_bound2(need(q.gamma, "estimate2", "gamma"), need(q.sigma, "estimate2", "sigma"));
          }}},
        {"estimate-min",
         {{"gamma", "sigma"},
          [](const BoundQuery& q) {
              return estimate_bound_min(need(q.gamma, "estimate-min", "gamma"), need(q.sigma, "estimate-min", "sigma"));
          }}},
        {"estimate1-tau",
         {{"gamma", "tau"},
          [](const BoundQuery& q) {
              return estimate_bound1_reformulated(need(q.gamma, "estimate1-tau", "gamma"),
                                                  need(q.tau, "estimate1-tau", "tau"));
          }}},
        {"mainP", {{"s"}, [](const BoundQuery& q) { return mainP_threshold(need(q.s, "mainP", "s")).threshold; }}},
        {"pss", {{"gamma"}, [](const BoundQuery& q) { return pss_bound(need(q.gamma, "pss", "gamma")); }}},
        {"rams", {{"sigma"}, [](const BoundQuery& q) { return rams_bound(need(q.sigma, "rams", "sigma")); }}},
        {"furstenberg",
         {{"sigma", "dim_k"},
          [](const BoundQuery& q) {
              return furstenberg_bound(need(q.sigma, "furstenberg", "sigma"), need(q.dim_k, "furstenberg", "dim_k"));
          }}},
        {"category",
         {{"sigma", "m"},
          [](const BoundQuery& q) {
              return category_bound(need(q.sigma, "category", "sigma"), need(q.m, "category", "m"));
          }}},
        {"bigex-d",
         {{"sigma"},
          [](const BoundQuery& q) {
              // shortest decimal form so 0.8 means 4/5
              char buf[64];
              std::snprintf(buf, sizeof buf, "%.15g", need(q.sigma, "bigex-d", "sigma"));
              return static_cast<double>(bigex_parameters(parse_q(buf)).d);
          }}},
    };
    return r;
}

const std::optional<double>& field(const BoundQuery& q, const std::string& name) {
    if (name == "gamma") return q.gamma;
    if (name == "sigma") return q.sigma;
    if (name == "s") return q.s;
    if (name == "tau") return q.tau;
    if (name == "m") return q.m;
    return q.dim_k;
}
}  // namespace

std::vector<std::string> bound_formulas() {
    std::vector<std::string> out;
    for (auto& [k, v] : registry()) out.push_back(k);
    return out;
}

double evaluate_bound(const std::string& formula, const BoundQuery& q) {
    auto it = registry().find(formula);
    if (it == registry().end()) throw BoundDomainError(formula, "formula", "is unknown");
    return it->second.eval(q);
}

std::string format_bound_params(const std::string& formula, const BoundQuery& q) {
    auto it = registry().find(formula);
    if (it == registry().end()) throw BoundDomainError(formula, "formula", "is unknown");
    std::string out;
    for (auto& name : it->second.params) {
        auto& v = field(q, name);
        if (!v) continue;
        // shortest text that round-trips
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, *v);
        if (!out.empty()) out += ';';
        out += name + "=" + std::string(buf, res.ptr);
    }
    return out;
}

}  // namespace projlab
