#include "projlab/constructions.hpp"

#include "projlab/bounds.hpp"
#include "projlab/covering.hpp"
#include "projlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <tuple>

namespace projlab {

namespace {

// one factor of a star product: a row of k balls, or B_{n,e}
struct Factor {
    bool row = false;
    long size = 0;  // k for a row, n for a block
    ExactDir e{0, 1};
};
using Chain = std::vector<Factor>;

bool is_identity(const Factor& f) { return f.size <= 1; }

void append(Chain& c, const Factor& f) {
    if (!is_identity(f)) c.push_back(f);
}

// covering bounds for the factors of a chain, all projected along one direction xi
class Oracle {
public:
    Oracle(long d, ExactDir xi) : d_(d), xi_(std::move(xi)) {}

    Q diameter(const Factor& f) const {
        if (is_identity(f)) return 1;
        if (f.row) return make_q(1, f.size);
        return make_q(Z(1), pow_z(factorial(static_cast<unsigned long>(f.size)), static_cast<unsigned long>(d_ + 2)));
    }

    const ColumnProjection& projection(const Factor& f) {
        ExactDir dir = f.row ? xi_ : rotate_exact_inverse(f.e, xi_);
        Key k{f.row, f.size, dir.a, dir.b};
        auto it = proj_.find(k);
        if (it != proj_.end()) return it->second;
        ColumnSet c = f.row ? ball_row_columns(f.size) : block_B_columns(f.size, d_);
        return proj_.emplace(k, project_columns(c, dir)).first->second;
    }

    Z card(const Factor& f) { return projection(f).skeleton_card; }

    // upper bound for N(rho_xi(f), r); empty when r is below the integer resolution
    std::optional<Z> cover(const Factor& f, const Q& r) {
        if (r >= Q(1, 2)) return Z(1);
        const ColumnProjection& p = projection(f);
        auto key = std::make_pair(&p, r);
        auto it = cov_.find(key);
        if (it != cov_.end()) return it->second;
        if (r * Q(p.den) < Q(1, 1 << 30)) return std::nullopt;
        Z n = covering_upper(p, r);
        cov_.emplace(key, n);
        return n;
    }

    // projection-cover recursion N(K1 * K2, r) <= min(N(K1, r), card rho(S_K1) N(K2, r / diam K1))
    Z chain_bound(const Chain& c, const Q& r) {
        if (c.empty()) return *cover(Factor{}, r);
        std::vector<Q> radii(c.size());
        radii[0] = r;
        for (std::size_t i = 1; i < c.size(); ++i) radii[i] = radii[i - 1] / diameter(c[i - 1]);
        std::optional<Z> acc = cover(c.back(), radii.back());
        if (!acc) throw std::domain_error("bigex: radius below resolution for the innermost factor");
        for (std::size_t i = c.size() - 1; i-- > 0;) {
            Z via = card(c[i]) * *acc;
            std::optional<Z> direct = cover(c[i], radii[i]);
            acc = direct && *direct < via ? *direct : via;
        }
        return *acc;
    }

private:
    using Key = std::tuple<bool, long, Z, Z>;
    long d_;
    ExactDir xi_;
    std::map<Key, ColumnProjection> proj_;
    std::map<std::pair<const ColumnProjection*, Q>, Z> cov_;
};

// {2^-k >= lo} together with lo itself
std::vector<Q> dyadic_grid(const Q& lo) {
    std::vector<Q> g;
    for (Q x = 1; x >= lo; x /= 2) g.push_back(x);
    if (g.back() != lo) g.push_back(lo);
    return g;
}

bool within_power(const Z& n, const Q& delta, const Q& tau) {
    // n <= delta^(-tau)
    return cmp_with_power(Q(n), 1 / delta, tau.get_num().get_si(), tau.get_den().get_si()) <= 0;
}

std::string dir_str(const ExactDir& e) { return "(" + e.a.get_str() + "," + e.b.get_str() + ")"; }

long double log2_z(const Z& z) {
    long e = 0;
    double m = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log2(static_cast<long double>(m)) + e;
}

struct State {
    long d = 0;
    Q tau, t, s, s_tau;
    long pmax = 0;
    unsigned threads = 0;
    std::vector<ExactDir> dirs;  // tracked directions of the tree so far
    Chain chain;                 // the smallest set K_b
    Q c_b = 1, delta_b = 1;
    Z card_b = 1;                // card S_{K_b}
};

// (IND) for the current tree: N(rho_xi(K_b * B_{p,e}), c_b delta) <= delta^-tau
void check_ind(const State& st, BigExTree& tree) {
    std::vector<std::uint64_t> checks(st.dirs.size(), 0), fails(st.dirs.size(), 0);
    std::vector<std::string> wit(st.dirs.size());
    parallel_for(st.dirs.size(), st.threads, [&](std::size_t xi_i) {
        Oracle o(st.d, st.dirs[xi_i]);
        for (const ExactDir& e : st.dirs)
            for (long p = 0; p <= st.pmax; ++p) {
                Chain c = st.chain;
                append(c, Factor{false, p, e});
                Q lo = st.delta_b / Q(pow_z(factorial(static_cast<unsigned long>(p)), static_cast<unsigned long>(st.d + 2)));
                for (const Q& delta : dyadic_grid(lo)) {
                    ++checks[xi_i];
                    Z n = o.chain_bound(c, st.c_b * delta);
                    if (!within_power(n, delta, st.tau)) {
                        ++fails[xi_i];
                        if (wit[xi_i].empty())
                            wit[xi_i] = "(IND) xi=" + dir_str(st.dirs[xi_i]) + " e=" + dir_str(e) + " p=" + std::to_string(p) +
                                        " delta=2^" + std::to_string(-static_cast<long>(std::llround(-std::log2(to_ldouble(delta))))) +
                                        " N<=" + n.get_str();
                    }
                }
            }
    });
    for (std::size_t i = 0; i < st.dirs.size(); ++i) {
        tree.ind_checks += checks[i];
        tree.ind_failures += fails[i];
        if (!wit[i].empty() && tree.witnesses.size() < 20) tree.witnesses.push_back(wit[i]);
    }
}

// (vii): every e in I_v moves the projection of K_v by at most delta_v / 4
void check_vii(const State& st, BigExVertex& v, BigExTree& tree) {
    Oracle o(st.d, v.e);
    v.vii_ok = true;
    for (const Q& delta : dyadic_grid(v.delta)) {
        ++v.vii_checks;
        Z n = o.chain_bound(st.chain, v.c * delta - v.delta / 4);
        if (!within_power(n, delta, st.tau)) {
            v.vii_ok = false;
            if (tree.witnesses.size() < 20)
                tree.witnesses.push_back("(vii) e=" + dir_str(v.e) + " N<=" + n.get_str() + " at delta=" + delta.get_str());
        }
    }
}

// max over n <= nmeas and dyadic delta >= (n!)^-(2+d) of N(rho_(0,1)(B_n), delta) delta^tau, and the
// largest dyadic delta_s with N <= delta^-s on [(n!)^-2, delta_s]
std::pair<double, double> measure_root_constants(long d, const Q& tau, const Q& s, long nmeas) {
    Oracle o(d, ExactDir{0, 1});
    long double best = -1e300L;
    long worst_k = -1;
    for (long n = 0; n <= nmeas; ++n) {
        Factor f{false, n, ExactDir{0, 1}};
        Z F = factorial(static_cast<unsigned long>(n));
        Q lo = make_q(Z(1), pow_z(F, static_cast<unsigned long>(d + 2)));
        Q lo_s = make_q(Z(1), F * F);
        long k = 0;
        for (Q delta = 1; delta >= lo; delta /= 2, ++k) {
            Z N = *o.cover(f, delta);
            best = std::max(best, log2_z(N) - k * to_ldouble(tau));
            if (delta >= lo_s && !within_power(N, delta, s)) worst_k = std::max(worst_k, k);
        }
    }
    return {static_cast<double>(std::exp2(best)), std::ldexp(1.0, static_cast<int>(-(worst_k + 1)))};
}

// C_{T+}: max over tracked pairs and p <= pmax of N(rho_xi(B_{p,e}), delta) delta^tau
double measure_c_tplus(const State& st, const std::vector<ExactDir>& dirs) {
    std::vector<long double> best(dirs.size(), -1e300L);
    parallel_for(dirs.size(), st.threads, [&](std::size_t i) {
        Oracle o(st.d, dirs[i]);
        for (const ExactDir& e : dirs)
            for (long p = 0; p <= st.pmax; ++p) {
                Factor f{false, p, e};
                Q lo = make_q(Z(1), pow_z(factorial(static_cast<unsigned long>(p)), static_cast<unsigned long>(st.d + 2)));
                long k = 0;
                for (Q delta = 1; delta >= lo; delta /= 2, ++k)
                    best[i] = std::max(best[i], log2_z(*o.cover(f, delta)) - k * to_ldouble(st.tau));
            }
    });
    return static_cast<double>(std::exp2(*std::max_element(best.begin(), best.end())));
}

constexpr long kMeasureN = 5;
constexpr long kMaxM = 64;

}  // namespace

bool BigExTree::ok() const {
    if (ind_checks == 0 || ind_failures != 0 || vertices.empty()) return false;
    for (auto& v : vertices)
        if (!v.vii_ok || v.c < 1 || v.c >= 2) return false;
    for (auto& x : expansions)
        if (!(x.in_arc && x.skeleton_ok && x.cover_ok && x.cw_ok && x.delta_s_ok && x.arcs_disjoint)) return false;
    return true;
}

BigExTree construct_bigex(const BigExParams& p) {
    if (p.depth < 0) throw std::invalid_argument("construct_bigex: depth must be non-negative");
    if (p.pmax < 0) throw std::invalid_argument("construct_bigex: pmax must be non-negative");
    if (p.nmax < 3) throw std::invalid_argument("construct_bigex: nmax must be at least 3");
    BigExParameters bp = bigex_parameters(p.sigma);
    BigExTree tree;
    tree.sigma = p.sigma;
    tree.d = bp.d;
    tree.tau = bp.tau;
    tree.t = bp.t;
    tree.s_tau = ((2 + bp.d) * bp.tau - bp.d) / 2;
    tree.s_tau.canonicalize();
    tree.s = (Q(1, 2) + tree.s_tau) / 2;
    tree.s.canonicalize();

    State st;
    st.d = bp.d;
    st.tau = tree.tau;
    st.t = tree.t;
    st.s = tree.s;
    st.s_tau = tree.s_tau;
    st.pmax = p.pmax;
    st.threads = p.threads;

    // root: k_r balls on [-1/2,1/2] with c_tau k_r^-tau <= 1
    std::tie(tree.c_tau, tree.delta_s) = measure_root_constants(st.d, st.tau, st.s, std::min(p.nmax, kMeasureN));
    long k_r = 1;
    while (static_cast<long double>(tree.c_tau) * std::pow(static_cast<long double>(k_r), -to_ldouble(st.tau)) > 1) ++k_r;
    tree.k_root = k_r;
    BigExVertex root;
    root.e = ExactDir{0, 1};
    root.child_k = 0;
    root.c = 1;
    root.delta = make_q(1, k_r);
    st.dirs = {root.e};
    append(st.chain, Factor{true, k_r, root.e});
    st.c_b = 1;
    st.delta_b = root.delta;
    st.card_b = k_r;
    check_vii(st, root, tree);
    tree.vertices.push_back(root);
    check_ind(st, tree);

    std::size_t leaf = 0;
    for (int level = 1; level <= p.depth; ++level) {
        const BigExVertex v = tree.vertices[leaf];
        BigExExpansion x;
        std::vector<ExactDir> kids;
        std::vector<Z> kid_k;
        Z F, K, Fd;
        bool found = false;
        for (long n = 3; n <= p.nmax && !found; ++n) {
            F = factorial(static_cast<unsigned long>(n));
            K = pow_z(F, static_cast<unsigned long>(st.d - 3));
            Fd = pow_z(F, static_cast<unsigned long>(st.d));
            std::vector<std::string> why;
            // tracked children: both ends and the middle of D_n
            kid_k = {Z(1), Z(2), K / 2, K - 1, K};
            std::sort(kid_k.begin(), kid_k.end());
            kid_k.erase(std::unique(kid_k.begin(), kid_k.end()), kid_k.end());
            // (a) children inside int I_v: the angle to e_v is at most atan(K / F^d) <= F^-3
            bool in_arc = make_q(K, Fd) < v.delta / 2;
            if (!in_arc) why.push_back("n=" + std::to_string(n) + ": children leave the parent arc");
            // (b) card S_{K_b} card rho(S_n) <= (n!)^(t(2+d)) along every tracked direction
            bool skeleton_ok = true;
            Factor blk{false, n, v.e};
            Q tpow = st.t * (2 + st.d);
            tpow.canonicalize();
            std::vector<ExactDir> check_dirs = st.dirs;
            for (auto& k : kid_k) check_dirs.push_back(direction_D(n, st.d, k, v.e));
            for (auto& xi : check_dirs) {
                // a column of (n!)^d balls projects injectively unless xi is horizontal; test that first
                Z lower = rotate_exact_inverse(v.e, xi).b != 0 ? Z(Fd) : Z(1);
                if (cmp_with_power(Q(st.card_b * lower), Q(F), tpow.get_num().get_si(), tpow.get_den().get_si()) > 0) {
                    skeleton_ok = false;
                    why.push_back("n=" + std::to_string(n) + ": card S_{K_b} (n!)^d already exceeds the skeleton bound");
                    break;
                }
                Oracle o(st.d, xi);
                if (cmp_with_power(Q(st.card_b * o.card(blk)), Q(F), tpow.get_num().get_si(), tpow.get_den().get_si()) > 0) {
                    skeleton_ok = false;
                    why.push_back("n=" + std::to_string(n) + ": skeleton projection bound fails along " + dir_str(xi));
                    break;
                }
            }
            // (c) N(rho_{e_v}(K_b * B_{n,e_v}), delta_b (n!)^-2) <= (n!)^(2 s(tau)) / 2
            bool cover_ok = false;
            if (skeleton_ok) {
                Oracle o(st.d, v.e);
                Chain c = st.chain;
                append(c, blk);
                Z N = o.chain_bound(c, st.delta_b / Q(F * F));
                Q sp = 2 * st.s_tau;
                sp.canonicalize();
                cover_ok = cmp_with_power(Q(2 * N), Q(F), sp.get_num().get_si(), sp.get_den().get_si()) <= 0;
                if (!cover_ok) why.push_back("n=" + std::to_string(n) + ": covering at delta_b (n!)^-2 is " + N.get_str());
            }
            // (d) c_w < 2
            Q c_w = st.c_b + 2 / (Q(F) * st.delta_b);
            bool cw_ok = c_w < 2;
            if (!cw_ok) why.push_back("n=" + std::to_string(n) + ": c_w = " + c_w.get_str() + " >= 2");
            // (e) (n!)^-2 <= delta_s
            bool ds_ok = Q(1) / Q(F * F) <= q_from_double(tree.delta_s);
            if (!ds_ok) why.push_back("n=" + std::to_string(n) + ": (n!)^-2 above the measured delta_s");
            if (in_arc && skeleton_ok && cover_ok && cw_ok && ds_ok) {
                found = true;
                x.n = n;
                x.in_arc = x.skeleton_ok = x.cover_ok = x.cw_ok = x.delta_s_ok = true;
                x.c_w = c_w;
                x.children = K;
                for (std::size_t i = st.dirs.size(); i < check_dirs.size(); ++i) kids.push_back(check_dirs[i]);
            } else {
                x.rejected.insert(x.rejected.end(), why.begin(), why.end());
            }
        }
        if (!found)
            throw BigExSearchError("construct_bigex: no n <= " + std::to_string(p.nmax) + " expands level " +
                                       std::to_string(level),
                                   x.rejected);

        std::vector<ExactDir> dirs_plus = st.dirs;
        dirs_plus.insert(dirs_plus.end(), kids.begin(), kids.end());
        x.c_tplus = measure_c_tplus(st, dirs_plus);
        // m with 2 C (n!)^(m (2+d) (t - tau)) <= 1, then large enough for disjoint, nested arcs
        long double rate = (2 + st.d) * to_ldouble(st.tau - st.t) * log2_z(F);
        long m = std::max<long>(1, static_cast<long>(std::ceil(std::log2(2.0L * x.c_tplus) / rate)));
        Q base = st.delta_b / Q(F * Fd * F);  // delta_b (n!)^-(2+d)
        Q tan_max = make_q(K, Fd);
        Q sep = make_q(Z(1), Fd) / (1 + tan_max * tan_max);
        for (;; ++m) {
            if (m > kMaxM) throw BigExSearchError("construct_bigex: no m separates the child arcs", {});
            Q dw = pow_q(base, m);
            if (dw < sep && tan_max + dw / 2 < v.delta / 2) break;
        }
        x.m = m;
        x.delta_w = pow_q(base, m);
        x.arcs_disjoint = true;

        Chain unit = st.chain;
        append(unit, Factor{false, x.n, v.e});
        Chain cw;
        for (long i = 0; i < m; ++i) cw.insert(cw.end(), unit.begin(), unit.end());
        st.chain = cw;
        st.card_b = pow_z(st.card_b * pow_z(F, static_cast<unsigned long>(st.d + 2)), static_cast<unsigned long>(m));
        st.c_b = x.c_w;
        st.delta_b = x.delta_w;
        st.dirs = dirs_plus;

        std::size_t first_child = tree.vertices.size();
        for (std::size_t i = 0; i < kids.size(); ++i) {
            BigExVertex w;
            w.height = v.height + 1;
            w.e = kids[i];
            w.child_k = kid_k[i];
            w.c = x.c_w;
            w.delta = x.delta_w;
            check_vii(st, w, tree);
            tree.vertices.push_back(w);
        }
        tree.expansions.push_back(x);
        check_ind(st, tree);
        leaf = first_child;
    }
    return tree;
}

}  // namespace projlab
