#include "kgbell/polytope.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace kgbell {

namespace {

using BigInt = boost::multiprecision::cpp_int;

struct Int64Overflow {};

// fraction-free incremental echelon form; Int is long long (checked) or BigInt
template <typename Int>
class ExactEchelon {
  public:
    explicit ExactEchelon(int cols) : cols_(cols) {}

    int rank() const { return static_cast<int>(rows_.size()); }

    // reduce r against the current rows; returns true if the rank grew
    bool add_row(std::vector<Int> r) {
        for (std::size_t t = 0; t < rows_.size(); ++t) {
            const int p = pivot_[t];
            if (r[p] == 0) continue;
            const Int rp = r[p];
            const Int ep = rows_[t][p];
            for (int c = 0; c < cols_; ++c) r[c] = sub_mul(ep, r[c], rp, rows_[t][c]);
            strip_content(r);
        }
        int p = -1;
        for (int c = 0; c < cols_; ++c)
            if (r[c] != 0) {
                p = c;
                break;
            }
        if (p < 0) return false;
        if (r[p] < 0)
            for (auto& x : r) x = -x;
        strip_content(r);
        pivot_.push_back(p);
        rows_.push_back(std::move(r));
        return true;
    }

  private:
    // ep*rc - rp*ec with overflow detection on the 64-bit path
    static Int sub_mul(const Int& ep, const Int& rc, const Int& rp, const Int& ec) {
        if constexpr (std::is_same_v<Int, long long>) {
            const __int128 v = static_cast<__int128>(ep) * rc - static_cast<__int128>(rp) * ec;
            if (v > INT64_MAX || v < INT64_MIN) throw Int64Overflow{};
            return static_cast<long long>(v);
        } else {
            return ep * rc - rp * ec;
        }
    }

    static void strip_content(std::vector<Int>& r) {
        Int g = 0;
        for (const auto& x : r) {
            if constexpr (std::is_same_v<Int, long long>)
                g = std::gcd(g, x);
            else
                g = boost::multiprecision::gcd(g, x < 0 ? Int(-x) : x);
            if (g == 1) return;
        }
        if (g > 1)
            for (auto& x : r) x /= g;
    }

    int cols_;
    std::vector<std::vector<Int>> rows_;
    std::vector<int> pivot_;
};

template <typename Int>
long long rank_of(const std::vector<DeterministicStrategy>& strategies, int cols,
                  long long early_stop) {
    ExactEchelon<Int> ech(cols);
    for (const auto& s : strategies) {
        if (ech.rank() >= early_stop) break; // rank cannot exceed the hyperplane dimension
        auto v = strategy_vector(s);
        std::vector<Int> r(v.begin(), v.end());
        ech.add_row(std::move(r));
    }
    return ech.rank();
}

} // namespace

std::vector<long long> strategy_vector(const DeterministicStrategy& s) {
    std::vector<long long> v;
    v.reserve(s.a.size() * s.b.size() + s.a.size() + s.b.size() + 1);
    for (int ai : s.a)
        for (int bj : s.b) v.push_back(static_cast<long long>(ai) * bj);
    for (int ai : s.a) v.push_back(ai);
    for (int bj : s.b) v.push_back(bj);
    v.push_back(1);
    return v;
}

std::vector<DeterministicStrategy> saturating_strategies(const BellInequality& ineq) {
    ineq.validate();
    if (ineq.mA > 20)
        throw std::invalid_argument("saturating_strategies: mA > 20 (enumeration guard)");
    const long long bound = local_bound_bruteforce(ineq, 1).bound;
    const int mA = ineq.mA, mB = ineq.mB;
    std::vector<std::vector<std::pair<int, int>>> bycol(mB);
    for (const auto& e : ineq.coeffs) bycol[e.col].emplace_back(e.row, e.value);

    std::vector<DeterministicStrategy> out;
    std::vector<int> a(mA), b(mB), c(mB);
    const unsigned long long total = 1ULL << mA;
    for (unsigned long long word = 0; word < total; ++word) {
        for (int i = 0; i < mA; ++i) a[i] = (word >> (mA - 1 - i)) & 1ULL ? -1 : 1;
        long long v = 0;
        for (int j = 0; j < mB; ++j) {
            long long cj = ineq.marginal_B[j];
            for (auto [i, w] : bycol[j]) cj += static_cast<long long>(w) * a[i];
            c[j] = static_cast<int>(cj);
            v += std::llabs(cj);
        }
        for (int i = 0; i < mA; ++i) v += static_cast<long long>(ineq.marginal_A[i]) * a[i];
        if (v != bound) continue;
        std::vector<int> freecols;
        for (int j = 0; j < mB; ++j) {
            b[j] = c[j] >= 0 ? 1 : -1;
            if (c[j] == 0) freecols.push_back(j);
        }
        if (freecols.size() > 12)
            throw std::runtime_error("saturating_strategies: free-column expansion exceeds 2^12");
        const unsigned long long combos = 1ULL << freecols.size();
        for (unsigned long long pat = 0; pat < combos; ++pat) {
            for (std::size_t t = 0; t < freecols.size(); ++t)
                b[freecols[t]] = (pat >> (freecols.size() - 1 - t)) & 1ULL ? -1 : 1;
            out.push_back({a, b});
        }
    }
    return out;
}

TightnessReport tightness(const BellInequality& ineq) {
    TightnessReport rep;
    rep.label = ineq.label;
    rep.local_bound = local_bound_bruteforce(ineq, 1).bound;
    const auto strategies = saturating_strategies(ineq);
    rep.saturating_count = static_cast<long long>(strategies.size());
    rep.ambient_dimension = static_cast<long long>(ineq.mA) * ineq.mB + ineq.mA + ineq.mB;
    const int cols = static_cast<int>(rep.ambient_dimension) + 1;
    try {
        rep.rank = rank_of<long long>(strategies, cols, rep.ambient_dimension);
    } catch (const Int64Overflow&) {
        rep.rank = rank_of<BigInt>(strategies, cols, rep.ambient_dimension);
    }
    rep.tight = rep.rank == rep.ambient_dimension;
    return rep;
}

std::string export_strategies_csv(const std::vector<DeterministicStrategy>& strategies) {
    std::ostringstream os;
    for (const auto& s : strategies) {
        bool first = true;
        for (const auto* part : {&s.a, &s.b})
            for (int x : *part) {
                if (!first) os << ",";
                os << x;
                first = false;
            }
        os << "\n";
    }
    return os.str();
}

InclusionEvidence reduce_inclusion(int n) {
    if (n < 3) throw std::invalid_argument("reduce_inclusion: n must be >= 3");
    InclusionEvidence ev;
    ev.n = n;
    const BellInequality src = build_inequality(n, n, true);
    ev.target = build_inequality(n - 1, n - 1, true);

    // fixed settings: the last plain index of each party at +1, every
    // composite setting involving it at -1
    std::vector<int> afix(src.mA, 0), bfix(src.mB, 0); // 0 = free
    afix[n - 1] = 1;
    bfix[n - 1] = 1;
    for (int i = 0; i < n - 1; ++i) {
        afix[n + pair_index(n, i, n - 1)] = -1; // Alice's composite over Bob pair (i, n-1)
        bfix[n + pair_index(n, i, n - 1)] = -1;
    }
    std::vector<int> amap(src.mA, -1), bmap(src.mB, -1);
    int ra = 0, rb = 0;
    for (int i = 0; i < src.mA; ++i)
        if (afix[i] == 0) amap[i] = ra++;
    for (int j = 0; j < src.mB; ++j)
        if (bfix[j] == 0) bmap[j] = rb++;

    BellInequality res;
    res.mA = ra;
    res.mB = rb;
    res.marginal_A.assign(ra, 0);
    res.marginal_B.assign(rb, 0);
    for (int i = 0; i < src.mA; ++i)
        if (afix[i] == 0) res.marginal_A[amap[i]] = src.marginal_A[i];
    for (int j = 0; j < src.mB; ++j)
        if (bfix[j] == 0) res.marginal_B[bmap[j]] = src.marginal_B[j];
    long long constant = 0;
    for (int i = 0; i < src.mA; ++i)
        if (afix[i] != 0) constant += static_cast<long long>(src.marginal_A[i]) * afix[i];
    for (int j = 0; j < src.mB; ++j)
        if (bfix[j] != 0) constant += static_cast<long long>(src.marginal_B[j]) * bfix[j];
    std::vector<std::vector<int>> coeff(ra, std::vector<int>(rb, 0));
    for (const auto& e : src.coeffs) {
        const bool fa = afix[e.row] != 0, fb = bfix[e.col] != 0;
        if (!fa && !fb)
            coeff[amap[e.row]][bmap[e.col]] += e.value;
        else if (fa && fb)
            constant += static_cast<long long>(e.value) * afix[e.row] * bfix[e.col];
        else if (fa)
            res.marginal_B[bmap[e.col]] += e.value * afix[e.row];
        else
            res.marginal_A[amap[e.row]] += e.value * bfix[e.col];
    }
    for (int i = 0; i < ra; ++i)
        for (int j = 0; j < rb; ++j)
            if (coeff[i][j] != 0) res.coeffs.push_back({i, j, coeff[i][j]});
    res.label = "reduced[" + src.label + "]";
    res.index_map = ev.target.index_map;
    res.validate();
    ev.residual = std::move(res);
    ev.constant_offset = constant;
    ev.coefficients_match = same_coefficients(ev.residual, ev.target);

    // local bounds on both sides: exhaustive when feasible, exact block
    // enumeration otherwise (family instances)
    ev.source_bound = src.mA <= 24 ? local_bound_bruteforce(src, 1).bound
                                   : local_bound_kl(n, n, true).bound;
    ev.target_bound = ev.target.mA <= 24 ? local_bound_bruteforce(ev.target, 1).bound
                                         : local_bound_kl(n - 1, n - 1, true).bound;
    ev.bounds_consistent = ev.source_bound == ev.target_bound + ev.constant_offset;
    if (!ev.coefficients_match)
        throw std::logic_error("reduce_inclusion: residual does not match the smaller instance");
    return ev;
}

} // namespace kgbell
