#include "kgbell/bell.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace kgbell {

bool operator==(const CoeffEntry& x, const CoeffEntry& y) {
    return x.row == y.row && x.col == y.col && x.value == y.value;
}

bool BellInequality::has_marginals() const {
    auto nz = [](int v) { return v != 0; };
    return std::any_of(marginal_A.begin(), marginal_A.end(), nz) ||
           std::any_of(marginal_B.begin(), marginal_B.end(), nz);
}

std::vector<std::vector<int>> BellInequality::dense() const {
    std::vector<std::vector<int>> m(mA, std::vector<int>(mB, 0));
    for (const auto& e : coeffs) m[e.row][e.col] = e.value;
    return m;
}

bool BellInequality::is_symmetric() const {
    if (mA != mB) return false;
    auto m = dense();
    for (int i = 0; i < mA; ++i)
        for (int j = i + 1; j < mB; ++j)
            if (m[i][j] != m[j][i]) return false;
    return true;
}

void BellInequality::validate() const {
    if (mA < 1 || mB < 1) throw std::invalid_argument("BellInequality: empty setting range");
    if (static_cast<int>(marginal_A.size()) != mA || static_cast<int>(marginal_B.size()) != mB)
        throw std::invalid_argument("BellInequality: marginal vector length mismatch");
    const CoeffEntry* prev = nullptr;
    for (const auto& e : coeffs) {
        if (e.row < 0 || e.row >= mA || e.col < 0 || e.col >= mB)
            throw std::invalid_argument("BellInequality: coefficient index out of range");
        if (e.value == 0)
            throw std::invalid_argument("BellInequality: stored zero coefficient");
        if (prev) {
            if (prev->row > e.row || (prev->row == e.row && prev->col >= e.col))
                throw std::invalid_argument("BellInequality: coefficients not sorted/unique");
        }
        prev = &e;
    }
}

bool operator==(const BellInequality& x, const BellInequality& y) {
    return same_coefficients(x, y) && x.label == y.label;
}

bool same_coefficients(const BellInequality& x, const BellInequality& y) {
    return x.mA == y.mA && x.mB == y.mB && x.coeffs == y.coeffs &&
           x.marginal_A == y.marginal_A && x.marginal_B == y.marginal_B;
}

int pair_count(int n) { return n * (n - 1) / 2; }

int pair_index(int n, int i, int j) {
    // pairs (0,1),(0,2),...,(0,n-1),(1,2),... in lexicographic order
    return i * (n - 1) - i * (i - 1) / 2 + (j - i - 1);
}

static void sort_coeffs(std::vector<CoeffEntry>& cs) {
    std::sort(cs.begin(), cs.end(), [](const CoeffEntry& x, const CoeffEntry& y) {
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
}

static std::string family_index_map(int nA, int nB) {
    std::ostringstream os;
    os << "A1.." << "A" << nA << ": plain settings";
    if (pair_count(nB) > 0) {
        os << "; ";
        int r = nA;
        for (int i = 0; i < nB; ++i)
            for (int j = i + 1; j < nB; ++j)
                os << "A" << ++r << "=(B" << i + 1 << ",B" << j + 1 << ") ";
    }
    os << "| B1..B" << nB << ": plain settings";
    if (pair_count(nA) > 0) {
        os << "; ";
        int c = nB;
        for (int i = 0; i < nA; ++i)
            for (int j = i + 1; j < nA; ++j)
                os << "B" << ++c << "=(A" << i + 1 << ",A" << j + 1 << ") ";
    }
    std::string s = os.str();
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

BellInequality build_inequality(int nA, int nB, bool with_marginals) {
    if (nA < 1 || nB < 1) throw std::invalid_argument("build_inequality: sizes must be >= 1");
    if (with_marginals && nA != nB)
        throw std::invalid_argument("build_inequality: marginal variant requires nA == nB");
    BellInequality q;
    q.mA = nA + pair_count(nB);
    q.mB = nB + pair_count(nA);
    q.coeffs.reserve(static_cast<std::size_t>(nA) * nB + 2 * pair_count(nA) + 2 * pair_count(nB));
    for (int i = 0; i < nA; ++i)
        for (int j = 0; j < nB; ++j) q.coeffs.push_back({i, j, 1});
    for (int i = 0; i < nB; ++i)
        for (int j = i + 1; j < nB; ++j) {
            int r = nA + pair_index(nB, i, j);
            q.coeffs.push_back({r, i, 1});
            q.coeffs.push_back({r, j, -1});
        }
    for (int i = 0; i < nA; ++i)
        for (int j = i + 1; j < nA; ++j) {
            int c = nB + pair_index(nA, i, j);
            q.coeffs.push_back({i, c, 1});
            q.coeffs.push_back({j, c, -1});
        }
    sort_coeffs(q.coeffs);
    q.marginal_A.assign(q.mA, 0);
    q.marginal_B.assign(q.mB, 0);
    if (with_marginals) {
        for (int i = 0; i < nA; ++i) q.marginal_A[i] = 1;
        for (int j = 0; j < nB; ++j) q.marginal_B[j] = -1;
    }
    std::ostringstream lab;
    lab << (with_marginals ? "I'(" : "I(") << nA << "," << nB << ")";
    q.label = lab.str();
    q.index_map = family_index_map(nA, nB);
    q.family_nA = nA;
    q.family_nB = nB;
    q.family_marginals = with_marginals;
    q.validate();
    return q;
}

BellInequality chsh() {
    BellInequality q;
    q.mA = 2;
    q.mB = 2;
    q.coeffs = {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, -1}};
    q.marginal_A = {0, 0};
    q.marginal_B = {0, 0};
    q.label = "CHSH";
    q.index_map = "A1..A2, B1..B2: plain settings";
    return q;
}

long long evaluate_deterministic(const BellInequality& ineq,
                                 const std::vector<int>& a,
                                 const std::vector<int>& b) {
    if (static_cast<int>(a.size()) != ineq.mA || static_cast<int>(b.size()) != ineq.mB)
        throw std::invalid_argument("evaluate_deterministic: strategy length mismatch");
    auto pm = [](int v) { return v == 1 || v == -1; };
    if (!std::all_of(a.begin(), a.end(), pm) || !std::all_of(b.begin(), b.end(), pm))
        throw std::invalid_argument("evaluate_deterministic: entries must be +-1");
    long long v = 0;
    for (const auto& e : ineq.coeffs)
        v += static_cast<long long>(e.value) * a[e.row] * b[e.col];
    for (int i = 0; i < ineq.mA; ++i) v += static_cast<long long>(ineq.marginal_A[i]) * a[i];
    for (int j = 0; j < ineq.mB; ++j) v += static_cast<long long>(ineq.marginal_B[j]) * b[j];
    return v;
}

long long local_bound_closed(int nA, int nB) {
    if (nA < 1 || nB < 1) throw std::invalid_argument("local_bound_closed: sizes must be >= 1");
    // (nA^2 + nB^2 - 1)/2 for odd difference, (nA^2 + nB^2)/2 for even;
    // the integer division covers both since nA^2+nB^2 is odd iff nA-nB is
    long long s = static_cast<long long>(nA) * nA + static_cast<long long>(nB) * nB;
    return s / 2;
}

// canonical strategy with the first `flipsA` plain Alice settings at -1 (and
// analogously for Bob), composite settings set to the sign of the difference
// they track (+1 on ties)
static std::pair<std::vector<int>, std::vector<int>>
canonical_block_strategy(int nA, int nB, int flipsA, int flipsB) {
    std::vector<int> a(nA + pair_count(nB), 1), b(nB + pair_count(nA), 1);
    for (int i = 0; i < flipsA; ++i) a[i] = -1;
    for (int j = 0; j < flipsB; ++j) b[j] = -1;
    for (int i = 0; i < nB; ++i)
        for (int j = i + 1; j < nB; ++j)
            if (b[i] < b[j]) a[nA + pair_index(nB, i, j)] = -1;
    for (int i = 0; i < nA; ++i)
        for (int j = i + 1; j < nA; ++j)
            if (a[i] < a[j]) b[nB + pair_index(nA, i, j)] = -1;
    return {a, b};
}

LocalBoundReport local_bound_kl(int nA, int nB, bool with_marginals) {
    if (nA < 1 || nB < 1) throw std::invalid_argument("local_bound_kl: sizes must be >= 1");
    if (with_marginals && nA != nB)
        throw std::invalid_argument("local_bound_kl: marginal variant requires nA == nB");
    LocalBoundReport rep;
    rep.method = BoundMethod::kl_enumeration;
    long long best = 0;
    bool first = true;
    std::vector<std::pair<int, int>> argmax;
    for (int k = 0; k <= nA; ++k) {
        for (int l = 0; l <= nB; ++l) {
            long long v = static_cast<long long>(nA - 2 * k) * (nB - 2 * l) +
                          2LL * (nA - k) * k + 2LL * (nB - l) * l;
            if (with_marginals) v += (2LL * k - nA) - (2LL * l - nB);
            if (first || v > best) {
                best = v;
                argmax.clear();
                first = false;
            }
            if (v == best) argmax.emplace_back(k, l);
        }
    }
    rep.bound = best;
    for (auto [k, l] : argmax) {
        // (k,l) measures the objective at flip counts (nA-k, nB-l) when the
        // marginal correction is present, and at (k, l) when it is absent;
        // both readings scan the same grid
        int fa = with_marginals ? nA - k : k;
        int fb = with_marginals ? nB - l : l;
        rep.maximizers.push_back(canonical_block_strategy(nA, nB, fa, fb));
    }
    return rep;
}

LocalBoundReport local_bound_bruteforce(const BellInequality& ineq,
                                        std::size_t max_maximizers) {
    ineq.validate();
    if (ineq.mA > 24)
        throw std::invalid_argument("local_bound_bruteforce: mA > 24 (enumeration guard)");
    LocalBoundReport rep;
    rep.method = BoundMethod::brute_force;
    const int mA = ineq.mA, mB = ineq.mB;
    // column-major adjacency for fast column sums
    std::vector<std::vector<std::pair<int, int>>> bycol(mB);
    for (const auto& e : ineq.coeffs) bycol[e.col].emplace_back(e.row, e.value);

    std::vector<int> a(mA), c(mB);
    long long best = 0;
    bool first = true;
    const unsigned long long total = 1ULL << mA;
    for (unsigned long long word = 0; word < total; ++word) {
        // lexicographic over (a_1..a_mA) with +1 before -1
        for (int i = 0; i < mA; ++i) a[i] = (word >> (mA - 1 - i)) & 1ULL ? -1 : 1;
        long long v = 0;
        for (int j = 0; j < mB; ++j) {
            long long cj = ineq.marginal_B[j];
            for (auto [i, w] : bycol[j]) cj += static_cast<long long>(w) * a[i];
            c[j] = static_cast<int>(cj);
            v += std::llabs(cj);
        }
        for (int i = 0; i < mA; ++i) v += static_cast<long long>(ineq.marginal_A[i]) * a[i];
        if (first || v > best) {
            best = v;
            rep.maximizers.clear();
            rep.maximizers_truncated = false;
            first = false;
        }
        if (v == best && !rep.maximizers_truncated) {
            // expand zero-sum columns both ways; either sign attains the max
            std::vector<int> freecols;
            for (int j = 0; j < mB; ++j)
                if (c[j] == 0) freecols.push_back(j);
            std::vector<int> b(mB);
            for (int j = 0; j < mB; ++j) b[j] = c[j] >= 0 ? 1 : -1;
            if (freecols.size() > 20) {
                // record the canonical reply only; the full expansion is
                // astronomically large
                if (rep.maximizers.size() < max_maximizers) rep.maximizers.emplace_back(a, b);
                rep.maximizers_truncated = true;
            } else {
                const unsigned long long combos = 1ULL << freecols.size();
                for (unsigned long long pat = 0; pat < combos; ++pat) {
                    for (std::size_t t = 0; t < freecols.size(); ++t)
                        b[freecols[t]] = (pat >> (freecols.size() - 1 - t)) & 1ULL ? -1 : 1;
                    if (rep.maximizers.size() >= max_maximizers) {
                        rep.maximizers_truncated = true;
                        break;
                    }
                    rep.maximizers.emplace_back(a, b);
                }
            }
        }
    }
    rep.bound = best;
    return rep;
}

// --- text formats ---------------------------------------------------------

static std::string export_coordinate(const BellInequality& q) {
    std::ostringstream os;
    os << q.mA << " " << q.mB << " " << q.coeffs.size() << "\n";
    for (const auto& e : q.coeffs)
        os << e.row + 1 << " " << e.col + 1 << " " << e.value << "\n";
    return os.str();
}

static nlohmann::json to_json(const BellInequality& q) {
    nlohmann::json j;
    j["label"] = q.label;
    j["mA"] = q.mA;
    j["mB"] = q.mB;
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& e : q.coeffs) cs.push_back({e.row + 1, e.col + 1, e.value});
    j["coeffs"] = std::move(cs);
    j["marginal_A"] = q.marginal_A;
    j["marginal_B"] = q.marginal_B;
    if (q.family_nA > 0)
        j["family"] = {{"nA", q.family_nA}, {"nB", q.family_nB}, {"marginals", q.family_marginals}};
    return j;
}

std::string export_matrix(const BellInequality& ineq, ExportFormat format) {
    ineq.validate();
    switch (format) {
        case ExportFormat::coordinate_text: return export_coordinate(ineq);
        case ExportFormat::structured_text: return to_json(ineq).dump(2) + "\n";
    }
    throw std::invalid_argument("export_matrix: unsupported format");
}

static BellInequality import_coordinate(const std::string& text) {
    std::istringstream is(text);
    BellInequality q;
    long long nnz = 0;
    if (!(is >> q.mA >> q.mB >> nnz) || q.mA < 1 || q.mB < 1 || nnz < 0)
        throw std::invalid_argument("import_matrix: bad coordinate header");
    q.coeffs.reserve(static_cast<std::size_t>(nnz));
    for (long long t = 0; t < nnz; ++t) {
        int r, c, v;
        if (!(is >> r >> c >> v))
            throw std::invalid_argument("import_matrix: truncated coordinate entry list");
        q.coeffs.push_back({r - 1, c - 1, v});
    }
    std::string rest;
    if (is >> rest)
        throw std::invalid_argument("import_matrix: trailing content after the declared " +
                                    std::to_string(nnz) + " entries");
    sort_coeffs(q.coeffs);
    q.marginal_A.assign(q.mA, 0);
    q.marginal_B.assign(q.mB, 0);
    q.index_map = "A1..A" + std::to_string(q.mA) + ", B1..B" + std::to_string(q.mB) +
                  ": plain settings";
    q.validate();
    return q;
}

static BellInequality import_structured(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("import_matrix: bad structured text: ") + e.what());
    }
    BellInequality q;
    q.label = j.at("label").get<std::string>();
    q.mA = j.at("mA").get<int>();
    q.mB = j.at("mB").get<int>();
    for (const auto& t : j.at("coeffs"))
        q.coeffs.push_back({t.at(0).get<int>() - 1, t.at(1).get<int>() - 1, t.at(2).get<int>()});
    sort_coeffs(q.coeffs);
    q.marginal_A = j.at("marginal_A").get<std::vector<int>>();
    q.marginal_B = j.at("marginal_B").get<std::vector<int>>();
    if (j.contains("family")) {
        q.family_nA = j["family"].at("nA").get<int>();
        q.family_nB = j["family"].at("nB").get<int>();
        q.family_marginals = j["family"].at("marginals").get<bool>();
        q.index_map = family_index_map(q.family_nA, q.family_nB);
    } else {
        q.index_map = "A1..A" + std::to_string(q.mA) + ", B1..B" + std::to_string(q.mB) +
                      ": plain settings";
    }
    q.validate();
    return q;
}

BellInequality import_matrix(const std::string& text) {
    auto pos = text.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos) throw std::invalid_argument("import_matrix: empty input");
    return text[pos] == '{' ? import_structured(text) : import_coordinate(text);
}

} // namespace kgbell
