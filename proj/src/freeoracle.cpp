// SPDX-License-Identifier: Apache-2.0
#include "freelab/freeoracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "freelab/errors.hpp"
#include "freelab/spectra.hpp"

namespace freelab {

namespace {

bool pairs_with(const FreeLetter& a, const FreeLetter& b) {
    if (a.index != b.index) return false;
    switch (a.kind) {
        case FreeKind::semicircular: return b.kind == FreeKind::semicircular;
        case FreeKind::circular: return b.kind == FreeKind::circular_star;
        case FreeKind::circular_star: return b.kind == FreeKind::circular;
    }
    return false;
}

// Words of one factor of (P* P)^q arranged as a prefix tree.
struct Trie {
    std::vector<std::map<int, int>> children{{}};
    std::vector<int> coeff_of{-1};
    std::vector<const ComplexMatrix*> coeffs;

    explicit Trie(const MatrixPoly& p) {
        for (const auto& [word, coeff] : p.terms()) {
            int node = 0;
            for (int letter : word) {
                auto it = children[node].find(letter);
                if (it == children[node].end()) {
                    const int fresh = static_cast<int>(children.size());
                    children.emplace_back();
                    coeff_of.push_back(-1);
                    it = children[node].emplace(letter, fresh).first;
                }
                node = it->second;
            }
            coeff_of[node] = static_cast<int>(coeffs.size());
            coeffs.push_back(&coeff);
        }
    }
    int size() const { return static_cast<int>(children.size()); }
};

struct LetterEdge {
    int from;
    int to;
    int letter;
};

// c += a * b for k x k column-major blocks.
inline void gemm_acc(Complex* c, const Complex* a, const Complex* b, int k) {
    for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l) {
            const Complex blj = b[l + j * k];
            if (blj == Complex(0.0, 0.0)) continue;
            for (int i = 0; i < k; ++i) c[i + j * k] += a[i + l * k] * blj;
        }
}

}  // namespace

std::uint64_t free_word_moment(std::span<const FreeLetter> word, int max_length) {
    const int len = static_cast<int>(word.size());
    if (len > max_length)
        throw BudgetExceeded("word length " + std::to_string(len) + " exceeds cap " + std::to_string(max_length));
    for (const auto& l : word)
        if (l.index < 1) throw InvalidInput("free letter index must be >= 1");
    if (len % 2 != 0) return 0;
    // count[i][j]: pairings of the half-open interval [i, j).
    std::vector<std::vector<std::uint64_t>> count(len + 1, std::vector<std::uint64_t>(len + 1, 0));
    for (int i = 0; i <= len; ++i) count[i][i] = 1;
    for (int width = 2; width <= len; width += 2)
        for (int i = 0; i + width <= len; ++i) {
            const int j = i + width;
            std::uint64_t total = 0;
            for (int t = i + 1; t < j; t += 2)
                if (pairs_with(word[i], word[t])) total += count[i + 1][t] * count[t + 1][j];
            count[i][j] = total;
        }
    return count[0][len];
}

std::vector<FreeLetter> free_letters(const Word& word, int n, FreeModel model) {
    std::vector<FreeLetter> out;
    out.reserve(word.size());
    for (int letter : word) {
        if (letter < 1 || letter > 2 * n) throw InvalidInput("letter out of range");
        const int index = letter <= n ? letter : letter - n;
        FreeKind kind = FreeKind::semicircular;
        if (model == FreeModel::circular) kind = letter <= n ? FreeKind::circular : FreeKind::circular_star;
        out.push_back({index, kind});
    }
    return out;
}

std::vector<double> poly_star_moments(const MatrixPoly& p, int p_max, FreeModel model, std::uint64_t budget) {
    if (p_max < 1) throw InvalidInput("moment order must be >= 1");
    const int n = p.n();
    const int k = p.k();
    const int kk = k * k;
    if (p.is_zero()) return std::vector<double>(static_cast<std::size_t>(p_max), 0.0);

    const MatrixPoly pstar = adjoint(p);
    const Trie trie_star(pstar);
    const Trie trie_p(p);
    const int factors = 2 * p_max;

    std::vector<int> offset(factors + 1, 0);
    for (int f = 0; f < factors; ++f) offset[f + 1] = offset[f] + (f % 2 == 0 ? trie_star : trie_p).size();
    const int states = offset[factors] + 1;  // last state: root of the (empty) factor 2 p_max

    std::vector<LetterEdge> edges;
    std::vector<const ComplexMatrix*> emit_coeff(states, nullptr);
    std::vector<int> emit_to(states, -1);
    for (int f = 0; f < factors; ++f) {
        const Trie& t = f % 2 == 0 ? trie_star : trie_p;
        for (int node = 0; node < t.size(); ++node) {
            const int u = offset[f] + node;
            for (const auto& [letter, child] : t.children[node]) edges.push_back({u, offset[f] + child, letter});
            if (t.coeff_of[node] >= 0) {
                emit_coeff[u] = t.coeffs[t.coeff_of[node]];
                emit_to[u] = offset[f + 1];
            }
        }
    }

    auto compatible = [&](int a, int b) {
        if (model == FreeModel::circular) return b == star_letter(a, n);
        return (a - 1) % n == (b - 1) % n;
    };
    std::vector<std::vector<int>> out_edges(states);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) out_edges[edges[e].from].push_back(e);
    // partners[l]: edges whose letter pairs with letter l, sorted by source.
    std::vector<std::vector<int>> partners(2 * n + 1);
    for (int l = 1; l <= 2 * n; ++l) {
        for (int e = 0; e < static_cast<int>(edges.size()); ++e)
            if (compatible(l, edges[e].letter)) partners[l].push_back(e);
        std::sort(partners[l].begin(), partners[l].end(),
                  [&](int a, int b) { return edges[a].from < edges[b].from; });
    }

    const double cells = static_cast<double>(states) * states * kk;
    if (cells > 2.5e7)
        throw BudgetExceeded("moment table needs " + std::to_string(static_cast<long long>(cells)) +
                             " complex entries");
    double work = 0.0;
    for (const auto& e : edges)
        for (int pe : partners[e.letter])
            if (edges[pe].from >= e.to) work += static_cast<double>(states - edges[pe].to) * kk * k;
    work += static_cast<double>(states) * states * kk;
    if (work > static_cast<double>(budget))
        throw BudgetExceeded("moment expansion needs ~" + std::to_string(static_cast<long long>(work)) +
                             " multiply-adds, budget " + std::to_string(budget));

    std::vector<Complex> g(static_cast<std::size_t>(cells), Complex(0.0, 0.0));
    std::vector<char> nonzero(static_cast<std::size_t>(states) * states, 0);
    auto at = [&](int u, int v) { return g.data() + (static_cast<std::size_t>(u) * states + v) * kk; };
    auto nz = [&](int u, int v) -> char& { return nonzero[static_cast<std::size_t>(u) * states + v]; };

    for (int u = states - 1; u >= 0; --u) {
        Complex* guu = at(u, u);
        for (int i = 0; i < k; ++i) guu[i + i * k] = 1.0;
        nz(u, u) = 1;
        if (emit_coeff[u] != nullptr) {
            const int r = emit_to[u];
            const Complex* a = emit_coeff[u]->data();
            for (int v = r; v < states; ++v) {
                if (!nz(r, v)) continue;
                gemm_acc(at(u, v), a, at(r, v), k);
                nz(u, v) = 1;
            }
        }
        for (int e : out_edges[u]) {
            const int inner = edges[e].to;
            for (int pe : partners[edges[e].letter]) {
                const int w = edges[pe].from;
                if (w < inner || !nz(inner, w)) continue;
                const int after = edges[pe].to;
                const Complex* left = at(inner, w);
                for (int v = after; v < states; ++v) {
                    if (!nz(after, v)) continue;
                    gemm_acc(at(u, v), left, at(after, v), k);
                    nz(u, v) = 1;
                }
            }
        }
    }

    std::vector<double> moments;
    moments.reserve(static_cast<std::size_t>(p_max));
    for (int q = 1; q <= p_max; ++q) {
        const Complex* block = at(offset[0], offset[2 * q]);
        Complex trace(0.0, 0.0);
        for (int i = 0; i < k; ++i) trace += block[i + i * k];
        trace /= static_cast<double>(k);
        if (std::abs(trace.imag()) > 1e-9 * std::max(1.0, std::abs(trace.real())))
            throw NumericFailure("moment has imaginary residue " + std::to_string(trace.imag()), trace.real(),
                                 trace.imag());
        moments.push_back(trace.real());
    }
    return moments;
}

double poly_star_moment(const MatrixPoly& p, int q, FreeModel model, std::uint64_t budget) {
    return poly_star_moments(p, q, model, budget).back();
}

double norm_lower_bound(const MatrixPoly& p, int q, FreeModel model, std::uint64_t budget) {
    const double m = poly_star_moment(p, q, model, budget);
    return std::pow(std::max(0.0, m), 1.0 / (2.0 * q));
}

double degree_one_upper_bound(std::span<const ComplexMatrix> coeffs) {
    if (coeffs.empty()) throw InvalidInput("degree_one_upper_bound needs at least one coefficient");
    const Eigen::Index k = coeffs.front().rows();
    ComplexMatrix row = ComplexMatrix::Zero(k, k), col = ComplexMatrix::Zero(k, k);
    for (const auto& a : coeffs) {
        if (a.rows() != k || a.cols() != k) throw InvalidInput("coefficients must all be k x k");
        row += a * a.adjoint();
        col += a.adjoint() * a;
    }
    return 2.0 * std::max(std::sqrt(operator_norm(row)), std::sqrt(operator_norm(col)));
}

std::optional<double> certified_upper_bound(const MatrixPoly& p, FreeModel model) {
    if (p.degree() > 1) return std::nullopt;
    const int n = p.n();
    const double constant = operator_norm(p.coefficient({}));
    std::vector<ComplexMatrix> linear;
    const double r = 1.0 / std::sqrt(2.0);
    for (int j = 1; j <= n; ++j) {
        const ComplexMatrix a = p.coefficient({j});
        const ComplexMatrix b = p.coefficient({j + n});
        if (model == FreeModel::circular) {
            // a c + b c* = (a + b)/sqrt2 s + i (a - b)/sqrt2 s' with s, s' free semicirculars.
            linear.push_back(r * (a + b));
            linear.push_back(Complex(0.0, r) * (a - b));
        } else {
            linear.push_back(a + b);
        }
    }
    // Round outward so floating error never puts the bound below the norm.
    return (constant + degree_one_upper_bound(linear)) * (1.0 + 16 * std::numeric_limits<double>::epsilon());
}

double sampled_upper_bound(const MatrixPoly& p, const FreeNormOptions& opt, const RandomSource& rng) {
    const Ensemble kind = opt.model == FreeModel::circular ? Ensemble::ginibre : Ensemble::gue;
    const auto norms = sampled_norms(p, opt.probe_m, opt.reps, kind, rng.stream("probe", 0), opt.spectral, opt.exec);
    return (1.0 + opt.margin) * mean(norms);
}

std::pair<double, bool> best_upper_bound(const MatrixPoly& p, const FreeNormOptions& opt, const RandomSource& rng) {
    const auto certified = certified_upper_bound(p, opt.model);
    // Degree zero is exact; no sampling needed.
    if (certified && p.degree() == 0) return {*certified, true};
    const double sampled = sampled_upper_bound(p, opt, rng);
    if (certified && *certified <= sampled) return {*certified, true};
    return {sampled, false};
}

NormInterval free_norm_estimate(const MatrixPoly& p, const FreeNormOptions& opt, const RandomSource& rng) {
    if (opt.p_max < 1 || opt.probe_m < 1 || opt.reps < 1 || opt.margin < 0.0)
        throw InvalidInput("free_norm_estimate needs p_max, probe_m, reps >= 1 and margin >= 0");
    NormInterval out;
    out.probe_m = opt.probe_m;
    const auto moments = poly_star_moments(p, opt.p_max, opt.model, opt.budget);
    for (int q = 1; q <= opt.p_max; ++q) {
        const double root = std::pow(std::max(0.0, moments[q - 1]), 1.0 / (2.0 * q));
        if (root >= out.lower) {
            out.lower = root;
            out.p_used = q;
        }
    }
    const auto [upper, certified] = best_upper_bound(p, opt, rng);
    out.upper = std::max(upper, out.lower);
    out.upper_certified = certified;
    return out;
}

}  // namespace freelab
