// SPDX-License-Identifier: Apache-2.0
#include "freelab/ncpoly.hpp"

#include <algorithm>
#include <string>

#include <nlohmann/json.hpp>

#include "freelab/errors.hpp"
#include "freelab/rng.hpp"

namespace freelab {

namespace {

bool is_exact_zero(const ComplexMatrix& m) {
    return (m.array() == Complex(0.0, 0.0)).all();
}

ComplexMatrix random_coefficient(int k, RandomSource& rng) {
    const double s = std::sqrt(0.5);
    ComplexMatrix a(k, k);
    for (int c = 0; c < k; ++c)
        for (int r = 0; r < k; ++r) {
            const double re = rng.normal(s);
            const double im = rng.normal(s);
            a(r, c) = Complex(re, im);
        }
    return a;
}

}  // namespace

int star_letter(int letter, int n) {
    if (n < 1 || letter < 1 || letter > 2 * n)
        throw InvalidInput("letter " + std::to_string(letter) + " out of range 1.." +
                           std::to_string(2 * n));
    return letter <= n ? letter + n : letter - n;
}

Word involute_word(const Word& w, int n) {
    Word out(w.size());
    std::transform(w.rbegin(), w.rend(), out.begin(),
                   [n](int letter) { return star_letter(letter, n); });
    return out;
}

MatrixPoly::MatrixPoly(int n, int k, int degree_cap) : n_(n), k_(k), degree_cap_(degree_cap) {
    if (n < 1 || k < 1 || degree_cap < 0)
        throw InvalidInput("MatrixPoly needs n >= 1, k >= 1, degree_cap >= 0");
}

MatrixPoly MatrixPoly::unit(int n, int k, int degree_cap) {
    MatrixPoly p(n, k, degree_cap);
    p.add_term({}, ComplexMatrix::Identity(k, k));
    return p;
}

MatrixPoly MatrixPoly::monomial(int n, int degree_cap, Word word, ComplexMatrix coeff) {
    if (coeff.rows() != coeff.cols()) throw InvalidInput("coefficient must be square");
    MatrixPoly p(n, static_cast<int>(coeff.rows()), degree_cap);
    p.add_term(word, coeff);
    return p;
}

int MatrixPoly::degree() const {
    // Shortlex keeps the longest words last.
    return terms_.empty() ? 0 : static_cast<int>(terms_.rbegin()->first.size());
}

void MatrixPoly::check_word(const Word& word) const {
    if (static_cast<int>(word.size()) > degree_cap_)
        throw BudgetExceeded("word of length " + std::to_string(word.size()) +
                             " exceeds degree cap " + std::to_string(degree_cap_));
    for (int letter : word)
        if (letter < 1 || letter > 2 * n_)
            throw InvalidInput("letter " + std::to_string(letter) + " out of range 1.." +
                               std::to_string(2 * n_));
}

void MatrixPoly::add_term(const Word& word, const ComplexMatrix& coeff) {
    if (coeff.rows() != k_ || coeff.cols() != k_)
        throw InvalidInput("coefficient is not " + std::to_string(k_) + "x" + std::to_string(k_));
    check_word(word);
    auto it = terms_.find(word);
    if (it == terms_.end()) {
        if (!is_exact_zero(coeff)) terms_.emplace(word, coeff);
        return;
    }
    it->second += coeff;
    if (is_exact_zero(it->second)) terms_.erase(it);
}

ComplexMatrix MatrixPoly::coefficient(const Word& word) const {
    auto it = terms_.find(word);
    return it == terms_.end() ? ComplexMatrix::Zero(k_, k_) : it->second;
}

MatrixPoly& MatrixPoly::operator+=(const MatrixPoly& other) {
    if (other.n_ != n_ || other.k_ != k_) throw InvalidInput("adding polynomials of different shape");
    for (const auto& [word, coeff] : other.terms_) add_term(word, coeff);
    return *this;
}

MatrixPoly& MatrixPoly::operator*=(Complex scalar) {
    if (scalar == Complex(0.0, 0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= scalar;
        it = is_exact_zero(it->second) ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

MatrixPoly adjoint(const MatrixPoly& p) {
    MatrixPoly out(p.n(), p.k(), p.degree_cap());
    for (const auto& [word, coeff] : p.terms()) out.add_term(involute_word(word, p.n()), coeff.adjoint());
    return out;
}

MatrixPoly multiply(const MatrixPoly& p, const MatrixPoly& q) {
    if (p.n() != q.n() || p.k() != q.k()) throw InvalidInput("multiplying polynomials of different shape");
    if (p.degree() + q.degree() > p.degree_cap())
        throw BudgetExceeded("product degree " + std::to_string(p.degree() + q.degree()) +
                             " exceeds cap " + std::to_string(p.degree_cap()));
    MatrixPoly out(p.n(), p.k(), p.degree_cap());
    for (const auto& [wp, ap] : p.terms())
        for (const auto& [wq, aq] : q.terms()) {
            Word w = wp;
            w.insert(w.end(), wq.begin(), wq.end());
            out.add_term(w, ap * aq);
        }
    return out;
}

MatrixPoly selfadjointize(const MatrixPoly& p) {
    const int k = p.k();
    MatrixPoly out(p.n(), 2 * k, p.degree_cap());
    for (const auto& [word, coeff] : p.terms()) {
        ComplexMatrix upper = ComplexMatrix::Zero(2 * k, 2 * k);
        upper.topRightCorner(k, k) = coeff;
        out.add_term(word, upper);
        ComplexMatrix lower = ComplexMatrix::Zero(2 * k, 2 * k);
        lower.bottomLeftCorner(k, k) = coeff.adjoint();
        out.add_term(involute_word(word, p.n()), lower);
    }
    return out;
}

ComplexMatrix evaluate(const MatrixPoly& p, std::span<const ComplexMatrix> mats) {
    const int n = p.n();
    if (static_cast<int>(mats.size()) != n)
        throw InvalidInput("evaluate needs " + std::to_string(n) + " matrices, got " +
                           std::to_string(mats.size()));
    const Eigen::Index m = mats.front().rows();
    for (const auto& x : mats)
        if (x.rows() != m || x.cols() != m) throw InvalidInput("evaluate needs square matrices of equal size");

    std::vector<ComplexMatrix> letters;
    letters.reserve(2 * n);
    for (const auto& x : mats) letters.push_back(x);
    for (const auto& x : mats) letters.push_back(x.adjoint());

    // Monomials share prefixes, so each one is the cached prefix times a letter.
    std::map<Word, ComplexMatrix, ShortLex> monomials;
    auto monomial_of = [&](auto&& self, const Word& w) -> const ComplexMatrix& {
        if (auto it = monomials.find(w); it != monomials.end()) return it->second;
        ComplexMatrix value;
        if (w.size() == 1) {
            value = letters[w.front() - 1];
        } else {
            const Word prefix(w.begin(), w.end() - 1);
            value = self(self, prefix) * letters[w.back() - 1];
        }
        return monomials.emplace(w, std::move(value)).first->second;
    };

    const int k = p.k();
    ComplexMatrix out = ComplexMatrix::Zero(k * m, k * m);
    for (const auto& [word, coeff] : p.terms()) {
        if (word.empty()) {
            for (int c = 0; c < k; ++c)
                for (int r = 0; r < k; ++r)
                    if (coeff(r, c) != Complex(0.0, 0.0))
                        out.block(r * m, c * m, m, m).diagonal().array() += coeff(r, c);
            continue;
        }
        const ComplexMatrix& mono = monomial_of(monomial_of, word);
        for (int c = 0; c < k; ++c)
            for (int r = 0; r < k; ++r)
                if (coeff(r, c) != Complex(0.0, 0.0)) out.block(r * m, c * m, m, m) += coeff(r, c) * mono;
    }
    return out;
}

double coefficient_l1(const MatrixPoly& p) {
    double total = 0.0;
    for (const auto& [word, coeff] : p.terms()) {
        Eigen::JacobiSVD<ComplexMatrix> svd(coeff);
        total += svd.singularValues()(0);
    }
    return total;
}

std::vector<Word> all_words(int n, int d) {
    std::vector<Word> words{Word{}};
    std::size_t begin = 0;
    for (int len = 1; len <= d; ++len) {
        const std::size_t end = words.size();
        for (std::size_t i = begin; i < end; ++i)
            for (int letter = 1; letter <= 2 * n; ++letter) {
                Word w = words[i];
                w.push_back(letter);
                words.push_back(std::move(w));
            }
        begin = end;
    }
    return words;
}

MatrixPoly random_polynomial(int n, int d, int k, std::uint64_t seed, CoeffStyle style) {
    if (n < 1 || d < 0 || k < 1) throw InvalidInput("random_polynomial needs n >= 1, d >= 0, k >= 1");
    RandomSource rng = RandomSource(seed).stream("random_polynomial", 0);
    MatrixPoly p(n, k, d);
    const auto words = all_words(n, d);
    std::vector<const Word*> chosen;
    if (style == CoeffStyle::gaussian) {
        for (const auto& w : words) chosen.push_back(&w);
    } else {
        std::vector<const Word*> top;
        for (const auto& w : words) {
            const bool keep = rng.uniform() < 0.5;
            if (keep) chosen.push_back(&w);
            if (static_cast<int>(w.size()) == d) top.push_back(&w);
        }
        const bool has_top = std::any_of(chosen.begin(), chosen.end(),
                                         [d](const Word* w) { return static_cast<int>(w->size()) == d; });
        if (!has_top) {
            auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(top.size()));
            chosen.push_back(top[std::min(pick, top.size() - 1)]);
        }
    }
    for (const Word* w : chosen) p.add_term(*w, random_coefficient(k, rng));
    return p;
}

nlohmann::json to_json(const MatrixPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [word, coeff] : p.terms()) {
        nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
        for (Eigen::Index r = 0; r < coeff.rows(); ++r) {
            nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
            for (Eigen::Index c = 0; c < coeff.cols(); ++c) {
                rr.push_back(coeff(r, c).real());
                ir.push_back(coeff(r, c).imag());
            }
            re.push_back(std::move(rr));
            im.push_back(std::move(ir));
        }
        terms.push_back({{"word", word}, {"coeff", {{"re", re}, {"im", im}}}});
    }
    return {{"n", p.n()}, {"k", p.k()}, {"degree_cap", p.degree_cap()}, {"terms", terms}};
}

MatrixPoly poly_from_json(const nlohmann::json& j) {
    try {
        const int n = j.at("n").get<int>();
        const int k = j.at("k").get<int>();
        int cap = 0;
        for (const auto& t : j.at("terms")) cap = std::max(cap, static_cast<int>(t.at("word").size()));
        if (j.contains("degree_cap")) cap = std::max(cap, j.at("degree_cap").get<int>());
        MatrixPoly p(n, k, cap);
        for (const auto& t : j.at("terms")) {
            const auto word = t.at("word").get<Word>();
            const auto& re = t.at("coeff").at("re");
            const auto& im = t.at("coeff").at("im");
            if (static_cast<int>(re.size()) != k || static_cast<int>(im.size()) != k)
                throw InvalidInput("coefficient rows do not match k");
            ComplexMatrix a(k, k);
            for (int r = 0; r < k; ++r) {
                if (static_cast<int>(re[r].size()) != k || static_cast<int>(im[r].size()) != k)
                    throw InvalidInput("coefficient columns do not match k");
                for (int c = 0; c < k; ++c) a(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
            }
            p.add_term(word, a);
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed polynomial JSON: ") + e.what());
    }
}

}  // namespace freelab
