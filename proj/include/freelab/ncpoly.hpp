// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "freelab/matrix.hpp"

namespace freelab {

/// A monomial in the letters 1..2n. Letters 1..n stand for X_1..X_n and
/// letter n+j stands for X_j*. The empty word is the unit.
using Word = std::vector<int>;

/// Shortlex order: shorter words first, then lexicographic.
struct ShortLex {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

int star_letter(int letter, int n);

/// Reverses `w` and stars every letter. Throws InvalidInput on letters
/// outside 1..2n.
Word involute_word(const Word& w, int n);

/// Noncommutative *-polynomial sum_J a_J (x) X^J with k x k complex
/// coefficients and degree at most `degree_cap`.
///
/// Terms are kept in a sparse map; a coefficient that becomes exactly zero is
/// removed immediately, so iteration never sees dead terms.
class MatrixPoly {
public:
    using TermMap = std::map<Word, ComplexMatrix, ShortLex>;

    MatrixPoly(int n, int k, int degree_cap);

    static MatrixPoly unit(int n, int k, int degree_cap);
    static MatrixPoly monomial(int n, int degree_cap, Word word, ComplexMatrix coeff);

    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    int degree_cap() const noexcept { return degree_cap_; }
    /// Max word length over the terms; 0 for the zero polynomial.
    int degree() const;
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    const TermMap& terms() const noexcept { return terms_; }

    /// Adds `coeff` to the coefficient of `word`.
    void add_term(const Word& word, const ComplexMatrix& coeff);

    /// Coefficient of `word`, or the zero matrix.
    ComplexMatrix coefficient(const Word& word) const;

    MatrixPoly& operator+=(const MatrixPoly& other);
    MatrixPoly& operator*=(Complex scalar);

    friend MatrixPoly operator+(MatrixPoly a, const MatrixPoly& b) { return a += b; }
    friend MatrixPoly operator*(Complex s, MatrixPoly a) { return a *= s; }

private:
    void check_word(const Word& word) const;

    int n_;
    int k_;
    int degree_cap_;
    TermMap terms_;
};

MatrixPoly adjoint(const MatrixPoly& p);

/// Product by word concatenation and coefficient product. Throws
/// InvalidInput on mismatched n or k, BudgetExceeded when
/// degree(p) + degree(q) exceeds p's degree cap.
MatrixPoly multiply(const MatrixPoly& p, const MatrixPoly& q);

/// The 2k x 2k dilation [[0, P], [P*, 0]] as a polynomial. Its evaluation on
/// any family is a self-adjoint operator with the same norm as P. On a word
/// W fixed by the involution the coefficient is [[0, a_W], [a_W*, 0]].
MatrixPoly selfadjointize(const MatrixPoly& p);

/// Substitutes `mats` for X_1..X_n (and their adjoints for the starred
/// letters). Returns the (k m) x (k m) matrix sum_J a_J (x) M^J.
ComplexMatrix evaluate(const MatrixPoly& p, std::span<const ComplexMatrix> mats);

/// Sum of the operator norms of the coefficients.
double coefficient_l1(const MatrixPoly& p);

enum class CoeffStyle { gaussian, sparse };

/// Deterministic random polynomial. `gaussian` fills every word of length
/// <= d; `sparse` keeps each word with probability 1/2 (at least one term of
/// length d). Coefficient entries are complex Gaussians with E|z|^2 = 1.
MatrixPoly random_polynomial(int n, int d, int k, std::uint64_t seed,
                             CoeffStyle style = CoeffStyle::gaussian);

/// All words of length <= d over 2n letters, in shortlex order.
std::vector<Word> all_words(int n, int d);

nlohmann::json to_json(const MatrixPoly& p);
MatrixPoly poly_from_json(const nlohmann::json& j);

}  // namespace freelab
