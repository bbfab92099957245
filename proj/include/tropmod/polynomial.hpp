#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tropmod/rational.hpp"

namespace tropmod {

/// Graded lexicographic order on exponent vectors; used for deterministic
/// iteration and serialization only.
struct GradedLex {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients in a fixed
/// number of variables (the edge coordinates of one cone).
class Poly {
public:
    using TermMap = std::map<std::vector<int>, Rat, GradedLex>;

    Poly() = default;
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(int nvars, const Rat& c);
    static Poly variable(int nvars, int i);
    static Poly monomial(int nvars, const std::vector<int>& exp, const Rat& c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    void add_term(const std::vector<int>& exp, const Rat& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly scaled(const Rat& c) const;
    Poly pow(int k) const;
    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    /// x_i -> x_{perm[i]}
    Poly permute_vars(const std::vector<int>& perm) const;

    /// Substitutes each variable by a linear form in `out_vars` variables:
    /// x_i -> sum_j rows[i][j] y_j.
    Poly substitute_linear(const std::vector<std::vector<std::int64_t>>& rows, int out_vars) const;

    /// Sets the variables not listed in `keep` to zero and renames kept
    /// variable keep[p] to to[p]; result has `out_vars` variables.
    Poly restrict_rename(const std::vector<int>& keep, const std::vector<int>& to,
                         int out_vars) const;

    bool invariant_under(const std::vector<std::vector<int>>& perms) const;
    /// True when every monomial involves every variable (exponents all >= 1).
    bool fully_supported() const;
    bool is_homogeneous(int* degree = nullptr) const;
    int total_degree() const;  // -1 for the zero polynomial

    Rat eval(const std::vector<Rat>& point) const;

    std::string to_string(const std::string& var_prefix = "x") const;

private:
    int nvars_ = 0;
    TermMap terms_;
};

}  // namespace tropmod
