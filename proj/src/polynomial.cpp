#include "tropmod/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tropmod {

bool GradedLex::operator()(const std::vector<int>& a, const std::vector<int>& b) const {
    int da = std::accumulate(a.begin(), a.end(), 0);
    int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db)
        return da < db;
    return a < b;
}

Poly Poly::constant(int nvars, const Rat& c) {
    Poly p(nvars);
    p.add_term(std::vector<int>(nvars, 0), c);
    return p;
}

Poly Poly::variable(int nvars, int i) {
    std::vector<int> e(nvars, 0);
    e.at(i) = 1;
    return monomial(nvars, e, 1);
}

Poly Poly::monomial(int nvars, const std::vector<int>& exp, const Rat& c) {
    Poly p(nvars);
    p.add_term(exp, c);
    return p;
}

void Poly::add_term(const std::vector<int>& exp, const Rat& c) {
    if (static_cast<int>(exp.size()) != nvars_)
        throw std::invalid_argument("exponent vector length mismatch");
    if (c == 0)
        return;
    auto it = terms_.find(exp);
    if (it == terms_.end()) {
        terms_.emplace(exp, c);
    } else {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    if (nvars_ != o.nvars_)
        throw std::invalid_argument("polynomial variable count mismatch");
    Poly r = *this;
    for (const auto& [e, c] : o.terms_)
        r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    Poly r(nvars_);
    for (const auto& [e, c] : terms_)
        r.terms_.emplace(e, -c);
    return r;
}

Poly Poly::scaled(const Rat& c) const {
    Poly r(nvars_);
    if (c == 0)
        return r;
    for (const auto& [e, k] : terms_)
        r.terms_.emplace(e, k * c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (nvars_ != o.nvars_)
        throw std::invalid_argument("polynomial variable count mismatch");
    Poly r(nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            std::vector<int> e(nvars_);
            for (int i = 0; i < nvars_; ++i)
                e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

Poly Poly::pow(int k) const {
    if (k < 0)
        throw std::invalid_argument("negative polynomial power");
    Poly r = constant(nvars_, 1);
    for (int i = 0; i < k; ++i)
        r = r * *this;
    return r;
}

Poly Poly::permute_vars(const std::vector<int>& perm) const {
    Poly r(nvars_);
    for (const auto& [e, c] : terms_) {
        std::vector<int> f(nvars_, 0);
        for (int i = 0; i < nvars_; ++i)
            f[perm[i]] = e[i];
        r.add_term(f, c);
    }
    return r;
}

Poly Poly::substitute_linear(const std::vector<std::vector<std::int64_t>>& rows,
                             int out_vars) const {
    if (static_cast<int>(rows.size()) != nvars_)
        throw std::invalid_argument("substitution row count mismatch");
    std::vector<Poly> forms;
    forms.reserve(nvars_);
    for (int i = 0; i < nvars_; ++i) {
        Poly f(out_vars);
        for (int j = 0; j < out_vars; ++j)
            if (rows[i][j] != 0) {
                std::vector<int> e(out_vars, 0);
                e[j] = 1;
                f.add_term(e, Rat(rows[i][j]));
            }
        forms.push_back(std::move(f));
    }
    Poly r(out_vars);
    for (const auto& [e, c] : terms_) {
        Poly t = Poly::constant(out_vars, c);
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < e[i]; ++k)
                t = t * forms[i];
        r = r + t;
    }
    return r;
}

Poly Poly::restrict_rename(const std::vector<int>& keep, const std::vector<int>& to,
                           int out_vars) const {
    std::vector<int> dest(nvars_, -1);
    for (std::size_t p = 0; p < keep.size(); ++p)
        dest[keep[p]] = to[p];
    Poly r(out_vars);
    for (const auto& [e, c] : terms_) {
        std::vector<int> f(out_vars, 0);
        bool dies = false;
        for (int i = 0; i < nvars_ && !dies; ++i) {
            if (e[i] == 0)
                continue;
            if (dest[i] < 0)
                dies = true;  // a killed variable appears: term restricts to zero
            else
                f[dest[i]] += e[i];
        }
        if (!dies)
            r.add_term(f, c);
    }
    return r;
}

bool Poly::invariant_under(const std::vector<std::vector<int>>& perms) const {
    for (const auto& p : perms)
        if (!(permute_vars(p) == *this))
            return false;
    return true;
}

bool Poly::fully_supported() const {
    for (const auto& [e, c] : terms_)
        for (int i = 0; i < nvars_; ++i)
            if (e[i] == 0)
                return false;
    return true;
}

bool Poly::is_homogeneous(int* degree) const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int t = std::accumulate(e.begin(), e.end(), 0);
        if (d < 0)
            d = t;
        else if (d != t)
            return false;
    }
    if (degree)
        *degree = d;
    return true;
}

int Poly::total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_)
        d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    return d;
}

Rat Poly::eval(const std::vector<Rat>& point) const {
    if (static_cast<int>(point.size()) != nvars_)
        throw std::invalid_argument("evaluation point dimension mismatch");
    Rat total = 0;
    for (const auto& [e, c] : terms_) {
        Rat t = c;
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < e[i]; ++k)
                t *= point[i];
        total += t;
    }
    return total;
}

std::string Poly::to_string(const std::string& var_prefix) const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    // highest graded-lex terms first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rat a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0)
                a = -a;
        }
        first = false;
        bool has_var = std::accumulate(e.begin(), e.end(), 0) > 0;
        if (a != 1 || !has_var)
            os << rat_to_string(a);
        bool printed = a != 1 || !has_var;
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0)
                continue;
            if (printed)
                os << "*";
            os << var_prefix << (i + 1);
            if (e[i] > 1)
                os << "^" << e[i];
            printed = true;
        }
    }
    return os.str();
}

}  // namespace tropmod
