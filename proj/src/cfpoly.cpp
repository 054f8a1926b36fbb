// SPDX-License-Identifier: MIT
#include "cycres/cfpoly.hpp"

#include <algorithm>
#include <sstream>

#include "cycres/errors.hpp"

namespace cycres {

void CFPoly::add_term(const std::vector<uint16_t>& expo, Fq c) {
    if (F_->is_zero(c)) return;
    std::vector<uint16_t> e = expo;
    e.resize(vars_.size(), 0);
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(std::move(e), c);
    } else {
        it->second = F_->add(it->second, c);
        if (F_->is_zero(it->second)) terms_.erase(it);
    }
}

Fq CFPoly::coeff(const std::vector<uint16_t>& expo) const {
    std::vector<uint16_t> e = expo;
    e.resize(vars_.size(), 0);
    auto it = terms_.find(e);
    return it == terms_.end() ? 0 : it->second;
}

CFPoly CFPoly::operator+(const CFPoly& o) const {
    CFPoly r = *this;
    for (auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

CFPoly CFPoly::operator-(const CFPoly& o) const { return *this + o.neg(); }

CFPoly CFPoly::neg() const {
    CFPoly r(F_, vars_);
    for (auto& [e, c] : terms_) r.terms_.emplace(e, F_->neg(c));
    return r;
}

CFPoly CFPoly::scale(Fq c) const {
    CFPoly r(F_, vars_);
    if (F_->is_zero(c)) return r;
    for (auto& [e, k] : terms_) {
        Fq v = F_->mul(k, c);
        if (!F_->is_zero(v)) r.terms_.emplace(e, v);
    }
    return r;
}

CFPoly CFPoly::operator*(const CFPoly& o) const {
    CFPoly r(F_, vars_);
    std::vector<uint16_t> e(vars_.size());
    for (auto& [ea, ca] : terms_)
        for (auto& [eb, cb] : o.terms_) {
            for (size_t i = 0; i < vars_.size(); ++i)
                e[i] = static_cast<uint16_t>(ea[i] + eb[i]);
            r.add_term(e, F_->mul(ca, cb));
        }
    return r;
}

int CFPoly::total_degree() const {
    int d = -1;
    for (auto& [e, c] : terms_) {
        int t = 0;
        for (auto x : e) t += x;
        d = std::max(d, t);
    }
    return d;
}

int CFPoly::degree_in(size_t var) const {
    int d = -1;
    for (auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
    return d;
}

CFPoly CFPoly::graded_part(int d) const {
    CFPoly r(F_, vars_);
    for (auto& [e, c] : terms_) {
        int t = 0;
        for (auto x : e) t += x;
        if (t == d) r.terms_.emplace(e, c);
    }
    return r;
}

Fq CFPoly::eval(const std::vector<Fq>& point) const {
    Fq acc = 0;
    for (auto& [e, c] : terms_) {
        Fq t = c;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t = F_->mul(t, F_->pow(point[i], e[i]));
        acc = F_->add(acc, t);
    }
    return acc;
}

Fq CFPoly::eval_ext(const FqField& E, const std::vector<Fq>& table,
                    const std::vector<Fq>& point) const {
    Fq acc = 0;
    for (auto& [e, c] : terms_) {
        Fq t = table[c];
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t = E.mul(t, E.pow(point[i], e[i]));
        acc = E.add(acc, t);
    }
    return acc;
}

CFPoly CFPoly::partial(size_t var) const {
    CFPoly r(F_, vars_);
    for (auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Fq nc = F_->mul(c, F_->from_int(static_cast<uint64_t>(e[var])));
        if (F_->is_zero(nc)) continue;
        auto ne = e;
        --ne[var];
        r.add_term(ne, nc);
    }
    return r;
}

std::vector<CFPoly> CFPoly::jacobian() const {
    std::vector<CFPoly> J;
    for (size_t i = 0; i < vars_.size(); ++i) J.push_back(partial(i));
    return J;
}

CFPoly CFPoly::substitute(const std::vector<CFPoly>& images) const {
    if (images.size() != vars_.size())
        throw CycresError("CFPoly::substitute: wrong number of images");
    const auto& tvars = images.empty() ? vars_ : images[0].vars_;
    FqFieldPtr TF = images.empty() ? F_ : images[0].F_;
    CFPoly r(TF, tvars);
    // power cache per variable
    std::vector<std::vector<CFPoly>> powers(images.size());
    auto power = [&](size_t v, uint16_t e) -> const CFPoly& {
        auto& cache = powers[v];
        if (cache.empty()) cache.push_back(CFPoly::constant(TF, tvars, TF->one()));
        while (cache.size() <= e) cache.push_back(cache.back() * images[v]);
        return cache[e];
    };
    for (auto& [e, c] : terms_) {
        CFPoly t = CFPoly::constant(TF, tvars, c);
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t = t * power(i, e[i]);
        r = r + t;
    }
    return r;
}

CFPoly CFPoly::translate(const std::vector<Fq>& point) const {
    std::vector<CFPoly> images;
    for (size_t i = 0; i < vars_.size(); ++i) {
        CFPoly img = CFPoly::variable(F_, vars_, i);
        img.add_term(std::vector<uint16_t>(vars_.size(), 0), point[i]);
        images.push_back(std::move(img));
    }
    return substitute(images);
}

CFPoly CFPoly::homogenize(const std::string& new_var, int d) const {
    auto nv = vars_;
    nv.push_back(new_var);
    CFPoly r(F_, nv);
    for (auto& [e, c] : terms_) {
        int t = 0;
        for (auto x : e) t += x;
        if (t > d) throw CycresError("CFPoly::homogenize: degree exceeds target");
        auto ne = e;
        ne.push_back(static_cast<uint16_t>(d - t));
        r.terms_.emplace(std::move(ne), c);
    }
    return r;
}

CFPoly CFPoly::map_scalars(const FqFieldPtr& E, const std::vector<Fq>& table) const {
    CFPoly r(E, vars_);
    for (auto& [e, c] : terms_) r.add_term(e, table.at(c));
    return r;
}

CFPoly CFPoly::embed_vars(const std::vector<std::string>& new_vars,
                          const std::vector<size_t>& where) const {
    CFPoly r(F_, new_vars);
    for (auto& [e, c] : terms_) {
        std::vector<uint16_t> ne(new_vars.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) ne[where[i]] = e[i];
        r.terms_.emplace(std::move(ne), c);
    }
    return r;
}

CFPoly CFPoly::constant(FqFieldPtr F, std::vector<std::string> vars, Fq c) {
    CFPoly r(std::move(F), std::move(vars));
    r.add_term(std::vector<uint16_t>(r.vars_.size(), 0), c);
    return r;
}

CFPoly CFPoly::variable(FqFieldPtr F, std::vector<std::string> vars, size_t idx) {
    CFPoly r(std::move(F), std::move(vars));
    std::vector<uint16_t> e(r.vars_.size(), 0);
    e[idx] = 1;
    r.add_term(e, r.F_->one());
    return r;
}

std::string CFPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        bool has_mono = false;
        std::ostringstream mono;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (has_mono) mono << '*';
            mono << vars_[i];
            if (e[i] > 1) mono << '^' << e[i];
            has_mono = true;
        }
        if (!has_mono) {
            os << F_->to_string(c);
        } else if (c == F_->one()) {
            os << mono.str();
        } else {
            os << F_->to_string(c) << '*' << mono.str();
        }
    }
    return os.str();
}

CFPoly CFPoly::parse(const FqFieldPtr& F, const std::vector<std::string>& vars,
                     const std::string& text) {
    CFPoly r(F, vars);
    std::string s;
    for (char ch : text)
        if (!isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s == "0" || s.empty()) return r;
    // split on '+' outside parentheses
    std::vector<std::string> summands;
    {
        std::string cur;
        int depth = 0;
        for (char ch : s) {
            if (ch == '(') ++depth;
            if (ch == ')') --depth;
            if (ch == '+' && depth == 0) {
                summands.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        summands.push_back(cur);
    }
    for (auto& sm : summands) {
        // split factors on '*' outside parentheses
        std::vector<std::string> factors;
        std::string cur;
        int depth = 0;
        for (char ch : sm) {
            if (ch == '(') ++depth;
            if (ch == ')') --depth;
            if (ch == '*' && depth == 0) {
                factors.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        factors.push_back(cur);
        Fq c = F->one();
        std::vector<uint16_t> e(vars.size(), 0);
        for (auto& f : factors) {
            std::string name = f;
            uint16_t expo = 1;
            size_t caret = f.find('^');
            if (caret != std::string::npos) {
                name = f.substr(0, caret);
                expo = static_cast<uint16_t>(std::stoul(f.substr(caret + 1)));
            }
            auto it = std::find(vars.begin(), vars.end(), name);
            if (it != vars.end()) {
                e[static_cast<size_t>(it - vars.begin())] += expo;
            } else {
                c = F->mul(c, F->parse(f));
            }
        }
        r.add_term(e, c);
    }
    return r;
}

std::vector<std::vector<Fq>> hessian_matrix(const CFPoly& f, size_t nx) {
    std::vector<std::vector<Fq>> H(nx, std::vector<Fq>(nx, 0));
    for (size_t i = 0; i < nx; ++i) {
        CFPoly fi = f.partial(i);
        for (size_t j = 0; j < nx; ++j) {
            CFPoly fij = fi.partial(j);
            H[i][j] = fij.coeff(std::vector<uint16_t>(f.nvars(), 0));
        }
    }
    return H;
}

uint32_t fq_matrix_rank(const FqField& F, std::vector<std::vector<Fq>> M) {
    if (M.empty()) return 0;
    size_t rows = M.size(), cols = M[0].size();
    uint32_t rank = 0;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t piv = row;
        while (piv < rows && F.is_zero(M[piv][col])) ++piv;
        if (piv == rows) continue;
        std::swap(M[piv], M[row]);
        Fq inv = F.inv(M[row][col]);
        for (size_t j = col; j < cols; ++j) M[row][j] = F.mul(M[row][j], inv);
        for (size_t i = 0; i < rows; ++i) {
            if (i == row || F.is_zero(M[i][col])) continue;
            Fq c = M[i][col];
            for (size_t j = col; j < cols; ++j)
                M[i][j] = F.sub(M[i][j], F.mul(c, M[row][j]));
        }
        ++row;
        ++rank;
    }
    return rank;
}

Fq fq_matrix_det(const FqField& F, std::vector<std::vector<Fq>> M) {
    size_t n = M.size();
    Fq det = F.one();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && F.is_zero(M[piv][col])) ++piv;
        if (piv == n) return F.zero();
        if (piv != col) {
            std::swap(M[piv], M[col]);
            det = F.neg(det);
        }
        det = F.mul(det, M[col][col]);
        Fq inv = F.inv(M[col][col]);
        for (size_t i = col + 1; i < n; ++i) {
            if (F.is_zero(M[i][col])) continue;
            Fq c = F.mul(M[i][col], inv);
            for (size_t j = col; j < n; ++j) M[i][j] = F.sub(M[i][j], F.mul(c, M[col][j]));
        }
    }
    return det;
}

void for_each_point(const FqField& E, size_t n, uint64_t budget,
                    const std::function<bool(const std::vector<Fq>&)>& fn) {
    uint64_t total = 1;
    for (size_t i = 0; i < n; ++i) {
        total *= E.q();
        if (total > budget)
            throw BudgetExceeded("point enumeration over " + std::to_string(E.q()) + "^" +
                                 std::to_string(n) + " exceeds budget " + std::to_string(budget));
    }
    std::vector<Fq> pt(n, 0);
    for (uint64_t idx = 0; idx < total; ++idx) {
        uint64_t v = idx;
        for (size_t i = 0; i < n; ++i) {
            pt[i] = static_cast<Fq>(v % E.q());
            v /= E.q();
        }
        if (!fn(pt)) return;
    }
}

}  // namespace cycres
