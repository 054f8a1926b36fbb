// SPDX-License-Identifier: MIT
#include "cycres/fq.hpp"

#include <algorithm>
#include <sstream>

#include "cycres/errors.hpp"

namespace cycres {
namespace {

// --- tiny F_p[t] helpers used only during field construction -------------

using Poly = std::vector<uint32_t>;  // coefficient i = coeff of t^i

Poly trim(Poly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

Poly poly_mod(Poly a, const Poly& g, uint32_t p) {
    // g monic
    a = trim(std::move(a));
    while (a.size() >= g.size()) {
        uint32_t c = a.back();
        size_t shift = a.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i) {
            uint64_t sub = (static_cast<uint64_t>(c) * g[i]) % p;
            a[shift + i] = static_cast<uint32_t>((a[shift + i] + p - sub) % p);
        }
        a = trim(std::move(a));
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& g, uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = static_cast<uint32_t>((c[i + j] + static_cast<uint64_t>(a[i]) * b[j]) % p);
    return poly_mod(std::move(c), g, p);
}

// t^(p^e) mod g, by repeated p-th powering of t.
Poly poly_t_pow_p_pow(uint32_t e, const Poly& g, uint32_t p) {
    Poly x = poly_mod({0, 1}, g, p);
    for (uint32_t s = 0; s < e; ++s) {
        // x <- x^p mod g by square-and-multiply on exponent p
        Poly r = {1};
        Poly base = x;
        uint32_t n = p;
        while (n) {
            if (n & 1) r = poly_mulmod(r, base, g, p);
            base = poly_mulmod(base, base, g, p);
            n >>= 1;
        }
        x = std::move(r);
    }
    return x;
}

Poly poly_gcd(Poly a, Poly b, uint32_t p) {
    a = trim(std::move(a));
    b = trim(std::move(b));
    while (!b.empty()) {
        // make b monic for poly_mod
        uint32_t lead = b.back();
        if (lead != 1) {
            // scale by lead^-1 via Fermat
            uint64_t inv = 1, base = lead, e = p - 2;
            while (e) {
                if (e & 1) inv = (inv * base) % p;
                base = (base * base) % p;
                e >>= 1;
            }
            for (auto& c : b) c = static_cast<uint32_t>((c * inv) % p);
        }
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool poly_sub_is_zero(const Poly& a, const Poly& b, uint32_t p) {
    Poly d = a;
    d.resize(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < b.size(); ++i) d[i] = (d[i] + p - b[i]) % p;
    return trim(std::move(d)).empty();
}

bool is_irreducible(const Poly& g, uint32_t p) {
    uint32_t m = static_cast<uint32_t>(g.size()) - 1;
    if (m == 1) return true;
    // x^(p^m) == x mod g
    Poly t = poly_mod({0, 1}, g, p);
    if (!poly_sub_is_zero(poly_t_pow_p_pow(m, g, p), t, p)) return false;
    // gcd(x^(p^(m/r)) - x, g) == 1 for every prime r | m
    for (uint32_t r = 2; r <= m; ++r) {
        if (m % r != 0) continue;
        bool prime = true;
        for (uint32_t d = 2; d * d <= r; ++d)
            if (r % d == 0) prime = false;
        if (!prime) continue;
        Poly diff = poly_t_pow_p_pow(m / r, g, p);
        diff.resize(std::max<size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        Poly gc = poly_gcd(g, trim(std::move(diff)), p);
        if (gc.size() != 1) return false;
    }
    return true;
}

}  // namespace

std::shared_ptr<const FqField> FqField::create(uint32_t p, uint32_t m) {
    if (p < 2 || m < 1) throw InvalidScenario("FqField: need p >= 2 and m >= 1");
    for (uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw InvalidScenario("FqField: p must be prime");
    uint64_t q = 1;
    for (uint32_t i = 0; i < m; ++i) {
        q *= p;
        if (q > 1024) throw InvalidScenario("FqField: q = p^m exceeds the 1024 table guard");
    }

    auto F = std::shared_ptr<FqField>(new FqField());
    F->p_ = p;
    F->m_ = m;
    F->q_ = static_cast<uint32_t>(q);

    // Deterministic modulus: first monic irreducible of degree m in index order.
    Poly g(m + 1, 0);
    g[m] = 1;
    if (m > 1) {
        uint64_t total = q;  // p^m choices of lower coefficients
        bool found = false;
        for (uint64_t idx = 0; idx < total; ++idx) {
            uint64_t v = idx;
            for (uint32_t i = 0; i < m; ++i) {
                g[i] = static_cast<uint32_t>(v % p);
                v /= p;
            }
            if (is_irreducible(g, p)) {
                found = true;
                break;
            }
        }
        if (!found) throw CycresError("FqField: no irreducible modulus found");  // unreachable
    }
    F->modulus_ = g;

    // Element index <-> coefficient vector, then full tables.
    auto decode = [&](Fq a) {
        Poly c(m, 0);
        for (uint32_t i = 0; i < m; ++i) {
            c[i] = a % p;
            a /= p;
        }
        return c;
    };
    auto encode = [&](const Poly& c) {
        Fq a = 0;
        for (uint32_t i = m; i-- > 0;) a = a * p + (i < c.size() ? c[i] : 0);
        return a;
    };

    size_t Q = F->q_;
    F->add_.resize(Q * Q);
    F->mul_.resize(Q * Q);
    F->neg_.resize(Q);
    F->inv_.assign(Q, 0);
    for (Fq a = 0; a < Q; ++a) {
        Poly ca = decode(a);
        Poly na(m);
        for (uint32_t i = 0; i < m; ++i) na[i] = (p - ca[i]) % p;
        F->neg_[a] = encode(na);
        for (Fq b = 0; b < Q; ++b) {
            Poly cb = decode(b);
            Poly s(m);
            for (uint32_t i = 0; i < m; ++i) s[i] = (ca[i] + cb[i]) % p;
            F->add_[F->idx(a, b)] = encode(s);
            F->mul_[F->idx(a, b)] = encode(poly_mulmod(trim(ca), trim(cb), g, p));
        }
    }
    for (Fq a = 1; a < Q; ++a) {
        if (F->inv_[a]) continue;
        for (Fq b = 1; b < Q; ++b) {
            if (F->mul_[F->idx(a, b)] == 1) {
                F->inv_[a] = b;
                F->inv_[b] = a;
                break;
            }
        }
    }
    return F;
}

Fq FqField::inv(Fq a) const {
    if (a == 0) throw CycresError("FqField: division by zero");
    return inv_[a];
}

Fq FqField::pow(Fq a, uint64_t e) const {
    Fq r = 1, base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

std::vector<uint32_t> FqField::coeffs(Fq a) const {
    std::vector<uint32_t> c(m_, 0);
    for (uint32_t i = 0; i < m_; ++i) {
        c[i] = a % p_;
        a /= p_;
    }
    return c;
}

Fq FqField::from_coeffs(const std::vector<uint32_t>& c) const {
    Fq a = 0;
    for (uint32_t i = m_; i-- > 0;) a = a * p_ + (i < c.size() ? c[i] % p_ : 0);
    return a;
}

std::string FqField::to_string(Fq a) const {
    if (m_ == 1) return std::to_string(a);
    std::ostringstream os;
    os << '(';
    bool first = true;
    auto c = coeffs(a);
    for (uint32_t i = 0; i < m_; ++i) {
        if (c[i] == 0) continue;
        if (!first) os << '+';
        first = false;
        if (i == 0) {
            os << c[i];
        } else {
            if (c[i] != 1) os << c[i] << '*';
            os << 't';
            if (i >= 2) os << '^' << i;
        }
    }
    if (first) os << '0';
    os << ')';
    return os.str();
}

Fq FqField::parse(const std::string& text) const {
    std::string s;
    for (char ch : text)
        if (!isspace(static_cast<unsigned char>(ch))) s += ch;
    if (m_ == 1) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw CycresError("FqField::parse: bad element '" + text + "'");
        return from_int(static_cast<uint64_t>(std::stoull(s)));
    }
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
        // bare digits name a prime-subfield constant even when m > 1
        if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos)
            return from_int(static_cast<uint64_t>(std::stoull(s)));
        throw CycresError("FqField::parse: bad element '" + text + "'");
    }
    s = s.substr(1, s.size() - 2);
    std::vector<uint32_t> c(m_, 0);
    size_t pos = 0;
    while (pos < s.size()) {
        size_t plus = s.find('+', pos);
        std::string piece = s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
        pos = plus == std::string::npos ? s.size() : plus + 1;
        uint32_t coef = 1, deg = 0;
        size_t tp = piece.find('t');
        if (tp == std::string::npos) {
            coef = static_cast<uint32_t>(std::stoul(piece));
            deg = 0;
        } else {
            std::string head = piece.substr(0, tp);
            if (!head.empty()) {
                if (head.back() == '*') head.pop_back();
                if (!head.empty()) coef = static_cast<uint32_t>(std::stoul(head));
            }
            std::string tail = piece.substr(tp + 1);
            if (!tail.empty()) {
                if (tail.front() != '^') throw CycresError("FqField::parse: bad element '" + text + "'");
                deg = static_cast<uint32_t>(std::stoul(tail.substr(1)));
            } else {
                deg = 1;
            }
        }
        if (deg >= m_) throw CycresError("FqField::parse: exponent out of range in '" + text + "'");
        c[deg] = (c[deg] + coef) % p_;
    }
    return from_coeffs(c);
}

std::vector<Fq> FqField::embedding_from(const FqField& sub) const {
    if (sub.p_ != p_ || m_ % sub.m_ != 0)
        throw CycresError("FqField::embedding_from: not a subfield");
    // Root of sub's modulus in this field, deterministic first hit.
    Fq root = 0;
    bool found = false;
    for (Fq cand = 0; cand < q_ && !found; ++cand) {
        Fq acc = 0;
        for (uint32_t i = sub.m_ + 1; i-- > 0;)
            acc = add(mul(acc, cand), from_int(static_cast<uint64_t>(sub.modulus_[i])));
        if (acc == 0) {
            root = cand;
            found = true;
        }
    }
    if (!found) throw CycresError("FqField::embedding_from: modulus has no root");  // unreachable
    std::vector<Fq> table(sub.q_);
    for (Fq a = 0; a < sub.q_; ++a) {
        auto c = sub.coeffs(a);
        Fq acc = 0;
        for (uint32_t i = sub.m_; i-- > 0;)
            acc = add(mul(acc, root), from_int(static_cast<uint64_t>(c[i])));
        table[a] = acc;
    }
    return table;
}

}  // namespace cycres
