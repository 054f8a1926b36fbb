// SPDX-License-Identifier: MIT
#include "cycres/dvr.hpp"

#include <algorithm>
#include <sstream>

#include "cycres/errors.hpp"

namespace cycres {

std::shared_ptr<const Ring> Ring::create(uint32_t p, uint32_t k, uint32_t q, uint32_t N, Fq tau,
                                         bool allow_any_k) {
    if (k < 1) throw InvalidScenario("ring_create: need k >= 1");
    if (N <= k) throw InvalidScenario("ring_create: need N > k");
    // q = p^m
    uint32_t m = 0;
    {
        uint64_t t = q;
        while (t > 1 && t % p == 0) {
            t /= p;
            ++m;
        }
        if (t != 1 || m == 0) throw InvalidScenario("ring_create: q must be a power of p");
    }
    if (p != 2 && !allow_any_k && k % (2 * (p - 1)) != 0)
        throw InvalidScenario("ring_create: odd p requires 2(p-1) | k (pass allow_any_k to override)");

    auto R = std::shared_ptr<Ring>(new Ring());
    R->p_ = p;
    R->k_ = k;
    R->q_ = q;
    R->N_ = N;
    R->m_ = m;
    R->F_ = FqField::create(p, m);
    if (tau >= q || R->F_->is_zero(tau))
        throw InvalidScenario("ring_create: tau must be a unit of F_q");
    R->tau_ = tau;

    R->M_ = (N + k - 1) / k;  // ceil(N/k): enough p-headroom for every carry chain
    uint64_t pM = 1;
    for (uint32_t i = 0; i < R->M_; ++i) {
        if (pM > (uint64_t(1) << 62) / p)
            throw InvalidScenario("ring_create: p^ceil(N/k) exceeds the 64-bit carry guard");
        pM *= p;
    }
    R->pM_ = pM;

    R->tau_lift_.assign(m, 0);
    {
        auto c = R->F_->coeffs(tau);
        for (uint32_t j = 0; j < m; ++j) R->tau_lift_[j] = c[j];
    }
    R->g_lift_.assign(m + 1, 0);
    for (uint32_t j = 0; j <= m; ++j) R->g_lift_[j] = R->F_->modulus()[j];
    return R;
}

void Ring::lift_digit(Fq d, uint64_t* out) const {
    auto c = F_->coeffs(d);
    for (uint32_t j = 0; j < m_; ++j) out[j] = c[j];
}

void Ring::gr_mul(const uint64_t* a, const uint64_t* b, uint64_t* c) const {
    // Schoolbook to degree 2m-2, then reduce by the monic lifted modulus.
    // m <= 10 (q <= 1024), so 2m-1 <= 19 slots.
    unsigned __int128 buf[24] = {};
    for (uint32_t i = 0; i < m_; ++i)
        for (uint32_t j = 0; j < m_; ++j) buf[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
    uint64_t red[24];
    for (uint32_t i = 0; i < 2 * m_ - 1; ++i) red[i] = static_cast<uint64_t>(buf[i] % pM_);
    for (uint32_t d = 2 * m_ - 2; d >= m_ && d < 2 * m_; --d) {
        uint64_t lead = red[d];
        if (lead) {
            red[d] = 0;
            for (uint32_t j = 0; j < m_; ++j) {
                uint64_t sub = static_cast<uint64_t>(
                    (static_cast<unsigned __int128>(lead) * g_lift_[j]) % pM_);
                red[d - m_ + j] = (red[d - m_ + j] + pM_ - sub) % pM_;
            }
        }
        if (d == m_) break;
    }
    for (uint32_t j = 0; j < m_; ++j) c[j] = red[j];
}

void Ring::renormalize(std::vector<uint64_t>& acc, uint32_t cap, std::vector<Fq>& out) const {
    // One in-order pass suffices: a carry out of slot i lands at i+k > i.
    out.assign(cap, 0);
    std::vector<uint32_t> digit(m_);
    std::vector<uint64_t> rem(m_), carry(m_);
    for (uint32_t i = 0; i < cap; ++i) {
        bool any_rem = false;
        for (uint32_t j = 0; j < m_; ++j) {
            uint64_t v = acc[i * m_ + j] % pM_;
            digit[j] = static_cast<uint32_t>(v % p_);
            rem[j] = v / p_;
            any_rem = any_rem || rem[j] != 0;
        }
        out[i] = F_->from_coeffs(digit);
        if (any_rem && i + k_ < cap) {
            gr_mul(tau_lift_.data(), rem.data(), carry.data());
            for (uint32_t j = 0; j < m_; ++j)
                acc[(i + k_) * m_ + j] = (acc[(i + k_) * m_ + j] + carry[j]) % pM_;
        }
    }
}

DvrElement Ring::zero(uint32_t prec) const {
    return DvrElement(shared_from_this(), std::vector<Fq>(prec, 0));
}
DvrElement Ring::zero() const { return zero(N_); }
DvrElement Ring::one() const { return from_fq(F_->one()); }

DvrElement Ring::from_fq(Fq c) const {
    std::vector<Fq> d(N_, 0);
    d[0] = c;
    return DvrElement(shared_from_this(), std::move(d));
}

DvrElement Ring::from_digits(std::vector<Fq> d) const {
    return DvrElement(shared_from_this(), std::move(d));
}

DvrElement Ring::from_int(int64_t v) const {
    int64_t pm = static_cast<int64_t>(pM_);
    int64_t r = v % pm;
    if (r < 0) r += pm;
    std::vector<uint64_t> acc(static_cast<size_t>(N_) * m_, 0);
    acc[0] = static_cast<uint64_t>(r);
    std::vector<Fq> d;
    renormalize(acc, N_, d);
    return DvrElement(shared_from_this(), std::move(d));
}

DvrElement Ring::pi_pow(uint32_t j) const {
    std::vector<Fq> d(N_, 0);
    if (j < N_) d[j] = F_->one();
    return DvrElement(shared_from_this(), std::move(d));
}

DvrElement Ring::p_elem() const { return from_int(static_cast<int64_t>(p_)); }

// ---------------------------------------------------------------------------

DvrElement::DvrElement(RingPtr R, std::vector<Fq> digits) : R_(std::move(R)), d_(std::move(digits)) {
    if (d_.size() > R_->N()) d_.resize(R_->N());
}

void DvrElement::require_prec(const char* op) const {
    if (d_.empty()) throw PrecisionError(std::string(op) + ": element has zero significant digits");
}

std::optional<uint32_t> DvrElement::ord_pi() const {
    for (uint32_t i = 0; i < d_.size(); ++i)
        if (d_[i] != 0) return i;
    return std::nullopt;
}

bool DvrElement::is_zero() const {
    require_prec("is_zero");
    return !ord_pi().has_value();
}

bool DvrElement::is_zero_at_prec() const noexcept {
    for (Fq c : d_)
        if (c != 0) return false;
    return true;
}

bool DvrElement::is_unit() const {
    require_prec("is_unit");
    return d_[0] != 0;
}

Fq DvrElement::residue() const {
    require_prec("residue");
    return d_[0];
}

DvrElement DvrElement::with_prec(uint32_t prec) const {
    if (prec > d_.size()) throw PrecisionError("with_prec: cannot invent digits");
    std::vector<Fq> d(d_.begin(), d_.begin() + prec);
    return DvrElement(R_, std::move(d));
}

DvrElement DvrElement::operator+(const DvrElement& o) const {
    require_prec("add");
    o.require_prec("add");
    uint32_t prec = std::min(this->prec(), o.prec());
    uint32_t m = R_->m();
    std::vector<uint64_t> acc(static_cast<size_t>(prec) * m, 0);
    std::vector<uint64_t> lift(m);
    for (uint32_t i = 0; i < prec; ++i) {
        R_->lift_digit(d_[i], lift.data());
        for (uint32_t j = 0; j < m; ++j) acc[i * m + j] = lift[j];
        R_->lift_digit(o.d_[i], lift.data());
        for (uint32_t j = 0; j < m; ++j) acc[i * m + j] = (acc[i * m + j] + lift[j]) % R_->pM();
    }
    std::vector<Fq> d;
    R_->renormalize(acc, prec, d);
    return DvrElement(R_, std::move(d));
}

DvrElement DvrElement::operator-() const {
    require_prec("neg");
    uint32_t prec = this->prec(), m = R_->m();
    std::vector<uint64_t> acc(static_cast<size_t>(prec) * m, 0);
    std::vector<uint64_t> lift(m);
    for (uint32_t i = 0; i < prec; ++i) {
        R_->lift_digit(d_[i], lift.data());
        for (uint32_t j = 0; j < m; ++j) acc[i * m + j] = (R_->pM() - lift[j]) % R_->pM();
    }
    std::vector<Fq> d;
    R_->renormalize(acc, prec, d);
    return DvrElement(R_, std::move(d));
}

DvrElement DvrElement::operator-(const DvrElement& o) const { return *this + (-o); }

DvrElement DvrElement::operator*(const DvrElement& o) const {
    require_prec("mul");
    o.require_prec("mul");
    uint32_t pa = prec(), pb = o.prec();
    uint32_t orda = ord_pi().value_or(pa), ordb = o.ord_pi().value_or(pb);
    uint64_t cap64 = std::min<uint64_t>({static_cast<uint64_t>(pa) + ordb,
                                         static_cast<uint64_t>(pb) + orda, R_->N()});
    uint32_t cap = static_cast<uint32_t>(cap64);
    uint32_t m = R_->m();
    std::vector<uint64_t> acc(static_cast<size_t>(cap) * m, 0);
    std::vector<uint64_t> la(m), lb(m), prod(m);
    for (uint32_t i = orda; i < pa && i < cap; ++i) {
        if (d_[i] == 0) continue;
        R_->lift_digit(d_[i], la.data());
        for (uint32_t j = ordb; j < pb && i + j < cap; ++j) {
            if (o.d_[j] == 0) continue;
            R_->lift_digit(o.d_[j], lb.data());
            R_->gr_mul(la.data(), lb.data(), prod.data());
            for (uint32_t t = 0; t < m; ++t) {
                size_t s = static_cast<size_t>(i + j) * m + t;
                acc[s] = (acc[s] + prod[t]) % R_->pM();
            }
        }
    }
    std::vector<Fq> d;
    R_->renormalize(acc, cap, d);
    return DvrElement(R_, std::move(d));
}

bool DvrElement::operator==(const DvrElement& o) const {
    require_prec("compare");
    o.require_prec("compare");
    uint32_t prec = std::min(this->prec(), o.prec());
    for (uint32_t i = 0; i < prec; ++i)
        if (d_[i] != o.d_[i]) return false;
    return true;
}

DvrElement DvrElement::mul_fq(Fq c) const {
    require_prec("mul_fq");
    uint32_t prec = this->prec(), m = R_->m();
    std::vector<uint64_t> acc(static_cast<size_t>(prec) * m, 0);
    std::vector<uint64_t> la(m), lc(m), prod(m);
    R_->lift_digit(c, lc.data());
    for (uint32_t i = 0; i < prec; ++i) {
        if (d_[i] == 0) continue;
        R_->lift_digit(d_[i], la.data());
        R_->gr_mul(la.data(), lc.data(), prod.data());
        for (uint32_t t = 0; t < m; ++t) acc[i * m + t] = prod[t];
    }
    std::vector<Fq> d;
    R_->renormalize(acc, prec, d);
    return DvrElement(R_, std::move(d));
}

DvrElement DvrElement::mul_pow_pi(uint32_t j) const {
    require_prec("mul_pow_pi");
    uint64_t prec64 = std::min<uint64_t>(static_cast<uint64_t>(prec()) + j, R_->N());
    uint32_t prec = static_cast<uint32_t>(prec64);
    std::vector<Fq> d(prec, 0);
    for (uint32_t i = 0; i + j < prec; ++i) d[i + j] = d_[i];
    return DvrElement(R_, std::move(d));
}

DvrElement DvrElement::div_pow_pi(uint32_t j) const {
    if (j == 0) return *this;
    if (j >= prec())
        throw PrecisionError("div_pow_pi: division consumes all known digits");
    for (uint32_t i = 0; i < j; ++i)
        if (d_[i] != 0)
            throw InexactDivision("div_pow_pi: digit at pi^" + std::to_string(i) + " is nonzero");
    std::vector<Fq> d(d_.begin() + j, d_.end());
    return DvrElement(R_, std::move(d));
}

DvrElement DvrElement::inverse() const {
    require_prec("inverse");
    if (d_[0] == 0) throw InexactDivision("inverse: element is not a unit");
    // Newton iteration x <- x(2 - a x); one correct digit to start, doubling
    // precision each round.
    const auto& F = R_->field();
    std::vector<Fq> x0(prec(), 0);
    x0[0] = F->inv(d_[0]);
    DvrElement x(R_, std::move(x0));
    DvrElement two = R_->from_int(2).with_prec(prec());
    uint32_t correct = 1;
    while (correct < prec()) {
        x = x * (two - *this * x);
        correct *= 2;
    }
    return x;
}

DvrElement DvrElement::pow(uint32_t e) const {
    DvrElement r = R_->one().with_prec(std::min(prec(), R_->N()));
    DvrElement base = *this;
    if (e == 0) return R_->one();
    while (e) {
        if (e & 1) r = r * base;
        base = e > 1 ? base * base : base;
        e >>= 1;
    }
    return r;
}

std::string DvrElement::to_string() const {
    require_prec("to_string");
    const auto& F = R_->field();
    std::ostringstream os;
    bool first = true;
    auto emit = [&](uint32_t i) {
        if (!first) os << " + ";
        first = false;
        os << F->to_string(d_[i]);
        if (i == 1) os << "*pi";
        if (i >= 2) os << "*pi^" << i;
    };
    for (uint32_t i = 0; i + 1 < prec(); ++i)
        if (d_[i] != 0) emit(i);
    emit(prec() - 1);  // always, so precision survives the round trip
    return os.str();
}

DvrElement DvrElement::parse(const RingPtr& R, const std::string& text) {
    const auto& F = R->field();
    // Split on '+' outside parentheses.
    std::vector<std::string> pieces;
    {
        std::string cur;
        int depth = 0;
        for (char ch : text) {
            if (ch == '(') ++depth;
            if (ch == ')') --depth;
            if (ch == '+' && depth == 0) {
                pieces.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        pieces.push_back(cur);
    }
    std::vector<Fq> digits;
    uint32_t maxi = 0;
    std::vector<std::pair<uint32_t, Fq>> entries;
    for (auto& raw : pieces) {
        std::string s;
        for (char ch : raw)
            if (!isspace(static_cast<unsigned char>(ch))) s += ch;
        if (s.empty()) throw CycresError("DvrElement::parse: empty summand in '" + text + "'");
        uint32_t expo = 0;
        std::string digit_part = s;
        size_t pp = s.rfind("*pi");
        if (pp != std::string::npos && s.find('(', pp) == std::string::npos) {
            digit_part = s.substr(0, pp);
            std::string tail = s.substr(pp + 3);
            if (tail.empty())
                expo = 1;
            else if (tail.front() == '^')
                expo = static_cast<uint32_t>(std::stoul(tail.substr(1)));
            else
                throw CycresError("DvrElement::parse: bad pi power in '" + text + "'");
        } else if (s == "pi") {
            digit_part = "1";
            expo = 1;
        } else if (s.rfind("pi^", 0) == 0) {
            digit_part = "1";
            expo = static_cast<uint32_t>(std::stoul(s.substr(3)));
        }
        Fq c = F->parse(digit_part);
        entries.emplace_back(expo, c);
        maxi = std::max(maxi, expo);
    }
    if (maxi >= R->N()) throw CycresError("DvrElement::parse: exponent beyond ring precision");
    digits.assign(maxi + 1, 0);
    for (auto& [e, c] : entries) digits[e] = F->add(digits[e], c);
    return DvrElement(R, std::move(digits));
}

}  // namespace cycres
