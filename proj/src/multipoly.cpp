// SPDX-License-Identifier: MIT
#include "cycres/multipoly.hpp"

#include <algorithm>
#include <sstream>

#include "cycres/errors.hpp"

namespace cycres {

size_t PolyRing::var_index(const std::string& name) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return i;
    throw CycresError("PolyRing: unknown variable '" + name + "'");
}

PolyRingPtr make_poly_ring(RingPtr R, std::vector<std::string> vars,
                           std::optional<std::pair<size_t, size_t>> relation) {
    auto pr = std::make_shared<PolyRing>();
    pr->R = std::move(R);
    pr->vars = std::move(vars);
    pr->relation = relation;
    if (relation && (relation->first >= pr->vars.size() || relation->second >= pr->vars.size() ||
                     relation->first == relation->second))
        throw CycresError("make_poly_ring: bad relation variable indices");
    return pr;
}

void MultiPoly::add_term(std::vector<uint16_t> expo, DvrElement c) {
    expo.resize(ring_->vars.size(), 0);
    if (ring_->relation) {
        auto [i, j] = *ring_->relation;
        uint16_t t = std::min(expo[i], expo[j]);
        if (t) {
            expo[i] = static_cast<uint16_t>(expo[i] - t);
            expo[j] = static_cast<uint16_t>(expo[j] - t);
            c = c.mul_pow_pi(t);
        }
    }
    if (c.is_zero_at_prec()) {
        // Still merge precision with an existing entry if one is there;
        // adding an O(pi^s) quantity caps what we know about the slot.
        auto it = terms_.find(expo);
        if (it != terms_.end()) {
            DvrElement sum = it->second + c;
            if (sum.is_zero_at_prec())
                terms_.erase(it);
            else
                it->second = sum;
        }
        return;
    }
    auto it = terms_.find(expo);
    if (it == terms_.end()) {
        terms_.emplace(std::move(expo), std::move(c));
    } else {
        DvrElement sum = it->second + c;
        if (sum.is_zero_at_prec())
            terms_.erase(it);
        else
            it->second = sum;
    }
}

DvrElement MultiPoly::coeff(const std::vector<uint16_t>& expo) const {
    std::vector<uint16_t> e = expo;
    e.resize(ring_->vars.size(), 0);
    auto it = terms_.find(e);
    return it == terms_.end() ? ring_->R->zero() : it->second;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    MultiPoly r = *this;
    for (auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

MultiPoly MultiPoly::neg() const {
    MultiPoly r(ring_);
    for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + o.neg(); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    MultiPoly r(ring_);
    std::vector<uint16_t> e(ring_->vars.size());
    for (auto& [ea, ca] : terms_)
        for (auto& [eb, cb] : o.terms_) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = static_cast<uint16_t>(ea[i] + eb[i]);
            r.add_term(e, ca * cb);
        }
    return r;
}

MultiPoly MultiPoly::scale(const DvrElement& c) const {
    MultiPoly r(ring_);
    for (auto& [e, k] : terms_) r.add_term(e, k * c);
    return r;
}

MultiPoly MultiPoly::mul_pow_pi(uint32_t j) const {
    MultiPoly r(ring_);
    for (auto& [e, k] : terms_) r.add_term(e, k.mul_pow_pi(j));
    return r;
}

int MultiPoly::degree_in(size_t var) const {
    int d = -1;
    for (auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
    return d;
}

MultiPoly MultiPoly::div_pow_pi(uint32_t j) const {
    MultiPoly r(ring_);
    for (auto& [e, c] : terms_) r.terms_.emplace(e, c.div_pow_pi(j));
    return r;
}

MultiPoly MultiPoly::div_var_pow(size_t v, uint32_t e) const {
    MultiPoly r(ring_);
    for (auto& [expo, c] : terms_) {
        auto ne = expo;
        if (ne[v] >= e) {
            ne[v] = static_cast<uint16_t>(ne[v] - e);
            r.add_term(ne, c);
        } else if (ring_ && ring_->is_relation_var(v)) {
            uint32_t deficit = e - ne[v];
            ne[v] = 0;
            size_t partner = ring_->relation_partner(v);
            ne[partner] = static_cast<uint16_t>(ne[partner] + deficit);
            r.add_term(ne, c.div_pow_pi(deficit));  // v^-1 = partner/pi
        } else {
            throw InexactDivision("div_var_pow: monomial lacks " + ring_->vars[v] + "^" +
                                  std::to_string(e));
        }
    }
    return r;
}

MultiPoly MultiPoly::substitute(const PolyRingPtr& target,
                                const std::vector<MultiPoly>& images) const {
    if (images.size() != ring_->vars.size())
        throw CycresError("MultiPoly::substitute: wrong number of images");
    if (target->R != ring_->R)
        throw CycresError("MultiPoly::substitute: coefficient rings differ");
    MultiPoly r(target);
    std::vector<std::vector<MultiPoly>> powers(images.size());
    auto power = [&](size_t v, uint16_t e) -> const MultiPoly& {
        auto& cache = powers[v];
        if (cache.empty()) cache.push_back(MultiPoly::constant(target, ring_->R->one()));
        while (cache.size() <= e) cache.push_back(cache.back() * images[v]);
        return cache[e];
    };
    for (auto& [e, c] : terms_) {
        MultiPoly t = MultiPoly::constant(target, c);
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t = t * power(i, e[i]);
        r = r + t;
    }
    return r;
}

CFPoly MultiPoly::central_fiber() const {
    std::vector<Fq> id(ring_->R->q());
    for (Fq a = 0; a < ring_->R->q(); ++a) id[a] = a;
    return expand_scalars(ring_->R->field(), id, 1);
}

CFPoly MultiPoly::exceptional_cf(size_t v) const {
    const auto& F = ring_->R->field();
    std::vector<std::string> vars;
    std::vector<size_t> keep;
    for (size_t i = 0; i < ring_->vars.size(); ++i)
        if (i != v) {
            vars.push_back(ring_->vars[i]);
            keep.push_back(i);
        }
    CFPoly r(F, vars);
    for (auto& [e, c] : terms_) {
        if (e[v] != 0) continue;
        Fq res = c.residue();
        if (F->is_zero(res)) continue;
        std::vector<uint16_t> ne(keep.size());
        for (size_t i = 0; i < keep.size(); ++i) ne[i] = e[keep[i]];
        r.add_term(ne, res);
    }
    return r;
}

CFPoly MultiPoly::expand_scalars(const FqFieldPtr& E, const std::vector<Fq>& emb,
                                 uint32_t digit_cap) const {
    std::vector<std::string> vars = ring_->vars;
    bool explicit_pi = !ring_->relation && digit_cap > 1;
    if (explicit_pi) vars.push_back("pi");
    CFPoly r(E, vars);
    for (auto& [e, c] : terms_) {
        for (uint32_t d = 0; d < std::min(digit_cap, c.prec()); ++d) {
            Fq digit = c.digit(d);
            if (digit == 0) continue;
            std::vector<uint16_t> ne(e.begin(), e.end());
            if (explicit_pi) {
                ne.push_back(static_cast<uint16_t>(d));
            } else if (ring_->relation && d > 0) {
                auto [i, j] = *ring_->relation;
                ne[i] = static_cast<uint16_t>(ne[i] + d);
                ne[j] = static_cast<uint16_t>(ne[j] + d);
            } else if (!ring_->relation && d > 0) {
                continue;  // digit_cap == 1: residue only
            }
            ne.resize(vars.size(), 0);
            r.add_term(ne, emb[digit]);
        }
    }
    return r;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms_) {
        if (!first) os << "; ";
        first = false;
        os << c.to_string();
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            os << " * " << ring_->vars[i];
            if (e[i] > 1) os << '^' << e[i];
        }
    }
    return os.str();
}

MultiPoly MultiPoly::parse(const PolyRingPtr& ring, const std::string& text) {
    MultiPoly r(ring);
    std::string s = text;
    // trim
    auto trim = [](std::string& x) {
        while (!x.empty() && isspace(static_cast<unsigned char>(x.front()))) x.erase(x.begin());
        while (!x.empty() && isspace(static_cast<unsigned char>(x.back()))) x.pop_back();
    };
    trim(s);
    if (s == "0" || s.empty()) return r;
    std::vector<std::string> summands;
    {
        std::string cur;
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == ';') {
                summands.push_back(cur);
                cur.clear();
            } else {
                cur += s[i];
            }
        }
        summands.push_back(cur);
    }
    for (auto& sm : summands) {
        // factors are separated by " * " (the element format never contains
        // a starred blank, so this split is unambiguous)
        std::vector<std::string> factors;
        std::string rest = sm;
        trim(rest);
        size_t pos;
        while ((pos = rest.find(" * ")) != std::string::npos) {
            factors.push_back(rest.substr(0, pos));
            rest = rest.substr(pos + 3);
        }
        factors.push_back(rest);
        DvrElement c = DvrElement::parse(ring->R, factors[0]);
        std::vector<uint16_t> e(ring->vars.size(), 0);
        for (size_t fi = 1; fi < factors.size(); ++fi) {
            std::string f = factors[fi];
            trim(f);
            std::string name = f;
            uint16_t expo = 1;
            size_t caret = f.find('^');
            if (caret != std::string::npos) {
                name = f.substr(0, caret);
                expo = static_cast<uint16_t>(std::stoul(f.substr(caret + 1)));
            }
            e[ring->var_index(name)] = static_cast<uint16_t>(e[ring->var_index(name)] + expo);
        }
        r.add_term(e, c);
    }
    return r;
}

MultiPoly MultiPoly::constant(const PolyRingPtr& ring, DvrElement c) {
    MultiPoly r(ring);
    r.add_term(std::vector<uint16_t>(ring->vars.size(), 0), std::move(c));
    return r;
}

MultiPoly MultiPoly::variable(const PolyRingPtr& ring, size_t idx) {
    MultiPoly r(ring);
    std::vector<uint16_t> e(ring->vars.size(), 0);
    e[idx] = 1;
    r.add_term(e, ring->R->one());
    return r;
}

GradedParts grade_in_x(const MultiPoly& f, size_t nx) {
    GradedParts parts{MultiPoly(f.ring()), MultiPoly(f.ring()), MultiPoly(f.ring()),
                      MultiPoly(f.ring())};
    for (auto& [e, c] : f.terms()) {
        int d = 0;
        for (size_t i = 0; i < nx; ++i) d += e[i];
        MultiPoly* slot = d == 0   ? &parts.constant
                          : d == 1 ? &parts.linear
                          : d == 2 ? &parts.quadratic
                                   : &parts.cubic_plus;
        slot->add_term(e, c);
    }
    return parts;
}

}  // namespace cycres
