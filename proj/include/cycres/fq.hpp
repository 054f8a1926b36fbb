// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cycres {

// An element of F_q, q = p^m, encoded as an index in [0, q): the element
// sum c_i t^i (c_i in [0,p)) has index sum c_i p^i.  All arithmetic goes
// through the owning FqField, which precomputes full operation tables
// (desk-scale fields only; creation guards q <= 1024).
using Fq = uint32_t;

class FqField {
  public:
    // Builds F_{p^m} with a deterministic monic irreducible modulus (the
    // lexicographically first one), so identical parameters always give
    // identical element encodings.
    static std::shared_ptr<const FqField> create(uint32_t p, uint32_t m);

    uint32_t p() const { return p_; }
    uint32_t m() const { return m_; }
    uint32_t q() const { return q_; }
    // Monic modulus g(t), coefficient i in [0,p), size m+1, g[m] = 1.
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    Fq zero() const { return 0; }
    Fq one() const { return 1; }
    bool is_zero(Fq a) const { return a == 0; }

    Fq add(Fq a, Fq b) const { return add_[idx(a, b)]; }
    Fq sub(Fq a, Fq b) const { return add_[idx(a, neg_[b])]; }
    Fq neg(Fq a) const { return neg_[a]; }
    Fq mul(Fq a, Fq b) const { return mul_[idx(a, b)]; }
    Fq inv(Fq a) const;  // throws PrecisionError-free domain error on 0
    Fq pow(Fq a, uint64_t e) const;

    // Image of an integer under Z -> F_p <= F_q.
    Fq from_int(uint64_t v) const { return static_cast<Fq>(v % p_); }
    Fq from_int(int64_t v) const {
        int64_t r = v % static_cast<int64_t>(p_);
        if (r < 0) r += p_;
        return static_cast<Fq>(r);
    }

    // Base-p digit vector (length m) <-> index.
    std::vector<uint32_t> coeffs(Fq a) const;
    Fq from_coeffs(const std::vector<uint32_t>& c) const;

    // Canonical text form: "2" for prime fields, "(1+2*t)" / "(t^2)" style
    // for extensions; parse() accepts exactly what to_string() emits.
    std::string to_string(Fq a) const;
    Fq parse(const std::string& text) const;

    // Maps every element of `sub` into this field (requires sub.m | m and
    // same p); table[i] is the image of the element with index i.  The
    // embedding sends t_sub to the first root of sub's modulus, so it is
    // deterministic.
    std::vector<Fq> embedding_from(const FqField& sub) const;

  private:
    FqField() = default;
    size_t idx(Fq a, Fq b) const { return static_cast<size_t>(a) * q_ + b; }

    uint32_t p_ = 0, m_ = 0, q_ = 0;
    std::vector<uint32_t> modulus_;
    std::vector<Fq> add_, mul_, neg_, inv_;
};

using FqFieldPtr = std::shared_ptr<const FqField>;

}  // namespace cycres
