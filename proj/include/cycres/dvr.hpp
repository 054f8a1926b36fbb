// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cycres/fq.hpp"

namespace cycres {

class DvrElement;

// Truncation R/pi^N of a totally ramified extension of W(F_q) in which
// p = tau * pi^k for a designated residue unit tau.  Elements are digit
// vectors (c_0, ..., c_{prec-1}) over F_q, unique for this presentation;
// arithmetic lifts digits canonically to the Galois ring GR(p^M, m),
// M = ceil(N/k), and renormalizes, turning each p-overflow at slot i into a
// tau-weighted carry at slot i+k.  That is what makes p * a literally equal
// a added p times, digit for digit.
class Ring : public std::enable_shared_from_this<Ring> {
  public:
    // tau is the index of a unit of F_q.  For odd p the chart maps need
    // 2(p-1) | k; pass allow_any_k = true to lift that check (the blowup
    // module re-checks it where it actually matters).
    static std::shared_ptr<const Ring> create(uint32_t p, uint32_t k, uint32_t q, uint32_t N,
                                              Fq tau, bool allow_any_k = false);

    uint32_t p() const { return p_; }
    uint32_t k() const { return k_; }
    uint32_t q() const { return q_; }
    uint32_t N() const { return N_; }
    uint32_t m() const { return m_; }
    Fq tau() const { return tau_; }
    const FqFieldPtr& field() const { return F_; }

    DvrElement zero(uint32_t prec) const;
    DvrElement zero() const;  // prec = N
    DvrElement one() const;
    DvrElement from_int(int64_t v) const;
    DvrElement from_fq(Fq c) const;                       // one-digit lift at prec N
    DvrElement from_digits(std::vector<Fq> d) const;      // prec = d.size()
    DvrElement pi_pow(uint32_t j) const;                  // pi^j at prec N
    DvrElement p_elem() const;                            // the element p = tau * pi^k

    // --- internals shared with DvrElement ---------------------------------
    // Flat accumulator layout: acc[i*m + j] = coefficient of t^j in the
    // Galois-ring value at pi-slot i, always reduced mod p^M.
    void renormalize(std::vector<uint64_t>& acc, uint32_t cap, std::vector<Fq>& out) const;
    void lift_digit(Fq d, uint64_t* out) const;  // canonical coefficient lift
    uint64_t pM() const { return pM_; }
    uint32_t M() const { return M_; }
    // c = a * b in GR(p^M, m); buffers of size m, c may alias neither input.
    void gr_mul(const uint64_t* a, const uint64_t* b, uint64_t* c) const;

  private:
    Ring() = default;
    uint32_t p_ = 0, k_ = 0, q_ = 0, N_ = 0, m_ = 0, M_ = 0;
    uint64_t pM_ = 0;
    Fq tau_ = 0;
    FqFieldPtr F_;
    std::vector<uint64_t> tau_lift_;  // size m
    std::vector<uint64_t> g_lift_;    // size m+1, canonical lift of the field modulus
};

using RingPtr = std::shared_ptr<const Ring>;

// Value type with capped absolute precision: the element is known modulo
// pi^prec.  Binary operations take the precision their inputs can justify
// (never more than N); using an element at zero precision throws.
class DvrElement {
  public:
    DvrElement() = default;
    DvrElement(RingPtr R, std::vector<Fq> digits);

    const RingPtr& ring() const { return R_; }
    uint32_t prec() const { return static_cast<uint32_t>(d_.size()); }
    const std::vector<Fq>& digits() const { return d_; }
    Fq digit(uint32_t i) const { return i < d_.size() ? d_[i] : 0; }

    // Index of the first nonzero digit; nullopt when every known digit is 0
    // (i.e. ord >= prec, indistinguishable from infinity at this precision).
    std::optional<uint32_t> ord_pi() const;

    bool is_zero() const;  // throws PrecisionError at prec 0
    bool is_zero_at_prec() const noexcept;  // non-throwing, for internal pruning
    bool is_unit() const;  // residue nonzero
    Fq residue() const;    // digit 0; throws PrecisionError at prec 0

    DvrElement with_prec(uint32_t prec) const;  // truncate (prec <= current)

    DvrElement operator+(const DvrElement& o) const;
    DvrElement operator-(const DvrElement& o) const;
    DvrElement operator-() const;
    DvrElement operator*(const DvrElement& o) const;
    bool operator==(const DvrElement& o) const;  // agreement at min precision (>= 1)
    bool operator!=(const DvrElement& o) const { return !(*this == o); }

    DvrElement mul_fq(Fq c) const;
    DvrElement mul_pow_pi(uint32_t j) const;
    DvrElement div_pow_pi(uint32_t j) const;  // InexactDivision if a low digit is nonzero
    DvrElement inverse() const;               // InexactDivision on non-units
    DvrElement pow(uint32_t e) const;

    // Canonical text: nonzero digits as "c*pi^i" joined by " + ", plus the
    // digit at index prec-1 always (even if zero) so precision round-trips.
    std::string to_string() const;
    static DvrElement parse(const RingPtr& R, const std::string& text);

  private:
    void require_prec(const char* op) const;
    RingPtr R_;
    std::vector<Fq> d_;
};

}  // namespace cycres
