// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cycres/cfpoly.hpp"
#include "cycres/dvr.hpp"

namespace cycres {

// Coefficient ring R plus named variables; an optional relation
// vars[first] * vars[second] = pi makes the ring the coordinate ring of a
// weighted-blowup chart that meets the special fiber in two components.
// Normal form for such rings: no monomial carries both relation variables
// (the minimum power is folded into the coefficient as a power of pi).
struct PolyRing {
    RingPtr R;
    std::vector<std::string> vars;
    std::optional<std::pair<size_t, size_t>> relation;

    size_t var_index(const std::string& name) const;
    bool is_relation_var(size_t v) const {
        return relation && (relation->first == v || relation->second == v);
    }
    size_t relation_partner(size_t v) const {
        return relation->first == v ? relation->second : relation->first;
    }
};

using PolyRingPtr = std::shared_ptr<const PolyRing>;

PolyRingPtr make_poly_ring(RingPtr R, std::vector<std::string> vars,
                           std::optional<std::pair<size_t, size_t>> relation = std::nullopt);

class MultiPoly {
  public:
    MultiPoly() = default;
    explicit MultiPoly(PolyRingPtr ring) : ring_(std::move(ring)) {}

    const PolyRingPtr& ring() const { return ring_; }
    const std::map<std::vector<uint16_t>, DvrElement>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    // Adds c * monomial(expo); folds in the chart relation, prunes
    // zero-at-precision coefficients.
    void add_term(std::vector<uint16_t> expo, DvrElement c);
    // Coefficient of an exact monomial (exact zero if absent).
    DvrElement coeff(const std::vector<uint16_t>& expo) const;

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly neg() const;
    MultiPoly scale(const DvrElement& c) const;
    MultiPoly mul_pow_pi(uint32_t j) const;

    int degree_in(size_t var) const;  // -1 when absent

    // Exact division of every coefficient by pi^j (InexactDivision if any
    // term refuses; relation monomials cannot absorb pi because normal form
    // keeps min(relation exponents) = 0).
    MultiPoly div_pow_pi(uint32_t j) const;

    // Exact division by vars[v]^e; in a relation ring a deficit of j powers
    // is borrowed as partner^j / pi^j from the coefficient.
    MultiPoly div_var_pow(size_t v, uint32_t e) const;

    // v_i -> images[i] over a target ring sharing the same coefficient R.
    MultiPoly substitute(const PolyRingPtr& target, const std::vector<MultiPoly>& images) const;

    // Coefficient-wise residue; in relation charts the relation monomials
    // survive untouched (pi itself has residue 0, which is consistent:
    // digits >= 1 die).
    CFPoly central_fiber() const;

    // Restriction to the exceptional component {vars[v] = 0}: drops every
    // monomial containing v, takes residues, and removes v from the
    // variable list.
    CFPoly exceptional_cf(size_t v) const;

    // Scalar extension used by regularity certificates: coefficients are
    // expanded digit-by-digit up to pi^(digit_cap-1); each pi becomes the
    // relation monomial, or a fresh trailing variable "pi" when the ring has
    // no relation and digit_cap > 1.  emb maps F_q into E.
    CFPoly expand_scalars(const FqFieldPtr& E, const std::vector<Fq>& emb,
                          uint32_t digit_cap) const;

    std::string to_string() const;
    static MultiPoly parse(const PolyRingPtr& ring, const std::string& text);

    static MultiPoly constant(const PolyRingPtr& ring, DvrElement c);
    static MultiPoly variable(const PolyRingPtr& ring, size_t idx);

  private:
    PolyRingPtr ring_;
    std::map<std::vector<uint16_t>, DvrElement> terms_;
};

// Parts of f by total degree in the distinguished block x = vars[0..nx):
// degree 0, 1, 2 and everything of degree >= 3.
struct GradedParts {
    MultiPoly constant, linear, quadratic, cubic_plus;
};

GradedParts grade_in_x(const MultiPoly& f, size_t nx);

}  // namespace cycres
