// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include "cycres/multipoly.hpp"
#include "cycres/scenario.hpp"

namespace testutil {

using namespace cycres;

inline DvrElement random_element(SplitMix64& rng, const RingPtr& R, uint32_t prec = 0) {
    uint32_t n = prec ? prec : R->N();
    std::vector<Fq> d(n, 0);
    for (auto& c : d) c = static_cast<Fq>(rng.below(R->q()));
    return R->from_digits(std::move(d));
}

inline DvrElement random_unit(SplitMix64& rng, const RingPtr& R) {
    DvrElement e = random_element(rng, R);
    std::vector<Fq> d = e.digits();
    d[0] = static_cast<Fq>(1 + rng.below(R->q() - 1));
    return R->from_digits(std::move(d));
}

inline MultiPoly random_poly(SplitMix64& rng, const PolyRingPtr& ring, size_t terms,
                             uint16_t max_deg) {
    MultiPoly f(ring);
    for (size_t t = 0; t < terms; ++t) {
        std::vector<uint16_t> e(ring->vars.size(), 0);
        for (auto& x : e) x = static_cast<uint16_t>(rng.below(max_deg + 1));
        f.add_term(std::move(e), random_element(rng, ring->R));
    }
    return f;
}

// Equality modulo precision: every coefficient of the difference is zero at
// the precision both sides can justify.
inline bool agree(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly d = a - b;
    for (const auto& [e, c] : d.terms())
        if (!c.is_zero_at_prec()) return false;
    return true;
}

}  // namespace testutil
