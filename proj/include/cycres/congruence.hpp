// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cycres {

// Degree-congruence arithmetic for rational endomorphisms of very general
// hypersurfaces of dimension n and degree d, plus the pullback/iteration
// bounds used by the specialization argument.  Everything here is exact
// integer arithmetic.

struct AdmissiblePrime {
    uint32_t p = 0;
    bool effective = false;  // p >= 3; p = 2 is admissible but constrains nothing
};

// All primes p <= d with d >= p * ceil((n+3)/(p+1)), ascending.
std::vector<AdmissiblePrime> admissible_primes(uint32_t n, uint64_t d);

struct LambdaVerdict {
    uint32_t p = 0;
    bool effective = false;
    uint32_t residue = 0;
    bool allowed = false;  // residue in {0, 1}
};

struct LambdaReport {
    bool allowed = false;  // conjunction over the effective primes
    std::vector<LambdaVerdict> per_prime;
};

// Is a degree-lambda rational endomorphism consistent with every effective
// admissible prime (lambda = 0 or 1 mod p)?
LambdaReport lambda_allowed(uint32_t n, uint64_t d, uint64_t lambda);

struct RemarkCheck {
    bool lhs = false;  // d = pe + f satisfies d >= p * ceil((n+3)/(p+1))
    bool rhs = false;  // pe + e - n - 2 > 0
};

// The two forms of the degree threshold; they agree for every p prime,
// e >= 1, 0 <= f < p (property-tested exhaustively).
RemarkCheck remark_equivalence(uint32_t p, uint32_t n, uint64_t e, uint32_t f);

enum class FibrationKind { Elliptic, Genus1, Abelian };

std::string to_string(FibrationKind k);

struct FibrationQuery {
    FibrationKind kind = FibrationKind::Elliptic;
    uint32_t delta = 1;  // multiple-fiber degree (genus-1 fibrations)
    uint32_t g = 1;      // abelian-variety dimension
};

struct FibrationWitness {
    uint32_t p = 0;
    uint64_t m = 0;       // the multiplier whose endomorphism degree violates {0,1}
    uint64_t degree = 0;  // that degree: m^2, (m*delta+1)^2 or m^(2g)
    uint32_t residue = 0;
};

struct FibrationVerdict {
    bool excluded = false;
    std::optional<FibrationWitness> witness;
};

// A very general hypersurface of type (n, d) cannot fiber in the given way
// when some multiplication map's degree is a forbidden residue mod an
// effective admissible prime.  Multipliers m >= 2 (elliptic/abelian) or
// m >= 1 (genus1) are scanned up to m <= p + 1 per prime, which covers every
// residue class.
FibrationVerdict fibration_excluded(uint32_t n, uint64_t d, const FibrationQuery& q);

// 5 * ceil((n+3)/6): the least degree at which p = 5 becomes effective, so
// elliptic fibrations are excluded from there on.
uint64_t elliptic_threshold(uint32_t n);

// Exact comparison view of the n-th root of lambda (the pullback bound: a
// pullback multiplier a must satisfy a^n >= lambda).
struct NthRootBound {
    uint64_t lambda = 1;
    uint32_t n = 1;
    bool is_at_least(uint64_t a) const;  // a^n >= lambda, exact
    uint64_t minimal_integer() const;    // least a with a^n >= lambda
};

NthRootBound kt_pullback_bound(uint64_t lambda, uint32_t n);

// Minimal k >= 1 with lambda^k * c^n > S^n, exact: the iterate count at
// which a degree-lambda endomorphism forces a contradiction against the
// sweep bound S/c.  Requires lambda >= 2.
uint64_t iteration_bound(uint64_t lambda, uint32_t n, uint64_t S, uint64_t c);

// Specialization degree ledger: a degree splits over the special fiber into
// a main component plus exceptional contributions, and contributions from
// divisors with the divisibility hypothesis drop out mod ell.
struct DegreeLedger {
    uint64_t main_degree = 0;
    std::vector<uint64_t> exceptional_degrees;
    uint64_t modulus = 2;  // ell >= 2
};

struct LedgerStatement {
    uint64_t total = 0;           // main + sum of exceptional
    uint64_t total_residue = 0;   // total mod ell
    uint64_t main_residue = 0;    // main mod ell
    bool congruent = false;       // total == main mod ell
};

// Verifies the flagged divisibilities (InvalidScenario with "flag violated"
// otherwise) and returns the residue statement; when every exceptional
// degree is flagged, congruent is guaranteed true.
LedgerStatement specialize_ledger(const DegreeLedger& ledger,
                                  const std::vector<bool>& divisibility);

struct IntroRow {
    uint32_t n = 0, d = 0;
    std::string label;             // "Calabi-Yau" | "Fano"
    std::vector<uint32_t> moduli;  // effective admissible primes
};

// The four headline (n, d) cases with their effective constraint sets; the
// rows are recomputed and cross-checked against the expected values.
std::vector<IntroRow> intro_table();

}  // namespace cycres
