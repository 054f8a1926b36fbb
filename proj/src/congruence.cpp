// SPDX-License-Identifier: MIT
#include "cycres/congruence.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "cycres/errors.hpp"

namespace cycres {

using boost::multiprecision::cpp_int;

namespace {

bool is_prime(uint64_t p) {
    if (p < 2) return false;
    for (uint64_t f = 2; f * f <= p; ++f)
        if (p % f == 0) return false;
    return true;
}

uint64_t ceil_div(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t mod) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % mod);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t mod) {
    uint64_t r = 1 % mod;
    a %= mod;
    while (e) {
        if (e & 1) r = mulmod(r, a, mod);
        a = mulmod(a, a, mod);
        e >>= 1;
    }
    return r;
}

cpp_int ipow(uint64_t base, uint32_t e) {
    cpp_int r = 1, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace

std::vector<AdmissiblePrime> admissible_primes(uint32_t n, uint64_t d) {
    if (n < 3) throw InvalidScenario("admissible_primes needs n >= 3");
    if (d < 1) throw InvalidScenario("admissible_primes needs d >= 1");
    if (d > 10'000'000) throw InvalidScenario("degree too large for prime enumeration");
    std::vector<AdmissiblePrime> out;
    for (uint64_t p = 2; p <= d; ++p) {
        if (!is_prime(p)) continue;
        if (d >= p * ceil_div(n + 3, p + 1))
            out.push_back(AdmissiblePrime{static_cast<uint32_t>(p), p >= 3});
    }
    return out;
}

LambdaReport lambda_allowed(uint32_t n, uint64_t d, uint64_t lambda) {
    if (lambda < 1) throw InvalidScenario("lambda_allowed needs lambda >= 1");
    LambdaReport rep;
    rep.allowed = true;
    for (const auto& ap : admissible_primes(n, d)) {
        LambdaVerdict v;
        v.p = ap.p;
        v.effective = ap.effective;
        v.residue = static_cast<uint32_t>(lambda % ap.p);
        v.allowed = v.residue <= 1;
        if (ap.effective && !v.allowed) rep.allowed = false;
        rep.per_prime.push_back(v);
    }
    return rep;
}

RemarkCheck remark_equivalence(uint32_t p, uint32_t n, uint64_t e, uint32_t f) {
    if (!is_prime(p)) throw InvalidScenario("remark_equivalence needs a prime p");
    if (e < 1) throw InvalidScenario("remark_equivalence needs e >= 1");
    if (f >= p) throw InvalidScenario("remark_equivalence needs 0 <= f < p");
    uint64_t d = static_cast<uint64_t>(p) * e + f;
    RemarkCheck out;
    out.lhs = d >= static_cast<uint64_t>(p) * ceil_div(n + 3, p + 1);
    // pe + e - n - 2 > 0, kept in signed arithmetic
    out.rhs = static_cast<int64_t>(p) * static_cast<int64_t>(e) + static_cast<int64_t>(e) -
                  static_cast<int64_t>(n) - 2 >
              0;
    return out;
}

std::string to_string(FibrationKind k) {
    switch (k) {
        case FibrationKind::Elliptic: return "elliptic";
        case FibrationKind::Genus1: return "genus1";
        case FibrationKind::Abelian: return "abelian";
    }
    return "?";
}

FibrationVerdict fibration_excluded(uint32_t n, uint64_t d, const FibrationQuery& q) {
    if (q.kind == FibrationKind::Genus1 && q.delta < 1)
        throw InvalidScenario("genus-1 exclusion needs delta >= 1");
    if (q.kind == FibrationKind::Abelian && q.g < 1)
        throw InvalidScenario("abelian exclusion needs g >= 1");
    FibrationVerdict out;
    for (const auto& ap : admissible_primes(n, d)) {
        if (!ap.effective) continue;
        uint64_t p = ap.p;
        uint64_t m0 = q.kind == FibrationKind::Genus1 ? 1 : 2;
        // m <= p + 1 visits every residue class of the multiplier
        for (uint64_t m = m0; m <= p + 1; ++m) {
            uint64_t r;
            cpp_int deg;
            switch (q.kind) {
                case FibrationKind::Elliptic:
                    r = mulmod(m % p, m % p, p);
                    deg = cpp_int(m) * m;
                    break;
                case FibrationKind::Genus1: {
                    uint64_t base = (mulmod(m % p, q.delta % p, p) + 1) % p;
                    r = mulmod(base, base, p);
                    deg = (cpp_int(m) * q.delta + 1) * (cpp_int(m) * q.delta + 1);
                    break;
                }
                case FibrationKind::Abelian:
                    r = powmod(m, 2ull * q.g, p);
                    deg = ipow(m, 2 * q.g);
                    break;
                default: throw CycresError("unknown fibration kind");
            }
            if (r > 1) {
                FibrationWitness w;
                w.p = ap.p;
                w.m = m;
                w.residue = static_cast<uint32_t>(r);
                // degrees stay small for the scanned m, but guard anyway
                w.degree = deg <= cpp_int(UINT64_MAX) ? static_cast<uint64_t>(deg) : 0;
                out.excluded = true;
                out.witness = w;
                return out;
            }
        }
    }
    return out;
}

uint64_t elliptic_threshold(uint32_t n) {
    if (n < 3) throw InvalidScenario("elliptic_threshold needs n >= 3");
    return 5 * ceil_div(n + 3, 6);
}

bool NthRootBound::is_at_least(uint64_t a) const { return ipow(a, n) >= lambda; }

uint64_t NthRootBound::minimal_integer() const {
    uint64_t lo = 1, hi = lambda ? lambda : 1;  // lambda >= 1, and lambda^n >= lambda
    while (lo < hi) {
        uint64_t mid = lo + (hi - lo) / 2;
        if (is_at_least(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

NthRootBound kt_pullback_bound(uint64_t lambda, uint32_t n) {
    if (lambda < 1) throw InvalidScenario("kt_pullback_bound needs lambda >= 1");
    if (n < 1) throw InvalidScenario("kt_pullback_bound needs n >= 1");
    return NthRootBound{lambda, n};
}

uint64_t iteration_bound(uint64_t lambda, uint32_t n, uint64_t S, uint64_t c) {
    if (lambda < 2) throw InvalidScenario("iteration_bound needs lambda >= 2");
    if (n < 1 || S < 1 || c < 1) throw InvalidScenario("iteration_bound needs n, S, c >= 1");
    cpp_int target = ipow(S, n);
    cpp_int cn = ipow(c, n);
    cpp_int acc = 1;
    for (uint64_t k = 1;; ++k) {
        acc *= lambda;
        if (acc * cn > target) return k;
        if (k > 64 * n + 64)
            throw CycresError("iteration bound failed to terminate");  // unreachable: lambda >= 2
    }
}

LedgerStatement specialize_ledger(const DegreeLedger& ledger,
                                  const std::vector<bool>& divisibility) {
    if (ledger.modulus < 2) throw InvalidScenario("ledger modulus must be >= 2");
    if (divisibility.size() != ledger.exceptional_degrees.size())
        throw InvalidScenario("one divisibility flag per exceptional degree is required");
    bool all_flagged = true;
    for (size_t i = 0; i < ledger.exceptional_degrees.size(); ++i) {
        if (!divisibility[i]) {
            all_flagged = false;
            continue;
        }
        if (ledger.exceptional_degrees[i] % ledger.modulus != 0)
            throw InvalidScenario("flag violated: exceptional degree " +
                                  std::to_string(ledger.exceptional_degrees[i]) +
                                  " is not divisible by " + std::to_string(ledger.modulus));
    }
    LedgerStatement st;
    st.total = ledger.main_degree;
    for (uint64_t e : ledger.exceptional_degrees) st.total += e;
    st.total_residue = st.total % ledger.modulus;
    st.main_residue = ledger.main_degree % ledger.modulus;
    st.congruent = st.total_residue == st.main_residue;
    if (all_flagged && !st.congruent)
        throw CycresError("internal: all-flagged ledger failed the congruence");
    return st;
}

std::vector<IntroRow> intro_table() {
    struct Expected {
        uint32_t n, d;
        const char* label;
        std::vector<uint32_t> moduli;
    };
    const Expected expected[] = {
        {3, 5, "Calabi-Yau", {5}},
        {4, 6, "Calabi-Yau", {3}},
        {5, 6, "Fano", {3}},
        {5, 7, "Calabi-Yau", {3, 7}},
    };
    std::vector<IntroRow> rows;
    for (const auto& ex : expected) {
        IntroRow row;
        row.n = ex.n;
        row.d = ex.d;
        row.label = ex.d == ex.n + 2 ? "Calabi-Yau"
                    : ex.d <= ex.n + 1 ? "Fano"
                                       : "general type";
        for (const auto& ap : admissible_primes(ex.n, ex.d))
            if (ap.effective) row.moduli.push_back(ap.p);
        if (row.label != ex.label || row.moduli != ex.moduli)
            throw CycresError("intro table self-check failed for (n, d) = (" +
                              std::to_string(ex.n) + ", " + std::to_string(ex.d) + ")");
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace cycres
