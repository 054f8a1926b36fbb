// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cycres/fq.hpp"

namespace cycres {

// Sparse multivariate polynomial over a finite field; the workhorse for
// central fibers, exceptional-divisor equations, Jacobians and witness
// certificates.  Term order (lex on exponent vectors) is deterministic, so
// printing is canonical.
class CFPoly {
  public:
    CFPoly() = default;
    CFPoly(FqFieldPtr F, std::vector<std::string> vars) : F_(std::move(F)), vars_(std::move(vars)) {}

    const FqFieldPtr& field() const { return F_; }
    const std::vector<std::string>& vars() const { return vars_; }
    size_t nvars() const { return vars_.size(); }
    const std::map<std::vector<uint16_t>, Fq>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    void add_term(const std::vector<uint16_t>& expo, Fq c);
    Fq coeff(const std::vector<uint16_t>& expo) const;

    CFPoly operator+(const CFPoly& o) const;
    CFPoly operator-(const CFPoly& o) const;
    CFPoly operator*(const CFPoly& o) const;
    CFPoly neg() const;
    CFPoly scale(Fq c) const;
    bool operator==(const CFPoly& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

    int total_degree() const;  // -1 for the zero polynomial
    int degree_in(size_t var) const;
    CFPoly graded_part(int d) const;

    Fq eval(const std::vector<Fq>& point) const;
    // Evaluation after extension of scalars: `table` maps this field's
    // elements into E (see FqField::embedding_from), point has entries in E.
    Fq eval_ext(const FqField& E, const std::vector<Fq>& table, const std::vector<Fq>& point) const;

    CFPoly partial(size_t var) const;
    std::vector<CFPoly> jacobian() const;

    // v_i -> images[i]; all images must share one variable list.
    CFPoly substitute(const std::vector<CFPoly>& images) const;
    // v_i -> v_i + a_i (Taylor recentering).
    CFPoly translate(const std::vector<Fq>& point) const;
    // Homogenize to total degree d with a fresh last variable.
    CFPoly homogenize(const std::string& new_var, int d) const;
    // Same terms, variables renamed/embedded into a larger list; `where[i]`
    // is the index of vars()[i] inside new_vars.
    CFPoly embed_vars(const std::vector<std::string>& new_vars, const std::vector<size_t>& where) const;

    // Extension of scalars along `table` (see FqField::embedding_from).
    CFPoly map_scalars(const FqFieldPtr& E, const std::vector<Fq>& table) const;

    static CFPoly constant(FqFieldPtr F, std::vector<std::string> vars, Fq c);
    static CFPoly variable(FqFieldPtr F, std::vector<std::string> vars, size_t idx);

    std::string to_string() const;
    static CFPoly parse(const FqFieldPtr& F, const std::vector<std::string>& vars,
                        const std::string& text);

  private:
    FqFieldPtr F_;
    std::vector<std::string> vars_;
    std::map<std::vector<uint16_t>, Fq> terms_;
};

// Iterates fn over all points of E^n in lexicographic order unless the total
// exceeds `budget` (then BudgetExceeded).  fn returning false stops early.
void for_each_point(const FqField& E, size_t n, uint64_t budget,
                    const std::function<bool(const std::vector<Fq>&)>& fn);

// Hessian of f restricted to the first nx variables: H[i][j] = d^2 f / dv_i dv_j.
// In characteristic 2 the diagonal vanishes and H is the alternating form of
// the quadratic part (coefficient of v_i v_j off the diagonal).
std::vector<std::vector<Fq>> hessian_matrix(const CFPoly& f, size_t nx);

// Row rank over F (destroys its copy of M).
uint32_t fq_matrix_rank(const FqField& F, std::vector<std::vector<Fq>> M);

// Determinant over F (square M).
Fq fq_matrix_det(const FqField& F, std::vector<std::vector<Fq>> M);

}  // namespace cycres
