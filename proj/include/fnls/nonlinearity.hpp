#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "fnls/field.hpp"

namespace fnls {

// coeff * prod_k d^k u * prod_k d^k conj(u), with derivative orders kept sorted.
struct Monomial {
  cplx coeff{1.0, 0.0};
  std::vector<int> u_orders;
  std::vector<int> ubar_orders;

  std::size_t degree() const { return u_orders.size() + ubar_orders.size(); }
  int max_order() const;
  bool same_factors(const Monomial& other) const {
    return u_orders == other.u_orders && ubar_orders == other.ubar_orders;
  }
  bool operator==(const Monomial&) const = default;
};

// Sorts exponent lists, merges equal factor patterns and orders the terms.
// Exact-zero terms are dropped when `drop_zeros` is set.
std::vector<Monomial> canonicalize(std::vector<Monomial> terms, bool drop_zeros);

// Symbolic d/dx of a sum of monomials (Leibniz rule).
std::vector<Monomial> differentiate(const std::vector<Monomial>& terms);
std::vector<Monomial> multiply(const std::vector<Monomial>& a, const std::vector<Monomial>& b);
std::vector<Monomial> scale(std::vector<Monomial> terms, cplx c);

// A polynomial nonlinearity in u, conj(u) and their derivatives up to order gamma.
class NonlinearitySpec {
 public:
  NonlinearitySpec(int gamma, std::vector<Monomial> monomials);

  int gamma() const { return gamma_; }
  std::size_t min_degree() const { return m_; }
  std::size_t max_degree() const { return l_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  bool is_zero() const;
  // Dealiasing pad factor ceil((l + 1) / 2).
  std::size_t pad_factor() const { return (l_ + 2) / 2; }

  bool operator==(const NonlinearitySpec&) const = default;

 private:
  int gamma_;
  std::vector<Monomial> monomials_;
  std::size_t m_ = 0;
  std::size_t l_ = 0;
};

namespace builtin {
NonlinearitySpec general(int gamma, std::vector<Monomial> terms);
// d^gamma sum_k C_k u^k conj(u)^(m-k), with coeffs = {C_0, ..., C_m}.
NonlinearitySpec gauge_power(int gamma, const std::vector<cplx>& coeffs);
// Vortex-filament model: coefficients lambda_1..lambda_5 derived from (mu, nu).
NonlinearitySpec fukumoto_moffatt(double mu, double nu);
// Integrable quintic-septic member with cubic part i(-3 u_x^2 ubar + (|u|^2)_xx u), differentiated.
NonlinearitySpec dnls_hierarchy_n2();
// Same flow with the cubic term that the recursion operator actually generates.
NonlinearitySpec dnls_hierarchy_n2_from_recursion();
}  // namespace builtin

struct FmCoefficients {
  double l1, l2, l3, l4, l5;
};
FmCoefficients fukumoto_moffatt_coefficients(double mu, double nu);

// Monomial-wise spectral differentiation, zero-padded products, truncation.
ComplexField evaluate_nonlinearity(const NonlinearitySpec& spec, const ComplexField& u);
// Evaluation restricted to monomials of one total degree.
ComplexField evaluate_degree(const NonlinearitySpec& spec, const ComplexField& u, std::size_t degree);

struct Rational {
  long num;
  long den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
};
Rational make_rational(long num, long den);

struct RegularityThresholds {
  Rational s_c;
  Rational s_0;
  bool s_0_open;  // s_0 is s_c + epsilon for an arbitrary epsilon > 0
};

RegularityThresholds regularity_thresholds(int gamma, int m);

// u -> theta^((4-gamma)/(m-1)) u(theta x) for dyadic theta, on the same grid.
ComplexField scale_field(const ComplexField& u, double theta, int gamma, int m);

void to_json(nlohmann::json& j, const NonlinearitySpec& spec);
NonlinearitySpec spec_from_json(const nlohmann::json& j);
std::string describe(const Monomial& m);

}  // namespace fnls
