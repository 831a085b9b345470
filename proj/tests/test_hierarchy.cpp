#include <doctest.h>

#include <cmath>

#include "fnls/error.hpp"
#include "fnls/hierarchy.hpp"
#include "fnls/nonlinearity.hpp"
#include "fnls/spectral.hpp"
#include "fnls/test_fields.hpp"

using namespace fnls;

namespace {

const SpectralGrid& grid() {
  static const SpectralGrid g(1024, 32.0 * kPi);
  return g;
}

ComplexField packet(double a = 0.5) { return make_test_field(field_kind::Gaussian{a, 0.0, 0.5, 3.0}, grid()); }

ComplexField product(const ComplexField& a, const ComplexField& b) {
  ComplexField out(a.grid);
  for (std::size_t j = 0; j < a.size(); ++j) out.values[j] = a.values[j] * b.values[j];
  return out;
}

double pair_gap(const PairField& a, const PairField& b) {
  const double num = std::hypot(l2_norm(a.first - b.first), l2_norm(a.second - b.second));
  return num / std::hypot(l2_norm(b.first), l2_norm(b.second));
}

}  // namespace

TEST_SUITE("hierarchy") {
  TEST_CASE("first-order operator") {
    const SpectralGrid g(64, 2.0 * kPi);
    ComplexField e(g);
    for (std::size_t j = 0; j < g.n(); ++j) e.values[j] = std::polar(1.0, 3.0 * g.x(j));
    const auto out = d1_apply(PairField::from_field(e));
    CHECK(relative_l2(out.first, cplx{0.0, 3.0} * e, e) < 1e-13);
    CHECK(relative_l2(out.second, cplx{0.0, 3.0} * conjugate(e), e) < 1e-13);

    ComplexField one(g);
    for (auto& v : one.values) v = 1.0;
    CHECK(max_abs(d1_apply(PairField{one, one}).first) < 1e-14);

    const auto u = packet();
    const auto twice = d1_apply(d1_apply(PairField::from_field(u)));
    CHECK(relative_l2(twice.first, derivative(u, 2), u) < 1e-12);
    CHECK(relative_l2(twice.second, derivative(conjugate(u), 2), u) < 1e-12);
  }

  TEST_CASE("tail-integral operator") {
    const auto u = packet();
    const auto U = PairField::from_field(u);
    const auto mass = product(u, conjugate(u));
    const auto d2 = d2_apply(U, U);
    CHECK(pair_gap(d2, PairField{product(mass, u), product(mass, conjugate(u))}) < 1e-8);

    const ComplexField zero(grid());
    CHECK(max_abs(d2_apply(PairField{zero, zero}, U).first) == 0.0);

    const auto v1 = PairField::from_field(make_test_field(field_kind::Gaussian{0.3, 1.0, -0.4, 2.0}, grid()));
    const auto v2 = PairField::from_field(make_test_field(field_kind::Sech{0.2, -2.0, 0.3, 1.5}, grid()));
    const cplx a{0.7, -0.2}, b{-1.1, 0.4};
    const auto lhs = d2_apply(U, PairField{a * v1.first + b * v2.first, a * v1.second + b * v2.second});
    const auto p1 = d2_apply(U, v1), p2 = d2_apply(U, v2);
    CHECK(pair_gap(lhs, PairField{a * p1.first + b * p2.first, a * p1.second + b * p2.second}) < 1e-12);

    const SpectralGrid g(64, 2.0 * kPi);
    ComplexField flat(g);
    for (auto& v : flat.values) v = 1.0;
    CHECK_THROWS_AS(d2_apply(PairField::from_field(flat), PairField::from_field(flat)), ResolutionError);
  }

  TEST_CASE("recursion operator") {
    const auto u = packet();
    const auto U = PairField::from_field(u);
    const auto r = recursion_apply(U, U);
    const auto want = derivative(u) + cplx{0.0, 1.0} * product(product(u, conjugate(u)), u);
    CHECK(relative_l2(cplx{0.0, -2.0} * r.first, want, want) < 1e-8);

    const ComplexField zero(grid());
    const auto v = PairField::from_field(make_test_field(field_kind::Gaussian{0.3, 1.0, -0.4, 2.0}, grid()));
    const auto free_part = recursion_apply(PairField{zero, zero}, v);
    const auto d1 = d1_apply(v);
    CHECK(relative_l2(free_part.first, cplx{0.0, 0.5} * d1.first, d1.first) < 1e-15);
  }

  TEST_CASE("n = 1 flow is the derivative NLS") {
    const auto u = packet();
    const auto got = hierarchy_rhs(u, 1);
    const auto want = derivative(u, 2) + cplx{0.0, 1.0} * derivative(product(product(u, conjugate(u)), u));
    CHECK(relative_l2(got, want, want) < 1e-8);
    CHECK(max_abs(hierarchy_rhs(ComplexField(grid()), 2)) == 0.0);
    CHECK_THROWS_AS(hierarchy_rhs(u, 3), ConfigError);
  }

  TEST_CASE("n = 2 linear part is the fourth derivative") {
    const auto u = packet();
    const auto d4 = derivative(u, 4);
    for (double eps : {1e-3, 1e-4}) {
      const auto lin = (1.0 / eps) * hierarchy_rhs(eps * u, 2);
      CHECK(relative_l2(lin, d4, d4) < 10.0 * eps * eps);
    }
  }

  TEST_CASE("n = 2 flow against the explicit nonlinearities") {
    const auto u = packet();
    const auto recursion = builtin::dnls_hierarchy_n2_from_recursion();
    CHECK(hierarchy_vs_explicit(u, recursion) < 1e-8);
    for (const auto& gap : hierarchy_degree_gaps(u, recursion)) CHECK(gap.relative_gap < 1e-8);

    // The closed-form cubic differs from the generated one; the higher degrees agree.
    for (const auto& gap : hierarchy_degree_gaps(u, builtin::dnls_hierarchy_n2())) {
      if (gap.degree == 3)
        CHECK(gap.relative_gap > 0.1);
      else
        CHECK(gap.relative_gap < 1e-8);
    }
    CHECK(hierarchy_vs_explicit(ComplexField(grid())) == 0.0);
  }
}
