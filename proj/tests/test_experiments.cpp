#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fnls/error.hpp"
#include "fnls/experiments.hpp"
#include "fnls/inflation.hpp"

using namespace fnls;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("experiments_cli") {
  TEST_CASE("slope fits") {
    const std::vector<double> xs{1.0, 2.0, 4.0, 8.0, 16.0};
    std::vector<double> sq, flat, noisy;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    for (double x : xs) {
      sq.push_back(x * x);
      flat.push_back(3.0);
      noisy.push_back(std::sqrt(x) * (1.0 + 0.01 * noise(rng)));
    }
    const auto a = fit_slope(xs, sq);
    CHECK(a.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(a.residual < 1e-14);
    CHECK(std::abs(fit_slope(xs, flat).slope) < 1e-14);
    CHECK(std::abs(fit_slope(xs, noisy).slope - 0.5) < 0.02);
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(fit_slope(two, two), ConfigError);
    const std::vector<double> bad{1.0, -2.0, 3.0};
    CHECK_THROWS_AS(fit_slope(std::span<const double>(xs).first(3), bad), ConfigError);
  }

  TEST_CASE("configuration schema") {
    CHECK(experiment_kinds().size() == 9);
    for (const auto& kind : experiment_kinds()) {
      CHECK_FALSE(experiment_schema(kind).empty());
      CHECK_FALSE(describe_experiment(kind).empty());
      const auto cfg = make_experiment_config(kind, nlohmann::json::object(), 1);
      for (const auto& p : experiment_schema(kind)) CHECK(cfg.params.contains(p.key));
    }
    CHECK_THROWS_AS(make_experiment_config("kernel_decay", {{"bogus", 1}}, 1), ConfigError);
    CHECK_THROWS_AS(make_experiment_config("kernel_decay", {{"cutoff", "big"}}, 1), ConfigError);
    CHECK_THROWS_AS(make_experiment_config("no_such_kind", nlohmann::json::object(), 1), ConfigError);
    const auto cfg = make_experiment_config("kernel_decay", {{"cutoff", 8}}, 3);
    CHECK(cfg.params["cutoff"] == 8);
    CHECK(cfg.seed == 3);

    const auto doc = nlohmann::json::parse(R"({"kind": "kernel_decay", "seed": 9, "params": {"z_points": 51}})");
    const auto from_doc = experiment_config_from_json("kernel_decay", doc);
    CHECK(from_doc.seed == 9);
    CHECK(from_doc.params["z_points"] == 51);
    CHECK_THROWS_AS(experiment_config_from_json("scaling_invariance", doc), ConfigError);
  }

  TEST_CASE("overrides") {
    nlohmann::json p = nlohmann::json::object();
    apply_override(p, "cutoff=8");
    apply_override(p, "placement=inner");
    apply_override(p, "N_values=[16,32]");
    apply_override(p, "tag=a=b");
    CHECK(p["cutoff"] == 8);
    CHECK(p["placement"] == "inner");
    CHECK(p["N_values"] == nlohmann::json::array({16, 32}));
    CHECK(p["tag"] == "a=b");
    CHECK_THROWS_AS(apply_override(p, "novalue"), ConfigError);
    CHECK_THROWS_AS(apply_override(p, "=3"), ConfigError);
  }

  TEST_CASE("resonance factor against numeric time quadrature") {
    for (double w : {0.0, 2.0, -35.0, 300.0}) {
      const double t = 0.7;
      const std::size_t m = 4000;
      const double h = t / static_cast<double>(m);
      cplx simpson{};
      for (std::size_t j = 0; j <= m; ++j) {
        const double c = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        simpson += c * std::polar(1.0, w * h * static_cast<double>(j));
      }
      simpson *= h / 3.0;
      CHECK(std::abs(resonance_factor(w, t) - simpson) < 1e-9);
    }
  }

  TEST_CASE("third iterate quadrature") {
    const InflationDatum d{64.0, -0.25, 1};
    SimplexOptions coarse;
    coarse.points_per_band = 16;
    SimplexOptions fine;
    fine.points_per_band = 32;
    const double a = third_iterate_sobolev(d, 0.5, coarse);
    const double b = third_iterate_sobolev(d, 0.5, fine);
    CHECK(a > 0.0);
    CHECK(std::abs(a - b) / b < 0.02);
    CHECK(simplex_output_frequencies(d, 16).size() == third_iterate_spectrum(d, 0.5, coarse).size());
    // Short-time regime: the iterate grows linearly in t.
    const double r = third_iterate_sobolev(d, 2e-8, coarse) / third_iterate_sobolev(d, 1e-8, coarse);
    CHECK(r == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(third_iterate_sobolev(d, 0.0, coarse) == 0.0);
    // Inner placement is a separate quadrature path.
    SimplexOptions inner = coarse;
    inner.placement = DerivativePlacement::inner;
    CHECK(third_iterate_sobolev(d, 0.5, inner) > 0.0);
    CHECK(d.expected_rate() == doctest::Approx(0.5));
  }

  TEST_CASE("deterministic results and summary") {
    const auto base = std::filesystem::temp_directory_path() / "fnls_determinism";
    std::filesystem::remove_all(base);
    std::vector<std::string> csv;
    ResultRecord last;
    for (const char* sub : {"a", "b"}) {
      const auto dir = base / sub;
      auto cfg = make_experiment_config("kernel_decay", {{"z_points", 41}}, 1, dir.string());
      last = run_experiment(cfg);
      REQUIRE(std::filesystem::exists(dir / "results.csv"));
      REQUIRE(std::filesystem::exists(dir / "summary.json"));
      csv.push_back(slurp(dir / "results.csv"));
    }
    CHECK(csv[0] == csv[1]);
    CHECK(csv[0].rfind("t[", 0) == 0);
    const auto summary = summary_json(last);
    for (const char* key : {"config", "pass", "valid", "diagnostics", "wall_ms", "slope", "residual"})
      CHECK(summary.contains(key));
    CHECK(summary["config"]["kind"] == "kernel_decay");
    CHECK(last.pass);
    std::filesystem::remove_all(base);
  }
}
