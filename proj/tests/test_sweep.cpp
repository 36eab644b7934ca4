#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "paneitz/errors.hpp"
#include "paneitz/sweep.hpp"

using namespace paneitz;

namespace {

SweepConfig config(std::vector<double> alphas) {
  SweepConfig c;
  c.alphas = std::move(alphas);
  return c;
}

std::string csv_of(const std::vector<SweepRecord>& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("alpha grids") {
  const auto g = alpha_grid(2.0, 128.0, 7, true);
  REQUIRE(g.size() == 7);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(std::pow(2.0, i + 1.0)).epsilon(1e-14));
  CHECK(g.front() == 2.0);
  CHECK(g.back() == 128.0);
  const auto lin = alpha_grid(1.0, 3.0, 5, false);
  CHECK(lin[1] == doctest::Approx(1.5));
  CHECK(alpha_grid(0.5, 0.5, 1).size() == 1);
  CHECK_THROWS_AS(alpha_grid(0.0, 1.0, 3), DomainError);
  CHECK_THROWS_AS(alpha_grid(2.0, 1.0, 3), DomainError);
}

TEST_CASE("schedule files") {
  std::istringstream in("# alpha a\n2 1\n4 3.5\n\n8 16 # model\n");
  const auto s = read_schedule(in);
  CHECK(s(2.0) == 1.0);
  CHECK(s(4.0) == 3.5);
  CHECK(s(8.0) == 16.0);
  CHECK_THROWS_AS(s(3.0), InputError);
  std::istringstream bad("2 1 7\n");
  CHECK_THROWS_AS(read_schedule(bad), InputError);
  std::istringstream dup("2 1\n2 1\n");
  CHECK_THROWS_AS(read_schedule(dup), InputError);
  CHECK_THROWS_AS(load_schedule("/nonexistent/schedule.txt"), InputError);
  CHECK(model_schedule()(6.0) == 9.0);
}

TEST_CASE("below the bifurcation only the constant branch exists") {
  const auto r = run_sweep(config({0.5}));
  REQUIRE(r.size() == 1);
  CHECK_FALSE(r[0].E_nonconst.has_value());
  CHECK_FALSE(r[0].is_nonconstant);
  CHECK(r[0].E_m_estimate == r[0].E_const);
  CHECK(r[0].E_const == doctest::Approx(std::pow(1.0 / 16.0, 1.25) * 165.366).epsilon(1e-5));
  CHECK(r[0].E_const == doctest::Approx(5.17).epsilon(1e-3));
  CHECK(r[0].R_L2 == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::isnan(r[0].R_gradL2));
  CHECK(r[0].modes_used == 64);
  CHECK(r[0].residual_sup <= 1e-13);
}

TEST_CASE("a nonconstant branch at alpha = 8") {
  const auto r = run_sweep(config({8.0}));
  REQUIRE(r.size() == 1);
  REQUIRE(r[0].E_nonconst.has_value());
  CHECK(*r[0].E_nonconst < r[0].E_const);
  CHECK(r[0].E_const == doctest::Approx(5292.0).epsilon(1e-3));
  CHECK(r[0].is_nonconstant);
  CHECK(r[0].E_m_estimate == *r[0].E_nonconst);
  CHECK(r[0].c_alpha == 4.0);
  CHECK(r[0].d_alpha == 4.0);
}

TEST_CASE("sweep rows and invariants") {
  const auto cfg = config({1.5, 3.0, 6.0, 12.0});
  const auto r = run_sweep(cfg);
  REQUIRE(r.size() == 4);
  const double volume = product_volume(cfg.spec);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& row = r[i];
    CHECK(row.alpha == cfg.alphas[i]);
    CHECK(row.E_const == constant_branch(5, row.a_alpha, volume).energy);
    CHECK(row.E_m_estimate <= row.E_const);
    CHECK(row.E_m_estimate <= std::pow(row.a_alpha, 1.25) * volume);
    CHECK(row.E_nonconst.has_value());
    CHECK(row.residual_sup <= 1e-11);
    if (i > 0) CHECK(row.E_m_estimate > r[i - 1].E_m_estimate);
  }
  // byte-identical reruns
  CHECK(csv_of(run_sweep(cfg)) == csv_of(r));
}

TEST_CASE("schedules violating a <= alpha^2/4 are rejected before solving") {
  auto cfg = config({1.0, 2.0});
  cfg.schedule = [](double a) { return a * a * a; };
  CHECK_THROWS_AS(run_sweep(cfg), FactorizationError);
  try {
    run_sweep(cfg);
  } catch (const FactorizationError& e) {
    CHECK(std::string(e.what()).find("a <= alpha^2/4") != std::string::npos);
  }
  auto bad_delta = config({1.0});
  bad_delta.delta = 10.0;
  CHECK_THROWS_AS(run_sweep(bad_delta), DomainError);
}

TEST_CASE("a general schedule") {
  auto cfg = config({4.0, 6.0});
  cfg.schedule = [](double a) { return 0.2 * a * a; };
  const auto r = run_sweep(cfg);
  CHECK(r[0].a_alpha == doctest::Approx(3.2));
  CHECK(r[1].E_nonconst.has_value());
  CHECK(r[1].c_alpha + r[1].d_alpha == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("branch continuation") {
  const ManifoldSpec spec(5, 1.0);
  const OperatorParams p4 = OperatorParams::model(4.0);
  const double ub = constant_branch(5, p4.a(), 1.0).u_bar;
  const auto m = minimize_quotient(
      PeriodicField::from_function(spec, 64, [&](double s) { return ub * (1.0 + 0.1 * std::cos(s)); }), p4);
  const auto s4 = rescale_to_solution(m.field, m.lambda_min, p4, SweepConfig::default_solver());
  const auto s5 = branch_continuation(s4, OperatorParams::model(5.0));
  CHECK_FALSE(s5.is_constant);
  CHECK(s5.params.alpha() == 5.0);
  CHECK(s5.newton_iterations <= 10);
  CHECK(s5.energy > s4.energy);

  // the constant branch continues to the new constant
  const auto c4 = make_solution(PeriodicField::constant(spec, 64, ub), p4, 0);
  const auto c8 = branch_continuation(c4, OperatorParams::model(8.0));
  CHECK(c8.is_constant);
  CHECK(c8.field.values()[0] == doctest::Approx(constant_branch(5, 16.0, 1.0).u_bar).epsilon(1e-12));
}

TEST_CASE("csv and json output") {
  auto r = run_sweep(config({0.5, 2.0}));
  std::ostringstream one;
  write_csv(one, {r[0]});
  const std::string text = one.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.rfind("alpha,a_alpha,c_alpha,d_alpha,E_const,E_nonconst,E_m_estimate,lambda_quotient,"
                   "lambda_vs_K0inv2,is_nonconstant,R_L2,R_gradL2,hessian_ratio_over_a,modes_used,"
                   "newton_iters,residual_sup\n", 0) == 0);

  std::istringstream in(csv_of(r));
  const auto back = read_csv(in);
  REQUIRE(back.size() == r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(back[i].alpha == r[i].alpha);
    CHECK(back[i].a_alpha == r[i].a_alpha);
    CHECK(back[i].E_const == r[i].E_const);
    CHECK(back[i].E_nonconst == r[i].E_nonconst);
    CHECK(back[i].E_m_estimate == r[i].E_m_estimate);
    CHECK(back[i].lambda_quotient == r[i].lambda_quotient);
    CHECK(back[i].is_nonconstant == r[i].is_nonconstant);
    CHECK(back[i].R_L2 == r[i].R_L2);
    CHECK(std::isnan(back[i].R_gradL2) == std::isnan(r[i].R_gradL2));
    if (!std::isnan(r[i].R_gradL2)) CHECK(back[i].R_gradL2 == r[i].R_gradL2);
    CHECK(back[i].hessian_ratio_over_a == r[i].hessian_ratio_over_a);
    CHECK(back[i].modes_used == r[i].modes_used);
    CHECK(back[i].newton_iters == r[i].newton_iters);
    CHECK(back[i].residual_sup == r[i].residual_sup);
  }

  std::ostringstream js;
  write_json(js, r);
  const auto parsed = nlohmann::json::parse(js.str());
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 2);
  std::vector<std::string> keys;
  for (auto it = parsed[0].begin(); it != parsed[0].end(); ++it) keys.push_back(it.key());
  std::vector<std::string> expected = sweep_columns();
  std::sort(keys.begin(), keys.end());
  std::sort(expected.begin(), expected.end());
  CHECK(keys == expected);
  CHECK(parsed[0]["E_nonconst"].is_null());
  CHECK(parsed[0]["R_gradL2"].is_null());
  CHECK(parsed[1]["E_nonconst"].get<double>() == *r[1].E_nonconst);

  const auto dir = std::filesystem::temp_directory_path();
  emit(r, dir / "paneitz_sweep_test.csv", OutputFormat::csv);
  std::ifstream f(dir / "paneitz_sweep_test.csv");
  std::stringstream content;
  content << f.rdbuf();
  CHECK(content.str() == csv_of(r));
  std::filesystem::remove(dir / "paneitz_sweep_test.csv");
  try {
    emit(r, "/nonexistent/dir/out.csv", OutputFormat::csv);
    FAIL("expected an I/O error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(emit({}, dir / "x.csv", OutputFormat::csv), DomainError);
  std::istringstream bad("alpha,b\n");
  CHECK_THROWS_AS(read_csv(bad), InputError);
}

}
