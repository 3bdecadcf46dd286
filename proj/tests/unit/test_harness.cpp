#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "glcn/error.hpp"
#include "glcn/harness.hpp"
#include "glcn/norms.hpp"

using namespace glcn;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

StudyPlan tiny_plan() {
  StudyPlan plan;
  plan.case_name = "example1";
  plan.degree = 1;
  plan.t_final = 2e-6;
  plan.cells = {2, 4};
  plan.steps_fixed = 2;
  return plan;
}

ReportRow row(double param, double l2, double dg) {
  ReportRow r;
  r.point.param = param;
  r.point.label = std::to_string(param);
  r.l2_error = l2;
  r.dg_error = dg;
  return r;
}

}  // namespace

TEST(Harness, ObservedOrderOfReferenceRows) {
  // h = 1/5 -> 1/10 errors of the k = 1 row pair.
  EXPECT_NEAR(observed_order(5.0867e-2, 1.3085e-2, 0.2, 0.1), 1.9588, 1e-4);
  EXPECT_NEAR(observed_order(4.0, 1.0, 1.0, 0.5), 2.0, 1e-15);
}

TEST(Harness, FillOrdersLeavesFirstRowEmpty) {
  ConvergenceReport rep;
  rep.rows = {row(0.2, 4.0, 2.0), row(0.1, 1.0, 1.0)};
  fill_orders(rep);
  EXPECT_FALSE(rep.rows[0].l2_order.has_value());
  EXPECT_FALSE(rep.rows[0].dg_order.has_value());
  ASSERT_TRUE(rep.rows[1].l2_order.has_value());
  EXPECT_NEAR(*rep.rows[1].l2_order, 2.0, 1e-14);
  EXPECT_NEAR(*rep.rows[1].dg_order, 1.0, 1e-14);
}

TEST(Harness, RenderFormats) {
  ConvergenceReport rep;
  rep.case_name = "example1";
  rep.rows = {row(0.2, 4.0, 2.0), row(0.1, 1.0, 1.0)};
  fill_orders(rep);
  const std::string csv = render(rep, ReportFormat::csv);
  std::istringstream lines(csv);
  std::string header, first, second, extra;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_EQ(header, "param,l2_error,l2_order,dg_error,dg_order,newton_total,seconds");
  EXPECT_FALSE(std::getline(lines, extra) && !extra.empty());
  // Empty order cells on the first row, no seconds without timing.
  EXPECT_NE(first.find(",,"), std::string::npos);
  EXPECT_EQ(second.back(), ',');

  const std::string md = render(rep, ReportFormat::markdown);
  EXPECT_NE(md.find("| h |"), std::string::npos);
  EXPECT_NE(md.find("--"), std::string::npos);
  EXPECT_NE(md.find("2.0000"), std::string::npos);

  const auto j = nlohmann::json::parse(render(rep, ReportFormat::json));
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["case"], "example1");
}

TEST(Harness, PlanValidation) {
  StudyPlan plan = tiny_plan();
  EXPECT_NO_THROW(plan.validate());
  plan.cells = {10};
  EXPECT_THROW(plan.validate(), InvalidArgument);
  plan.cells = {10, 10};
  EXPECT_THROW(plan.validate(), InvalidArgument);
  plan = tiny_plan();
  plan.steps_fixed = 0;
  EXPECT_THROW(plan.validate(), InvalidArgument);
  plan = tiny_plan();
  plan.case_name = "nope";
  EXPECT_THROW(plan.validate(), InvalidArgument);
}

TEST(Harness, GridPointsPerCoupling) {
  StudyPlan spatial = tiny_plan();
  spatial.case_name = "example2";
  spatial.cells = {10, 20};
  const auto s = grid_points(spatial);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_DOUBLE_EQ(s[0].param, 0.2);
  EXPECT_EQ(s[0].label, "2/10");
  EXPECT_EQ(s[1].steps, 2);

  StudyPlan coupled;
  coupled.mode = StudyMode::temporal;
  coupled.coupling = Coupling::tau_equals_h;
  coupled.t_final = 1.0;
  coupled.cells = {20, 40};
  const auto c = grid_points(coupled);
  EXPECT_EQ(c[0].steps, 20);
  EXPECT_EQ(c[1].steps, 40);
  EXPECT_DOUBLE_EQ(c[1].param, 1.0 / 40);
  EXPECT_EQ(c[1].label, "1/40");

  StudyPlan fixed_h;
  fixed_h.mode = StudyMode::temporal;
  fixed_h.coupling = Coupling::fixed_h;
  fixed_h.t_final = 1.0;
  fixed_h.cells_fixed = 64;
  fixed_h.steps = {10, 15};
  const auto f = grid_points(fixed_h);
  EXPECT_EQ(f[1].cells, 64);
  EXPECT_EQ(f[1].steps, 15);
  EXPECT_EQ(f[1].label, "1/15");
}

TEST(Harness, PlanJsonRoundTrip) {
  StudyPlan plan = tiny_plan();
  plan.penalty = 17.5;
  plan.overrides.gamma = -1.0;
  plan.solver.linear.kind = LinearSolverConfig::Kind::iterative;
  plan.note = "tiny";
  const std::string text = plan_to_json_text(plan);
  const StudyPlan back = plan_from_json_text(text);
  EXPECT_EQ(plan_to_json_text(back), text);
  EXPECT_EQ(back.penalty, 17.5);
  EXPECT_EQ(back.overrides.gamma, -1.0);
  EXPECT_EQ(back.solver.linear.kind, LinearSolverConfig::Kind::iterative);
  EXPECT_THROW(plan_from_json_text("{\"cells\": 3"), InvalidArgument);
  EXPECT_THROW(plan_from_json_text(R"({"case": "example1", "k": 1, "t_final": 1,
                                       "cells": [2, 4], "steps_fixed": 2, "degree": 2})"),
               InvalidArgument);
}

TEST(Harness, ShippedPlansParse) {
  const std::filesystem::path dir = GLCN_PLANS_DIR;
  for (int i = 1; i <= 8; ++i) {
    const StudyPlan plan =
        plan_from_json_text(read_file(dir / ("table" + std::to_string(i) + ".json")));
    EXPECT_NO_THROW(plan.validate()) << "table" << i;
    EXPECT_EQ(grid_points(plan).size(), 5u) << "table" << i;
  }
  const StudyPlan t4 = plan_from_json_text(read_file(dir / "table4.json"));
  EXPECT_EQ(t4.degree, 3);
  EXPECT_EQ(grid_points(t4).back().steps, 40);
  const StudyPlan t8 = plan_from_json_text(read_file(dir / "table8.json"));
  EXPECT_EQ(grid_points(t8).front().cells, 64);
}

TEST(Harness, TinyStudyMatchesGolden) {
  const std::string csv = render(run_study(tiny_plan()), ReportFormat::csv);
  const std::filesystem::path golden = std::filesystem::path(GLCN_GOLDEN_DIR) / "tiny_study.csv";
  ASSERT_TRUE(std::filesystem::exists(golden)) << csv;
  EXPECT_EQ(csv, read_file(golden));
}

TEST(Harness, ThreadedStudyEqualsSequential) {
  StudyPlan plan = tiny_plan();
  plan.cells = {2, 3, 4};
  const std::string seq = render(run_study(plan), ReportFormat::csv);
  const std::string par = render(run_study(plan, {2, false}), ReportFormat::csv);
  EXPECT_EQ(seq, par);
}

TEST(Harness, StudyFailureNamesGridPoint) {
  StudyPlan plan = tiny_plan();
  plan.t_final = 1.0;
  plan.solver.newton_max_iter = 1;
  plan.solver.fixed_point_fallback = false;
  try {
    run_study(plan);
    FAIL() << "expected StudyFailed";
  } catch (const StudyFailed& e) {
    EXPECT_EQ(e.point().cells, 2);
    EXPECT_NE(std::string(e.what()).find("level 1"), std::string::npos);
  }
}

TEST(Harness, ErrorsInsensitiveToNewtonTolerance) {
  StudyPlan plan = tiny_plan();
  plan.t_final = 0.1;
  plan.steps_fixed = 5;
  const GridPoint p = grid_points(plan).back();
  const RunErrors a = run_point(plan, p);
  plan.solver.newton_tol *= 0.5;
  const RunErrors b = run_point(plan, p);
  EXPECT_LE(std::abs(a.l2 - b.l2), 1e-3 * a.l2);
  EXPECT_LE(std::abs(a.dg - b.dg), 1e-3 * a.dg);
}

TEST(Harness, ErrorSplit) {
  const ManufacturedCase c = find_case("example1");
  const SipgConfig sipg = SipgConfig::with_default_penalty(2);
  double eta_prev = 0.0;
  for (int n : {4, 8}) {
    auto mesh = std::make_shared<const Mesh>(build_structured(c.domain, n));
    auto space = std::make_shared<const DGSpace>(mesh, 2);
    const double t = 0.3;
    // u_h = R_h u gives eta = 0 and xi = the total error.
    const ComplexField rh = ritz_project(space, sipg, c.laplacian_at(t));
    const ErrorSplit exact = error_split(space, sipg, c, t, rh);
    EXPECT_LE(exact.eta_l2, 1e-12);
    EXPECT_NEAR(exact.xi_l2, l2_error(rh, c.u_at(t)), 1e-14);
    // Interpolant: both parts present, triangle inequality holds.
    const ComplexField ih = interpolate(space, c.u_at(t));
    const ErrorSplit s = error_split(space, sipg, c, t, ih);
    EXPECT_LE(l2_error(ih, c.u_at(t)), s.xi_l2 + s.eta_l2 + 1e-14);
    if (eta_prev > 0.0) EXPECT_GT(std::log2(eta_prev / s.eta_l2), 2.5);
    eta_prev = s.eta_l2;
  }
}
