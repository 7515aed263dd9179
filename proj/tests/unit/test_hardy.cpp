#include <gtest/gtest.h>

#include <cmath>

#include "json.hpp"
#include "sqfn/errors.hpp"
#include "sqfn/hardy.hpp"
#include "sqfn/testfields.hpp"
#include "test_support.hpp"

using namespace sqfn;
using namespace sqfn::testing;

TEST(Hardy, MaximalFunctionOfHarmonic) {
  GridSpec g(2, 32, 1.0);
  const std::vector<int> k{2, 1};
  Field f = harmonic(g, k);
  auto scales = ScaleGrid::make(g, 2.0 / 32, 0.5, 3);
  double sup = 0.0;
  for (double t : scales.scales()) sup = std::max(sup, std::abs(cosine_sum_symbol(g, t, k)));
  Field M = maximal_function(f, scales);
  for (std::size_t i = 0; i < g.size(); ++i) ASSERT_NEAR(M[i], sup * std::abs(f[i]), 1e-13);
}

TEST(Hardy, NormsAndPreconditions) {
  GridSpec g(2, 32, 1.0);
  Field f = mean_zero_atom(g, std::vector<double>{}, 0.125);
  auto scales = ScaleGrid::make(g, 2.0 / 32, 0.25, 2);
  const double h1 = h1_norm(f, scales);
  EXPECT_NEAR(h1, lp_norm(maximal_function(f, scales), 1.0), 0.0);
  const double sob = sobolev_h1_norm(f, 1.5, scales);
  EXPECT_NEAR(sob, h1 + h1_norm(fractional_laplacian(f, 1.5), scales), 1e-14 * sob);
  Field c(g, std::vector<double>(g.size(), 1.0));
  EXPECT_THROW(h1_norm(c, scales), ParameterError);
  EXPECT_THROW(sobolev_h1_norm(f, 2.0, scales), RangeError);
}

TEST(Hardy, ReportRatios) {
  GridSpec g(2, 64, 1.0);
  Field f = mean_zero_atom(g, std::vector<double>{}, 0.125);
  auto scales = ScaleGrid::make(g, 2.0 / 64, 1.0 / 6, 4, 3);
  const std::vector<int> ks{1, 2, 3};
  auto r = equivalence_report(f, 1.5, ks, scales);
  ASSERT_TRUE(r.ratio_thm1.has_value());
  EXPECT_NEAR(*r.ratio_thm1, r.sobolev_h1_norm / (r.h1_norm + r.u_alpha_l1), 1e-15 * *r.ratio_thm1);
  ASSERT_EQ(r.e_tilde_l1.size(), 3u);
  // k = 1 is the ball kernel
  EXPECT_EQ(r.e_tilde_l1[0], r.u_alpha_l1);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    ASSERT_TRUE(r.ratio_thm2[i].has_value());
    EXPECT_NEAR(*r.ratio_thm2[i], r.sobolev_h1_norm / (r.h1_norm + r.e_tilde_l1[i]), 1e-15 * *r.ratio_thm2[i]);
  }
  EXPECT_EQ(r.scale_count, scales.size());

  auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["h1_surrogate"], kH1Surrogate);
  EXPECT_EQ(j["symbol_mode"], "discrete");
  const auto header = report_csv_header(ks);
  const auto row = report_csv_row(r);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}

TEST(Hardy, ZeroFieldRatioIsUndefined) {
  GridSpec g(2, 32, 1.0);
  Field z(g, std::vector<double>(g.size(), 0.0));
  auto scales = ScaleGrid::make(g, 2.0 / 32, 0.25, 2);
  const std::vector<int> ks{1};
  auto r = equivalence_report(z, 1.5, ks, scales);
  EXPECT_FALSE(r.ratio_thm1.has_value());
  auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["ratio_thm1"], "undefined");
  EXPECT_NE(report_csv_row(r).find("undefined"), std::string::npos);
}
