#include <catch_amalgamated.hpp>

#include <sstream>

#include "test_common.hpp"
#include "wim/solver.hpp"

using namespace wim;

TEST_CASE("algorithm 1 with nothing missing recovers the original") {
  Image orig = wimtest::random_image(32, 32, 1, 0.2, 0.8);
  ObservedData obs = degrade(orig, CoeffMask(2, 32, 32, true), 0.0, 0);
  SolverConfig cfg;
  cfg.max_outer = 5;
  SolveResult res = solve_algorithm1(obs, cfg);
  // C = {0} here, so alpha_m stays zero and the composed output is f0 =
  // original from the first iteration on
  CHECK(wimtest::max_abs_diff(res.image.data, orig.data) < 1e-9);
}

TEST_CASE("bos with nothing missing converges to the original") {
  Image orig = wimtest::random_image(32, 32, 2, 0.2, 0.8);
  ObservedData obs = degrade(orig, CoeffMask(2, 32, 32, true), 0.0, 0);
  SolverConfig cfg;
  cfg.mu = 1e-6;
  cfg.max_outer = 5;
  SolveResult res = solve_bos(obs, cfg);
  CHECK(wimtest::max_abs_diff(res.image.data, orig.data) < 1e-3);
}

namespace {

// piecewise-smooth synthetic scene; TV restoration needs structure to win
Image synthetic_scene(int w, int h) {
  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double v = 0.3 + 0.4 * (x > w / 3) - 0.2 * (y > h / 2);
      v += 0.1 * std::sin(2.0 * M_PI * y / h);
      img.at(y, x) = std::clamp(v, 0.0, 1.0);
    }
  return img;
}

}  // namespace

TEST_CASE("algorithm 1 uses exactly one forward and one inverse per iteration") {
  Image orig = synthetic_scene(64, 64);
  CoeffMask mask = make_subband_loss_mask(3, 64, 64, Subband::HL, 2);
  ObservedData obs = degrade(orig, mask, 0.0, 0);
  SolverConfig cfg;
  cfg.max_outer = 8;
  cfg.stop_tol = 0.0;  // force running to the cap
  SolveResult res = solve_algorithm1(obs, cfg, nullptr, &orig);
  REQUIRE(res.trace.rows.size() == 8);
  for (size_t k = 0; k < res.trace.rows.size(); ++k) {
    CHECK(res.trace.rows[k].fwd_transforms == (long)k + 1);
    CHECK(res.trace.rows[k].inv_transforms == (long)k + 1);
  }
  // alpha_m stays in C: restored image improves over received
  CHECK(res.trace.rows.back().psnr_db > psnr(orig, obs.f0));
}

TEST_CASE("bos transform counts scale with the inner PFBS iterations") {
  Image orig = wimtest::random_image(64, 64, 4, 0.1, 0.9);
  CoeffMask mask = make_subband_loss_mask(3, 64, 64, Subband::HL, 2);
  ObservedData obs = degrade(orig, mask, 0.0, 0);
  SolverConfig cfg;
  cfg.max_outer = 4;
  cfg.inner_pfbs = 10;
  cfg.stop_tol = 0.0;
  SolveResult res = solve_bos(obs, cfg);
  REQUIRE(res.trace.rows.size() == 4);
  for (size_t k = 0; k < res.trace.rows.size(); ++k) {
    CHECK(res.trace.rows[k].fwd_transforms == (long)(k + 1) * 11);
    CHECK(res.trace.rows[k].inv_transforms == (long)(k + 1) * 10);
  }
  // BOS / Algorithm 1 transform ratio >= inner_pfbs / 2 at equal outers
  CHECK(res.trace.rows.back().fwd_transforms + res.trace.rows.back().inv_transforms >=
        cfg.inner_pfbs / 2 * (4 + 4));
}

TEST_CASE("residuals against an explicit dense operator (16x16, 1 level)") {
  Image orig = wimtest::random_image(16, 16, 5, 0.1, 0.9);
  CoeffMask mask = make_random_loss_mask(1, 16, 16, 0.7, false, 3);
  ObservedData obs = degrade(orig, mask, 0.0, 0);

  // dense A = P_I W from basis images
  int n = 256;
  std::vector<std::vector<double>> A((size_t)n, std::vector<double>((size_t)n));
  for (int j = 0; j < n; ++j) {
    Image e(16, 16);
    e.data[(size_t)j] = 1.0;
    WaveletPyramid col = project_known(forward_dwt(e, 1), mask);
    for (int i = 0; i < n; ++i) A[(size_t)i][(size_t)j] = col.coeff[(size_t)i];
  }
  Image f = wimtest::random_image(16, 16, 6, 0.0, 1.0);
  WaveletPyramid alpha = project_missing(forward_dwt(f, 1), mask);
  auto [c_res, d_res] = residuals(f, alpha, obs);

  double dense = 0.0;
  for (int i = 0; i < n; ++i) {
    double af = 0.0;
    for (int j = 0; j < n; ++j) af += A[(size_t)i][(size_t)j] * f.data[(size_t)j];
    double d = af - obs.beta.coeff[(size_t)i];
    dense += d * d;
  }
  CHECK(d_res == Catch::Approx(std::sqrt(dense)).margin(1e-10));

  // trivial state: f = f0, alpha = 0 gives both residuals ~0
  auto [c0, d0] = residuals(obs.f0, WaveletPyramid(1, 16, 16), obs);
  CHECK(c0 < 1e-9);
  CHECK(d0 < 1e-9);

  // perturbation bound: constraint changes by at most ||e||_2
  Image fp = obs.f0;
  std::mt19937_64 rng(7);
  double enorm2 = 0.0;
  for (double& v : fp.data) {
    double e2 = 0.01 * ((double)(rng() >> 11) * 0x1p-53 - 0.5);
    v += e2;
    enorm2 += e2 * e2;
  }
  auto [cp, dp] = residuals(fp, WaveletPyramid(1, 16, 16), obs);
  CHECK(cp <= c0 + std::sqrt(enorm2) + 1e-12);
}

TEST_CASE("solver runs are bit deterministic") {
  Image orig = wimtest::random_image(32, 32, 8, 0.1, 0.9);
  CoeffMask mask = make_random_loss_mask(2, 32, 32, 0.6, false, 17);
  ObservedData obs = degrade(orig, mask, 0.0, 0);
  SolverConfig cfg;
  cfg.max_outer = 6;
  SolveResult a = solve_algorithm1(obs, cfg, nullptr, &orig);
  SolveResult b = solve_algorithm1(obs, cfg, nullptr, &orig);
  CHECK(a.image.data == b.image.data);
  REQUIRE(a.trace.rows.size() == b.trace.rows.size());
  for (size_t i = 0; i < a.trace.rows.size(); ++i) {
    CHECK(a.trace.rows[i].psnr_db == b.trace.rows[i].psnr_db);
    CHECK(a.trace.rows[i].data_res == b.trace.rows[i].data_res);
    CHECK(a.trace.rows[i].constraint_res == b.trace.rows[i].constraint_res);
  }
}

TEST_CASE("noise mode: iterate output rule and sigma-scaled stopping") {
  Image orig = wimtest::random_image(32, 32, 9, 0.2, 0.8);
  CoeffMask mask = make_random_loss_mask(2, 32, 32, 0.6, true, 4);
  ObservedData obs = degrade(orig, mask, 0.02, 5);
  SolverConfig cfg;
  cfg.noise_sigma = 0.02;
  cfg.max_outer = 30;
  SolveResult res = solve_algorithm1(obs, cfg, nullptr, &orig);
  CHECK(cfg.effective_output_rule() == OutputRule::Iterate);
  // stopped by the discrepancy rule well before the cap
  CHECK(res.iterations < 30);
  double thresh = 0.02 * std::sqrt((double)obs.mask.known_count());
  CHECK(res.trace.rows.back().data_res < thresh);
}

TEST_CASE("NLTV without a graph is rejected; trace CSV has the right shape") {
  Image orig = wimtest::random_image(32, 32, 10, 0.2, 0.8);
  ObservedData obs = degrade(orig, CoeffMask(2, 32, 32, true), 0.0, 0);
  SolverConfig cfg;
  cfg.regularizer = Regularizer::NLTV;
  CHECK_THROWS(solve_algorithm1(obs, cfg));
  CHECK_THROWS(solve_bos(obs, cfg));

  cfg.regularizer = Regularizer::TV;
  cfg.max_outer = 3;
  cfg.stop_tol = 0.0;
  SolveResult res = solve_algorithm1(obs, cfg, nullptr, &orig);
  std::ostringstream csv;
  res.trace.write_csv(csv);
  std::string text = csv.str();
  CHECK(text.rfind("iter,psnr_db,constraint_res,data_res,prox_res,"
                    "fwd_transforms,inv_transforms,elapsed_s\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
