#include <iostream>

#include "CLI11.hpp"
#include "ebcv/commands.hpp"

namespace {

void add_params(CLI::App* c, ebcv::ModelParams& p) {
  c->add_option("--m", p.m, "curvature parameter m")->capture_default_str();
  c->add_option("--l", p.l, "twist parameter l")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry of extended BCV spaces: verification, curvature, Killing fields, geodesics"};
  app.require_subcommand(1);

  ebcv::VerifyArgs va;
  bool no_elapsed = false;
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  add_params(verify, va.options.params);
  verify->add_option("--samples", va.options.samples, "sample points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--seed", va.options.seed, "RNG seed")->capture_default_str();
  verify->add_option("--tol-scale", va.options.tol_scale, "multiplies every tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--format", va.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  verify->add_option("--out", va.out, "write the report here instead of stdout");
  verify->add_option("--tables", va.tables, "printed-table data file")->capture_default_str();
  verify->add_flag("--no-elapsed", no_elapsed, "omit the elapsed time from JSON reports");

  ebcv::GeodesicArgs ga;
  auto* geo = app.add_subcommand("geodesic", "integrate a normal geodesic");
  geo->set_help_flag("--help", "print this help message and exit");
  add_params(geo, ga.params);
  geo->add_option("--mode", ga.mode)
      ->check(CLI::IsMember({"heisenberg", "subriemannian", "riemannian"}))
      ->capture_default_str();
  auto* init = geo->add_option("--init", ga.init, "r s t w x y z pr ps pt pw px py pz")->expected(14);
  auto* rnd = geo->add_flag("--random-init", ga.random_init, "seeded random initial state");
  init->excludes(rnd);
  geo->add_option("--seed", ga.seed)->capture_default_str();
  geo->add_option("--h", ga.h, "step size")->capture_default_str();
  geo->add_option("--n", ga.n, "number of steps")->capture_default_str();
  geo->add_option("--out", ga.out, "trajectory file");
  geo->add_option("--format", ga.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  ebcv::KillingArgs ka;
  auto* kil = app.add_subcommand("killing", "export or check Killing fields");
  add_params(kil, ka.params);
  kil->add_option("action", ka.action, "list or check")
      ->check(CLI::IsMember({"list", "check"}))
      ->capture_default_str();
  kil->add_option("--input", ka.input, "polynomial field file (JSON)");
  kil->add_option("--out", ka.out);

  ebcv::ClassifyArgs ca;
  auto* cls = app.add_subcommand("classify", "classify three-dimensional BCV parameters");
  cls->add_option("--m", ca.m)->required();
  cls->add_option("--l", ca.l)->required();
  cls->add_option("--case2", ca.case2)->check(CLI::IsMember({"printed", "squared"}))->capture_default_str();
  cls->add_option("--format", ca.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  ebcv::CurvatureArgs cu;
  auto* cur = app.add_subcommand("curvature", "export frame, connection and curvature at a point");
  add_params(cur, cu.params);
  cur->add_option("--point", cu.point, "r s t w x y z")->expected(7);
  cur->add_option("--out", cu.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ebcv::kExitUsage;
  }

  va.elapsed = !no_elapsed;
  if (*verify) return ebcv::cmd_verify(va, std::cout, std::cerr);
  if (*geo) return ebcv::cmd_geodesic(ga, std::cout, std::cerr);
  if (*kil) return ebcv::cmd_killing(ka, std::cout, std::cerr);
  if (*cls) return ebcv::cmd_classify(ca, std::cout, std::cerr);
  if (*cur) return ebcv::cmd_curvature(cu, std::cout, std::cerr);
  return ebcv::kExitUsage;
}
