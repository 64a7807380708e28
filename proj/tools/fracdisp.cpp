#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "fracdisp/errors.hpp"
#include "fracdisp/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fracdisp - dispersive-kernel toolkit for hyperbolic spaces "
               "and homogeneous trees"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  double tol = 0.0;

  const char* names[] = {"phase-report", "hn-kernel", "hn-verify",
                         "tree-verify",  "nls-run",   "regions"};
  const char* descs[] = {
      "stationary-point sweeps over (alpha, R) grids",
      "kernel tables over (t, r) grids with regime tags and ratios",
      "kernel-estimate verification, Kunze-Stein norms, decay fits",
      "tree kernel estimates, unitarity and identity checks",
      "radial fractional NLS run with norm time series",
      "rasterized admissible regions as CSV point clouds"};
  std::vector<CLI::App*> subs;
  for (int i = 0; i < 6; ++i) {
    auto* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "JSON config path")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (or FRACDISP_THREADS)");
    sub->add_option("--tol", tol, "tolerance override");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  std::string command;
  for (int i = 0; i < 6; ++i)
    if (subs[i]->parsed()) command = names[i];

  nlohmann::json config;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::fprintf(stderr, "config error: cannot open %s\n",
                   config_path.c_str());
      return 3;
    }
    try {
      in >> config;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 3;
    }
  }

  fracdisp::report::RunOptions opts;
  opts.out_dir = out_dir;
  opts.threads = threads;
  opts.tol = tol;
  try {
    return fracdisp::report::run_command(command, config, opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
