#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "ward/ward_c.h"

namespace {

// 0 pass, 1 verification failure, 2 input/build error
int exit_code_for(int status) {
  if (status == WS_OK) return 0;
  if (status == WS_ERR_VERIFY) return 1;
  return 2;
}

int fail(int status) {
  std::fprintf(stderr, "error: %s\n", ws_last_error());
  return exit_code_for(status);
}

struct Common {
  std::string spec;
  double fd_step = 0.0;  // 0 keeps the library default
  unsigned long long seed = 0xcafef00d;
  bool su_normalize = false;
};

ws_solution* build_handle(const Common& c, int* status) {
  ws_solution* s = nullptr;
  *status = ws_build_from_file(c.spec.c_str(), &s);
  if (*status != WS_OK) return nullptr;
  if (c.su_normalize) ws_set_su_normalize(s, 1);
  return s;
}

void add_common(CLI::App* cmd, Common& c, bool with_seed = true) {
  cmd->add_option("--spec", c.spec, "spec or record file")->required();
  cmd->add_option("--fd-step", c.fd_step, "finite-difference step");
  if (with_seed) cmd->add_option("--seed", c.seed, "sampling seed");
  cmd->add_flag("--su-normalize", c.su_normalize, "determinant-normalize the Ward map");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Ward-equation solitons: build, verify, sample, factor"};
  app.require_subcommand(1);

  Common c;
  std::string out_path, out_dir, grid, t_values, quantity;
  int corrupt_index = -1;
  double corrupt_size = 1e-2;
  double t_start = 0.0, t_end = 0.0;
  int steps = 1;

  CLI::App* build = app.add_subcommand("build", "construct a solution and print its summary");
  add_common(build, c, false);
  build->add_option("--out", out_path, "write a reloadable construction record");

  CLI::App* verify = app.add_subcommand("verify", "run the certification suite");
  add_common(verify, c);
  verify->add_option("--corrupt-factor", corrupt_index,
                     "debug: perturb this factor's projector before verifying");
  verify->add_option("--corrupt-size", corrupt_size, "debug: perturbation magnitude");

  CLI::App* sample = app.add_subcommand("sample", "sample a quantity onto grids, one CSV per t");
  add_common(sample, c, false);
  sample->add_option("--out", out_path, "output CSV path")->required();
  sample->add_option("--grid", grid, "xmin,xmax,nx,ymin,ymax,ny (default -10,10,201,-10,10,201)");
  sample->add_option("--t", t_values, "comma-separated t values (default 0)");
  sample->add_option("--quantity", quantity, "energy_density | drift | entry:i,j,re|im|abs");

  CLI::App* frames = app.add_subcommand("frames", "write an animation frame sequence");
  add_common(frames, c, false);
  frames->add_option("--out-dir", out_dir, "output directory")->required();
  frames->add_option("--grid", grid, "xmin,xmax,nx,ymin,ymax,ny");
  frames->add_option("--quantity", quantity, "energy_density | drift | entry:i,j,re|im|abs");
  frames->add_option("--t-start", t_start, "first frame time")->required();
  frames->add_option("--t-end", t_end, "last frame time")->required();
  frames->add_option("--steps", steps, "number of equal time steps (frames = steps+1)");

  CLI::App* factor = app.add_subcommand("factor", "per-pole minimal factorization listing");
  add_common(factor, c, false);

  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("WSF_SEED")) c.seed = std::strtoull(env, nullptr, 10);

  int status = WS_OK;
  ws_solution* s = build_handle(c, &status);
  if (!s) return fail(status);

  int rc = 0;
  if (build->parsed()) {
    char* summary = nullptr;
    status = ws_build_summary(s, &summary);
    if (status != WS_OK) {
      rc = fail(status);
    } else {
      std::printf("%s\n", summary);
      ws_string_free(summary);
      if (!out_path.empty()) {
        status = ws_save_record(s, out_path.c_str());
        if (status != WS_OK)
          rc = fail(status);
        else
          std::printf("record written to %s\n", out_path.c_str());
      }
    }
  } else if (verify->parsed()) {
    ws_solution* target = s;
    ws_solution* corrupted = nullptr;
    if (corrupt_index >= 0) {
      status = ws_corrupt_factor(s, corrupt_index, corrupt_size, c.seed, &corrupted);
      if (status != WS_OK) {
        ws_solution_free(s);
        return fail(status);
      }
      target = corrupted;
    }
    char* report = nullptr;
    int all_pass = 0;
    status = ws_verify_report(target, c.seed, c.fd_step, &report, &all_pass);
    if (status != WS_OK) {
      rc = fail(status);
    } else {
      std::printf("%s", report);
      ws_string_free(report);
      rc = all_pass ? 0 : 1;
    }
    ws_solution_free(corrupted);
  } else if (sample->parsed()) {
    char* summary = nullptr;
    status = ws_sample_to_csv(s, grid.c_str(), t_values.c_str(), quantity.c_str(), c.fd_step,
                              out_path.c_str(), &summary);
    if (status != WS_OK) {
      rc = fail(status);
    } else {
      std::printf("%s", summary);
      ws_string_free(summary);
    }
  } else if (frames->parsed()) {
    char* manifest = nullptr;
    status = ws_frames_to_dir(s, grid.c_str(), quantity.c_str(), c.fd_step, t_start, t_end,
                              steps, out_dir.c_str(), &manifest);
    if (status != WS_OK) {
      rc = fail(status);
    } else {
      std::printf("manifest written to %s\n", manifest);
      ws_string_free(manifest);
    }
  } else if (factor->parsed()) {
    char* listing = nullptr;
    status = ws_factor_report(s, &listing);
    if (status != WS_OK) {
      rc = fail(status);
    } else {
      std::printf("%s", listing);
      ws_string_free(listing);
    }
  }

  ws_solution_free(s);
  return rc;
}
