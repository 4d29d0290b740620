#include "ward/ward_c.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "ward/errors.hpp"
#include "ward/gridio.hpp"
#include "ward/specfile.hpp"
#include "ward/verify.hpp"

using nlohmann::json;

struct ws_solution {
  ward::ExtendedSolution psi;
  bool su = false;
  json spec;
};

namespace {

thread_local std::string g_error = "ok";

void set_error(const std::string& msg) { g_error = msg; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int arg_error(const char* msg) {
  set_error(msg);
  return WS_ERR_ARGUMENT;
}

int translate_current() {
  try {
    throw;
  } catch (const ward::IOError& e) {
    set_error(e.what());
    return WS_ERR_IO;
  } catch (const ward::SchemaError& e) {
    set_error(e.what());
    return WS_ERR_SCHEMA;
  } catch (const ward::SyntaxError& e) {
    set_error(e.what());
    return WS_ERR_SCHEMA;
  } catch (const ward::PoleHit& e) {
    set_error(e.what());
    return WS_ERR_SINGULAR;
  } catch (const ward::NearPole& e) {
    set_error(e.what());
    return WS_ERR_SINGULAR;
  } catch (const ward::ZeroSpan& e) {
    set_error(e.what());
    return WS_ERR_SINGULAR;
  } catch (const ward::Singular& e) {
    set_error(e.what());
    return WS_ERR_SINGULAR;
  } catch (const ward::Degenerate& e) {
    set_error(e.what());
    return WS_ERR_SINGULAR;
  } catch (const ward::Error& e) {
    set_error(e.what());
    return WS_ERR_CONSTRUCTION;
  } catch (const std::exception& e) {
    set_error(e.what());
    return WS_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return WS_ERR_INTERNAL;
  }
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (...) {
    return translate_current();
  }
}

ws_solution* wrap(ward::SpecBuild&& built) {
  auto* s = new ws_solution;
  s->psi = std::move(built.psi);
  s->su = built.su_normalize;
  s->spec = std::move(built.spec);
  return s;
}

std::string indexed_path(const std::string& base, size_t idx) {
  char suf[24];
  std::snprintf(suf, sizeof suf, "_%04zu", idx);
  auto slash = base.find_last_of('/');
  auto dot = base.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return base + suf;
  return base.substr(0, dot) + suf + base.substr(dot);
}

ward::GridSpec grid_from_flags(const ws_solution* s, const char* grid, const char* t_values,
                               const char* quantity, double fd_step) {
  ward::GridSpec g = ward::parse_grid_spec(grid ? grid : "", t_values ? t_values : "",
                                           quantity ? quantity : "");
  if (fd_step > 0) {
    if (fd_step < 1e-6 || fd_step > 1e-2)
      throw ward::SchemaError("fd-step: must lie in [1e-6, 1e-2]");
    g.fd_step = fd_step;
  }
  g.su_normalize = s->su;
  return g;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ward::IOError("cannot write " + tmp);
    out << text;
    if (!out) throw ward::IOError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw ward::IOError("cannot move " + tmp);
}

// L(za) R(zb) = R'(zb) L'(za) pointwise: the exchange identity run backwards,
// so that bubbling keeps the overall product fixed while factors regroup.
std::pair<ward::SimpleElementField, ward::SimpleElementField> swap_adjacent(
    const ward::SimpleElementField& L, const ward::SimpleElementField& R) {
  using namespace ward;
  Complex za = L.z, zb = R.z;
  if (std::abs(za - zb) <= 1e-12 || std::abs(za - std::conj(zb)) <= 1e-12)
    throw ForbiddenPolePair("cannot exchange factors at coinciding or conjugate poles");
  ProjectorFieldPtr lpi = L.pi, rpi = R.pi;
  int n = lpi->n();
  ProjectorFieldPtr moved_l =
      derived_field(n, lpi->rank(), "regroup", [rpi, lpi, za, zb](const SpacetimePoint& p) {
        CMatrix m = simple_element_inverse(zb, rpi->at(p), za);
        return projector_from_span(m * lpi->at(p).basis);
      });
  ProjectorFieldPtr moved_r =
      derived_field(n, rpi->rank(), "regroup", [moved_l, rpi, za, zb](const SpacetimePoint& p) {
        CMatrix m = simple_element(za, moved_l->at(p), zb);
        return projector_from_span(m * rpi->at(p).basis);
      });
  return {SimpleElementField{zb, moved_r}, SimpleElementField{za, moved_l}};
}

std::string factor_listing(const ward::ExtendedSolution& input) {
  using namespace ward;
  auto [psi, phase] = normalize_upper(input);
  (void)phase;

  // group key per factor: index of its pole among the distinct factor poles
  std::vector<Complex> poles;
  auto key_of = [&](Complex z) {
    for (size_t i = 0; i < poles.size(); ++i)
      if (std::abs(poles[i] - z) <= 1e-12) return (int)i;
    poles.push_back(z);
    return (int)poles.size() - 1;
  };
  std::vector<SimpleElementField> fs = psi.factors;
  for (const auto& f : fs) key_of(f.z);
  std::sort(poles.begin(), poles.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t i = 0; i + 1 < fs.size(); ++i) {
      if (key_of(fs[i].z) > key_of(fs[i + 1].z)) {
        auto [r2, l2] = swap_adjacent(fs[i + 1], fs[i]);
        fs[i + 1] = r2;
        fs[i] = l2;
        moved = true;
      }
    }
  }

  std::string out = build_summary(input) + "\n";
  for (size_t g = 0; g < poles.size(); ++g) {
    std::vector<SimpleElementField> run;
    for (const auto& f : fs)
      if (key_of(f.z) == (int)g) run.push_back(f);
    int exponent = 0;
    for (const auto& b : psi.prefactor)
      if (std::abs(b.z - poles[g]) <= 1e-12) exponent += b.m;

    std::vector<int> rank_list;
    std::string minimal = "yes";
    if (!run.empty()) {
      ExtendedSolution sub;
      sub.n = psi.n;
      sub.factors = run;
      sub.provenance = psi.provenance;
      ExtendedSolution reduced = reduce_same_pole(sub);
      for (const auto& b : reduced.prefactor) exponent += b.m;
      for (const auto& f : reduced.factors) rank_list.push_back(f.pi->rank());
      if (!reduced.factors.empty()) {
        try {
          ranks(reduced);
        } catch (const MinimalityViolated&) {
          minimal = "VIOLATED";
        }
      }
    }
    out += "pole " + complex_print(poles[g]) + ": prefactor exponent " +
           std::to_string(exponent) + ", ranks [";
    for (size_t i = 0; i < rank_list.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(rank_list[i]);
    }
    out += "], minimal " + minimal + "\n";
  }
  // prefactor-only poles carried by the input but not by any factor
  for (const auto& b : psi.prefactor) {
    bool seen = false;
    for (const auto& z : poles)
      if (std::abs(z - b.z) <= 1e-12) seen = true;
    if (!seen)
      out += "pole " + complex_print(b.z) + ": prefactor exponent " + std::to_string(b.m) +
             ", ranks [], minimal yes\n";
  }
  return out;
}

}  // namespace

extern "C" {

const char* ws_last_error(void) { return g_error.c_str(); }

void ws_string_free(char* s) { std::free(s); }

void ws_solution_free(ws_solution* s) { delete s; }

int ws_build_from_file(const char* path, ws_solution** out) {
  return guarded([&]() -> int {
    if (!path || !out) return arg_error("null argument");
    *out = wrap(ward::build_from_file(path));
    return WS_OK;
  });
}

int ws_build_from_json(const char* text, ws_solution** out) {
  return guarded([&]() -> int {
    if (!text || !out) return arg_error("null argument");
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ward::SyntaxError("invalid JSON text");
    if (ward::is_record(doc)) {
      if (!doc.contains("spec")) throw ward::SchemaError("$.spec: missing");
      doc = doc["spec"];
    }
    *out = wrap(ward::build_from_spec(doc));
    return WS_OK;
  });
}

int ws_dimension(const ws_solution* s, int* n) {
  if (!s || !n) return arg_error("null argument");
  *n = s->psi.n;
  return WS_OK;
}

int ws_degree(const ws_solution* s, int* degree) {
  return guarded([&]() -> int {
    if (!s || !degree) return arg_error("null argument");
    *degree = ward::pole_data(s->psi).degree();
    return WS_OK;
  });
}

int ws_pole_count(const ws_solution* s, int* count) {
  return guarded([&]() -> int {
    if (!s || !count) return arg_error("null argument");
    *count = (int)ward::pole_data(s->psi).poles.size();
    return WS_OK;
  });
}

int ws_pole(const ws_solution* s, int index, double* re, double* im, int* mult) {
  return guarded([&]() -> int {
    if (!s || !re || !im || !mult) return arg_error("null argument");
    auto pd = ward::pole_data(s->psi);
    if (index < 0 || index >= (int)pd.poles.size()) return arg_error("pole index out of range");
    *re = pd.poles[index].z.real();
    *im = pd.poles[index].z.imag();
    *mult = pd.poles[index].mult;
    return WS_OK;
  });
}

int ws_rank_count(const ws_solution* s, int* count) {
  if (!s || !count) return arg_error("null argument");
  *count = (int)s->psi.factors.size();
  return WS_OK;
}

int ws_rank(const ws_solution* s, int index, int* rank) {
  if (!s || !rank) return arg_error("null argument");
  if (index < 0 || index >= (int)s->psi.factors.size())
    return arg_error("factor index out of range");
  *rank = s->psi.factors[index].pi->rank();
  return WS_OK;
}

int ws_provenance(const ws_solution* s, char** out) {
  if (!s || !out) return arg_error("null argument");
  *out = dup_string(s->psi.provenance);
  return WS_OK;
}

int ws_su_normalize(const ws_solution* s, int* flag) {
  if (!s || !flag) return arg_error("null argument");
  *flag = s->su ? 1 : 0;
  return WS_OK;
}

int ws_set_su_normalize(ws_solution* s, int flag) {
  if (!s) return arg_error("null argument");
  s->su = flag != 0;
  return WS_OK;
}

int ws_build_summary(const ws_solution* s, char** out) {
  return guarded([&]() -> int {
    if (!s || !out) return arg_error("null argument");
    *out = dup_string(ward::build_summary(s->psi));
    return WS_OK;
  });
}

int ws_eval(const ws_solution* s, double x, double y, double t, double lambda_re,
            double lambda_im, double* out_re, double* out_im) {
  return guarded([&]() -> int {
    if (!s || !out_re || !out_im) return arg_error("null argument");
    ward::CMatrix m = ward::eval(s->psi, {x, y, t}, ward::Complex(lambda_re, lambda_im));
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) {
        out_re[r * m.cols() + c] = m(r, c).real();
        out_im[r * m.cols() + c] = m(r, c).imag();
      }
    return WS_OK;
  });
}

int ws_ward_map(const ws_solution* s, double x, double y, double t, double* out_re,
                double* out_im) {
  return guarded([&]() -> int {
    if (!s || !out_re || !out_im) return arg_error("null argument");
    ward::CMatrix m = ward::ward_map(s->psi, {x, y, t}, s->su);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) {
        out_re[r * m.cols() + c] = m(r, c).real();
        out_im[r * m.cols() + c] = m(r, c).imag();
      }
    return WS_OK;
  });
}

int ws_save_record(const ws_solution* s, const char* path) {
  return guarded([&]() -> int {
    if (!s || !path) return arg_error("null argument");
    ward::SpecBuild built;
    built.psi = s->psi;
    built.su_normalize = s->su;
    built.spec = s->spec;
    write_text_atomic(path, ward::make_record(built).dump(2) + "\n");
    return WS_OK;
  });
}

int ws_corrupt_factor(const ws_solution* s, int index, double magnitude,
                      unsigned long long seed, ws_solution** out) {
  return guarded([&]() -> int {
    if (!s || !out) return arg_error("null argument");
    if (index < 0 || index >= (int)s->psi.factors.size())
      return arg_error("factor index out of range");
    auto* c = new ws_solution;
    c->psi = ward::corrupt_factor(s->psi, (size_t)index, magnitude, seed);
    c->su = s->su;
    c->spec = s->spec;
    *out = c;
    return WS_OK;
  });
}

int ws_verify_report(const ws_solution* s, unsigned long long seed, double fd_step,
                     char** report, int* all_pass) {
  return guarded([&]() -> int {
    if (!s || !report || !all_pass) return arg_error("null argument");
    ward::VerifyConfig cfg;
    cfg.sample_seed = seed;
    if (fd_step > 0) cfg.fd_step = fd_step;
    auto reports = ward::full_suite(s->psi, cfg);
    auto tails = ward::tail_check(s->psi, cfg);
    reports.insert(reports.end(), tails.begin(), tails.end());
    bool ok = true;
    for (const auto& r : reports) ok = ok && r.pass;
    *report = dup_string(ward::render_report(reports));
    *all_pass = ok ? 1 : 0;
    return WS_OK;
  });
}

int ws_sample_to_csv(const ws_solution* s, const char* grid, const char* t_values,
                     const char* quantity, double fd_step, const char* out_path,
                     char** summary) {
  return guarded([&]() -> int {
    if (!s || !out_path) return arg_error("null argument");
    ward::GridSpec g = grid_from_flags(s, grid, t_values, quantity, fd_step);
    std::string text;
    for (size_t i = 0; i < g.t_values.size(); ++i) {
      ward::GridData data = ward::sample_grid(s->psi, g, g.t_values[i]);
      std::string path = g.t_values.size() > 1 ? indexed_path(out_path, i) : out_path;
      ward::write_grid_csv(data, path);
      text += path + ": masked " + std::to_string(data.masked) + "/" +
              std::to_string((size_t)g.nx * g.ny) + "\n";
    }
    if (summary) *summary = dup_string(text);
    return WS_OK;
  });
}

int ws_frames_to_dir(const ws_solution* s, const char* grid, const char* quantity,
                     double fd_step, double t_start, double t_end, int steps,
                     const char* out_dir, char** manifest_path) {
  return guarded([&]() -> int {
    if (!s || !out_dir) return arg_error("null argument");
    if (steps < 1) return arg_error("steps must be at least 1");
    ward::GridSpec g = grid_from_flags(s, grid, "", quantity, fd_step);
    std::filesystem::create_directories(out_dir);

    std::vector<double> ts;
    for (int k = 0; k <= steps; ++k) {
      double t = t_start + (t_end - t_start) * k / steps;
      if (ts.empty() || t != ts.back()) ts.push_back(t);
    }

    json manifest;
    manifest["x_min"] = g.x_min;
    manifest["x_max"] = g.x_max;
    manifest["nx"] = g.nx;
    manifest["y_min"] = g.y_min;
    manifest["y_max"] = g.y_max;
    manifest["ny"] = g.ny;
    manifest["quantity"] = ward::quantity_label(g);
    manifest["fd_step"] = g.fd_step;
    json frames = json::array();
    for (size_t i = 0; i < ts.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%04zu.csv", i);
      ward::GridData data = ward::sample_grid(s->psi, g, ts[i]);
      ward::write_grid_csv(data, std::string(out_dir) + "/" + name);
      frames.push_back({{"file", name}, {"t", ts[i]}});
    }
    manifest["frames"] = frames;
    std::string mpath = std::string(out_dir) + "/manifest.json";
    write_text_atomic(mpath, manifest.dump(2) + "\n");
    if (manifest_path) *manifest_path = dup_string(mpath);
    return WS_OK;
  });
}

int ws_factor_report(const ws_solution* s, char** listing) {
  return guarded([&]() -> int {
    if (!s || !listing) return arg_error("null argument");
    *listing = dup_string(factor_listing(s->psi));
    return WS_OK;
  });
}

}  // extern "C"
