#include "ward/gridio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ward/errors.hpp"
#include "ward/verify.hpp"

namespace ward {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SchemaError(what + ": not a number: '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw SchemaError(what + ": not an integer: '" + s + "'");
  return v;
}

}  // namespace

GridSpec parse_grid_spec(const std::string& grid_flag, const std::string& t_flag,
                         const std::string& quantity_flag) {
  GridSpec g;
  if (!grid_flag.empty()) {
    auto parts = split(grid_flag, ',');
    if (parts.size() != 6)
      throw SchemaError("grid: expected 'xmin,xmax,nx,ymin,ymax,ny'");
    g.x_min = parse_double(parts[0], "grid.xmin");
    g.x_max = parse_double(parts[1], "grid.xmax");
    g.nx = parse_int(parts[2], "grid.nx");
    g.y_min = parse_double(parts[3], "grid.ymin");
    g.y_max = parse_double(parts[4], "grid.ymax");
    g.ny = parse_int(parts[5], "grid.ny");
  }
  if (g.nx < 2 || g.ny < 2) throw SchemaError("grid: counts must be at least 2");
  if (!(g.x_min < g.x_max) || !(g.y_min < g.y_max))
    throw SchemaError("grid: ranges must be nonempty");

  if (!t_flag.empty()) {
    g.t_values.clear();
    for (const auto& part : split(t_flag, ','))
      g.t_values.push_back(parse_double(part, "t"));
    if (g.t_values.empty()) throw SchemaError("t: expected at least one value");
  }

  if (!quantity_flag.empty()) {
    if (quantity_flag == "energy_density") {
      g.quantity = GridQuantity::EnergyDensity;
    } else if (quantity_flag == "drift") {
      g.quantity = GridQuantity::Drift;
    } else if (quantity_flag.rfind("entry:", 0) == 0) {
      auto parts = split(quantity_flag.substr(6), ',');
      if (parts.size() != 3)
        throw SchemaError("quantity: entry needs 'entry:i,j,re|im|abs'");
      g.quantity = GridQuantity::Entry;
      g.entry_row = parse_int(parts[0], "quantity.entry.row");
      g.entry_col = parse_int(parts[1], "quantity.entry.col");
      if (parts[2] == "re")
        g.entry_part = 'r';
      else if (parts[2] == "im")
        g.entry_part = 'i';
      else if (parts[2] == "abs")
        g.entry_part = 'a';
      else
        throw SchemaError("quantity: entry part must be re, im, or abs");
    } else {
      throw SchemaError("quantity: unknown quantity '" + quantity_flag + "'");
    }
  }
  return g;
}

std::string quantity_label(const GridSpec& g) {
  switch (g.quantity) {
    case GridQuantity::EnergyDensity:
      return "energy_density";
    case GridQuantity::Drift:
      return "drift";
    case GridQuantity::Entry: {
      const char* part = g.entry_part == 'r' ? "re" : (g.entry_part == 'i' ? "im" : "abs");
      return "entry:" + std::to_string(g.entry_row) + "," + std::to_string(g.entry_col) + "," +
             part;
    }
  }
  return "energy_density";
}

GridData sample_grid(const ExtendedSolution& psi, const GridSpec& g, double t) {
  if (g.quantity == GridQuantity::Entry &&
      (g.entry_row < 0 || g.entry_row >= psi.n || g.entry_col < 0 || g.entry_col >= psi.n))
    throw SchemaError("quantity: entry indices outside the matrix");

  GridData out;
  out.spec = g;
  out.t = t;
  out.quantity_label = quantity_label(g);
  out.values.assign((size_t)g.nx * g.ny, 0.0);

  MapEvaluator J = [&psi, &g](const SpacetimePoint& p) { return ward_map(psi, p, g.su_normalize); };
  double dx = (g.x_max - g.x_min) / (g.nx - 1);
  double dy = (g.y_max - g.y_min) / (g.ny - 1);
  for (int iy = 0; iy < g.ny; ++iy) {
    double y = g.y_min + iy * dy;
    for (int ix = 0; ix < g.nx; ++ix) {
      double x = g.x_min + ix * dx;
      SpacetimePoint p{x, y, t};
      double val;
      try {
        switch (g.quantity) {
          case GridQuantity::EnergyDensity:
            val = energy_density(J, p, g.fd_step);
            break;
          case GridQuantity::Drift:
            val = (J(p) - J({x, y, 0.0})).norm();
            break;
          case GridQuantity::Entry: {
            Complex e = J(p)(g.entry_row, g.entry_col);
            val = g.entry_part == 'r' ? e.real() : (g.entry_part == 'i' ? e.imag() : std::abs(e));
            break;
          }
          default:
            val = 0.0;
        }
      } catch (const Error&) {
        val = std::numeric_limits<double>::quiet_NaN();
        ++out.masked;
      }
      out.values[(size_t)iy * g.nx + ix] = val;
    }
  }
  return out;
}

void write_grid_csv(const GridData& grid, const std::string& path) {
  const GridSpec& g = grid.spec;
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw IOError("cannot write " + tmp);
    char head[256];
    std::snprintf(head, sizeof head, "# %.17g %.17g %d %.17g %.17g %d %.17g %s\n", g.x_min,
                  g.x_max, g.nx, g.y_min, g.y_max, g.ny, grid.t, grid.quantity_label.c_str());
    out << head;
    char buf[40];
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        double v = grid.at(iy, ix);
        if (std::isnan(v)) {
          out << (ix ? ",nan" : "nan");
        } else {
          std::snprintf(buf, sizeof buf, "%.10e", v);
          if (ix) out << ',';
          out << buf;
        }
      }
      out << '\n';
    }
    if (!out) throw IOError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw IOError("cannot move " + tmp);
}

GridData read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open " + path);
  std::string header;
  std::getline(in, header);
  if (header.rfind("# ", 0) != 0) throw SyntaxError("missing grid header in " + path);
  std::istringstream hs(header.substr(2));
  GridData out;
  GridSpec& g = out.spec;
  if (!(hs >> g.x_min >> g.x_max >> g.nx >> g.y_min >> g.y_max >> g.ny >> out.t >>
        out.quantity_label))
    throw SyntaxError("malformed grid header in " + path);
  out.values.reserve((size_t)g.nx * g.ny);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (const auto& cell : split(line, ',')) {
      if (cell == "nan") {
        out.values.push_back(std::numeric_limits<double>::quiet_NaN());
        ++out.masked;
      } else {
        out.values.push_back(parse_double(cell, "grid cell"));
      }
    }
  }
  if ((int)out.values.size() != g.nx * g.ny)
    throw SyntaxError("grid size mismatch in " + path);
  return out;
}

std::array<double, 2> grid_argmax(const GridData& grid) {
  const GridSpec& g = grid.spec;
  double best = -std::numeric_limits<double>::infinity();
  int bx = 0, by = 0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      double v = grid.at(iy, ix);
      if (!std::isnan(v) && v > best) {
        best = v;
        bx = ix;
        by = iy;
      }
    }
  double dx = (g.x_max - g.x_min) / (g.nx - 1);
  double dy = (g.y_max - g.y_min) / (g.ny - 1);
  return {g.x_min + bx * dx, g.y_min + by * dy};
}

}  // namespace ward
