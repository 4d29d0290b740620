#pragma once

#include <array>
#include <string>
#include <vector>

#include "ward/loopgroup.hpp"

namespace ward {

enum class GridQuantity { EnergyDensity, Entry, Drift };

struct GridSpec {
  double x_min = -10.0, x_max = 10.0;
  int nx = 201;
  double y_min = -10.0, y_max = 10.0;
  int ny = 201;
  std::vector<double> t_values{0.0};
  GridQuantity quantity = GridQuantity::EnergyDensity;
  int entry_row = 0, entry_col = 0;
  char entry_part = 'r';  // 'r' real, 'i' imag, 'a' abs
  double fd_step = 1e-4;
  bool su_normalize = false;
};

// grid_flag "xmin,xmax,nx,ymin,ymax,ny", t_flag comma-separated times,
// quantity_flag "energy_density" | "drift" | "entry:i,j,re|im|abs";
// empty strings keep the defaults.  SchemaError on malformed input.
GridSpec parse_grid_spec(const std::string& grid_flag, const std::string& t_flag,
                         const std::string& quantity_flag);

std::string quantity_label(const GridSpec& g);

struct GridData {
  GridSpec spec;
  double t = 0.0;
  std::string quantity_label;
  std::vector<double> values;  // ny rows of nx values, row-major in y; masked = NaN
  int masked = 0;

  double at(int iy, int ix) const { return values[(size_t)iy * spec.nx + ix]; }
};

// Samples one time slice; singular cells become NaN and are counted.
GridData sample_grid(const ExtendedSolution& psi, const GridSpec& g, double t);

// Header "# x_min x_max nx y_min y_max ny t quantity", then ny comma-separated
// rows; masked cells emit "nan".  Written atomically (temp file + rename).
void write_grid_csv(const GridData& grid, const std::string& path);
GridData read_grid_csv(const std::string& path);

// Grid-cell coordinates of the maximum value (NaN cells skipped).
std::array<double, 2> grid_argmax(const GridData& grid);

}  // namespace ward
