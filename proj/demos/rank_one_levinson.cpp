// Levinson's theorem for the rank-one family V = v0 delta_0: the phase-shift
// difference, the bound-state count and the winding number side by side.

#include <cstdio>

#include "levinson/scattering.hpp"
#include "levinson/topology.hpp"

int main() {
  using namespace levinson;
  const GridSpec grid;
  std::printf("%8s %4s %8s %8s %14s %8s\n", "v0", "N", "Delta-", "Delta+", "(eta+-eta-)/pi", "winding");
  for (double v0 : {-1.5, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.5}) {
    const auto p = Potential::rank_one(v0, 0);
    const auto d = scattering_grid(p, grid);
    const auto w = winding_number(assemble_boundary(p, d, grid), d, grid.tol_winding);
    std::printf("%8.3f %4d %8.2f %8.2f %14.8f %8d\n", v0, d.count_n(), d.thresholds.delta_minus,
                d.thresholds.delta_plus, (d.eta_plus - d.eta_minus) / pi, w.winding);
  }
  return 0;
}
