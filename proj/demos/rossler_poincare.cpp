// Poincare map of the Rossler system (a = 5.7) with additive perturbations of
// size eps on the section x = 0, x' > 0, starting from a box around (0, -10.3, 0.03).
#include <cstdio>
#include <cstdlib>

#include "incluso/models.hpp"
#include "incluso/poincare.hpp"

using namespace incluso;

int main(int argc, char** argv) {
  const double eps = argc > 1 ? std::strtod(argv[1], nullptr) : 1e-4;
  const double r = 1e-4;
  const PerturbedSystem sys = models::rossler(5.7, eps);
  const IVector x0{Interval(0), Interval(-10.3 - r, -10.3 + r), Interval(0.03 - r, 0.03 + r)};

  SolverConfig cfg;
  cfg.step = 0.01;
  cfg.representation = Representation::quadruple;
  const Section theta{PVector{1.0, 0.0, 0.0}, 0.0, Direction::positive};

  try {
    const PoincareResult res = poincare_map(sys, make_set(x0, cfg.representation), theta, cfg);
    const char* names = "xyz";
    for (std::size_t i = 0; i < 3; ++i)
      std::printf("%c in [%.7f, %.7f]  diam %.7f\n", names[i], res.image[i].lo(), res.image[i].hi(),
                  diam(res.image[i]));
    std::printf("return time in [%.7f, %.7f] after %zu steps\n", res.crossing_time.lo(), res.crossing_time.hi(),
                res.steps);
  } catch (const Error& e) {
    std::fprintf(stderr, "failed: %s\n", e.what());
    return 1;
  }
}
