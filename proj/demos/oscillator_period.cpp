// Encloses the perturbed harmonic oscillator
//   x' = y + [-e1, e1],  y' = -x + [-e2, e2]
// over one period and prints the final box for both perturbation bounds.
#include <cmath>
#include <cstdio>
#include <numbers>

#include "incluso/inclusion.hpp"
#include "incluso/models.hpp"

using namespace incluso;

int main() {
  const PerturbedSystem sys = models::harmonic_oscillator(0.0, 0.1);
  const IVector x0{Interval(0.99, 1.01), Interval(-0.01, 0.01)};
  const std::size_t steps = 100;

  for (Method m : {Method::ln, Method::cw}) {
    SolverConfig cfg;
    cfg.method = m;
    cfg.ln_norm = NormKind::euclid;
    cfg.step = 2 * std::numbers::pi / steps;
    const EnclosureSet end = integrate(sys, make_set(x0, Representation::doubleton), 0.0, steps, cfg);
    const IVector box = hull_of(end);
    std::printf("%s  x in [%.7f, %.7f]  y in [%.7f, %.7f]  diam %.7f\n", m == Method::ln ? "LN" : "CW", box[0].lo(),
                box[0].hi(), box[1].lo(), box[1].hi(), diam(box));
  }
}
