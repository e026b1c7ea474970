#include "rng.hpp"

#include <cmath>

namespace mif {

double Rng::normal() {
  // Box-Muller, two fresh uniforms per variate: no cached state, so the
  // draw sequence depends only on the stream position.
  double u1 = uniform_open();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

}  // namespace mif
