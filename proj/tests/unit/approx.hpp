#pragma once

#include "doctest.h"

// Purely relative comparison; doctest's default Approx adds a scale of 1.
inline doctest::Approx rel(double value, double eps = 1e-10) {
  return doctest::Approx(value).epsilon(eps).scale(0.0);
}
