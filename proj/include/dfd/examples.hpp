#pragma once

#include <string>
#include <vector>

#include "dfd/models.hpp"

namespace dfd {

struct ExampleInfo {
  std::string name;  // "fib-mod-m" style names take the modulus as a suffix
  std::string description;
};

const std::vector<ExampleInfo>& example_gallery();

// Builds a gallery model by name, e.g. "fib-mod-5", "galilean-mod-4",
// "logistic-grid" or "fig2-s3". Throws InvalidArgument for unknown names.
DynamicalModel make_example(const std::string& name);

DynamicalModel fibonacci_mod(int m);
DynamicalModel galilean_mod(int m);
// Cells of [0,1] crossed with a grid of growth rates in [0,4].
DynamicalModel logistic_grid(int cells = 8, int rates = 5);

}  // namespace dfd
