#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace cfp {

enum class OutputFormat { Text, Json };

struct RunConfig {
  std::size_t resolution = 200;
  double tol = 1e-9;
  double seq_tol = 1e-6;
  std::size_t horizon = 100000;
  std::optional<std::size_t> max_iters;  // route default when absent
  OutputFormat output_format = OutputFormat::Text;
  std::size_t seq_dim = 8;

  /// Throws std::invalid_argument unless every field is positive and
  /// resolution >= 2.
  void validate() const;
};

}  // namespace cfp
