#include "fsopc/glrt_metric.hpp"

#include <cmath>

#include "fsopc/error.hpp"

namespace fsopc {

LogMetric log_metric(WindowStats stats, double n_b) {
  if (!(n_b > 0.0)) throw ParameterError("log_metric: n_b must be > 0");
  if (stats.n_on == 0) return {0.0};
  const double n = static_cast<double>(stats.n_on);
  const double r = static_cast<double>(stats.r_on);
  const double data_term = stats.r_on == 0 ? 0.0 : r * std::log(r / (n * n_b));
  return {data_term - r + n_b * n};
}

}  // namespace fsopc
