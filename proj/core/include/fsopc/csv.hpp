#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsopc/simulation.hpp"

namespace fsopc {

inline constexpr std::string_view kCsvHeader =
    "receiver,param,n_s,n_b,snr_db,bits,errors,ber,ci95,mean_d,forced_merges";

/// One CSV record. BER and CI are printed with 6 significant digits in
/// scientific notation; non-applicable fields are empty.
struct ResultRow {
  std::string receiver;
  std::string param;
  double n_s = 0.0;
  double n_b = 0.0;
  double snr_db = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  double ber = 0.0;
  double ci95 = 0.0;
  std::optional<double> mean_d;
  std::optional<std::uint64_t> forced_merges;
};

ResultRow to_row(const BerPoint& point);
std::string format_row(const ResultRow& row);
void write_csv(std::ostream& out, std::span<const BerPoint> points);
/// Parses a CSV produced by write_csv; throws std::runtime_error on a bad header or record.
std::vector<ResultRow> parse_csv(std::istream& in);

}  // namespace fsopc
