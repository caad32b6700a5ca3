#include "fsopc/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace fsopc {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

template <class T>
T parse_field(std::string_view field, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad field '" + std::string(field) + "'");
  return v;
}

}  // namespace

ResultRow to_row(const BerPoint& p) {
  return {p.receiver, p.param, p.n_s, p.n_b, p.snr_db, p.bits, p.errors, p.ber, p.ci95, p.mean_d, p.forced_merges};
}

std::string format_row(const ResultRow& r) {
  std::string s;
  s += r.receiver + ',' + r.param + ',';
  s += fmt("%.6g", r.n_s) + ',' + fmt("%.6g", r.n_b) + ',' + fmt("%.6g", r.snr_db) + ',';
  s += std::to_string(r.bits) + ',' + std::to_string(r.errors) + ',';
  s += fmt("%.5e", r.ber) + ',' + fmt("%.5e", r.ci95) + ',';
  if (r.mean_d) s += fmt("%.6g", *r.mean_d);
  s += ',';
  if (r.forced_merges) s += std::to_string(*r.forced_merges);
  return s;
}

void write_csv(std::ostream& out, std::span<const BerPoint> points) {
  out << kCsvHeader << '\n';
  for (const auto& p : points) out << format_row(to_row(p)) << '\n';
}

std::vector<ResultRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("csv: missing or unexpected header");
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 11) throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 11 fields");
    ResultRow r;
    r.receiver = f[0];
    r.param = f[1];
    r.n_s = parse_field<double>(f[2], line_no);
    r.n_b = parse_field<double>(f[3], line_no);
    r.snr_db = parse_field<double>(f[4], line_no);
    r.bits = parse_field<std::uint64_t>(f[5], line_no);
    r.errors = parse_field<std::uint64_t>(f[6], line_no);
    r.ber = parse_field<double>(f[7], line_no);
    r.ci95 = parse_field<double>(f[8], line_no);
    if (!f[9].empty()) r.mean_d = parse_field<double>(f[9], line_no);
    if (!f[10].empty()) r.forced_merges = parse_field<std::uint64_t>(f[10], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace fsopc
