#pragma once

// CSV and JSON encodings of scan records.
//
// CSV: header `n,j,delta,b,t,c,c_r,eof`, one row per record, reals with 12
// significant digits. JSON: {"config": {...}, "records": [{...}, ...]} with the
// same field names; reals are written in shortest round-trip form so a JSON
// file reads back to identical records. Invalid records carry NaN (CSV "nan",
// JSON null) in c, c_r and eof.

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfent/error.hpp"
#include "mfent/scans.hpp"

namespace mfent::io {

inline constexpr const char* kCsvHeader = "n,j,delta,b,t,c,c_r,eof";

inline std::string format_real(double x, int digits = 12) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

inline void write_csv(std::ostream& os, const std::vector<ScanRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.n << ',' << format_real(r.j) << ',' << format_real(r.delta) << ',' << format_real(r.b) << ','
       << format_real(r.t) << ',' << format_real(r.c) << ',' << format_real(r.c_r) << ','
       << format_real(r.eof) << '\n';
  }
}

inline std::vector<ScanRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw DomainError("csv: missing or wrong header");
  std::vector<ScanRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw DomainError("csv: expected 8 fields in '" + line + "'");
    ScanRecord r;
    try {
      r.n = std::stoi(f[0]);
      double* dst[] = {&r.j, &r.delta, &r.b, &r.t, &r.c, &r.c_r, &r.eof};
      for (int k = 0; k < 7; ++k) *dst[k] = std::stod(f[k + 1]);
    } catch (const std::logic_error&) {
      throw DomainError("csv: unparsable row '" + line + "'");
    }
    r.valid = !std::isnan(r.c);
    out.push_back(r);
  }
  return out;
}

inline nlohmann::json real_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

inline nlohmann::json to_json(const ScanRecord& r) {
  return {{"n", r.n},         {"j", r.j},         {"delta", r.delta},       {"b", r.b},
          {"t", r.t},         {"c", real_or_null(r.c)}, {"c_r", real_or_null(r.c_r)},
          {"eof", real_or_null(r.eof)}};
}

inline ScanRecord record_from_json(const nlohmann::json& o) {
  auto real = [&](const char* k) {
    const auto& v = o.at(k);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  ScanRecord r;
  r.n = o.at("n").get<int>();
  r.j = real("j");
  r.delta = real("delta");
  r.b = real("b");
  r.t = real("t");
  r.c = real("c");
  r.c_r = real("c_r");
  r.eof = real("eof");
  r.valid = !std::isnan(r.c);
  return r;
}

inline nlohmann::json document(const nlohmann::json& config, const std::vector<ScanRecord>& records) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) recs.push_back(to_json(r));
  return {{"config", config}, {"records", std::move(recs)}};
}

inline void write_json(std::ostream& os, const nlohmann::json& config, const std::vector<ScanRecord>& records) {
  os << document(config, records).dump(1) << '\n';
}

inline std::vector<ScanRecord> read_json(std::istream& is) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("json: ") + e.what());
  }
  std::vector<ScanRecord> out;
  for (const auto& o : doc.at("records")) out.push_back(record_from_json(o));
  return out;
}

}  // namespace mfent::io
