#pragma once

// Key-value run report:
//
//   # chg report
//   command = verify
//   r = 1
//   ...
//
//   [check ma_closed]
//   points = 1000
//   max_residual = 3.5527136788005009e-15
//   tolerance = 1e-08
//   status = pass
//
//   overall = pass

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "chg/types.hpp"

namespace chg::cli {

/// 17 significant digits (%.17g), enough to round-trip a double.
std::string format_number(double v);
std::string format_complex(Complex v);

struct CheckRecord {
  std::string name;
  long points = 0;
  /// "max_residual" for upper-bounded checks, "min_growth" for lower-bounded.
  std::string measure = "max_residual";
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string error;  ///< set when the check aborted
};

class RunReport {
 public:
  explicit RunReport(std::string command) : command_(std::move(command)) {}

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value) { set(key, format_number(value)); }
  void set(const std::string& key, long value) { set(key, std::to_string(value)); }
  void set(const std::string& key, int value) { set(key, std::to_string(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }

  void add_check(CheckRecord record) { checks_.push_back(std::move(record)); }
  void add_section(std::string name, std::vector<std::pair<std::string, std::string>> entries);

  void include_timestamp(bool on) { timestamp_ = on; }

  const std::vector<CheckRecord>& checks() const { return checks_; }
  bool passed() const;
  void write(std::ostream& out) const;

 private:
  std::string command_;
  bool timestamp_ = true;
  std::vector<std::pair<std::string, std::string>> config_;
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections_;
  std::vector<CheckRecord> checks_;
};

}  // namespace chg::cli
