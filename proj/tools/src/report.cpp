#include "chg_cli/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <ostream>

namespace chg::cli {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(Complex v) { return "(" + format_number(v.real()) + ", " + format_number(v.imag()) + ")"; }

void RunReport::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : config_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  config_.emplace_back(key, value);
}

void RunReport::add_section(std::string name, std::vector<std::pair<std::string, std::string>> entries) {
  sections_.emplace_back(std::move(name), std::move(entries));
}

bool RunReport::passed() const {
  for (const auto& c : checks_) {
    if (!c.pass) return false;
  }
  return true;
}

void RunReport::write(std::ostream& out) const {
  out << "# chg report\n";
  out << "command = " << command_ << '\n';
  for (const auto& [k, v] : config_) out << k << " = " << v << '\n';
  if (timestamp_) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    out << "timestamp = " << buf << '\n';
  }
  for (const auto& [name, entries] : sections_) {
    out << "\n[" << name << "]\n";
    for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
  }
  for (const auto& c : checks_) {
    out << "\n[check " << c.name << "]\n";
    out << "points = " << c.points << '\n';
    if (c.error.empty()) out << c.measure << " = " << format_number(c.value) << '\n';
    out << "tolerance = " << format_number(c.tolerance) << '\n';
    if (!c.error.empty()) out << "error = " << c.error << '\n';
    out << "status = " << (c.pass ? "pass" : "fail") << '\n';
  }
  out << "\noverall = " << (passed() ? "pass" : "fail") << '\n';
}

}  // namespace chg::cli
