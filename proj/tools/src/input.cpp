#include "chg_cli/input.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "chg/error.hpp"

namespace chg::cli {
namespace {

std::string read_source(const std::string& text_or_path) {
  std::error_code ec;
  if (text_or_path.find('=') == std::string::npos && std::filesystem::is_regular_file(text_or_path, ec)) {
    std::ifstream in(text_or_path);
    if (!in) throw Error(ErrorCode::kParse, "cannot read " + text_or_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  return text_or_path;
}

double to_real(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "not a number: '" + token + "'");
  }
  if (used != token.size()) throw Error(ErrorCode::kParse, "not a number: '" + token + "'");
  return v;
}

class Lexer {
 public:
  explicit Lexer(std::string text) : s_(std::move(text)) {}

  void skip_space() {
    while (i_ < s_.size()) {
      if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else if (std::isspace(static_cast<unsigned char>(s_[i_])) || s_[i_] == ',') {
        ++i_;
      } else {
        break;
      }
    }
  }
  bool done() {
    skip_space();
    return i_ >= s_.size();
  }
  char peek() {
    skip_space();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) throw Error(ErrorCode::kParse, std::string("expected '") + c + "' at offset " + std::to_string(i_));
    ++i_;
  }
  std::string identifier() {
    skip_space();
    const auto start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (start == i_) throw Error(ErrorCode::kParse, "expected a name at offset " + std::to_string(start));
    return s_.substr(start, i_ - start);
  }
  std::string number() {
    skip_space();
    const auto start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.' ||
                              s_[i_] == '+' || s_[i_] == '-')) {
      ++i_;
    }
    if (start == i_) throw Error(ErrorCode::kParse, "expected a number at offset " + std::to_string(start));
    return s_.substr(start, i_ - start);
  }
  // True when the upcoming token is `name =`, i.e. a new item starts.
  bool at_item_start() {
    skip_space();
    auto j = i_;
    if (j >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) return false;
    while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
    while (j < s_.size() && std::isspace(static_cast<unsigned char>(s_[j]))) ++j;
    return j < s_.size() && s_[j] == '=';
  }

 private:
  std::string s_;
  std::size_t i_ = 0;
};

std::map<std::string, std::vector<Complex>> parse_items(const std::string& raw) {
  std::string text = raw;
  for (char& c : text) {
    if (c == ';') c = '\n';
  }
  Lexer lex(text);
  std::map<std::string, std::vector<Complex>> items;
  while (!lex.done()) {
    const std::string name = lex.identifier();
    lex.expect('=');
    if (items.count(name)) throw Error(ErrorCode::kParse, "duplicate item '" + name + "'");
    auto& values = items[name];
    while (!lex.done() && !lex.at_item_start()) {
      if (lex.peek() == '(') {
        lex.expect('(');
        const double re = to_real(lex.number());
        const double im = to_real(lex.number());
        lex.expect(')');
        values.emplace_back(re, im);
      } else {
        values.emplace_back(to_real(lex.number()), 0.0);
      }
    }
  }
  return items;
}

const std::vector<Complex>& require(const std::map<std::string, std::vector<Complex>>& items, const std::string& key,
                                    std::size_t size) {
  const auto it = items.find(key);
  if (it == items.end()) throw Error(ErrorCode::kParse, "missing item '" + key + "'");
  if (it->second.size() != size) {
    throw Error(ErrorCode::kParse, "item '" + key + "' needs " + std::to_string(size) + " values, got " +
                                       std::to_string(it->second.size()));
  }
  return it->second;
}

void reject_unknown(const std::map<std::string, std::vector<Complex>>& items,
                    std::initializer_list<const char*> known) {
  for (const auto& [k, v] : items) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) throw Error(ErrorCode::kParse, "unknown item '" + k + "'");
  }
}

CVector to_vector(const std::vector<Complex>& v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

}  // namespace

Point parse_point(const DomainParams& params, const std::string& text_or_path) {
  const auto items = parse_items(read_source(text_or_path));
  reject_unknown(items, {"Z", "w"});
  const int p = params.p();
  const auto& zv = require(items, "Z", static_cast<std::size_t>(p * p));
  const auto& wv = require(items, "w", static_cast<std::size_t>(params.r()));
  CMatrix z(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) z(i, j) = zv[static_cast<std::size_t>(i * p + j)];
  }
  SymMatrix sym;
  try {
    sym = SymMatrix::from_matrix(z);
  } catch (const Error&) {
    throw Error(ErrorCode::kParse, "Z is not symmetric");
  }
  return {sym, to_vector(wv)};
}

Tangent parse_tangent(const DomainParams& params, const std::string& text_or_path) {
  const auto items = parse_items(read_source(text_or_path));
  reject_unknown(items, {"dz", "dw"});
  return {to_vector(require(items, "dz", static_cast<std::size_t>(params.m()))),
          to_vector(require(items, "dw", static_cast<std::size_t>(params.r())))};
}

}  // namespace chg::cli
