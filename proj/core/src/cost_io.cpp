#include "annealot/cost_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "annealot/error.hpp"
#include "json.hpp"

namespace annealot {

namespace {

using nlohmann::json;

double parse_real(const std::string& tok, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw InvalidInput("bad number '" + tok + "' on line " + std::to_string(line));
  }
  while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
  if (pos != tok.size()) throw InvalidInput("bad number '" + tok + "' on line " + std::to_string(line));
  return v;
}

Vector read_vector(const json& j, const char* name) {
  if (!j.is_array()) throw InvalidInput(std::string(name) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidInput(std::string(name) + " entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CostMatrix read_cost_csv(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw InvalidInput("empty cost CSV");
  const double nd = parse_real(line, lineno);
  if (nd < 2 || nd != std::floor(nd) || nd > 4096) throw InvalidInput("cost CSV header must be an integer n >= 2");
  const int n = static_cast<int>(nd);
  Matrix M(n, n);
  for (int i = 0; i < n; ++i) {
    if (!next_line()) throw InvalidInput("cost CSV has fewer than n rows");
    std::stringstream ss(line);
    std::string tok;
    int j = 0;
    while (std::getline(ss, tok, ',')) {
      if (j >= n) throw InvalidInput("too many columns on line " + std::to_string(lineno));
      M(i, j++) = parse_real(tok, lineno);
    }
    if (j != n) throw InvalidInput("too few columns on line " + std::to_string(lineno));
  }
  CostMatrix C = CostMatrix::uniform(std::move(M));
  validate(C);
  return C;
}

void write_cost_csv(std::ostream& out, const CostMatrix& C) {
  out << C.n() << '\n';
  for (int i = 0; i < C.n(); ++i) {
    for (int j = 0; j < C.n(); ++j) {
      if (j) out << ',';
      out << format_real(C.entries(i, j));
    }
    out << '\n';
  }
}

CostMatrix parse_cost_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("cost JSON: ") + e.what());
  }
  if (!doc.contains("cost")) throw InvalidInput("cost JSON lacks \"cost\"");
  const json& rows = doc["cost"];
  if (!rows.is_array() || rows.empty()) throw InvalidInput("\"cost\" must be a non-empty array");
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (doc.contains("n") && doc["n"].get<long>() != n) throw InvalidInput("\"n\" disagrees with the cost rows");
  Matrix M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector r = read_vector(rows[static_cast<std::size_t>(i)], "cost row");
    if (r.size() != n) throw InvalidInput("cost row " + std::to_string(i) + " has the wrong length");
    M.row(i) = r.transpose();
  }
  CostMatrix C = CostMatrix::uniform(std::move(M));
  if (doc.contains("row_marginal")) C.row_marginal = read_vector(doc["row_marginal"], "row_marginal");
  if (doc.contains("col_marginal")) C.col_marginal = read_vector(doc["col_marginal"], "col_marginal");
  validate(C);
  return C;
}

std::string cost_to_json(const CostMatrix& C) {
  // Hand-written so numbers use format_real and the output is byte-stable.
  std::ostringstream o;
  auto vec = [&](const Vector& v) {
    o << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) o << (i ? "," : "") << format_real(v[i]);
    o << ']';
  };
  o << "{\"n\":" << C.n() << ",\"cost\":[";
  for (int i = 0; i < C.n(); ++i) {
    if (i) o << ',';
    vec(C.entries.row(i).transpose());
  }
  o << "],\"row_marginal\":";
  vec(C.row_marginal);
  o << ",\"col_marginal\":";
  vec(C.col_marginal);
  o << '}';
  return o.str();
}

CostMatrix load_cost(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  if (is_json) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_cost_json(ss.str());
  }
  return read_cost_csv(in);
}

}  // namespace annealot
