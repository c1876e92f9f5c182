#pragma once

#include <iosfwd>
#include <string>

#include "annealot/transport.hpp"

namespace annealot {

// CSV: first line n, then n rows of n comma-separated decimals. Marginals uniform.
CostMatrix read_cost_csv(std::istream& in);
void write_cost_csv(std::ostream& out, const CostMatrix& C);

// JSON: {"n", "cost", "row_marginal", "col_marginal"}; marginals optional on read.
CostMatrix parse_cost_json(const std::string& text);
std::string cost_to_json(const CostMatrix& C);

CostMatrix load_cost(const std::string& path);

// Shortest round-trip decimal (%.17g); used by every CSV/JSONL writer.
std::string format_real(double x);

}  // namespace annealot
