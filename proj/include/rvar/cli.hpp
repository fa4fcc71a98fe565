#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rvar/dependence.hpp"
#include "rvar/marginals.hpp"
#include "rvar/sample_matrix.hpp"

namespace rvar::cli {

// Everything a command needs. Flat key=value text (one pair per line, `#`
// comments) is the file form; to_text() is canonical, so
// parse_run_config(c.to_text()) == c.
struct RunConfig {
  std::string command;
  std::string margin1;  // e.g. "weibull shape=2 scale=50"
  std::string margin2;
  std::string copula = "independence";  // or "gumbel theta=1.5"
  std::string kind;                     // measure (uni), curve kind, or sensitivity target
  double alpha1 = 0.95;
  double alpha2 = 0.99;
  int fixed = 1;
  int free_index = 0;  // 1-based; 0 = the column other than `fixed`
  std::size_t points = 200;
  std::size_t m = 250;
  std::size_t n = 4000;
  std::size_t reps = 50;
  std::uint64_t seed = 42;
  std::vector<double> x_fixed;
  std::vector<double> z;
  std::string input;
  std::string output;

  std::string to_text() const;
  bool operator==(const RunConfig&) const = default;
};

// Throws DomainError on unknown keys or unparsable values.
RunConfig parse_run_config(const std::string& text);

// "family key=value ..."; families gev, gpd, weibull, exponential, uniform.
MarginalModel parse_margin(const std::string& text);
std::string margin_text(const MarginalModel& m);
// independence | comonotone | countermonotone | gumbel theta=<v>
Copula parse_copula(const std::string& text);
std::string copula_text(const Copula& c);

// Header line required; throws DataError with the 1-based line number.
SampleMatrix read_sample_csv(std::istream& in);

// 10 significant digits; "inf", "-inf" and "NA" for non-finite values.
std::string format_number(double v);

// args excludes the program name. Exit codes: 0 ok, 2 domain or config
// error, 3 input data error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rvar::cli
