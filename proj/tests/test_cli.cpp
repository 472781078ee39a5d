#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

using Catch::Matchers::ContainsSubstring;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout and stderr interleaved
};

// Runs the built executable with the given arguments through the shell.
RunResult run(const std::string& args) {
  const std::string cmd = std::string(MEFIT_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    output.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  RunResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.output = std::move(output);
  return res;
}

// The shared simulated dataset: 2x3 cells, 5 repetitions, mild noise.
const char* kSimCsv = "cli_factorial.csv";

void make_sim_csv() {
  const RunResult r =
      run(std::string("simulate --x-levels 2 --y-levels 3 --reps 5 "
                      "--beta 1,4,5,2,3,3 --sd 0.1 --seed 1 --out ") +
          kSimCsv);
  REQUIRE(r.exit_code == 0);
  REQUIRE_THAT(r.output, ContainsSubstring("Wrote 30 rows"));
}

}  // namespace

TEST_CASE("simulate then fit end to end", "[cli]") {
  make_sim_csv();
  const RunResult r =
      run(std::string("fit ") + kSimCsv + " --formula 'Response ~ X * Y'");
  CHECK(r.exit_code == 0);
  CHECK_THAT(r.output, ContainsSubstring("Formula: Response ~ X + Y + X:Y"));
  CHECK_THAT(r.output, ContainsSubstring("Coefficients:"));
  CHECK_THAT(r.output, ContainsSubstring("(Intercept)"));
  CHECK_THAT(r.output, ContainsSubstring("Residual SS"));
  CHECK_THAT(r.output, ContainsSubstring("AIC:"));
}

TEST_CASE("fit --json is machine readable", "[cli]") {
  make_sim_csv();
  const RunResult r = run(std::string("fit ") + kSimCsv +
                          " --formula 'Response ~ X * Y' --json");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j["formula"] == "Response ~ X + Y + X:Y");
  CHECK(j["n"] == 30);
  CHECK(j["rank"] == 6);
  CHECK(j["df_residual"] == 24);
  REQUIRE(j["coefficients"].is_array());
  REQUIRE(j["coefficients"].size() == 6);
  CHECK(j["coefficients"][0]["label"] == "(Intercept)");
  CHECK(j["coefficients"][0]["estimate"].is_number());
  CHECK(j["aic"].is_number());
  CHECK(j["bic"].is_number());
}

TEST_CASE("matrix dumps the design as CSV", "[cli]") {
  make_sim_csv();
  const RunResult r =
      run(std::string("matrix ") + kSimCsv + " --formula 'Response ~ X * Y'");
  REQUIRE(r.exit_code == 0);
  // Header row: one column per design column, intercept first.
  const std::string header = r.output.substr(0, r.output.find('\n'));
  CHECK(header == "(Intercept),X1,Y1,Y2,X1:Y1,X1:Y2");
  // 30 data rows follow.
  int lines = 0;
  for (char c : r.output) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 31);
}

TEST_CASE("anova prints the sequential table", "[cli]") {
  make_sim_csv();
  const RunResult r =
      run(std::string("anova ") + kSimCsv + " --formula 'Response ~ X * Y'");
  CHECK(r.exit_code == 0);
  CHECK_THAT(r.output, ContainsSubstring("Df"));
  CHECK_THAT(r.output, ContainsSubstring("Sum Sq"));
  CHECK_THAT(r.output, ContainsSubstring("Pr(>F)"));
  CHECK_THAT(r.output, ContainsSubstring("X:Y"));
  CHECK_THAT(r.output, ContainsSubstring("Residuals"));
}

TEST_CASE("compare reports the nested F test", "[cli]") {
  {
    std::ofstream out("cli_numeric.csv");
    out << "r,x,y\n";
    // y = x plus a bend; r tracks both with leftover noise-like wiggle.
    for (int i = 0; i < 12; ++i) {
      const double x = 0.5 * i;
      const double y = 0.2 * i * i;
      const double r_val = 1.0 + 0.8 * x + 0.1 * y + ((i * 7) % 5) * 0.07;
      out << r_val << "," << x << "," << y << "\n";
    }
  }
  const RunResult r = run(
      "compare cli_numeric.csv --reduced 'r ~ x' --full 'r ~ x + y'");
  std::remove("cli_numeric.csv");
  CHECK(r.exit_code == 0);
  CHECK_THAT(r.output, ContainsSubstring("Model 1: r ~ x"));
  CHECK_THAT(r.output, ContainsSubstring("Model 2: r ~ x + y"));
  CHECK_THAT(r.output, ContainsSubstring("Res.Df"));
  CHECK_THAT(r.output, ContainsSubstring("Sum of Sq"));
}

TEST_CASE("compare refuses the same-span trap", "[cli]") {
  make_sim_csv();
  // 'Response ~ Y + X:Y' re-expands to the full interaction span, so this
  // comparison has nothing to test and must fail loudly.
  const RunResult r = run(std::string("compare ") + kSimCsv +
                          " --reduced 'Response ~ Y + X:Y'"
                          " --full 'Response ~ X * Y'");
  CHECK(r.exit_code == 1);
  CHECK_THAT(r.output, ContainsSubstring("error:"));
  CHECK_THAT(r.output, ContainsSubstring("identical residual df"));
}

TEST_CASE("test-main-effect walks the whole procedure", "[cli]") {
  make_sim_csv();
  const RunResult r = run(std::string("test-main-effect ") + kSimCsv +
                          " --response Response --effect X --across Y");
  CHECK(r.exit_code == 0);
  CHECK_THAT(r.output,
             ContainsSubstring("Full model:    Response ~ X + Y + X:Y"));
  CHECK_THAT(r.output, ContainsSubstring(
                           "Reduced model: Response ~ Y1 + Y2 + X:Y1 + X:Y2"));
  CHECK_THAT(r.output, ContainsSubstring("Generated columns: Y1, Y2"));
  CHECK_THAT(r.output, ContainsSubstring("sum coding"));
  CHECK_THAT(r.output, ContainsSubstring("Res.Df"));
  CHECK_THAT(r.output, ContainsSubstring("F(1, 24)"));
}

TEST_CASE("lrt works from external log-likelihoods", "[cli]") {
  const RunResult r = run(
      "lrt --loglik0 568.20 --df0 48 --loglik1 568.2333 --df1 49 --n 864");
  CHECK(r.exit_code == 0);
  CHECK_THAT(r.output, ContainsSubstring("Chisq"));
  CHECK_THAT(r.output, ContainsSubstring("BIC"));
  CHECK_THAT(r.output, ContainsSubstring("0.0666"));
  CHECK_THAT(r.output, ContainsSubstring("-811.84"));
  CHECK_THAT(r.output, ContainsSubstring("0.7964"));

  // Without --n there is no BIC column.
  const RunResult no_n =
      run("lrt --loglik0 568.20 --df0 48 --loglik1 568.2333 --df1 49");
  CHECK(no_n.exit_code == 0);
  CHECK_THAT(no_n.output, !ContainsSubstring("BIC"));

  // A hair of negative evidence is clamped and noted.
  const RunResult clamped =
      run("lrt --loglik0 5 --df0 1 --loglik1 4.9999999999 --df1 2");
  CHECK(clamped.exit_code == 0);
  CHECK_THAT(clamped.output, ContainsSubstring("clamped"));
}

TEST_CASE("errors are reported on stderr with exit code 1", "[cli]") {
  make_sim_csv();
  const RunResult bad_formula =
      run(std::string("fit ") + kSimCsv + " --formula 'Response ~ X ^ 2'");
  CHECK(bad_formula.exit_code == 1);
  CHECK_THAT(bad_formula.output, ContainsSubstring("error:"));

  const RunResult bad_file = run("fit no_such_file.csv --formula 'R ~ X'");
  CHECK(bad_file.exit_code == 1);
  CHECK_THAT(bad_file.output, ContainsSubstring("error:"));

  const RunResult bad_beta =
      run("simulate --x-levels 2 --y-levels 2 --reps 1 --beta 1,2,3");
  CHECK(bad_beta.exit_code == 1);
  CHECK_THAT(bad_beta.output, ContainsSubstring("error:"));
}
