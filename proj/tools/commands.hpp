#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace ellip::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 3 };

struct TestOptions {
  std::string input;
  std::string output;
  double alpha = 0.05;
  std::string kernel = "gaussian";
  std::optional<double> gamma_u;
  std::optional<double> gamma_theta;
  double ridge = 1e-6;
};

struct GenOptions {
  std::string kind;
  int df = 2;
  long n = 0;
  long d = 0;
  std::uint64_t seed = 0;
  std::string output;
};

struct SimulateOptions {
  std::string grid;
  std::size_t reps = 100;
  double alpha = 0.1;
  std::uint64_t seed = 0;
  std::string output_dir;
  unsigned threads = 0;
};

struct BoxcoxOptions {
  std::string input;
  std::string output;
  std::string lambdas;  // optional JSON path
};

int cmd_test(const TestOptions& o);
int cmd_gen(const GenOptions& o);
int cmd_simulate(const SimulateOptions& o);
int cmd_boxcox(const BoxcoxOptions& o);

}  // namespace ellip::cli
