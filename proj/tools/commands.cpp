#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <vector>

#include "ellip/csv.hpp"
#include "ellip/error.hpp"
#include "ellip/nulldist.hpp"
#include "ellip/simharness.hpp"

namespace ellip::cli {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxReportedEigenvalues = 200;

int usage(const std::string& message) {
  std::cerr << "usage error: " << message << '\n';
  return kUsage;
}

int data_error(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  return kDataError;
}

bool write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  return static_cast<bool>(out);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream ss(s);
  while (std::getline(ss, part, sep)) {
    const auto a = part.find_first_not_of(" \t");
    const auto b = part.find_last_not_of(" \t");
    parts.push_back(a == std::string::npos ? std::string{} : part.substr(a, b - a + 1));
  }
  return parts;
}

struct GridCell {
  long n;
  long d;
  ScenarioKind kind;
  int df;
};

// "n=500;d=3,5;kind=null,alt;df=2,4" -> cartesian product; df only applies to alt.
std::vector<GridCell> parse_grid(const std::string& spec, std::string& error) {
  std::map<std::string, std::vector<std::string>> fields;
  for (const auto& clause : split(spec, ';')) {
    if (clause.empty()) continue;
    const auto eq = clause.find('=');
    if (eq == std::string::npos) {
      error = "grid clause '" + clause + "' is not key=values";
      return {};
    }
    const std::string key = clause.substr(0, eq);
    if (key != "n" && key != "d" && key != "kind" && key != "df") {
      error = "unknown grid key '" + key + "'";
      return {};
    }
    for (const auto& v : split(clause.substr(eq + 1), ',')) {
      if (!v.empty()) fields[key].push_back(v);
    }
  }
  if (fields["n"].empty() || fields["d"].empty()) {
    error = "grid must list at least one n and one d";
    return {};
  }
  if (fields["kind"].empty()) fields["kind"] = {"null"};
  if (fields["df"].empty()) fields["df"] = {"2"};

  auto to_long = [&](const std::string& v, long& out) {
    try {
      std::size_t pos = 0;
      out = std::stol(v, &pos);
      return pos == v.size() && out > 0;
    } catch (const std::exception&) {
      return false;
    }
  };
  std::vector<GridCell> cells;
  for (const auto& ns : fields["n"]) {
    for (const auto& ds : fields["d"]) {
      long n = 0, d = 0;
      if (!to_long(ns, n) || !to_long(ds, d)) {
        error = "grid values for n and d must be positive integers";
        return {};
      }
      for (const auto& ks : fields["kind"]) {
        if (ks == "null") {
          cells.push_back({n, d, ScenarioKind::NullGaussian, 0});
        } else if (ks == "alt") {
          for (const auto& dfs : fields["df"]) {
            long df = 0;
            if (!to_long(dfs, df)) {
              error = "grid df values must be positive integers";
              return {};
            }
            cells.push_back({n, d, ScenarioKind::AltChisq, static_cast<int>(df)});
          }
        } else {
          error = "grid kind must be null or alt, got '" + ks + "'";
          return {};
        }
      }
    }
  }
  return cells;
}

}  // namespace

int cmd_test(const TestOptions& o) {
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) return usage("--alpha must lie in (0, 1)");
  const auto family = parse_kernel_family(o.kernel);
  if (!family) return usage("unknown kernel '" + o.kernel + "'");

  TestResult r;
  try {
    const CsvTable table = read_csv(o.input);
    const SampleMatrix x(table.values);
    TestConfig config;
    config.kernel = *family;
    config.gamma_u = o.gamma_u;
    config.gamma_theta = o.gamma_theta;
    config.ridge = o.ridge;
    r = run_test(x, config);
  } catch (const Error& e) {
    return data_error(std::string(o.input) + ": " + e.what());
  }

  const auto& lambdas = r.eigenvalues.lambdas();
  const std::size_t keep =
      std::min({lambdas.size(), static_cast<std::size_t>(r.n), kMaxReportedEigenvalues});
  json report = {
      {"statistic", r.statistic},
      {"p_value", r.p_value},
      {"n", r.n},
      {"d", r.d},
      {"gamma_u", r.gamma_u},
      {"gamma_theta", r.gamma_theta},
      {"ridge", r.ridge},
      {"kernel", std::string(to_string(r.kernel))},
      {"eigenvalues", std::vector<double>(lambdas.begin(), lambdas.begin() + static_cast<long>(keep))},
      {"reject_at_alpha", r.p_value < o.alpha},
  };
  if (!write_json(o.output, report)) return data_error("cannot write '" + o.output + "'");
  std::printf("T_n = %.4f  p-value = %.4f  %s at alpha = %g\n", r.statistic, r.p_value,
              r.p_value < o.alpha ? "reject" : "do not reject", o.alpha);
  return kOk;
}

int cmd_gen(const GenOptions& o) {
  if (o.d < 2 || o.n <= o.d) return usage("gen needs n > d >= 2");
  if (o.kind == "alt" && o.df < 1) return usage("--df must be >= 1");
  Rng rng(o.seed);
  Eigen::MatrixXd x;
  try {
    x = o.kind == "null" ? gen_null_sample(o.n, o.d, rng).data()
                         : gen_alt_sample(o.n, o.d, o.df, rng).data();
  } catch (const Error& e) {
    return usage(e.what());
  }
  std::vector<std::string> header;
  for (long k = 1; k <= o.d; ++k) header.push_back("c" + std::to_string(k));
  try {
    write_csv(o.output, x, header);
  } catch (const Error& e) {
    return data_error(e.what());
  }
  return kOk;
}

int cmd_simulate(const SimulateOptions& o) {
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) return usage("--alpha must lie in (0, 1)");
  std::string error;
  const auto cells = parse_grid(o.grid, error);
  if (cells.empty()) return usage(error.empty() ? "empty grid" : error);
  for (const auto& c : cells) {
    if (c.d < 2 || c.n <= c.d) return usage("every grid cell needs n > d >= 2");
  }
  std::error_code ec;
  std::filesystem::create_directories(o.output_dir, ec);
  if (ec) return data_error("cannot create '" + o.output_dir + "': " + ec.message());

  const std::string csv_path = (std::filesystem::path(o.output_dir) / "pvalues.csv").string();
  std::ofstream pvalues(csv_path);
  if (!pvalues) return data_error("cannot write '" + csv_path + "'");
  pvalues << "n,d,kind,df,replicate,p_value\n";

  json summary = {{"alpha", o.alpha}, {"reps", o.reps}, {"seed", o.seed}, {"cells", json::array()}};
  bool all_ok = true;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const auto& c = cells[ci];
    Scenario scenario{c.kind, c.df, c.n, c.d, replicate_seed(o.seed, 0x5eed0000ULL + ci)};
    const ExperimentReport rep = run_experiment(scenario, o.reps, o.alpha, {}, o.threads);
    const char* kind = c.kind == ScenarioKind::NullGaussian ? "null" : "alt";
    for (std::size_t i = 0; i < rep.p_values.size(); ++i) {
      pvalues << c.n << ',' << c.d << ',' << kind << ',' << c.df << ',' << rep.replicates[i] << ','
              << format_double(rep.p_values[i]) << '\n';
    }
    json failures = json::array();
    for (const auto& f : rep.failures) failures.push_back({{"replicate", f.replicate}, {"message", f.message}});
    const double succeeded = static_cast<double>(rep.p_values.size());
    summary["cells"].push_back({
        {"n", c.n},
        {"d", c.d},
        {"kind", kind},
        {"df", c.df},
        {"reps", rep.reps},
        {"succeeded", rep.p_values.size()},
        {"failed", rep.failures.size()},
        {"rejection_rate", rep.p_values.empty() ? json(nullptr) : json(rep.rejection_rate)},
        {"failures", failures},
    });
    const bool ok = succeeded >= 0.9 * static_cast<double>(rep.reps);
    all_ok = all_ok && ok;
    std::printf("n=%ld d=%ld %s df=%d: rejection rate %.4f over %zu replicates%s\n", c.n, c.d, kind,
                c.df, rep.rejection_rate, rep.p_values.size(),
                rep.failures.empty() ? "" : (" (" + std::to_string(rep.failures.size()) + " failed)").c_str());
  }
  if (!pvalues) return data_error("write to '" + csv_path + "' failed");
  const std::string summary_path = (std::filesystem::path(o.output_dir) / "summary.json").string();
  if (!write_json(summary_path, summary)) return data_error("cannot write '" + summary_path + "'");
  return all_ok ? kOk : data_error("fewer than 90% of replicates succeeded in some cell");
}

int cmd_boxcox(const BoxcoxOptions& o) {
  CsvTable table;
  try {
    table = read_csv(o.input);
  } catch (const Error& e) {
    return data_error(o.input + ": " + e.what());
  }
  Eigen::MatrixXd out(table.values.rows(), table.values.cols());
  std::vector<double> lambdas;
  for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
    try {
      const double lambda = boxcox_fit(table.values.col(c));
      out.col(c) = boxcox_apply(table.values.col(c), lambda);
      lambdas.push_back(lambda);
    } catch (const Error& e) {
      return data_error(o.input + ": column " + std::to_string(c + 1) + ": " + e.what());
    }
  }
  try {
    write_csv(o.output, out, table.header);
  } catch (const Error& e) {
    return data_error(e.what());
  }
  json j = {{"lambdas", lambdas}};
  if (!table.header.empty()) j["columns"] = table.header;
  if (!o.lambdas.empty() && !write_json(o.lambdas, j)) return data_error("cannot write '" + o.lambdas + "'");
  std::cout << j.dump() << '\n';
  return kOk;
}

}  // namespace ellip::cli
