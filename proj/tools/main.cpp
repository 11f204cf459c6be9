// sitnikov: command-line front end for the circular and elliptic Sitnikov library.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sitnikov/circular.hpp"
#include "sitnikov/elliptic.hpp"
#include "sitnikov/hill.hpp"
#include "sitnikov/parallel.hpp"
#include "sitnikov/reference.hpp"
#include "sitnikov/slope.hpp"

using namespace sitnikov;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

/// Bad command-line input detected before any computation.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<std::monostate, int, double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(int v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
  } visitor;
  return std::visit(visitor, c);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
    os << "\r\n";
  }
}

void write_json(std::ostream& os, const Table& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) {
              obj[t.columns[i]] = nullptr;
            } else if constexpr (std::is_same_v<V, double>) {
              // JSON has no representation for non-finite numbers.
              if (std::isfinite(v))
                obj[t.columns[i]] = v;
              else
                obj[t.columns[i]] = format_double(v);
            } else {
              obj[t.columns[i]] = v;
            }
          },
          row[i]);
    }
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << "\n";
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  if (text.empty()) throw UsageError(flag + " needs at least one value");
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const char* begin = item.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    while (*end == ' ') ++end;
    if (item.empty() || end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v))
      throw UsageError(flag + ": '" + item + "' is not a finite number");
    out.push_back(v);
  }
  if (!text.empty() && text.back() == ',') throw UsageError(flag + ": trailing comma");
  return out;
}

struct RunConfig {
  ode::IntegratorConfig tolerances;
  std::string format = "csv";
  std::string out;
  int m = 0, p = 0, n_max = 10;
  std::string parity = "odd";
  std::string e_values, h_values, T_values, matrix;
};

void append_tolerances(Table& t, const ode::IntegratorConfig& cfg) {
  t.columns.emplace_back("abs_tol");
  t.columns.emplace_back("rel_tol");
  for (auto& row : t.rows) {
    row.emplace_back(cfg.abs_tol);
    row.emplace_back(cfg.rel_tol);
  }
}

circular::FrequencyPair checked_pair(const RunConfig& rc) {
  const circular::FrequencyPair mp{rc.m, rc.p};
  try {
    mp.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return mp;
}

slope::Parity checked_parity(const RunConfig& rc) {
  try {
    return slope::parse_parity(rc.parity);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

void check_n_max(int n_max) {
  if (n_max < 1) throw UsageError("--n-max must be >= 1");
}

Table cmd_scan(const RunConfig& rc) {
  check_n_max(rc.n_max);
  Table t{{"n", "eta", "h", "A_n", "A_n_loose", "certificate", "certified", "positive"}, {}};
  for (const auto& r : slope::conjecture_scan(rc.n_max, rc.tolerances, worker_count()))
    t.rows.push_back({r.n, r.eta, r.h, r.A_n, r.A_n_loose, r.certificate, r.certified, r.positive});
  return t;
}

Table cmd_table1(const RunConfig& rc) {
  check_n_max(rc.n_max);
  Table t{{"n", "eta", "h", "A_n", "ref_eta", "ref_h", "ref_A", "dev_eta", "dev_h", "dev_A", "within_tolerance"},
          {}};
  for (const auto& r : slope::conjecture_scan(rc.n_max, rc.tolerances, worker_count())) {
    std::vector<Cell> row{r.n, r.eta, r.h, r.A_n};
    if (const auto ref = reference::table1_row(r.n)) {
      const double de = r.eta - ref->eta, dh = r.h - ref->h, dA = r.A_n - ref->A;
      const double tol = reference::kTable1Tolerance;
      row.insert(row.end(), {ref->eta, ref->h, ref->A, de, dh, dA,
                             std::abs(de) <= tol && std::abs(dh) <= tol && std::abs(dA) <= tol});
    } else {
      row.resize(t.columns.size());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_slope(const RunConfig& rc) {
  const auto mp = checked_pair(rc);
  const auto parity = checked_parity(rc);
  const auto r = slope::slope(mp, parity, rc.tolerances);
  Table t{{"m", "p", "parity", "h", "eta", "xi", "Tprime", "integral_Gcos", "integral_Fte_phidot", "tau_prime",
           "tau_prime_raw", "A_n", "verdict"},
          {}};
  t.rows.push_back({r.mp.m, r.mp.p, std::string(slope::to_string(r.parity)), r.h, r.eta, r.xi, r.Tprime,
                    r.integral_Gcos, r.integral_Fte_phidot, r.tau_prime, r.tau_prime_raw,
                    r.A_n ? Cell(*r.A_n) : Cell(), std::string(hill::to_string(r.verdict))});
  return t;
}

struct ContinueResult {
  Table table;
  std::optional<std::string> failure;
};

ContinueResult cmd_continue(const RunConfig& rc) {
  const auto mp = checked_pair(rc);
  const auto parity = checked_parity(rc);
  const auto es = parse_list(rc.e_values, "--e");
  if (es.front() != 0.0) throw UsageError("--e must start at 0");
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (!(es[i] >= 0.0 && es[i] < 1.0)) throw UsageError("--e values must lie in [0, 1)");
    if (i > 0 && !(es[i] > es[i - 1])) throw UsageError("--e values must be strictly ascending");
  }
  const auto fam = elliptic::trace_along_family(mp, parity, es, rc.tolerances);
  ContinueResult out;
  out.table.columns = {"e", "m", "p", "parity", "shoot_param", "residual", "newton_iterations", "a", "b", "c", "d",
                       "tau", "class"};
  for (const auto& pt : fam.points) {
    out.table.rows.push_back({pt.e, pt.mp.m, pt.mp.p, std::string(slope::to_string(pt.parity)), pt.shoot_param,
                              pt.residual, pt.newton_iterations, pt.monodromy.a(), pt.monodromy.b(),
                              pt.monodromy.c(), pt.monodromy.d(), pt.tau, std::string(hill::to_string(pt.cls))});
  }
  if (fam.failed_at)
    out.failure = "continuation stopped at e = " + format_double(*fam.failed_at) + ": " + fam.failure;
  return out;
}

Table cmd_period(const RunConfig& rc) {
  const bool by_h = !rc.h_values.empty();
  if (by_h == !rc.T_values.empty()) throw UsageError("give exactly one of --h or --T");
  const auto values = parse_list(by_h ? rc.h_values : rc.T_values, by_h ? "--h" : "--T");
  for (const double v : values) {
    if (by_h && !(v > -2.0 && v < 0.0)) throw UsageError("--h values must lie in (-2, 0)");
    if (!by_h && !(v > circular::kMinPeriod)) throw UsageError("--T values must exceed 2 pi / sqrt(8)");
  }
  const auto rows = parallel_map(
      values.size(),
      [&](std::size_t i) {
        const double h = by_h ? values[i] : circular::solve_energy_for_period(values[i], rc.tolerances);
        return std::vector<Cell>{h, circular::period(h, rc.tolerances),
                                 circular::period_derivative(h, rc.tolerances)};
      },
      worker_count());
  return {{"h", "T", "Tprime"}, rows};
}

Table cmd_classify(const RunConfig& rc) {
  const auto v = parse_list(rc.matrix, "--matrix");
  if (v.size() != 4) throw UsageError("--matrix takes four entries a,b,c,d");
  Eigen::Matrix2d m;
  m << v[0], v[1], v[2], v[3];
  const hill::Monodromy2x2 mono(m, 1.0);
  const auto cls = hill::classify(mono);
  return {{"a", "b", "c", "d", "trace", "det", "class"},
          {{v[0], v[1], v[2], v[3], mono.trace(), mono.det(), std::string(hill::to_string(cls))}}};
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig rc;
  CLI::App app{"Periodic orbits and linear stability in the Sitnikov problem"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--abs-tol", rc.tolerances.abs_tol, "integrator absolute tolerance")->check(CLI::PositiveNumber);
  app.add_option("--rel-tol", rc.tolerances.rel_tol, "integrator relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", rc.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", rc.out, "output file (default stdout)");

  const auto add_pair = [&](CLI::App* sub) {
    sub->add_option("--m", rc.m, "frequency m")->required();
    sub->add_option("--p", rc.p, "frequency p")->required();
    sub->add_option("--parity", rc.parity, "odd or even")->check(CLI::IsMember({"odd", "even"}));
  };
  auto* table1 = app.add_subcommand("table1", "eta_n, h_n, A_n against the embedded reference table");
  table1->add_option("--n-max", rc.n_max, "largest n");
  auto* scan = app.add_subcommand("scan", "A_n for n = 1..n_max with tolerance certificates");
  scan->add_option("--n-max", rc.n_max, "largest n");
  auto* slope_cmd = app.add_subcommand("slope", "trace slope at e = 0 of the (m, p) family");
  add_pair(slope_cmd);
  auto* cont = app.add_subcommand("continue", "continue the (m, p) family in e");
  add_pair(cont);
  cont->add_option("--e", rc.e_values, "ascending comma list starting at 0")->required();
  auto* period = app.add_subcommand("period", "period function T(h) and T'(h)");
  period->set_help_flag("--help", "print this help message and exit");
  period->add_option("--h", rc.h_values, "comma list of energies");
  period->add_option("--T", rc.T_values, "comma list of target periods");
  auto* classify = app.add_subcommand("classify", "stability class of a 2x2 monodromy matrix");
  classify->add_option("--matrix", rc.matrix, "entries a,b,c,d")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    rc.tolerances.validate();
    std::ofstream file;
    if (!rc.out.empty()) {
      file.open(rc.out, std::ios::binary);
      if (!file) throw UsageError("cannot open " + rc.out);
    }
    Table table;
    std::optional<std::string> failure;
    if (table1->parsed()) {
      table = cmd_table1(rc);
    } else if (scan->parsed()) {
      table = cmd_scan(rc);
    } else if (slope_cmd->parsed()) {
      table = cmd_slope(rc);
    } else if (cont->parsed()) {
      auto r = cmd_continue(rc);
      table = std::move(r.table);
      failure = std::move(r.failure);
    } else if (period->parsed()) {
      table = cmd_period(rc);
    } else {
      table = cmd_classify(rc);
    }
    append_tolerances(table, rc.tolerances);
    std::ostream& os = rc.out.empty() ? std::cout : file;
    if (rc.format == "json")
      write_json(os, table);
    else
      write_csv(os, table);
    os.flush();
    if (failure) {
      std::cerr << "error: " << *failure << "\n";
      return kExitNumerical;
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
