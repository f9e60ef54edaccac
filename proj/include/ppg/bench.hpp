// SPDX-License-Identifier: Apache-2.0

#ifndef PPG_BENCH_HPP
#define PPG_BENCH_HPP

#include <iomanip>
#include <sstream>

#include "ppg/solvers.hpp"

namespace ppg {

// One table row in the layout of the benchmark CSV:
// degree,added,cycles,mvps,daxpys,dots,vops,stch,final_relres,time_ms
struct BenchRow {
  std::string degree_label = "1";
  int cycles = 0;
  std::int64_t mvps = 0, daxpys = 0, dots = 0;
  double stch = std::numeric_limits<double>::quiet_NaN();
  double final_relres = std::numeric_limits<double>::quiet_NaN();
  double time_ms = 0.0;

  static std::string csv_header() {
    return "degree,added,cycles,mvps,daxpys,dots,vops,stch,final_relres,"
           "time_ms";
  }

  std::string csv() const {
    const auto [d, k] = parse_degree_label(degree_label);
    std::ostringstream os;
    os << d << "," << k << "," << cycles << "," << mvps << "," << daxpys
       << "," << dots << "," << (daxpys + dots) << ",";
    os << std::setprecision(6) << std::scientific;
    if (std::isnan(stch))
      os << "nan";
    else
      os << stch;
    os << "," << final_relres << "," << std::fixed << std::setprecision(3)
       << time_ms;
    return os.str();
  }

  // "d" or "d+k" -> (d, k).  Composite labels "AxB" (double
  // preconditioning) report the product of base degrees and the summed
  // extra-root counts.
  static std::pair<int, int> parse_degree_label(const std::string& s) {
    auto one = [](const std::string& t) -> std::pair<int, int> {
      std::size_t used = 0;
      const int d = std::stoi(t, &used);
      if (used == t.size()) return {d, 0};
      if (t[used] != '+') throw std::invalid_argument(t);
      std::size_t used2 = 0;
      const int k = std::stoi(t.substr(used + 1), &used2);
      if (used + 1 + used2 != t.size()) throw std::invalid_argument(t);
      return {d, k};
    };
    try {
      const auto x = s.find('x');
      if (x == std::string::npos) return one(s);
      const auto [d1, k1] = one(s.substr(0, x));
      const auto [d2, k2] = one(s.substr(x + 1));
      return {d1 * d2, k1 + k2};
    } catch (const std::exception&) {
      throw std::invalid_argument("bad degree label: " + s);
    }
  }

  static BenchRow from_report(const SolveReport& rep) {
    BenchRow row;
    row.degree_label = rep.degree_label;
    row.cycles = rep.cycles;
    row.mvps = rep.ops.mvps;
    row.daxpys = rep.ops.daxpys;
    row.dots = rep.ops.dots;
    row.stch = rep.stch;
    row.final_relres = rep.final_relres;
    row.time_ms = rep.wall_ms;
    return row;
  }
};

// Generator spec of the form "kind:key=val,key=val", e.g.
// "diag_power:n=2000,p=2" or "biharmonic:nx=40,ny=40".
inline SparseMatrix parse_gen_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::istringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("bad generator parameter: " + item);
      kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
  }
  auto get = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw std::invalid_argument("generator " + kind +
                                  " needs parameter: " + key);
    return it->second;
  };
  if (kind == "diag_power")
    return gen_diag_power(static_cast<int>(get("n")), get("p"));
  if (kind == "bidiag_power")
    return gen_bidiag_power(static_cast<int>(get("n")), get("p"), get("s"));
  if (kind == "biharmonic")
    return gen_biharmonic(static_cast<int>(get("nx")),
                          static_cast<int>(get("ny")));
  throw std::invalid_argument("unknown generator kind: " + kind);
}

// Problem right-hand side: random Normal(0,1) normalized to one, matching
// the benchmark convention, unless a file was supplied.
inline Vec bench_rhs(int n, std::uint64_t seed) {
  OpCounter scratch;
  return random_unit_vector(n, seed + 0x9e3779b97f4a7c15ull, scratch);
}

}  // namespace ppg

#endif  // PPG_BENCH_HPP
