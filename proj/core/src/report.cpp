#include <fstream>
#include <json.hpp>

#include "mertens/errors.hpp"
#include "mertens/format.hpp"
#include "mertens/sweep.hpp"

namespace mertens::verify {

namespace {

std::string num(double v, int precision) {
  return precision <= 0 ? format_exact(v) : format_sig(v, precision);
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepReport& report, int precision) {
  out << "n,M,bound_name,params,value,ratio,satisfied\n";
  for (const auto& row : report.rows) {
    const auto& def = report.bounds[row.bound];
    out << row.n << ',' << row.m << ',' << def.name() << ',' << def.params_string() << ','
        << num(row.eval.value, precision) << ',' << num(row.eval.ratio.value_or(0.0), precision)
        << ',' << (row.eval.satisfied.value_or(false) ? "true" : "false") << '\n';
  }
}

void write_sweep_json(std::ostream& out, const SweepReport& report, int precision) {
  using nlohmann::ordered_json;
  // Rounded values go through the same formatter as the CSV, then back to a number.
  const auto number = [&](double v) { return precision <= 0 ? v : std::stod(num(v, precision)); };
  ordered_json doc;
  doc["limit"] = report.limit;
  doc["grid"] = report.grid.to_string();
  doc["grid_size"] = report.grid_size;
  doc["extremal"] = {{"ratio", number(report.extremal.ratio)},
                     {"n", report.extremal.n},
                     {"M", report.extremal.m}};
  ordered_json summaries = ordered_json::array();
  for (std::size_t b = 0; b < report.bounds.size(); ++b) {
    const auto& s = report.summaries[b];
    summaries.push_back({{"bound_name", report.bounds[b].name()},
                         {"params", report.bounds[b].params_string()},
                         {"evaluated", s.evaluated},
                         {"skipped", s.skipped},
                         {"violations", s.violations},
                         {"max_ratio", number(s.max_ratio)},
                         {"argmax_n", s.argmax_n},
                         {"note", s.note}});
  }
  doc["summaries"] = std::move(summaries);
  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"bound_name", report.bounds[v.bound].name()},
                          {"params", report.bounds[v.bound].params_string()},
                          {"n", v.n},
                          {"M", v.m},
                          {"value", number(v.value)}});
  }
  doc["violations"] = std::move(violations);
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    const auto& def = report.bounds[row.bound];
    rows.push_back({{"n", row.n},
                    {"M", row.m},
                    {"bound_name", def.name()},
                    {"params", def.params_string()},
                    {"value", number(row.eval.value)},
                    {"ratio", number(row.eval.ratio.value_or(0.0))},
                    {"satisfied", row.eval.satisfied.value_or(false)}});
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void write_summary_csv(std::ostream& out, const SweepReport& report, int precision) {
  out << "bound_name,params,evaluated,skipped,violations,max_ratio,argmax_n\n";
  for (std::size_t b = 0; b < report.bounds.size(); ++b) {
    const auto& s = report.summaries[b];
    out << report.bounds[b].name() << ',' << report.bounds[b].params_string() << ','
        << s.evaluated << ',' << s.skipped << ',' << s.violations << ','
        << num(s.max_ratio, precision) << ',' << s.argmax_n << '\n';
  }
}

void write_gnuplot(const std::filesystem::path& dir, const SweepReport& report, int precision) {
  std::filesystem::create_directories(dir);
  const auto open = [&](const std::string& name) {
    std::ofstream f(dir / name);
    if (!f) throw NotFoundError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("mertens.dat");
    f << "# n |M(n)|\n";
    std::uint64_t last = 0;
    for (const auto& row : report.rows) {
      if (row.n == last) continue;
      last = row.n;
      f << row.n << ' ' << (row.m < 0 ? -row.m : row.m) << '\n';
    }
  }
  for (std::size_t b = 0; b < report.bounds.size(); ++b) {
    auto f = open(std::string(report.bounds[b].name()) + ".dat");
    f << "# n value (" << report.bounds[b].params_string() << ")\n";
    for (const auto& row : report.rows) {
      if (row.bound == b) f << row.n << ' ' << num(row.eval.value, precision) << '\n';
    }
  }
}

}  // namespace mertens::verify
