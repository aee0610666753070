// jetsym: command-line front end.
//
//   jetsym models
//   jetsym analyze --model pp_wave_lorentz --n 5 [--kinds projective,affine]
//   jetsym analyze metric.json --point 1/2,3 --seed 4
//   jetsym verify --model kruckovic1 --param c=0
//   jetsym gap-table --algebra projective --n-max 9 --table
//
// Exit codes: 0 success, 1 bad input or a system that does not close, 2 invariant
// violation or failed verification.

#include "jetsym/app.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace jetsym;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Rational to_rational(const std::string& s) {
  try {
    Rational q(s);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw InputError("'" + s + "' is not a rational number");
  }
}

struct Common {
  std::string model;
  int n = 0;
  std::vector<std::string> params;
  int max_order = 6;
  unsigned precision = 256;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--model", c.model, "catalogue model name");
  cmd->add_option("--n", c.n, "dimension (0: the model's default)");
  cmd->add_option("--param", c.params, "model parameter as name=value")->take_all();
  cmd->add_option("--max-order", c.max_order, "prolongation steps beyond the system order")->check(CLI::PositiveNumber);
  cmd->add_option("--precision", c.precision, "bits for floating evaluations");
  cmd->add_option("--seed", c.seed, "seed for point sampling");
}

std::map<std::string, Rational> parse_params(const std::vector<std::string>& ps) {
  std::map<std::string, Rational> out;
  for (const auto& p : ps) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--param expects name=value, got '" + p + "'");
    out[p.substr(0, eq)] = to_rational(p.substr(eq + 1));
  }
  return out;
}

// "catalogue:NAME" as a source selects a model.
void resolve_source(std::string& file, Common& c) {
  const std::string prefix = "catalogue:";
  if (file.rfind(prefix, 0) == 0) {
    if (!c.model.empty()) throw InputError("two sources given");
    c.model = file.substr(prefix.size());
    file.clear();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry algebras of metrics and connections by jet prolongation"};
  app.require_subcommand(1);

  auto* models = app.add_subcommand("models", "list the catalogue");

  Common an;
  std::string an_file, kinds;
  std::vector<std::string> points;
  bool an_json = true;
  auto* analyze = app.add_subcommand("analyze", "symmetry dimensions of a model or an input file");
  analyze->add_option("source", an_file, "input JSON file or catalogue:NAME");
  add_common(analyze, an);
  analyze->add_option("--kinds", kinds, "comma list of killing,homothety,conformal,affine,projective,mobility");
  analyze->add_option("--point", points, "evaluation point as comma-separated rationals")->take_all();
  analyze->add_flag("--json", an_json, "JSON output (the default)");

  Common ve;
  bool ve_json = false;
  auto* verify = app.add_subcommand("verify", "check a catalogue model against its recorded expectations");
  add_common(verify, ve);
  verify->add_flag("--json", ve_json, "JSON output");

  std::string algebra = "projective";
  int n_max = 9;
  bool table = false, check = false;
  Common gt;
  auto* gap = app.add_subcommand("gap-table", "dimension gaps between maximal and submaximal structures");
  gap->add_option("--algebra", algebra)->check(CLI::IsMember({"projective", "affine"}));
  gap->add_option("--n-max", n_max)->check(CLI::Range(2, 1000));
  auto* table_flag = gap->add_flag("--table", table, "LaTeX table instead of JSON");
  gap->add_flag("--json", "JSON output (the default)")->excludes(table_flag);
  gap->add_flag("--check", check, "recompute the metric entries for n <= 5 with the jet counter");
  gap->add_option("--seed", gt.seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*models) {
      std::cout << models_json().dump(2) << "\n";
      return 0;
    }
    if (*analyze) {
      resolve_source(an_file, an);
      AnalysisRequest req;
      if (!an_file.empty()) req.file = an_file;
      if (!an.model.empty()) req.model = an.model;
      req.n = an.n;
      req.params = parse_params(an.params);
      req.max_order = an.max_order;
      req.precision_bits = an.precision;
      req.seed = an.seed;
      for (const auto& p : points) {
        std::vector<Rational> pt;
        for (const auto& s : split(p, ',')) pt.push_back(to_rational(s));
        req.points.push_back(std::move(pt));
      }
      if (!kinds.empty())
        for (const auto& k : split(kinds, ',')) {
          const auto kind = system_kind_from_string(k);
          if (!kind) throw InputError("unknown kind '" + k + "'");
          req.kinds.push_back(*kind);
        }
      std::cout << run_analysis(req).dump(2) << "\n";
      return 0;
    }
    if (*verify) {
      if (ve.model.empty()) throw InputError("verify needs --model");
      JetOptions o;
      o.max_order = ve.max_order;
      o.precision_bits = ve.precision;
      o.seed = ve.seed;
      const VerificationReport r = verify_model(ve.model, parse_params(ve.params), ve.n, o);
      if (ve_json) {
        std::cout << verification_json(r).dump(2) << "\n";
      } else {
        std::cout << r.descriptor.info.name << " n=" << r.descriptor.n << "\n";
        for (const auto& i : r.items) std::cout << (i.ok ? "  ok    " : "  FAIL  ") << i.item << ": " << i.detail << "\n";
        std::cout << (r.ok() ? "verified" : "verification failed") << "\n";
      }
      return r.ok() ? 0 : 2;
    }
    if (*gap) {
      const GapAlgebra a = algebra == "affine" ? GapAlgebra::affine : GapAlgebra::projective;
      JetOptions o;
      o.seed = gt.seed;
      const auto rows = gap_table(n_max, a, check, o);
      if (table)
        std::cout << format_gap_table(rows, a);
      else
        std::cout << gap_table_json(rows, a).dump(2) << "\n";
      for (const auto& r : rows)
        if (!r.consistent) {
          std::cerr << "jet counter disagrees with the formula at n = " << r.n << "\n";
          return 2;
        }
      return 0;
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
