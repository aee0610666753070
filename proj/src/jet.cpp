#include "jetsym/jet.hpp"

#include "series.hpp"

#include <algorithm>
#include <future>
#include <random>
#include <unordered_map>

namespace jetsym {

namespace {

using detail::BadReduction;
using detail::from_rational;
using detail::MultiIndexTable;
using detail::SeriesEvaluator;
using detail::TranscendentalModel;
using detail::Zp;

constexpr std::uint64_t kPrimes[] = {2147483647ULL, 2147483629ULL};

int max_weight(const LinearPdeSystem& sys) {
  int w = 0;
  for (const auto& u : sys.unknowns) w = std::max(w, u.weight);
  return w;
}

bool system_has_characters(const LinearPdeSystem& sys) {
  for (const auto& e : sys.equations)
    for (const auto& t : e.terms)
      if (detail::has_characters(t.coeff.num()) || detail::has_characters(t.coeff.den_expanded())) return true;
  return false;
}

// Fast multi-index addition: ids of alpha + gamma through a dense key table.
class IndexAdder {
 public:
  explicit IndexAdder(const MultiIndexTable& tab) : tab_(tab), base_(tab.degree() + 1) {
    std::size_t size = 1;
    for (std::size_t k = 0; k < tab.vars(); ++k) {
      size *= base_;
      if (size > 30'000'000) throw JetError("too many variables for the jet tables");
    }
    key_to_id_.assign(size, -1);
    keys_.resize(tab.size());
    for (std::size_t id = 0; id < tab.size(); ++id) {
      keys_[id] = key(tab.at(id));
      key_to_id_[keys_[id]] = static_cast<long>(id);
    }
  }

  std::size_t key(const std::vector<int>& alpha) const {
    std::size_t k = 0;
    for (std::size_t v = alpha.size(); v-- > 0;) k = k * base_ + static_cast<std::size_t>(alpha[v]);
    return k;
  }

  /// id of alpha + gamma, or -1 when the sum exceeds the table degree.
  long sum(std::size_t alpha, std::size_t gamma) const {
    if (tab_.order(alpha) + tab_.order(gamma) > tab_.degree()) return -1;
    return key_to_id_[keys_[alpha] + keys_[gamma]];
  }

 private:
  const MultiIndexTable& tab_;
  std::size_t base_;
  std::vector<std::size_t> keys_;
  std::vector<long> key_to_id_;
};

long binomial_small(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct CompiledTerm {
  std::size_t coeff;    // index into the coefficient table
  std::size_t unknown;
  std::size_t alpha;    // multi-index id
};

struct CompiledEquation {
  int level = 0;
  std::vector<CompiledTerm> terms;
};

// System with deduplicated coefficients and multi-index ids.
struct Compiled {
  std::vector<RatExpr> coeffs;
  std::vector<CompiledEquation> equations;
  std::vector<int> weights;
  int order = 1;
  std::size_t n = 0;
};

Compiled compile(const LinearPdeSystem& sys, const MultiIndexTable& tab) {
  Compiled c;
  c.n = sys.dim();
  c.order = sys.order;
  for (const auto& u : sys.unknowns) c.weights.push_back(u.weight);
  std::map<std::string, std::size_t> seen;
  for (const auto& e : sys.equations) {
    CompiledEquation ce;
    ce.level = equation_level(sys, e);
    for (const auto& t : e.terms) {
      const std::string key = to_string(t.coeff, sys.chart.coords);
      auto [it, inserted] = seen.emplace(key, c.coeffs.size());
      if (inserted) c.coeffs.push_back(t.coeff);
      const long a = tab.id_of(t.alpha);
      if (a < 0) throw JetError("equation order exceeds the jet table");
      ce.terms.push_back({it->second, t.unknown, static_cast<std::size_t>(a)});
    }
    c.equations.push_back(std::move(ce));
  }
  return c;
}

/// Taylor data of every coefficient: dcoef[c][delta] = d^delta c (p).
template <class F>
std::vector<std::vector<F>> coefficient_derivatives(const Compiled& comp, const MultiIndexTable& tab,
                                                    const std::vector<Rational>& point,
                                                    const TranscendentalModel<F>& model) {
  SeriesEvaluator<F> ev(tab, point, model);
  std::vector<F> fact(tab.size());
  for (std::size_t d = 0; d < tab.size(); ++d) {
    Rational f = 1;
    for (int e : tab.at(d))
      for (int i = 2; i <= e; ++i) f *= i;
    fact[d] = from_rational<F>(f);
  }
  std::map<std::string, std::vector<F>> den_cache;
  std::vector<std::vector<F>> out;
  out.reserve(comp.coeffs.size());
  for (const auto& c : comp.coeffs) {
    std::vector<F> s = ev.series(c.num());
    if (!c.has_trivial_den()) {
      const Expression den = c.den_expanded();
      std::vector<std::string> names;
      for (std::size_t i = 0; i < comp.n; ++i) names.push_back("x" + std::to_string(i));
      const std::string key = to_string(den, names);
      auto it = den_cache.find(key);
      if (it == den_cache.end()) it = den_cache.emplace(key, ev.reciprocal(ev.series(den))).first;
      s = ev.multiply(s, it->second);
    }
    for (std::size_t d = 0; d < tab.size(); ++d) s[d] = s[d] * fact[d];
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

namespace {

struct LevelStats {
  int level = 0;
  std::size_t top_jets = 0;
  std::size_t free = 0;
  std::size_t constraints = 0;  // rank of the new conditions on the old parameters
  std::size_t params = 0;       // parameters after this level
  long projected = -1;          // dimension of the projection to jets of level <= order + 1
};

// Incremental prolongation: after processing level L, every jet of level <= L is a
// linear function of `s` parameters, and those parameters are free for the system
// prolonged so that all its equations have level <= L.
template <class F>
class Prolongation {
 public:
  Prolongation(const Compiled& comp, const MultiIndexTable& tab, const IndexAdder& add,
               std::vector<std::vector<F>> dcoef)
      : comp_(comp), tab_(tab), add_(add), dcoef_(std::move(dcoef)) {
    jets_.resize(comp.weights.size() * tab.size());
    binoms_.resize(tab.size());
    for (std::size_t b = 0; b < tab.size(); ++b)
      for (const auto& [g, r] : tab.splits(b)) {
        long c = 1;
        for (std::size_t k = 0; k < tab.vars(); ++k) c *= binomial_small(tab.at(b)[k], tab.at(g)[k]);
        binoms_[b].push_back(from_rational<F>(Rational(c)));
      }
  }

  int jet_level(std::size_t u, std::size_t alpha) const { return tab_.order(alpha) + comp_.weights[u]; }

  LevelStats step() {
    const int level = ++level_;
    const F zero = from_rational<F>(0);
    const std::size_t T = tab_.size();

    // New jets at this level.
    std::vector<std::size_t> top;  // jet ids
    std::unordered_map<std::size_t, std::size_t> col;
    for (std::size_t u = 0; u < comp_.weights.size(); ++u) {
      const int d = level - comp_.weights[u];
      if (d < 0 || d > tab_.degree()) continue;
      const auto [lo, hi] = tab_.degree_range(d);
      for (std::size_t a = lo; a < hi; ++a) {
        col.emplace(u * T + a, top.size());
        top.push_back(u * T + a);
      }
    }
    const std::size_t ntop = top.size();

    std::vector<int> pivot_of(ntop, -1);
    std::vector<std::vector<std::pair<std::uint32_t, F>>> prow_top;
    std::vector<std::vector<F>> prow_dense;
    std::vector<std::vector<F>> constraints;
    std::vector<F> work(ntop, zero);
    std::vector<F> dense(s_, zero);

    for (const auto& eq : comp_.equations) {
      const int deg = level - eq.level;
      if (deg < 0) continue;
      if (deg > tab_.degree()) throw JetError("jet table too small");
      const auto [lo, hi] = tab_.degree_range(deg);
      for (std::size_t beta = lo; beta < hi; ++beta) {
        std::fill(work.begin(), work.end(), zero);
        std::fill(dense.begin(), dense.end(), zero);
        bool any_top = false;
        const auto& sp = tab_.splits(beta);
        for (const auto& t : eq.terms) {
          const auto& dc = dcoef_[t.coeff];
          for (std::size_t k = 0; k < sp.size(); ++k) {
            const auto [g, r] = sp[k];
            if (detail::is_zero(dc[r])) continue;
            const F c = binoms_[beta][k] * dc[r];
            const long a = add_.sum(t.alpha, g);
            if (a < 0) throw JetError("jet table too small");
            const std::size_t jet = t.unknown * T + static_cast<std::size_t>(a);
            if (jet_level(t.unknown, static_cast<std::size_t>(a)) == level) {
              work[col.at(jet)] += c;
              any_top = true;
            } else {
              const auto& b = jets_[jet];
              for (std::size_t i = 0; i < s_; ++i)
                if (!detail::is_zero(b[i])) dense[i] += c * b[i];
            }
          }
        }
        // Reduce against the pivots found so far.
        bool pivoted = false;
        if (any_top) {
          for (std::size_t c = 0; c < ntop; ++c) {
            if (detail::is_zero(work[c])) continue;
            if (pivot_of[c] >= 0) {
              const F f = work[c];
              work[c] = zero;
              const auto p = static_cast<std::size_t>(pivot_of[c]);
              for (const auto& [cc, v] : prow_top[p]) work[cc] -= f * v;
              for (std::size_t i = 0; i < s_; ++i)
                if (!detail::is_zero(prow_dense[p][i])) dense[i] -= f * prow_dense[p][i];
              continue;
            }
            const F inv = detail::inverse(work[c]);
            std::vector<std::pair<std::uint32_t, F>> entries;
            for (std::size_t cc = c + 1; cc < ntop; ++cc)
              if (!detail::is_zero(work[cc])) entries.emplace_back(static_cast<std::uint32_t>(cc), work[cc] * inv);
            for (auto& v : dense) v = v * inv;
            pivot_of[c] = static_cast<int>(prow_top.size());
            prow_top.push_back(std::move(entries));
            prow_dense.push_back(dense);
            pivoted = true;
            break;
          }
        }
        if (!pivoted && std::any_of(dense.begin(), dense.end(), [](const F& v) { return !detail::is_zero(v); }))
          constraints.push_back(dense);
      }
    }

    // Parameters surviving the constraints.
    std::vector<std::vector<F>> kernel;
    const bool restricted = !constraints.empty();
    if (restricted) kernel = detail::kernel_basis(constraints, s_);
    const std::size_t kept = restricted ? kernel.size() : s_;
    std::size_t nfree = 0;
    for (std::size_t c = 0; c < ntop; ++c) nfree += pivot_of[c] < 0;
    const std::size_t s_new = kept + nfree;

    auto convert = [&](const std::vector<F>& v) {
      std::vector<F> out(s_new, zero);
      if (!restricted) {
        std::copy(v.begin(), v.end(), out.begin());
      } else {
        for (std::size_t j = 0; j < kept; ++j) {
          F acc = zero;
          for (std::size_t i = 0; i < s_; ++i)
            if (!detail::is_zero(v[i]) && !detail::is_zero(kernel[j][i])) acc += v[i] * kernel[j][i];
          out[j] = acc;
        }
      }
      return out;
    };
    for (auto& b : jets_)
      if (!b.empty()) b = convert(b);

    std::size_t next_free = kept;
    for (std::size_t c = 0; c < ntop; ++c)
      if (pivot_of[c] < 0) {
        std::vector<F> e(s_new, zero);
        e[next_free++] = from_rational<F>(1);
        jets_[top[c]] = std::move(e);
      }
    for (std::size_t c = ntop; c-- > 0;) {
      if (pivot_of[c] < 0) continue;
      const auto p = static_cast<std::size_t>(pivot_of[c]);
      std::vector<F> v = convert(prow_dense[p]);
      for (const auto& [cc, a] : prow_top[p]) {
        const auto& w = jets_[top[cc]];
        for (std::size_t i = 0; i < s_new; ++i)
          if (!detail::is_zero(w[i])) v[i] += a * w[i];
      }
      for (auto& x : v) x = -x;
      jets_[top[c]] = std::move(v);
    }

    LevelStats st;
    st.level = level;
    st.top_jets = ntop;
    st.free = nfree;
    st.constraints = s_ - kept;
    s_ = s_new;
    st.params = s_;
    if (level >= comp_.order + 1) {
      std::vector<std::vector<F>> rows;
      for (std::size_t u = 0; u < comp_.weights.size(); ++u)
        for (std::size_t a = 0; a < T; ++a)
          if (jet_level(u, a) <= comp_.order + 1 && !jets_[u * T + a].empty()) rows.push_back(jets_[u * T + a]);
      st.projected = static_cast<long>(detail::rank_of(std::move(rows), s_));
    }
    return st;
  }

  std::size_t params() const { return s_; }
  const std::vector<F>& jet(std::size_t u, std::size_t alpha) const { return jets_[u * tab_.size() + alpha]; }

 private:
  const Compiled& comp_;
  const MultiIndexTable& tab_;
  const IndexAdder& add_;
  std::vector<std::vector<F>> dcoef_;
  std::vector<std::vector<F>> binoms_;
  std::vector<std::vector<F>> jets_;
  std::size_t s_ = 0;
  int level_ = -1;
};

}  // namespace

namespace {

template <class F>
PointRun run_at(const Compiled& comp, const MultiIndexTable& tab, const IndexAdder& add,
                const std::vector<Rational>& point, const TranscendentalModel<F>& model, int max_order) {
  PointRun run;
  run.point = point;
  if constexpr (std::is_same_v<F, Zp>) run.modulus = Zp::modulus();
  Prolongation<F> pr(comp, tab, add, coefficient_derivatives<F>(comp, tab, point, model));
  int quiet = 0;
  const int last = comp.order + max_order;
  for (int level = 0; level <= last; ++level) {
    const LevelStats st = pr.step();
    if (st.projected >= 0) run.d_sequence.push_back(st.projected);
    const bool settled = st.free == 0 && st.constraints == 0;
    quiet = settled ? quiet + 1 : 0;
    if (level >= comp.order + 1 && quiet >= 2) {
      run.dimension = static_cast<long>(st.params);
      run.closure_level = level;
      break;
    }
  }
  return run;
}

Rational draw_residue(std::mt19937_64& rng) {
  return Rational(static_cast<long>(2 + rng() % 2000000000ULL));
}

// One run modulo p; the transcendental residues come from `seed`.
PointRun run_modular(const Compiled& comp, const MultiIndexTable& tab, const IndexAdder& add,
                     const std::vector<Rational>& point, std::uint64_t p, std::uint64_t seed, int max_order) {
  Zp::modulus() = p;
  mpz_class N = 1, M = 1;
  for (const auto& c : comp.coeffs) {
    detail::collect_denominators(c.num(), point, N, M);
    if (!c.has_trivial_den()) detail::collect_denominators(c.den_expanded(), point, N, M);
  }
  if (!N.fits_slong_p() || !M.fits_slong_p()) throw BadReduction("transcendental denominators too large");
  std::mt19937_64 rng(seed);
  TranscendentalModel<Zp> model;
  model.exp_den = N.get_si();
  model.trig_den = M.get_si();
  model.tau = Zp::from(draw_residue(rng));
  const Zp t = Zp::from(draw_residue(rng));
  const Zp one(1), two(2);
  const Zp d = one + t * t;
  if (d.is_zero()) throw BadReduction("degenerate unit");
  const Zp di = d.inverse();
  model.unit = {(one - t * t) * di, two * t * di};
  return run_at<Zp>(comp, tab, add, point, model, max_order);
}

PointRun run_exact(const Compiled& comp, const MultiIndexTable& tab, const IndexAdder& add,
                   const std::vector<Rational>& point, int max_order) {
  return run_at<Rational>(comp, tab, add, point, TranscendentalModel<Rational>{}, max_order);
}

// Exact elimination over Q is affordable for small systems only.
bool prefer_exact(const LinearPdeSystem& sys) {
  return !system_has_characters(sys) && sys.dim() <= 3;
}

std::string jet_label(const LinearPdeSystem& sys, std::size_t u, const std::vector<int>& alpha) {
  std::string s = sys.unknowns[u].name + "[";
  for (std::size_t k = 0; k < alpha.size(); ++k) s += (k ? "," : "") + std::to_string(alpha[k]);
  return s + "]";
}

template <class F>
void fill_prolonged(const LinearPdeSystem& sys, const Compiled& comp, const MultiIndexTable& tab,
                    const IndexAdder& add, const std::vector<std::vector<F>>& dcoef, int top,
                    ProlongedMatrix& out, std::vector<std::vector<F>>& rows) {
  const std::size_t T = tab.size();
  std::unordered_map<std::size_t, std::size_t> col;
  for (std::size_t u = 0; u < comp.weights.size(); ++u)
    for (std::size_t a = 0; a < T; ++a)
      if (tab.order(a) + comp.weights[u] <= top) {
        col.emplace(u * T + a, out.columns.size());
        out.columns.push_back(jet_label(sys, u, tab.at(a)));
      }
  const F zero = from_rational<F>(0);
  for (const auto& eq : comp.equations)
    for (int deg = 0; eq.level + deg <= top; ++deg) {
      const auto [lo, hi] = tab.degree_range(deg);
      for (std::size_t beta = lo; beta < hi; ++beta) {
        std::vector<F> row(out.columns.size(), zero);
        const auto& sp = tab.splits(beta);
        for (const auto& t : eq.terms)
          for (const auto& [g, r] : sp) {
            long c = 1;
            for (std::size_t k = 0; k < tab.vars(); ++k) c *= binomial_small(tab.at(beta)[k], tab.at(g)[k]);
            const long a = add.sum(t.alpha, g);
            row[col.at(t.unknown * T + static_cast<std::size_t>(a))] +=
                from_rational<F>(Rational(c)) * dcoef[t.coeff][r];
          }
        rows.push_back(std::move(row));
      }
    }
}

}  // namespace

ProlongedMatrix prolong_to_order(const LinearPdeSystem& sys, int k, const std::vector<Rational>& point,
                                 std::uint64_t seed) {
  if (k < 0) throw JetError("negative prolongation order");
  if (point.size() != sys.dim()) throw JetError("point has the wrong dimension");
  const int top = sys.order + k;
  const MultiIndexTable tab(sys.dim(), top);
  const IndexAdder add(tab);
  const Compiled comp = compile(sys, tab);
  ProlongedMatrix out;
  if (!system_has_characters(sys)) {
    const auto dcoef = coefficient_derivatives<Rational>(comp, tab, point, {});
    std::vector<std::vector<Rational>> rows;
    fill_prolonged(sys, comp, tab, add, dcoef, top, out, rows);
    out.rank = detail::rank_of(rows, out.columns.size());
    out.rows = std::move(rows);
  } else {
    Zp::modulus() = kPrimes[0];
    mpz_class N = 1, M = 1;
    for (const auto& c : comp.coeffs) {
      detail::collect_denominators(c.num(), point, N, M);
      if (!c.has_trivial_den()) detail::collect_denominators(c.den_expanded(), point, N, M);
    }
    std::mt19937_64 rng(seed);
    TranscendentalModel<Zp> model;
    model.exp_den = N.get_si();
    model.trig_den = M.get_si();
    model.tau = Zp::from(draw_residue(rng));
    const Zp t = Zp::from(draw_residue(rng));
    const Zp di = (Zp(1) + t * t).inverse();
    model.unit = {(Zp(1) - t * t) * di, Zp(2) * t * di};
    const auto dcoef = coefficient_derivatives<Zp>(comp, tab, point, model);
    std::vector<std::vector<Zp>> rows;
    fill_prolonged(sys, comp, tab, add, dcoef, top, out, rows);
    out.rank = detail::rank_of(rows, out.columns.size());
    out.modulus = kPrimes[0];
    for (const auto& r : rows) {
      std::vector<Rational> q;
      q.reserve(r.size());
      for (const auto& v : r) q.emplace_back(static_cast<unsigned long>(v.value()));
      out.rows.push_back(std::move(q));
    }
  }
  out.nullity = out.columns.size() - out.rank;
  return out;
}

namespace {

struct PointOutcome {
  std::vector<PointRun> runs;
  long dimension = -1;
  bool primes_agree = true;
};

PointOutcome analyse_point(const LinearPdeSystem& sys, const Compiled& comp, const MultiIndexTable& tab,
                           const IndexAdder& add, const JetOptions& opts, std::size_t index, bool exact) {
  std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ULL + index + 1);
  const bool fixed = index < opts.fixed_points.size();
  constexpr int kAttempts = 8;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<Rational> point =
        fixed && attempt == 0 ? opts.fixed_points[index] : generic_point(sys.dim(), sys.nonvanishing, rng);
    if (point.size() != sys.dim()) throw JetError("fixed point has the wrong dimension");
    if (fixed && attempt == 0)
      for (const auto& f : sys.nonvanishing)
        if (!nonvanishing_at(f, point)) throw JetError("fixed point lies on the excluded locus");
    try {
      PointOutcome out;
      if (exact) {
        out.runs.push_back(run_exact(comp, tab, add, point, opts.max_order));
      } else {
        for (std::size_t i = 0; i < std::size(kPrimes); ++i)
          out.runs.push_back(run_modular(comp, tab, add, point, kPrimes[i], rng(), opts.max_order));
      }
      for (const auto& r : out.runs) {
        if (r.dimension < 0)
          throw JetError("no closure within " + std::to_string(opts.max_order) + " prolongations for " +
                         std::string(to_string(sys.kind)));
        if (out.dimension >= 0 && r.dimension != out.dimension) out.primes_agree = false;
        out.dimension = out.dimension < 0 ? r.dimension : std::min(out.dimension, r.dimension);
      }
      return out;
    } catch (const BadReduction&) {
      // the point or the residues were special for this prime; draw again
    }
  }
  throw JetError("no usable evaluation point");
}

}  // namespace

JetRankReport solution_dimension(const LinearPdeSystem& sys, const JetOptions& opts) {
  if (opts.points < 1) throw JetError("at least one point is required");
  if (opts.max_order < 1) throw JetError("max_order must be positive");
  const int top = sys.order + opts.max_order;
  const MultiIndexTable tab(sys.dim(), top);
  const IndexAdder add(tab);
  const Compiled comp = compile(sys, tab);
  const bool exact = prefer_exact(sys);

  const auto npoints = static_cast<std::size_t>(std::max<int>(opts.points, static_cast<int>(opts.fixed_points.size())));
  std::vector<PointOutcome> outcomes(npoints);
  if (opts.parallel && npoints > 1) {
    std::vector<std::future<PointOutcome>> jobs;
    for (std::size_t i = 0; i < npoints; ++i)
      jobs.push_back(std::async(std::launch::async, analyse_point, std::cref(sys), std::cref(comp), std::cref(tab),
                                std::cref(add), std::cref(opts), i, exact));
    for (std::size_t i = 0; i < npoints; ++i) outcomes[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < npoints; ++i) outcomes[i] = analyse_point(sys, comp, tab, add, opts, i, exact);
  }

  JetRankReport rep;
  rep.exact = exact;
  rep.precision_bits = opts.precision_bits;
  rep.confident = npoints >= 2;
  std::size_t best = 0;
  for (std::size_t i = 0; i < npoints; ++i) {
    const auto& o = outcomes[i];
    rep.confident = rep.confident && o.primes_agree;
    if (o.dimension < outcomes[best].dimension) best = i;
    rep.points.push_back(o.runs.front().point);
    for (const auto& r : o.runs) {
      rep.orders_used = std::max(rep.orders_used, r.closure_level - sys.order);
      rep.runs.push_back(r);
    }
  }
  rep.stabilized_dim = outcomes[best].dimension;
  for (const auto& r : outcomes[best].runs)
    if (r.dimension == rep.stabilized_dim) {
      rep.d_sequence = r.d_sequence;
      break;
    }
  return rep;
}

SymmetryReport symmetry_profile(const MetricField& g, const JetOptions& opts, const std::vector<SystemKind>& kinds) {
  const std::size_t n = g.dim();
  std::vector<SystemKind> todo = kinds;
  if (todo.empty()) {
    todo = {SystemKind::killing, SystemKind::homothety, SystemKind::affine, SystemKind::projective,
            SystemKind::mobility};
    if (n >= 3) todo.insert(todo.begin() + 2, SystemKind::conformal);
  }
  SymmetryReport rep;
  rep.flags = curvature_flags(g);
  rep.confident = true;
  for (auto k : todo) {
    if (k == SystemKind::conformal && n == 2) continue;  // infinite-dimensional
    JetRankReport r = solution_dimension(build_system(k, g), opts);
    const long d = r.stabilized_dim;
    rep.confident = rep.confident && r.confident;
    switch (k) {
      case SystemKind::killing: rep.dim_isometry = d; break;
      case SystemKind::homothety: rep.dim_homothety = d; break;
      case SystemKind::conformal: rep.dim_conformal = d; break;
      case SystemKind::affine: rep.dim_affine = d; break;
      case SystemKind::projective: rep.dim_projective = d; break;
      case SystemKind::mobility: rep.degree_of_mobility = d; break;
    }
    rep.details.emplace(k, std::move(r));
  }

  const long I = rep.dim_isometry, H = rep.dim_homothety, A = rep.dim_affine, P = rep.dim_projective,
             D = rep.degree_of_mobility;
  std::vector<std::string> broken;
  auto check = [&](bool known, bool ok, const char* what) {
    if (known && !ok) broken.emplace_back(what);
  };
  check(I >= 0 && H >= 0, I <= H && H <= I + 1, "I <= H <= I + 1");
  check(H >= 0 && rep.dim_conformal.has_value(), H <= rep.dim_conformal.value_or(0), "H <= C");
  check(H >= 0 && A >= 0, H <= A, "H <= A");
  check(A >= 0 && P >= 0, A <= P, "A <= P");
  rep.est1 = I >= 0 && D >= 0 && P >= 0 && P <= I + D;
  rep.est2 = H >= 0 && D >= 0 && P >= 0 && P <= H + D - 1;
  check(I >= 0 && D >= 0 && P >= 0, rep.est1, "P <= I + D");
  check(H >= 0 && D >= 0 && P >= 0, rep.est2, "P <= H + D - 1");
  if (!broken.empty()) {
    std::string msg = "symmetry dimensions violate";
    for (const auto& b : broken) msg += " [" + b + "]";
    throw InvariantViolation(msg);
  }
  return rep;
}

}  // namespace jetsym
