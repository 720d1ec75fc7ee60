#include "sparsepack/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sparsepack/sparsifier.hpp"

namespace sparsepack {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

}  // namespace

std::string marginal_name(const Marginal& m) {
  std::ostringstream os;
  os.precision(10);
  if (const auto* u = std::get_if<Uniform>(&m))
    os << "uniform[" << u->a << ";" << u->b << "]";
  else if (const auto* t = std::get_if<TruncNormal>(&m))
    os << "truncnorm[" << t->mu << ";" << t->sigma << ";" << t->lo << ";"
       << t->hi << "]";
  return os.str();
}

Marginal marginal_from_name(const std::string& name) {
  const auto open = name.find('[');
  const auto close = name.rfind(']');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("bad marginal name: " + name);
  std::vector<double> args;
  std::stringstream body(name.substr(open + 1, close - open - 1));
  std::string tok;
  while (std::getline(body, tok, ';')) args.push_back(std::stod(tok));
  const std::string kind = name.substr(0, open);
  if (kind == "uniform" && args.size() == 2) return Uniform{args[0], args[1]};
  if (kind == "truncnorm" && args.size() == 4)
    return TruncNormal{args[0], args[1], args[2], args[3]};
  throw std::invalid_argument("bad marginal name: " + name);
}

std::string csv_header() {
  return "schema_version,instance_id,n,m,rho,redundancy_target,"
         "value_marginal,weight_marginal,seed,opt_full,t_full_s,opt_sparse,"
         "t_sparse_s,opt_full_cut,approx_ratio,speedup,etr,"
         "redundancy_realized,query_size,lp_degree_bound,status";
}

std::string csv_row(const ExperimentRecord& r) {
  std::ostringstream os;
  os << kCsvSchemaVersion << ',' << r.instance_id << ',' << r.params.n << ','
     << r.params.m << ',' << fmt(r.params.rho) << ','
     << fmt(r.params.redundancy_target) << ','
     << marginal_name(r.params.value_marginal) << ','
     << marginal_name(r.params.weight_marginal) << ',' << r.params.seed << ','
     << fmt(r.opt_full) << ',' << fmt(r.t_full_s) << ',' << fmt(r.opt_sparse)
     << ',' << fmt(r.t_sparse_s) << ',' << fmt(r.opt_full_cut) << ','
     << fmt(r.approx_ratio) << ',' << fmt(r.speedup) << ',' << fmt(r.etr)
     << ',' << fmt(r.redundancy_realized) << ',' << r.query_size << ','
     << fmt(r.lp_degree_bound) << ',' << r.status;
  return os.str();
}

ExperimentRecord record_from_csv(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) f.push_back(tok);
  if (f.size() != 21)
    throw std::invalid_argument("csv row has " + std::to_string(f.size()) +
                                " fields, expected 21");
  ExperimentRecord r;
  r.instance_id = f[1];
  r.params.n = std::stoi(f[2]);
  r.params.m = std::stoi(f[3]);
  r.params.rho = parse_double(f[4]);
  r.params.redundancy_target = parse_double(f[5]);
  r.params.value_marginal = marginal_from_name(f[6]);
  r.params.weight_marginal = marginal_from_name(f[7]);
  r.params.seed = std::stoull(f[8]);
  r.opt_full = parse_double(f[9]);
  r.t_full_s = parse_double(f[10]);
  r.opt_sparse = parse_double(f[11]);
  r.t_sparse_s = parse_double(f[12]);
  r.opt_full_cut = parse_double(f[13]);
  r.approx_ratio = parse_double(f[14]);
  r.speedup = parse_double(f[15]);
  r.etr = parse_double(f[16]);
  r.redundancy_realized = parse_double(f[17]);
  r.query_size = std::stol(f[18]);
  r.lp_degree_bound = parse_double(f[19]);
  r.status = f[20];
  return r;
}

std::vector<ExperimentRecord> read_csv(std::istream& in) {
  std::vector<ExperimentRecord> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("schema_version", 0) == 0) continue;
    }
    out.push_back(record_from_csv(line));
  }
  return out;
}

ExperimentRecord run_three(const GapInstance& inst, const GenParams& params,
                           const std::string& instance_id,
                           const Budget& full_budget) {
  ExperimentRecord r;
  r.instance_id = instance_id;
  r.params = params;

  double t0 = now_seconds();
  const SolveResult full = gap_exact(inst, full_budget);
  r.t_full_s = now_seconds() - t0;
  r.opt_full = full.value;
  if (full.status == SolveStatus::BudgetExceeded) r.status = "budget_exceeded";

  t0 = now_seconds();
  const SparsifyParams sp = lp_driven_params(inst);
  const QueryResult query = sparsify_gap(inst, sp);
  const auto sub = restrict(inst, query.q);
  // The reduced solve gets the same cap as the full one; without it a
  // hard low-redundancy row can stall the whole grid.
  const SolveResult sparse = gap_exact(sub.instance, full_budget);
  r.t_sparse_s = now_seconds() - t0;
  if (sparse.status == SolveStatus::BudgetExceeded)
    r.status = "budget_exceeded";
  r.opt_sparse = sparse.value;
  r.query_size = static_cast<long>(query.q.size());
  r.lp_degree_bound = query.lp_degree_bound;

  Budget cut;
  cut.max_wall_time_s = r.t_sparse_s;
  const SolveResult full_cut = gap_exact(inst, cut);
  r.opt_full_cut = full_cut.value;

  const double inf = std::numeric_limits<double>::infinity();
  r.approx_ratio = r.opt_full > 0.0 ? r.opt_sparse / r.opt_full : 1.0;
  r.speedup = r.t_sparse_s > 0.0 ? r.t_full_s / r.t_sparse_s : inf;
  r.etr = r.opt_full_cut > 0.0 ? r.opt_sparse / r.opt_full_cut : inf;
  r.redundancy_realized =
      full.assignment.size() > 0
          ? static_cast<double>(inst.n()) / full.assignment.size()
          : inf;
  return r;
}

void run_grid(const std::vector<GenParams>& settings, int threads,
              const Budget& full_budget, std::ostream& out) {
  const std::size_t count = settings.size();
  std::vector<ExperimentRecord> rows(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= count) return;
      const GenParams& gp = settings[idx];
      std::ostringstream id;
      id << "grid-" << idx;
      try {
        const GenResult gen = generate(gp);
        rows[idx] = run_three(gen.instance, gp, id.str(), full_budget);
      } catch (const std::exception& e) {
        rows[idx].instance_id = id.str();
        rows[idx].params = gp;
        rows[idx].status = std::string("error:") + e.what();
      }
    }
  };
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  out << csv_header() << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
}

GridSpec desk_grid() {
  GridSpec g;
  g.ns = {100, 200, 500};
  g.ms = {1, 2};
  g.rhos = {-0.5, 0.0, 0.5};
  g.redundancy_targets = {2, 8, 22};
  g.marginals = {{Uniform{0.0, 100.0}, Uniform{1.0, 20.0}}};
  g.replicates = 3;
  return g;
}

namespace {

AggregateSummary summarize(const std::vector<const ExperimentRecord*>& rows) {
  AggregateSummary s;
  s.rows = static_cast<long>(rows.size());
  if (rows.empty()) return s;
  double ratio = 0.0, speed = 0.0, etr = 0.0;
  long etr_n = 0;
  for (const auto* r : rows) {
    ratio += r->approx_ratio;
    speed += r->speedup;
    if (std::isinf(r->etr)) {
      ++s.etr_infinite;
    } else {
      etr += r->etr;
      ++etr_n;
    }
  }
  s.mean_approx_ratio = ratio / s.rows;
  s.mean_speedup = speed / s.rows;
  s.mean_etr = etr_n > 0 ? etr / etr_n : 0.0;
  return s;
}

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double quantile_of(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(q * n));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return xs[rank - 1];
}

}  // namespace

AggregateResult aggregate(const std::vector<ExperimentRecord>& records,
                          int window) {
  std::vector<const ExperimentRecord*> ok;
  for (const auto& r : records)
    if (r.status == "ok") ok.push_back(&r);
  if (ok.empty()) throw std::invalid_argument("aggregate: no usable rows");

  AggregateResult agg;
  agg.overall = summarize(ok);
  std::vector<const ExperimentRecord*> slice;
  for (const auto* r : ok)
    if (r->redundancy_realized > 4.0 && r->params.m > 1 && r->params.n > 1000)
      slice.push_back(r);
  agg.slice = summarize(slice);

  std::vector<const ExperimentRecord*> by_r = ok;
  std::stable_sort(by_r.begin(), by_r.end(),
                   [](const ExperimentRecord* a, const ExperimentRecord* b) {
                     return a->redundancy_realized < b->redundancy_realized;
                   });
  const int n = static_cast<int>(by_r.size());
  int w = std::min(window, n);
  if (w < 1) w = 1;
  for (int i = 0; i < n; ++i) {
    int lo = i - w / 2;
    if (lo < 0) lo = 0;
    int hi = lo + w;
    if (hi > n) {
      hi = n;
      lo = hi - w;
    }
    std::vector<double> win;
    win.reserve(w);
    for (int x = lo; x < hi; ++x) win.push_back(by_r[x]->speedup);
    agg.rolling.emplace_back(by_r[i]->redundancy_realized, median_of(win));
  }

  // Equal-width log10 bins over realized redundancy, truncated at 50.
  std::vector<const ExperimentRecord*> trunc;
  for (const auto* r : by_r)
    if (r->redundancy_realized <= 50.0 && !std::isinf(r->etr) &&
        r->redundancy_realized >= 1.0)
      trunc.push_back(r);
  if (!trunc.empty()) {
    const double lo = std::log10(trunc.front()->redundancy_realized);
    const double hi = std::log10(50.0);
    const int bins = 10;
    const double step = hi > lo ? (hi - lo) / bins : 1.0;
    std::vector<std::vector<double>> bucket(bins);
    for (const auto* r : trunc) {
      int b = static_cast<int>(
          std::floor((std::log10(r->redundancy_realized) - lo) / step));
      if (b < 0) b = 0;
      if (b >= bins) b = bins - 1;
      bucket[b].push_back(r->etr);
    }
    for (int b = 0; b < bins; ++b) {
      EtrBin bin;
      bin.lo = std::pow(10.0, lo + b * step);
      bin.hi = std::pow(10.0, lo + (b + 1) * step);
      std::vector<double>& xs = bucket[b];
      bin.count = static_cast<long>(xs.size());
      if (!xs.empty()) {
        double s = 0.0;
        for (double x : xs) s += x;
        bin.mean = s / xs.size();
        bin.median = median_of(xs);
        bin.q1 = quantile_of(xs, 0.25);
        bin.q3 = quantile_of(xs, 0.75);
      }
      agg.etr_bins.push_back(bin);
    }
  }
  return agg;
}

void write_aggregate(const AggregateResult& agg, const std::string& prefix) {
  {
    std::ofstream f(prefix + "_summary.csv");
    f << "slice,rows,mean_approx_ratio,mean_speedup,mean_etr,etr_infinite\n";
    f << "all," << agg.overall.rows << ',' << fmt(agg.overall.mean_approx_ratio)
      << ',' << fmt(agg.overall.mean_speedup) << ','
      << fmt(agg.overall.mean_etr) << ',' << agg.overall.etr_infinite << '\n';
    f << "r>4;m>1;n>1000," << agg.slice.rows << ','
      << fmt(agg.slice.mean_approx_ratio) << ',' << fmt(agg.slice.mean_speedup)
      << ',' << fmt(agg.slice.mean_etr) << ',' << agg.slice.etr_infinite
      << '\n';
  }
  {
    std::ofstream f(prefix + "_rolling_median.csv");
    f << "redundancy_realized,rolling_median_speedup\n";
    for (const auto& [x, y] : agg.rolling) f << fmt(x) << ',' << fmt(y) << '\n';
  }
  {
    std::ofstream f(prefix + "_etr_bins.csv");
    f << "bin_lo,bin_hi,count,mean,median,q1,q3\n";
    for (const auto& b : agg.etr_bins)
      f << fmt(b.lo) << ',' << fmt(b.hi) << ',' << b.count << ',' << fmt(b.mean)
        << ',' << fmt(b.median) << ',' << fmt(b.q1) << ',' << fmt(b.q3) << '\n';
  }
}

}  // namespace sparsepack
