#include "openwalk/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

namespace owalk::transitions {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kReDegenTol = 1e-9;   // Re lambda degeneracy of the pair
constexpr double kImSplitTol = 1e-8;   // conjugate-pair Im splitting onset
constexpr double kGapGuard = 1e-9;     // ignore sign flips inside degeneracies
constexpr double kBetaTol = 1e-6;      // bisection width target
constexpr double kClassifyOffset = 1e-4;
constexpr double kSecondOrderG = 0.999;

UnitaryMatrix step_unitary(const Model& model, double beta) {
  if (const auto* ring = std::get_if<models::RingModel>(&model))
    return channels::propagator(models::ring_hamiltonian(*ring), beta);
  const auto& coined = std::get<models::CoinedWalkModel>(model);
  return models::coined_step_unitary(models::CoinedWalkModel(coined.length, beta));
}

struct PointState {
  spectral::SpectralDecomposition d;
  std::vector<Eigen::Index> sel;  // relevant modes, slowest first
  bool re_degenerate = false;
  bool im_split = false;
};

PointState eval_point(const Model& model, double beta, double q) {
  PointState p;
  p.d = decompose_at(model, beta, q);
  p.sel = relevant_modes(model, p.d);
  if (p.sel.size() < 2)
    throw NumericalError("transitions: fewer than two relevant modes");
  const Complex a = p.d.floquet(p.sel[0]);
  const Complex b = p.d.floquet(p.sel[1]);
  p.re_degenerate = std::abs(a.real() - b.real()) <= kReDegenTol;
  p.im_split = std::abs(a.imag() - b.imag()) > kImSplitTol;
  return p;
}

// Re(lambda) gap of the pair, signed by following a reference eigenvector:
// the branch with the larger overlap against `ref` comes first.
double tracked_gap(const ComplexVector& ref, const PointState& p) {
  const double o0 = std::abs(p.d.right.col(p.sel[0]).dot(ref));
  const double o1 = std::abs(p.d.right.col(p.sel[1]).dot(ref));
  const Eigen::Index a = o0 >= o1 ? p.sel[0] : p.sel[1];
  const Eigen::Index b = o0 >= o1 ? p.sel[1] : p.sel[0];
  return p.d.floquet(a).real() - p.d.floquet(b).real();
}

enum class EventKind { ReDegeneracy, ImSplit, SignChange };

struct Event {
  double lo, hi;
  EventKind kind;
  bool base;  // indicator value on the lo side (for the boolean kinds)
};

// First crossing event in [beta_lo, beta_hi] on a uniform scan.
std::optional<Event> find_event(const Model& model, double beta_lo, double beta_hi,
                                double q, int grid_points) {
  if (!(beta_lo < beta_hi)) throw InvariantError("locate_crossing: empty bracket");
  if (grid_points < 2) throw InvariantError("locate_crossing: grid too small");
  std::optional<PointState> prev;
  double prev_beta = 0.0;
  for (int k = 0; k < grid_points; ++k) {
    const double beta =
        beta_lo + (beta_hi - beta_lo) * double(k) / double(grid_points - 1);
    PointState cur = eval_point(model, beta, q);
    if (prev) {
      if (cur.re_degenerate != prev->re_degenerate)
        return Event{prev_beta, beta, EventKind::ReDegeneracy, prev->re_degenerate};
      if (cur.im_split != prev->im_split)
        return Event{prev_beta, beta, EventKind::ImSplit, prev->im_split};
      const double pgap =
          prev->d.floquet(prev->sel[0]).real() - prev->d.floquet(prev->sel[1]).real();
      const double gap = tracked_gap(prev->d.right.col(prev->sel[0]), cur);
      if (std::abs(gap) > kGapGuard && std::abs(pgap) > kGapGuard &&
          std::signbit(gap) != std::signbit(pgap))
        return Event{prev_beta, beta, EventKind::SignChange, false};
    }
    prev = std::move(cur);
    prev_beta = beta;
  }
  return std::nullopt;
}

double bisect_event(const Model& model, const Event& ev, double q) {
  double lo = ev.lo, hi = ev.hi;
  if (ev.kind == EventKind::SignChange) {
    const PointState anchor = eval_point(model, lo, q);
    const ComplexVector ref = anchor.d.right.col(anchor.sel[0]);
    const bool base = std::signbit(tracked_gap(ref, anchor));
    while (hi - lo > kBetaTol) {
      const double mid = 0.5 * (lo + hi);
      if (std::signbit(tracked_gap(ref, eval_point(model, mid, q))) == base)
        lo = mid;
      else
        hi = mid;
    }
  } else {
    while (hi - lo > kBetaTol) {
      const double mid = 0.5 * (lo + hi);
      const PointState p = eval_point(model, mid, q);
      const bool ind = ev.kind == EventKind::ReDegeneracy ? p.re_degenerate : p.im_split;
      if (ind == ev.base)
        lo = mid;
      else
        hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Closest relevant eigenvalue pair at a given beta.
std::pair<Eigen::Index, Eigen::Index> closest_pair(
    const Model& model, const spectral::SpectralDecomposition& d) {
  const std::vector<Eigen::Index> cand = relevant_modes(model, d);
  if (cand.size() < 2) throw NumericalError("classify: fewer than two relevant modes");
  Eigen::Index bi = cand[0], bj = cand[1];
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < cand.size(); ++i)
    for (size_t j = i + 1; j < cand.size(); ++j) {
      const double dist = std::abs(d.floquet(cand[i]) - d.floquet(cand[j]));
      if (dist < best) {
        best = dist;
        bi = cand[i];
        bj = cand[j];
      }
    }
  if (d.floquet(bi).real() > d.floquet(bj).real()) std::swap(bi, bj);
  return {bi, bj};
}

}  // namespace

StochasticMatrix build_markov(const Model& model, double beta) {
  return channels::classical_markov(step_unitary(model, beta));
}

SuperoperatorMatrix build_liouvillian(const Model& model, double beta, double q) {
  return channels::liouvillian(step_unitary(model, beta), q);
}

spectral::SpectralDecomposition decompose_at(const Model& model, double beta, double q) {
  if (q < 0.0 || q > 1.0) throw InvariantError("decompose_at: q outside [0,1]");
  if (q == 1.0) return spectral::full_spectrum(build_markov(model, beta));
  return spectral::full_spectrum(build_liouvillian(model, beta, q));
}

std::vector<Eigen::Index> relevant_modes(const Model& model,
                                         const spectral::SpectralDecomposition& d) {
  if (std::holds_alternative<models::RingModel>(model)) {
    if (d.dim() < 3) throw InvariantError("relevant_modes: decomposition too small");
    return {1, 2};  // slowest two decaying modes after the stationary one
  }
  std::vector<Eigen::Index> sel;
  for (Eigen::Index k = 0; k < d.dim(); ++k) {
    const Complex lam = d.floquet(k);
    if (lam.real() > 1e-9 && std::abs(lam.imag()) < kPi / 2.0 - 1e-9)
      sel.push_back(k);
  }
  std::sort(sel.begin(), sel.end(), [&](Eigen::Index a, Eigen::Index b) {
    const Complex la = d.floquet(a), lb = d.floquet(b);
    if (la.real() != lb.real()) return la.real() < lb.real();
    return std::abs(la.imag()) < std::abs(lb.imag());
  });
  return sel;
}

const char* to_string(TransitionOrder order) {
  switch (order) {
    case TransitionOrder::FirstOrder: return "FirstOrder";
    case TransitionOrder::SecondOrder: return "SecondOrder";
    default: return "None";
  }
}

SweepTable sweep(const Model& model, const std::vector<double>& grid, double q,
                 int threads) {
  if (grid.empty()) throw InvariantError("sweep: empty grid");
  for (size_t k = 1; k < grid.size(); ++k)
    if (grid[k] <= grid[k - 1])
      throw InvariantError("sweep: grid must be strictly increasing");
  if (q < 0.0 || q > 1.0) throw InvariantError("sweep: q outside [0,1]");

  const size_t n = grid.size();
  std::vector<std::optional<spectral::SpectralDecomposition>> decomps(n);
  std::vector<double> db(n, 0.0);

  const int nthreads = std::max(1, std::min<int>(threads, int(n)));
  auto work = [&](size_t begin, size_t end) {
    for (size_t k = begin; k < end; ++k) {
      try {
        decomps[k] = decompose_at(model, grid[k], q);
        db[k] = spectral::detailed_balance_residual(build_markov(model, grid[k]));
      } catch (const NumericalError&) {
        decomps[k].reset();  // flagged below; sweep continues
      }
    }
  };
  if (nthreads == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (n + size_t(nthreads) - 1) / size_t(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      const size_t begin = size_t(t) * chunk;
      if (begin >= n) break;
      pool.emplace_back(work, begin, std::min(n, begin + chunk));
    }
    for (auto& th : pool) th.join();
  }

  // track_modes needs a gapless sequence; failed points inherit their
  // predecessor's decomposition and are flagged in the output.
  std::vector<spectral::SpectralDecomposition> seq;
  seq.reserve(n);
  std::vector<bool> ok(n, true);
  for (size_t k = 0; k < n; ++k) {
    if (decomps[k]) {
      seq.push_back(*decomps[k]);
    } else {
      ok[k] = false;
      if (seq.empty()) throw NumericalError("sweep: first grid point failed");
      seq.push_back(seq.back());
    }
  }
  const spectral::TrackedBranches tracked = spectral::track_modes(seq);

  const std::vector<Eigen::Index> sel0 = relevant_modes(model, seq.front());
  if (sel0.size() < 2) throw NumericalError("sweep: fewer than two relevant modes");
  const int b2 = int(sel0[0]);
  const int b3 = int(sel0[1]);

  SweepTable table;
  table.had_ambiguity = tracked.had_ambiguity;
  table.records.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    SweepRecord rec;
    rec.beta = grid[k];
    rec.solver_ok = ok[k];
    const int m2 = tracked.labels[k][size_t(b2)];
    const int m3 = tracked.labels[k][size_t(b3)];
    rec.lambda2 = seq[k].floquet(m2);
    rec.lambda3 = seq[k].floquet(m3);
    rec.g = spectral::overlap_between(seq[k], m2, m3);
    rec.db_residual = db[k];
    if (!ok[k]) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rec.lambda2 = rec.lambda3 = Complex(nan, nan);
      rec.g = rec.db_residual = nan;
    }
    table.records.push_back(rec);
  }
  return table;
}

TransitionReport classify_transition(const Model& model, double beta_c, double q) {
  TransitionReport report;
  report.beta_c = beta_c;

  double g = 0.0;
  for (const double beta : {beta_c - kClassifyOffset, beta_c + kClassifyOffset}) {
    const spectral::SpectralDecomposition d = decompose_at(model, beta, q);
    const auto [i, j] = closest_pair(model, d);
    g = std::max(g, spectral::overlap_between(d, i, j));
  }
  report.g_at_critical = g;
  report.order =
      g >= kSecondOrderG ? TransitionOrder::SecondOrder : TransitionOrder::FirstOrder;

  // First order: the vectors stay distinct, read them just below the crossing.
  // Second order: read the (numerically merged) pair at the point itself.
  const double beta_eval = report.order == TransitionOrder::FirstOrder
                               ? beta_c - kClassifyOffset
                               : beta_c;
  const spectral::SpectralDecomposition d = decompose_at(model, beta_eval, q);
  const auto [i, j] = closest_pair(model, d);
  report.r2 = d.right.col(i);
  report.r3 = d.right.col(j);
  return report;
}

TransitionReport locate_crossing(const Model& model, double beta_lo, double beta_hi,
                                 double q, int grid_points) {
  const std::optional<Event> ev = find_event(model, beta_lo, beta_hi, q, grid_points);
  if (!ev) {
    TransitionReport report;
    report.order = TransitionOrder::None;
    report.note = "no crossing indicator change inside the bracket";
    return report;
  }
  const double beta_c = bisect_event(model, *ev, q);
  TransitionReport report = classify_transition(model, beta_c, q);
  report.bracket_width = kBetaTol;
  switch (ev->kind) {
    case EventKind::ReDegeneracy: report.note = "Re-degeneracy toggle"; break;
    case EventKind::ImSplit: report.note = "conjugate-pair Im splitting toggle"; break;
    case EventKind::SignChange: report.note = "tracked Re-gap sign change"; break;
  }
  return report;
}

QcResult locate_qc(const Model& model, double beta_lo, double beta_hi) {
  const auto exists = [&](double q) {
    return find_event(model, beta_lo, beta_hi, q, 121).has_value();
  };
  QcResult result;
  if (!exists(1.0)) {
    result.note = "no crossing at q = 1 inside the beta window";
    return result;
  }
  double lo = 0.05, hi = 1.0;
  if (exists(lo)) {
    result.note = "crossing persists down to q = 0.05; no threshold in range";
    return result;
  }
  while (hi - lo > 5e-3) {
    const double mid = 0.5 * (lo + hi);
    if (exists(mid))
      hi = mid;
    else
      lo = mid;
  }
  result.q_c = 0.5 * (lo + hi);
  result.found = true;

  for (int k = 0; k < 5; ++k) {
    const double q =
        std::min(1.0, result.q_c + 0.05 + (1.0 - result.q_c - 0.05) * k / 4.0);
    const TransitionReport rep = locate_crossing(model, beta_lo, beta_hi, q);
    if (rep.order != TransitionOrder::None)
      result.beta_c_of_q.emplace_back(q, rep.beta_c);
  }
  return result;
}

std::vector<std::pair<int, double>> size_scan(const std::vector<int>& lengths) {
  std::vector<std::pair<int, double>> out;
  out.reserve(lengths.size());
  for (const int L : lengths) {
    if (L < 3) throw InvariantError("size_scan: L must be >= 3");
    const Model model = models::CoinedWalkModel(L, 0.5 * kPi / 2.0);
    const TransitionReport rep =
        locate_crossing(model, 0.2 * kPi / 2.0, 0.9 * kPi / 2.0, 1.0);
    if (rep.order == TransitionOrder::None)
      throw NumericalError("size_scan: no crossing found for L = " + std::to_string(L));
    out.emplace_back(L, rep.beta_c);
  }
  return out;
}

}  // namespace transitions
