#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "openwalk/channels.hpp"
#include "openwalk/models.hpp"
#include "openwalk/spectral.hpp"

namespace owalk::transitions {

using Model = std::variant<models::RingModel, models::CoinedWalkModel>;

/// Classical one-step matrix at control parameter beta (step duration for the
/// ring, interior coin angle for the coined walk).
StochasticMatrix build_markov(const Model& model, double beta);

/// One-step superoperator of the partially dephased (q < 1) walk.
SuperoperatorMatrix build_liouvillian(const Model& model, double beta, double q);

/// Decomposition of the q = 1 Markov matrix or the q < 1 superoperator.
spectral::SpectralDecomposition decompose_at(const Model& model, double beta, double q);

/// Modes eligible for the crossing analysis, sorted by (Re lambda, |Im lambda|):
/// the two slowest decaying modes for the ring; for the coined walk, decaying
/// modes with |Im lambda| strictly inside (-pi/2, pi/2) — one member of each
/// mu -> -mu pair, excluding the non-decaying and self-paired branches.
std::vector<Eigen::Index> relevant_modes(const Model& model,
                                         const spectral::SpectralDecomposition& d);

enum class TransitionOrder { FirstOrder, SecondOrder, None };

const char* to_string(TransitionOrder order);

struct SweepRecord {
  double beta = 0.0;
  Complex lambda2{0.0, 0.0};  // tracked slow branch
  Complex lambda3{0.0, 0.0};  // tracked partner branch
  double g = 0.0;             // overlap of the two tracked eigenvectors
  double db_residual = 0.0;   // detailed-balance residual of the classical Q
  bool solver_ok = true;
};

struct SweepTable {
  std::vector<SweepRecord> records;
  bool had_ambiguity = false;
};

/// Evaluates the spectrum across an increasing beta grid; the two branches
/// seeded from the slowest relevant pair at the first grid point are followed
/// by eigenvector overlap so crossings appear as genuine sign changes.
/// Grid points are computed in parallel (threads >= 1) with a deterministic,
/// order-preserving merge.
SweepTable sweep(const Model& model, const std::vector<double>& grid, double q,
                 int threads = 1);

struct TransitionReport {
  double beta_c = 0.0;
  TransitionOrder order = TransitionOrder::None;
  double g_at_critical = 0.0;
  ComplexVector r2, r3;  // critical eigenvectors (see note)
  double bracket_width = 0.0;
  std::string note;
};

/// Scans the bracket on a uniform grid for the first crossing event — onset or
/// loss of Re-degeneracy, onset or loss of the complex-conjugate Im split, or a
/// tracked Re-gap sign change — and bisects it to |bracket| <= 1e-6. Returns
/// order = None with an explanatory note if no event exists in the bracket.
TransitionReport locate_crossing(const Model& model, double beta_lo, double beta_hi,
                                 double q, int grid_points = 121);

/// Classifies a candidate critical point: the eigenvector overlap g of the
/// closest relevant eigenvalue pair is evaluated at beta_c +- 1e-4 (never at
/// the possibly defective point itself); SecondOrder iff max g >= 0.999.
/// Critical eigenvectors are reported from beta_c - 1e-4 for a first-order
/// crossing (distinct vectors) and from beta_c for a second-order one (merged).
TransitionReport classify_transition(const Model& model, double beta_c, double q);

struct QcResult {
  double q_c = 0.0;
  bool found = false;
  std::string note;
  // beta_c sampled on a 5-point q grid above q_c (drift diagnostic)
  std::vector<std::pair<double, double>> beta_c_of_q;
};

/// Outer bisection on q in [0.05, 1] for the predicate "locate_crossing finds
/// an event inside the beta window", refined to |dq| <= 5e-3.
QcResult locate_qc(const Model& model, double beta_lo = 0.1, double beta_hi = 1.0);

/// beta_c of the coined walk for each L (bracket (0.2, 0.9) in units of pi/2).
std::vector<std::pair<int, double>> size_scan(const std::vector<int>& lengths);

}  // namespace owalk::transitions
