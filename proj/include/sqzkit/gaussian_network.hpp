#pragma once

// Multimode Gaussian states as covariance matrices in shot-noise units:
// the vacuum has covariance identity. Quadratures are interleaved
// (x1, p1, x2, p2, ...) and every gate embedding follows that order.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

#include "sqzkit/errors.hpp"
#include "sqzkit/units.hpp"

namespace sqzkit {

// Canonical antisymmetric form, block-diagonal [[0, 1], [-1, 0]].
inline Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

// a -> e^{i phi} a acting on (x, p).
inline Eigen::Matrix2d rotation_matrix(double phi) {
  Eigen::Matrix2d r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

// a_i' = sqrt(t) a_i + e^{i phi} sqrt(1-t) a_j,
// a_j' = -e^{-i phi} sqrt(1-t) a_i + sqrt(t) a_j, on (x_i, p_i, x_j, p_j).
inline Eigen::Matrix4d beamsplitter_matrix(double transmittance, double phase) {
  const double c = std::sqrt(transmittance);
  const double s = std::sqrt(1.0 - transmittance);
  Eigen::Matrix4d m;
  m.block<2, 2>(0, 0) = c * Eigen::Matrix2d::Identity();
  m.block<2, 2>(0, 2) = s * rotation_matrix(phase);
  m.block<2, 2>(2, 0) = -s * rotation_matrix(-phase);
  m.block<2, 2>(2, 2) = c * Eigen::Matrix2d::Identity();
  return m;
}

class GaussianState {
 public:
  static constexpr double kPhysicalTolerance = 1e-9;

  // Validates symmetry and the uncertainty principle.
  GaussianState(Eigen::MatrixXd covariance, Eigen::VectorXd mean)
      : covariance_(std::move(covariance)), mean_(std::move(mean)) {
    const auto n = covariance_.rows();
    if (n == 0 || n % 2 != 0 || covariance_.cols() != n) {
      throw DomainError("GaussianState: covariance must be 2N x 2N with N >= 1");
    }
    if (mean_.size() != n) throw DomainError("GaussianState: mean must have length 2N");
    const double scale = std::max(1.0, covariance_.cwiseAbs().maxCoeff());
    if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw DomainError("GaussianState: covariance must be symmetric");
    }
    if (!is_physical()) {
      throw DomainError("GaussianState: covariance violates the uncertainty principle");
    }
  }

  explicit GaussianState(Eigen::MatrixXd covariance)
      : GaussianState(covariance, Eigen::VectorXd::Zero(covariance.rows())) {}

  static GaussianState vacuum(int modes) {
    if (modes < 1) throw DomainError("vacuum: need at least one mode");
    return GaussianState(Unchecked{}, Eigen::MatrixXd::Identity(2 * modes, 2 * modes),
                         Eigen::VectorXd::Zero(2 * modes));
  }

  // Single mode, squeezed along x.
  static GaussianState squeezed_vacuum(double squeezed, double antisqueezed) {
    if (!(squeezed > 0.0 && squeezed <= 1.0 && antisqueezed >= 1.0)) {
      throw DomainError("squeezed_vacuum: need 0 < R- <= 1 <= R+");
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
    cov(0, 0) = squeezed;
    cov(1, 1) = antisqueezed;
    return GaussianState(std::move(cov));
  }

  int mode_count() const { return int(covariance_.rows() / 2); }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::VectorXd& mean() const { return mean_; }

  // Symplectic eigenvalues in ascending order. They are the square roots
  // of the (doubly degenerate) eigenvalues of S^1/2 Om S Om^T S^1/2.
  Eigen::VectorXd symplectic_eigenvalues() const {
    const int n = mode_count();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance_);
    if (es.eigenvalues().minCoeff() <= 0.0) {
      return Eigen::VectorXd::Zero(n);
    }
    const Eigen::MatrixXd root = es.operatorSqrt();
    const Eigen::MatrixXd om = symplectic_form(n);
    const Eigen::MatrixXd m = root * om * covariance_ * om.transpose() * root;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ms(0.5 * (m + m.transpose()),
                                                      Eigen::EigenvaluesOnly);
    Eigen::VectorXd nu(n);
    for (int k = 0; k < n; ++k) {
      nu(k) = std::sqrt(std::max(0.0, 0.5 * (ms.eigenvalues()(2 * k) +
                                             ms.eigenvalues()(2 * k + 1))));
    }
    return nu;
  }

  bool is_physical(double tolerance = kPhysicalTolerance) const {
    return symplectic_eigenvalues().minCoeff() >= 1.0 - tolerance;
  }

  // Block-diagonal combination; this state's modes come first.
  GaussianState direct_sum(const GaussianState& other) const {
    const auto a = covariance_.rows();
    const auto b = other.covariance_.rows();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(a + b, a + b);
    cov.topLeftCorner(a, a) = covariance_;
    cov.bottomRightCorner(b, b) = other.covariance_;
    Eigen::VectorXd mu(a + b);
    mu << mean_, other.mean_;
    return GaussianState(Unchecked{}, std::move(cov), std::move(mu));
  }

  // Conjugates by the symplectic `gate` acting on the listed modes.
  GaussianState transformed(const Eigen::MatrixXd& gate, std::initializer_list<int> modes) const {
    const Eigen::MatrixXd s = embed(gate, modes);
    Eigen::MatrixXd cov = s * covariance_ * s.transpose();
    cov = 0.5 * (cov + cov.transpose());
    return GaussianState(Unchecked{}, std::move(cov), s * mean_);
  }

  // Mode-i loss: Sigma -> X Sigma X^T + (1 - eta) on the mode block, with
  // X scaling mode i by sqrt(eta).
  GaussianState attenuated(int mode, double eta) const {
    check_mode(mode);
    const double g = std::sqrt(eta);
    Eigen::MatrixXd cov = covariance_;
    Eigen::VectorXd mu = mean_;
    for (int r = 2 * mode; r < 2 * mode + 2; ++r) {
      cov.row(r) *= g;
      cov.col(r) *= g;
      cov(r, r) += 1.0 - eta;
      mu(r) *= g;
    }
    return GaussianState(Unchecked{}, std::move(cov), std::move(mu));
  }

  void check_mode(int mode) const {
    if (mode < 0 || mode >= mode_count()) {
      throw IndexError("mode index " + std::to_string(mode) + " out of range [0, " +
                       std::to_string(mode_count()) + ")");
    }
  }

 private:
  struct Unchecked {};
  GaussianState(Unchecked, Eigen::MatrixXd covariance, Eigen::VectorXd mean)
      : covariance_(std::move(covariance)), mean_(std::move(mean)) {}

  Eigen::MatrixXd embed(const Eigen::MatrixXd& gate, std::initializer_list<int> modes) const {
    const int n = 2 * mode_count();
    if (gate.rows() != 2 * int(modes.size()) || gate.cols() != gate.rows()) {
      throw DomainError("gate size does not match its mode list");
    }
    std::vector<int> idx;
    for (int m : modes) {
      check_mode(m);
      if (std::find(idx.begin(), idx.end(), 2 * m) != idx.end()) {
        throw IndexError("gate acts twice on mode " + std::to_string(m));
      }
      idx.push_back(2 * m);
      idx.push_back(2 * m + 1);
    }
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t c = 0; c < idx.size(); ++c) s(idx[r], idx[c]) = gate(r, c);
    }
    return s;
  }

  Eigen::MatrixXd covariance_;
  Eigen::VectorXd mean_;
};

inline GaussianState vacuum(int modes) { return GaussianState::vacuum(modes); }

inline GaussianState squeezed_vacuum(double squeezed, double antisqueezed) {
  return GaussianState::squeezed_vacuum(squeezed, antisqueezed);
}

inline GaussianState apply_beamsplitter(const GaussianState& state, int i, int j,
                                        double transmittance, double phase = 0.0) {
  if (i == j) throw IndexError("apply_beamsplitter: modes must differ");
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw DomainError("apply_beamsplitter: transmittance must be in [0,1]");
  }
  return state.transformed(beamsplitter_matrix(transmittance, phase), {i, j});
}

inline GaussianState apply_phase_shift(const GaussianState& state, int mode, double phi) {
  return state.transformed(rotation_matrix(phi), {mode});
}

inline GaussianState apply_loss_channel(const GaussianState& state, int mode, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("apply_loss_channel: efficiency must be in [0,1]");
  }
  return state.attenuated(mode, eta);
}

// Variance of cos(theta) x + sin(theta) p on one mode.
inline double homodyne_variance(const GaussianState& state, int mode, double theta) {
  state.check_mode(mode);
  const auto& s = state.covariance();
  const int x = 2 * mode;
  const double c = std::cos(theta);
  const double n = std::sin(theta);
  return c * c * s(x, x) + 2.0 * c * n * s(x, x + 1) + n * n * s(x + 1, x + 1);
}

// Var(x_i - x_j) + Var(p_i + p_j). Separable states give >= 4 here.
inline double duan_value(const GaussianState& state, int i, int j) {
  if (i == j) throw IndexError("duan_value: modes must differ");
  state.check_mode(i);
  state.check_mode(j);
  const auto& s = state.covariance();
  const int xi = 2 * i, xj = 2 * j;
  const double dx = s(xi, xi) + s(xj, xj) - 2.0 * s(xi, xj);
  const double dp = s(xi + 1, xi + 1) + s(xj + 1, xj + 1) + 2.0 * s(xi + 1, xj + 1);
  return dx + dp;
}

inline constexpr double kDuanSeparableBound = 4.0;

// ---------------------------------------------------------------------------
// Scenarios: squeezers feeding an ordered list of gates, then homodyne
// measurements on selected modes.

struct SqueezerSpec {
  int mode;
  double squeezed_variance;
  double antisqueezed_variance;
  double angle = 0.0;  // orientation of the squeezed quadrature
};

struct BeamSplitterGate {
  int mode_a, mode_b;
  double transmittance;
  double phase = 0.0;
};

struct PhaseShiftGate {
  int mode;
  double phase;
};

struct LossGate {
  int mode;
  double efficiency;
};

using Gate = std::variant<BeamSplitterGate, PhaseShiftGate, LossGate>;

struct HomodyneMeasurement {
  int mode;
  double angle;
};

struct NetworkScenario {
  int mode_count = 1;
  std::vector<SqueezerSpec> squeezers;
  std::vector<Gate> gates;
  std::vector<HomodyneMeasurement> measurements;
};

struct DuanEntry {
  int mode_a, mode_b;
  double value;
  bool entangled;
};

struct NetworkResult {
  GaussianState state;
  std::vector<double> homodyne;  // one per requested measurement
  std::vector<DuanEntry> duan;   // every unordered mode pair
};

namespace detail {
inline GaussianState apply_gate(const GaussianState& s, const Gate& gate) {
  return std::visit(
      [&](const auto& g) -> GaussianState {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, BeamSplitterGate>) {
          return apply_beamsplitter(s, g.mode_a, g.mode_b, g.transmittance, g.phase);
        } else if constexpr (std::is_same_v<G, PhaseShiftGate>) {
          return apply_phase_shift(s, g.mode, g.phase);
        } else {
          return apply_loss_channel(s, g.mode, g.efficiency);
        }
      },
      gate);
}
}  // namespace detail

inline GaussianState prepare_inputs(const NetworkScenario& scenario) {
  if (scenario.mode_count < 1) throw DomainError("network: mode_count must be >= 1");
  std::vector<GaussianState> modes(scenario.mode_count, vacuum(1));
  std::vector<bool> seen(scenario.mode_count, false);
  for (const auto& sq : scenario.squeezers) {
    if (sq.mode < 0 || sq.mode >= scenario.mode_count) {
      throw IndexError("squeezer on mode " + std::to_string(sq.mode) + " out of range");
    }
    if (seen[sq.mode]) throw DomainError("two squeezers on mode " + std::to_string(sq.mode));
    seen[sq.mode] = true;
    modes[sq.mode] = apply_phase_shift(
        squeezed_vacuum(sq.squeezed_variance, sq.antisqueezed_variance), 0, sq.angle);
  }
  GaussianState state = modes.front();
  for (std::size_t k = 1; k < modes.size(); ++k) state = state.direct_sum(modes[k]);
  return state;
}

// Runs every gate in order. Gate failures are collected and reported
// together, each tagged with its position in the gate list.
inline NetworkResult run_scenario(const NetworkScenario& scenario) {
  GaussianState state = prepare_inputs(scenario);
  std::string failures;
  for (std::size_t k = 0; k < scenario.gates.size(); ++k) {
    try {
      state = detail::apply_gate(state, scenario.gates[k]);
    } catch (const Error& e) {
      if (!failures.empty()) failures += "; ";
      failures += "gate " + std::to_string(k) + ": " + e.what();
    }
  }
  if (!failures.empty()) throw DomainError("network: " + failures);

  NetworkResult result{state, {}, {}};
  for (const auto& m : scenario.measurements) {
    result.homodyne.push_back(homodyne_variance(state, m.mode, m.angle));
  }
  for (int i = 0; i < scenario.mode_count; ++i) {
    for (int j = i + 1; j < scenario.mode_count; ++j) {
      const double d = duan_value(state, i, j);
      result.duan.push_back({i, j, d, d < kDuanSeparableBound});
    }
  }
  return result;
}

// Four squeezers (alternately rotated by pi/2) joined by three balanced
// beam splitters: (0,1) and (2,3), then (1,2). Homodyne on every output.
inline NetworkScenario binary_tree_network(double squeezed, double antisqueezed,
                                           int modes = 4) {
  if (modes < 2 || (modes & (modes - 1)) != 0) {
    throw DomainError("binary_tree_network: mode count must be a power of two >= 2");
  }
  NetworkScenario sc;
  sc.mode_count = modes;
  for (int m = 0; m < modes; ++m) {
    sc.squeezers.push_back({m, squeezed, antisqueezed, (m % 2) ? kPi / 2 : 0.0});
  }
  // Merge blocks of doubling width by joining the adjacent edge modes.
  for (int width = 1; width < modes; width *= 2) {
    for (int start = 0; start + width < modes; start += 2 * width) {
      sc.gates.push_back(BeamSplitterGate{start + width - 1, start + width, 0.5, 0.0});
    }
  }
  for (int m = 0; m < modes; ++m) sc.measurements.push_back({m, 0.0});
  return sc;
}

}  // namespace sqzkit
