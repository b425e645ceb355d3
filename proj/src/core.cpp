#include "autocrat/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace autocrat {
namespace {

void check_matrix(const Matrix& m, std::size_t rows, std::size_t cols,
                  const char* name) {
  if (m.size() != rows) {
    throw InvalidInput(std::string(name) + ": expected " +
                       std::to_string(rows) + " rows, got " +
                       std::to_string(m.size()));
  }
  for (const auto& row : m) {
    if (row.size() != cols) {
      throw InvalidInput(std::string(name) + ": expected " +
                         std::to_string(cols) + " columns, got " +
                         std::to_string(row.size()));
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw InvalidInput(std::string(name) + ": non-finite entry");
      }
    }
  }
}

}  // namespace

ActionSet::ActionSet(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw InvalidInput("action set is empty");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) {
    throw InvalidInput("action labels must be distinct");
  }
}

std::size_t ActionSet::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw InvalidInput("unknown action: " + label);
  return static_cast<std::size_t>(it - labels_.begin());
}

StageGame::StageGame(ActionSet actions_x, ActionSet actions_y, Matrix u_x,
                     Matrix u_y)
    : actions_x_(std::move(actions_x)),
      actions_y_(std::move(actions_y)),
      u_x_(std::move(u_x)),
      u_y_(std::move(u_y)) {
  check_matrix(u_x_, actions_x_.size(), actions_y_.size(), "u_x");
  check_matrix(u_y_, actions_x_.size(), actions_y_.size(), "u_y");
}

MixedAction::MixedAction(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidInput("mixed action is empty");
  double sum = 0.0;
  for (double& w : weights_) {
    if (!std::isfinite(w) || w < -1e-12) {
      throw InvalidInput("mixed action has a negative or non-finite weight");
    }
    w = std::max(w, 0.0);
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidInput("mixed action weights sum to " + std::to_string(sum));
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    for (double& w : weights_) w /= sum;
  }
  for (double& w : weights_) w = std::min(w, 1.0);
}

MixedAction MixedAction::pure(std::size_t size, std::size_t index) {
  if (index >= size) throw InvalidInput("pure action index out of range");
  std::vector<double> w(size, 0.0);
  w[index] = 1.0;
  return MixedAction(std::move(w));
}

MixedAction MixedAction::uniform(std::size_t size) {
  return MixedAction(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

MixedAction MixedAction::mix(const MixedAction& a, const MixedAction& b,
                             double q) {
  if (a.size() != b.size()) throw InvalidInput("mixed action size mismatch");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("mixing weight outside [0,1]");
  std::vector<double> w(a.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = q * a[i] + (1.0 - q) * b[i];
  }
  return MixedAction(std::move(w));
}

bool MixedAction::is_pure(double tol) const {
  return std::any_of(weights_.begin(), weights_.end(),
                     [tol](double w) { return w >= 1.0 - tol; });
}

ObjectiveMatrix::ObjectiveMatrix(Matrix phi) : phi_(std::move(phi)) {
  if (phi_.empty() || phi_.front().empty()) {
    throw InvalidInput("objective matrix is empty");
  }
  check_matrix(phi_, phi_.size(), phi_.front().size(), "phi");
  additive_ = decompose_additive(phi_, 1e-9);
}

AlphaBetaGamma expand(const LinearRelation& rel) {
  if (const auto* kc = std::get_if<KappaChi>(&rel)) {
    return {-1.0, kc->chi, kc->kappa * (1.0 - kc->chi)};
  }
  return std::get<AlphaBetaGamma>(rel);
}

ObjectiveMatrix build_linear_phi(const StageGame& game,
                                 const LinearRelation& rel) {
  const AlphaBetaGamma c = expand(rel);
  if (!std::isfinite(c.alpha) || !std::isfinite(c.beta) ||
      !std::isfinite(c.gamma)) {
    throw InvalidInput("linear relation has non-finite coefficients");
  }
  Matrix phi(game.rows(), std::vector<double>(game.cols()));
  for (std::size_t i = 0; i < game.rows(); ++i) {
    for (std::size_t j = 0; j < game.cols(); ++j) {
      phi[i][j] = c.alpha * game.u_x()[i][j] + c.beta * game.u_y()[i][j] +
                  c.gamma;
    }
  }
  return ObjectiveMatrix(std::move(phi));
}

double eval_mixed(const ObjectiveMatrix& phi, const MixedAction& tau,
                  std::size_t s_y) {
  if (tau.size() != phi.rows()) throw InvalidInput("mixed action size mismatch");
  if (s_y >= phi.cols()) throw InvalidInput("opponent action out of range");
  double v = 0.0;
  for (std::size_t i = 0; i < phi.rows(); ++i) v += tau[i] * phi(i, s_y);
  return v;
}

std::vector<double> eval_row(const ObjectiveMatrix& phi,
                             const MixedAction& tau) {
  std::vector<double> out(phi.cols());
  for (std::size_t j = 0; j < phi.cols(); ++j) out[j] = eval_mixed(phi, tau, j);
  return out;
}

Envelope row_envelope(const ObjectiveMatrix& phi, const MixedAction& tau) {
  const auto row = eval_row(phi, tau);
  const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
  return {*lo, *hi};
}

std::optional<AdditiveParts> decompose_additive(const Matrix& phi,
                                                double tol) {
  if (!(tol > 0.0)) throw InvalidInput("additive tolerance must be positive");
  if (phi.empty() || phi.front().empty()) return std::nullopt;
  const std::size_t m = phi.size();
  const std::size_t n = phi.front().size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double d = phi[i][j] - phi[i][0] - phi[0][j] + phi[0][0];
      if (std::abs(d) > tol) return std::nullopt;
    }
  }
  AdditiveParts parts;
  parts.phi_x.resize(m);
  parts.phi_y.resize(n);
  for (std::size_t i = 0; i < m; ++i) parts.phi_x[i] = phi[i][0] - phi[0][0];
  for (std::size_t j = 0; j < n; ++j) parts.phi_y[j] = phi[0][j];
  return parts;
}

ObjectiveMatrix scaled(const ObjectiveMatrix& phi, double s) {
  Matrix m = phi.matrix();
  for (auto& row : m) {
    for (double& v : row) v *= s;
  }
  return ObjectiveMatrix(std::move(m));
}

ObjectiveMatrix shifted(const ObjectiveMatrix& phi, double k) {
  Matrix m = phi.matrix();
  for (auto& row : m) {
    for (double& v : row) v -= k;
  }
  return ObjectiveMatrix(std::move(m));
}

ObjectiveMatrix blend(const ObjectiveMatrix& a, const ObjectiveMatrix& b,
                      double q) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("objective shape mismatch");
  }
  Matrix m = a.matrix();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      m[i][j] = (1.0 - q) * a(i, j) + q * b(i, j);
    }
  }
  return ObjectiveMatrix(std::move(m));
}

}  // namespace autocrat
