#ifndef AUTOCRAT_CORE_HPP_
#define AUTOCRAT_CORE_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace autocrat {

using Matrix = std::vector<std::vector<double>>;

// Errors carry a short machine-readable code used by the command line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& message)
      : Error("invalid_input", message) {}
};

class NotEnforceable : public Error {
 public:
  explicit NotEnforceable(const std::string& message)
      : Error("not_enforceable", message) {}
};

class SolverFailure : public Error {
 public:
  explicit SolverFailure(const std::string& message)
      : Error("solver_failure", message) {}
};

class ActionSet {
 public:
  explicit ActionSet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  // Index of a label; throws InvalidInput when absent.
  std::size_t index_of(const std::string& label) const;
  bool operator==(const ActionSet& other) const {
    return labels_ == other.labels_;
  }

 private:
  std::vector<std::string> labels_;
};

class StageGame {
 public:
  StageGame(ActionSet actions_x, ActionSet actions_y, Matrix u_x, Matrix u_y);

  const ActionSet& actions_x() const { return actions_x_; }
  const ActionSet& actions_y() const { return actions_y_; }
  const Matrix& u_x() const { return u_x_; }
  const Matrix& u_y() const { return u_y_; }
  std::size_t rows() const { return actions_x_.size(); }
  std::size_t cols() const { return actions_y_.size(); }

 private:
  ActionSet actions_x_;
  ActionSet actions_y_;
  Matrix u_x_;
  Matrix u_y_;
};

class MixedAction {
 public:
  // Weights summing to 1 within 1e-9 are renormalized; larger deviations
  // and negative entries below -1e-12 are rejected.
  explicit MixedAction(std::vector<double> weights);

  static MixedAction pure(std::size_t size, std::size_t index);
  static MixedAction uniform(std::size_t size);
  // q*a + (1-q)*b.
  static MixedAction mix(const MixedAction& a, const MixedAction& b, double q);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  bool is_pure(double tol = 1e-12) const;

 private:
  std::vector<double> weights_;
};

struct AdditiveParts {
  std::vector<double> phi_x;
  std::vector<double> phi_y;
};

class ObjectiveMatrix {
 public:
  // Validates shape and attaches an additive decomposition when one exists
  // at tolerance 1e-9.
  explicit ObjectiveMatrix(Matrix phi);

  std::size_t rows() const { return phi_.size(); }
  std::size_t cols() const { return phi_.front().size(); }
  double operator()(std::size_t i, std::size_t j) const { return phi_[i][j]; }
  const Matrix& matrix() const { return phi_; }
  const std::optional<AdditiveParts>& additive() const { return additive_; }

 private:
  Matrix phi_;
  std::optional<AdditiveParts> additive_;
};

struct AlphaBetaGamma {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

struct KappaChi {
  double kappa = 0.0;
  double chi = 0.0;
};

using LinearRelation = std::variant<AlphaBetaGamma, KappaChi>;

// (kappa, chi) -> (-1, chi, kappa*(1-chi)); identity on the general form.
AlphaBetaGamma expand(const LinearRelation& rel);

ObjectiveMatrix build_linear_phi(const StageGame& game,
                                 const LinearRelation& rel);

double eval_mixed(const ObjectiveMatrix& phi, const MixedAction& tau,
                  std::size_t s_y);

// phi(tau, s) for every opponent action s.
std::vector<double> eval_row(const ObjectiveMatrix& phi,
                             const MixedAction& tau);

struct Envelope {
  double min = 0.0;
  double max = 0.0;
};

Envelope row_envelope(const ObjectiveMatrix& phi, const MixedAction& tau);

// Normalized so that phi_x[0] = 0.
std::optional<AdditiveParts> decompose_additive(const Matrix& phi,
                                                double tol);

ObjectiveMatrix scaled(const ObjectiveMatrix& phi, double s);
ObjectiveMatrix shifted(const ObjectiveMatrix& phi, double k);
// (1-q)*a + q*b.
ObjectiveMatrix blend(const ObjectiveMatrix& a, const ObjectiveMatrix& b,
                      double q);

}  // namespace autocrat

#endif  // AUTOCRAT_CORE_HPP_
