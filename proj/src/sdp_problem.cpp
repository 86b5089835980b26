#include "gpbound/sdp_problem.hpp"

#include <cmath>

#include "gpbound/errors.hpp"

namespace gpbound {

SymSparse::SymSparse(std::vector<SymEntry> entries) : entries_(std::move(entries)) {
  for (auto& e : entries_) {
    if (e.i > e.j) std::swap(e.i, e.j);
  }
}

double SymSparse::inner(const Eigen::MatrixXd& X) const {
  double sum = 0.0;
  for (const auto& e : entries_) {
    sum += e.i == e.j ? e.value * X(e.i, e.i) : e.value * (X(e.i, e.j) + X(e.j, e.i));
  }
  return sum;
}

void SymSparse::add_to(Eigen::MatrixXd& out, double coef) const {
  for (const auto& e : entries_) {
    out(e.i, e.j) += coef * e.value;
    if (e.i != e.j) out(e.j, e.i) += coef * e.value;
  }
}

Eigen::MatrixXd SymSparse::dense(int n) const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  add_to(M, 1.0);
  return M;
}

Bounds Bounds::free(Eigen::Index size) { return constant(size, std::nullopt, std::nullopt); }

Bounds Bounds::constant(Eigen::Index size, std::optional<double> lower,
                        std::optional<double> upper) {
  Bounds b;
  b.lo_.assign(size, lower.value_or(0.0));
  b.hi_.assign(size, upper.value_or(0.0));
  b.has_lo_.assign(size, lower.has_value());
  b.has_hi_.assign(size, upper.has_value());
  return b;
}

void Bounds::set(Eigen::Index i, std::optional<double> lower, std::optional<double> upper) {
  lo_[i] = lower.value_or(0.0);
  hi_[i] = upper.value_or(0.0);
  has_lo_[i] = lower.has_value();
  has_hi_[i] = upper.has_value();
}

void Bounds::append(std::optional<double> lower, std::optional<double> upper) {
  lo_.push_back(lower.value_or(0.0));
  hi_.push_back(upper.value_or(0.0));
  has_lo_.push_back(lower.has_value());
  has_hi_.push_back(upper.has_value());
}

bool Bounds::all_free() const {
  for (Eigen::Index i = 0; i < size(); ++i)
    if (has_lo_[i] || has_hi_[i]) return false;
  return true;
}

void Bounds::project_inplace(double* data) const {
  const auto n = size();
  for (Eigen::Index i = 0; i < n; ++i) data[i] = project(i, data[i]);
}

double Bounds::support_term(Eigen::Index i, double c, bool& unbounded) const {
  if (c > 0.0) {
    if (!has_lo_[i]) {
      unbounded = true;
      return 0.0;
    }
    return c * lo_[i];
  }
  if (c < 0.0) {
    if (!has_hi_[i]) {
      unbounded = true;
      return 0.0;
    }
    return c * hi_[i];
  }
  return 0.0;
}

bool Bounds::operator==(const Bounds& o) const {
  if (size() != o.size()) return false;
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (has_lo_[i] != o.has_lo_[i] || has_hi_[i] != o.has_hi_[i]) return false;
    if (has_lo_[i] && lo_[i] != o.lo_[i]) return false;
    if (has_hi_[i] && hi_[i] != o.hi_[i]) return false;
  }
  return true;
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::KEquipartition: return "keq";
    case ProblemKind::Gpkc: return "gpkc";
    case ProblemKind::Generic: return "generic";
  }
  return "?";
}

std::string to_string(Relaxation relax) {
  switch (relax) {
    case Relaxation::Sdp: return "sdp";
    case Relaxation::Dnn: return "dnn";
    case Relaxation::DnnMet: return "dnn+met";
  }
  return "?";
}

Relaxation relaxation_from_string(const std::string& s) {
  if (s == "sdp") return Relaxation::Sdp;
  if (s == "dnn") return Relaxation::Dnn;
  if (s == "dnn+met") return Relaxation::DnnMet;
  throw InvalidInput("unknown relaxation '" + s + "' (expected sdp, dnn or dnn+met)");
}

Eigen::VectorXd SdpProblem::apply_eq(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd out(num_eq());
  for (int r = 0; r < num_eq(); ++r) out(r) = eq_rows[r].inner(X);
  return out;
}

Eigen::VectorXd SdpProblem::apply_ineq(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd out(num_ineq());
  for (int r = 0; r < num_ineq(); ++r) out(r) = ineq_rows[r].inner(X);
  return out;
}

Eigen::MatrixXd SdpProblem::adjoint(const Eigen::VectorXd& y, const Eigen::VectorXd& ybar) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < num_eq(); ++r) eq_rows[r].add_to(out, y(r));
  for (int r = 0; r < num_ineq(); ++r) ineq_rows[r].add_to(out, ybar(r));
  return out;
}

void SdpProblem::validate() const {
  if (n < 1) throw InvalidInput("problem order must be positive");
  if (C.rows() != n || C.cols() != n) throw InvalidInput("objective has wrong shape");
  if ((C - C.transpose()).norm() > 1e-12 * (1.0 + C.norm())) {
    throw InvalidInput("objective must be symmetric");
  }
  if (b.size() != num_eq()) throw InvalidInput("rhs length differs from equality row count");
  if (ineq_bounds.size() != num_ineq()) throw InvalidInput("slack bounds have wrong length");
  if (box.size() != static_cast<Eigen::Index>(n) * n) throw InvalidInput("box has wrong size");
  auto check_rows = [&](const std::vector<SymSparse>& rows) {
    for (const auto& row : rows)
      for (const auto& e : row.entries())
        if (e.i < 0 || e.j >= n || !std::isfinite(e.value)) {
          throw InvalidInput("constraint entry out of range or non-finite");
        }
  };
  check_rows(eq_rows);
  check_rows(ineq_rows);
  for (int r = 0; r < num_ineq(); ++r) {
    if (ineq_bounds.has_lower(r) && ineq_bounds.has_upper(r) &&
        ineq_bounds.lower(r) > ineq_bounds.upper(r)) {
      throw InvalidInput("slack bound l > u in row " + std::to_string(r));
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Eigen::Index a = i + static_cast<Eigen::Index>(j) * n;
      const Eigen::Index t = j + static_cast<Eigen::Index>(i) * n;
      if (box.has_lower(a) != box.has_lower(t) || box.has_upper(a) != box.has_upper(t) ||
          (box.has_lower(a) && box.lower(a) != box.lower(t)) ||
          (box.has_upper(a) && box.upper(a) != box.upper(t))) {
        throw InvalidInput("matrix box must be symmetric");
      }
      if (box.has_lower(a) && box.has_upper(a) && box.lower(a) > box.upper(a)) {
        throw InvalidInput("box bound L > U");
      }
    }
  }
}

}  // namespace gpbound
