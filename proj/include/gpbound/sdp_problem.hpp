#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gpbound {

// One stored entry of a sparse symmetric matrix; (i, j) with i <= j stands
// for both (i, j) and (j, i).
struct SymEntry {
  int i;
  int j;
  double value;
};

// Sparse symmetric constraint matrix.
class SymSparse {
 public:
  SymSparse() = default;
  explicit SymSparse(std::vector<SymEntry> entries);

  const std::vector<SymEntry>& entries() const { return entries_; }

  // Trace inner product <this, X>.
  double inner(const Eigen::MatrixXd& X) const;
  // out += coef * this.
  void add_to(Eigen::MatrixXd& out, double coef) const;
  Eigen::MatrixXd dense(int n) const;

 private:
  std::vector<SymEntry> entries_;
};

// Elementwise interval bounds. A missing side is recorded by a flag; the
// stored value on that side is meaningless and never enters arithmetic.
class Bounds {
 public:
  Bounds() = default;
  static Bounds free(Eigen::Index size);
  static Bounds constant(Eigen::Index size, std::optional<double> lower,
                         std::optional<double> upper);

  Eigen::Index size() const { return lo_.size(); }
  bool has_lower(Eigen::Index i) const { return has_lo_[i]; }
  bool has_upper(Eigen::Index i) const { return has_hi_[i]; }
  double lower(Eigen::Index i) const { return lo_[i]; }
  double upper(Eigen::Index i) const { return hi_[i]; }
  void set(Eigen::Index i, std::optional<double> lower, std::optional<double> upper);
  void append(std::optional<double> lower, std::optional<double> upper);

  // True when no entry has a finite bound.
  bool all_free() const;

  double project(Eigen::Index i, double x) const {
    if (has_lo_[i] && x < lo_[i]) return lo_[i];
    if (has_hi_[i] && x > hi_[i]) return hi_[i];
    return x;
  }
  // Applies project() entrywise over contiguous storage of length size().
  void project_inplace(double* data) const;

  // inf { c * w : lower_i <= w <= upper_i }. Sets `unbounded` when c pairs
  // with a missing side; the returned number then covers only finite terms.
  double support_term(Eigen::Index i, double c, bool& unbounded) const;

  bool operator==(const Bounds& o) const;

 private:
  std::vector<double> lo_, hi_;
  std::vector<char> has_lo_, has_hi_;
};

enum class ProblemKind { KEquipartition, Gpkc, Generic };
enum class Relaxation { Sdp, Dnn, DnnMet };

std::string to_string(ProblemKind kind);
std::string to_string(Relaxation relax);
Relaxation relaxation_from_string(const std::string& s);

struct ModelTag {
  ProblemKind problem = ProblemKind::Generic;
  Relaxation relaxation = Relaxation::Sdp;
  int k = 0;  // k-equipartition only
  int m = 0;  // group size, k-equipartition only
};

// Conic problem
//   min <C, X>  s.t.  A(X) = b,  B(X) = s,  X psd,  L <= X <= U,  l <= s <= u.
struct SdpProblem {
  int n = 0;
  Eigen::MatrixXd C;
  std::vector<SymSparse> eq_rows;
  Eigen::VectorXd b;
  std::vector<SymSparse> ineq_rows;
  Bounds ineq_bounds;  // [l, u], size q
  Bounds box;          // [L, U] over the column-major n*n entries
  ModelTag tag;
  // Triangle cuts already present, as ordered (i, j, r).
  std::vector<std::array<int, 3>> met_cuts;

  int num_eq() const { return static_cast<int>(eq_rows.size()); }
  int num_ineq() const { return static_cast<int>(ineq_rows.size()); }

  Eigen::VectorXd apply_eq(const Eigen::MatrixXd& X) const;    // A(X)
  Eigen::VectorXd apply_ineq(const Eigen::MatrixXd& X) const;  // B(X)
  // A^* y + B^* ybar
  Eigen::MatrixXd adjoint(const Eigen::VectorXd& y, const Eigen::VectorXd& ybar) const;

  // Throws InvalidInput when dimensions, symmetry or bound ordering are off.
  void validate() const;
};

}  // namespace gpbound
