// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "kerrcrit/density_matrix.hpp"
#include "kerrcrit/model.hpp"

namespace kerrcrit
{

// Tag stored with every superoperator. Only column stacking is produced by
// this library: vec(A rho B) = (B^T kron A) vec(rho), so element (m, n) of a
// density matrix lives at index m + (cutoff + 1) * n.
enum class Vectorization : std::int64_t
{
  column_stacking = 1,
  row_stacking = 2,
};

using SparseRowMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor, std::int64_t>;

class Superoperator
{
public:
  Superoperator(int cutoff, SparseRowMatrix matrix,
                Vectorization convention = Vectorization::column_stacking);

  int cutoff() const { return cutoff_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  Eigen::Index nnz() const { return matrix_.nonZeros(); }
  Vectorization convention() const { return convention_; }
  const SparseRowMatrix &matrix() const { return matrix_; }

  Eigen::Index index(Eigen::Index m, Eigen::Index n) const { return m + (cutoff_ + 1) * n; }

  // Frobenius norm, the scale used for residual tolerances.
  double norm() const { return matrix_.norm(); }

private:
  int cutoff_;
  SparseRowMatrix matrix_;
  Vectorization convention_;
};

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd &rho);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd &v, int cutoff);
// Column-stacked identity: the left null vector of every trace-preserving L.
Eigen::VectorXcd vectorized_identity(int cutoff);
// tr(rho) evaluated on a column-stacked vector.
Complex vector_trace(const Eigen::VectorXcd &v, int cutoff);

// L rho = -i[H, rho] + (gamma/2)(2 a rho a^dag - a^dag a rho - rho a^dag a).
Superoperator build_liouvillian(const FockOperator &hamiltonian, double gamma);
Superoperator build_liouvillian(const ModelParams &params, int cutoff);

Eigen::VectorXcd apply_liouvillian(const Superoperator &L, const Eigen::VectorXcd &rho_vec);
void apply_liouvillian(const Superoperator &L, const Eigen::VectorXcd &rho_vec,
                       Eigen::VectorXcd &out);

struct EvolveOptions
{
  std::size_t sample_stride = 1;  // keep every k-th step (the last step is always kept)
  double trace_tolerance = 1e-8;
};

struct Trajectory
{
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

// Fixed-step classical Runge-Kutta integration of d vec(rho)/dt = L vec(rho).
// Throws StepTooLarge when the trace drifts by more than the tolerance or the
// state stops being finite.
Trajectory time_evolve(const Superoperator &L, const DensityMatrix &rho0, double t_final,
                       double dt, const EvolveOptions &options = {});

// Binary layout, all fields little-endian 64-bit:
//   int64 cutoff, int64 dim, int64 nnz, int64 convention tag,
//   int64 row_ptr[dim + 1], int64 col_index[nnz], float64 (re, im)[nnz].
void write_binary(const Superoperator &L, std::ostream &out);
Superoperator read_superoperator_binary(std::istream &in);

}  // namespace kerrcrit
