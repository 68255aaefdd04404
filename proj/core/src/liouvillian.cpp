// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/liouvillian.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "binary_io.hpp"
#include "kerrcrit/errors.hpp"

namespace kerrcrit
{

Superoperator::Superoperator(int cutoff, SparseRowMatrix matrix, Vectorization convention)
  : cutoff_(cutoff), matrix_(std::move(matrix)), convention_(convention)
{
  if (convention_ != Vectorization::column_stacking)
  {
    throw ConventionMismatch("superoperators must use column-stacking vectorization");
  }
  const Eigen::Index d = static_cast<Eigen::Index>(cutoff) + 1;
  if (cutoff < 0 || matrix_.rows() != d * d || matrix_.cols() != d * d)
  {
    throw DimensionMismatch("superoperator dimension does not match (cutoff+1)^2");
  }
  matrix_.makeCompressed();
}

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd &rho)
{
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd &v, int cutoff)
{
  const Eigen::Index d = cutoff + 1;
  if (v.size() != d * d)
  {
    throw DimensionMismatch("vector length does not match (cutoff+1)^2");
  }
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d);
}

Eigen::VectorXcd vectorized_identity(int cutoff)
{
  const Eigen::Index d = cutoff + 1;
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d * d);
  for (Eigen::Index k = 0; k < d; ++k)
  {
    e(k + d * k) = 1.0;
  }
  return e;
}

Complex vector_trace(const Eigen::VectorXcd &v, int cutoff)
{
  const Eigen::Index d = cutoff + 1;
  Complex tr = 0.0;
  for (Eigen::Index k = 0; k < d; ++k)
  {
    tr += v(k + d * k);
  }
  return tr;
}

namespace
{

struct Entry
{
  Eigen::Index row, col;
  Complex value;
};

std::vector<Entry> nonzeros(const Eigen::MatrixXcd &m)
{
  std::vector<Entry> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
  {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
      if (m(i, j) != Complex(0.0, 0.0))
      {
        out.push_back({i, j, m(i, j)});
      }
    }
  }
  return out;
}

}  // namespace

Superoperator build_liouvillian(const FockOperator &hamiltonian, double gamma)
{
  const Eigen::Index d = hamiltonian.dim();
  if (hamiltonian.entries.rows() != hamiltonian.entries.cols() || d != hamiltonian.cutoff + 1)
  {
    throw DimensionMismatch("Hamiltonian dimension does not match its cutoff");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
  {
    throw InvalidParameter("dissipation rate must be finite and non-negative");
  }
  const double scale = std::max(1.0, hamiltonian.entries.cwiseAbs().maxCoeff());
  if ((hamiltonian.entries - hamiltonian.entries.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
  {
    throw InvalidParameter("Hamiltonian is not Hermitian");
  }

  const auto h = nonzeros(hamiltonian.entries);
  const Complex I(0.0, 1.0);
  auto idx = [d](Eigen::Index m, Eigen::Index n) { return m + d * n; };

  std::vector<Eigen::Triplet<Complex, std::int64_t>> trip;
  trip.reserve(static_cast<std::size_t>(d * d) * (2 * h.size() / std::max<Eigen::Index>(d, 1) + 4));

  for (Eigen::Index n = 0; n < d; ++n)
  {
    for (Eigen::Index m = 0; m < d; ++m)
    {
      const Eigen::Index r = idx(m, n);
      // -i H rho  and  -(gamma/2) a^dag a rho  and  -(gamma/2) rho a^dag a
      trip.emplace_back(r, r, Complex(-0.5 * gamma * static_cast<double>(m + n), 0.0));
      // gamma a rho a^dag: (m, n) <- (m + 1, n + 1) with sqrt((m+1)(n+1))
      if (m + 1 < d && n + 1 < d)
      {
        trip.emplace_back(r, idx(m + 1, n + 1),
                          gamma * std::sqrt(static_cast<double>((m + 1) * (n + 1))));
      }
    }
  }
  for (const auto &e : h)
  {
    // -i H rho contributes L[(m, n), (p, n)] = -i H_mp
    // +i rho H contributes L[(m, n), (m, q)] = +i H_qn
    for (Eigen::Index n = 0; n < d; ++n)
    {
      trip.emplace_back(idx(e.row, n), idx(e.col, n), -I * e.value);
    }
    for (Eigen::Index m = 0; m < d; ++m)
    {
      trip.emplace_back(idx(m, e.col), idx(m, e.row), I * e.value);
    }
  }

  SparseRowMatrix L(d * d, d * d);
  L.setFromTriplets(trip.begin(), trip.end());
  L.prune(Complex(0.0, 0.0), 0.0);
  return Superoperator(hamiltonian.cutoff, std::move(L));
}

Superoperator build_liouvillian(const ModelParams &params, int cutoff)
{
  return build_liouvillian(hamiltonian(params, cutoff), params.gamma);
}

void apply_liouvillian(const Superoperator &L, const Eigen::VectorXcd &rho_vec,
                       Eigen::VectorXcd &out)
{
  if (rho_vec.size() != L.dim())
  {
    throw DimensionMismatch("vector length " + std::to_string(rho_vec.size()) +
                            " does not match superoperator dimension " + std::to_string(L.dim()));
  }
  out.noalias() = L.matrix() * rho_vec;
}

Eigen::VectorXcd apply_liouvillian(const Superoperator &L, const Eigen::VectorXcd &rho_vec)
{
  Eigen::VectorXcd out(L.dim());
  apply_liouvillian(L, rho_vec, out);
  return out;
}

Trajectory time_evolve(const Superoperator &L, const DensityMatrix &rho0, double t_final,
                       double dt, const EvolveOptions &options)
{
  if (!(dt > 0.0) || !(t_final >= 0.0))
  {
    throw InvalidParameter("time_evolve needs dt > 0 and t_final >= 0");
  }
  if (rho0.cutoff() != L.cutoff())
  {
    throw DimensionMismatch("initial state cutoff does not match the superoperator");
  }
  const std::size_t stride = std::max<std::size_t>(1, options.sample_stride);
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  const double h = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;
  const int c = L.cutoff();

  Eigen::VectorXcd y = vectorize(rho0.entries());
  const Complex trace0 = vector_trace(y, c);
  Eigen::VectorXcd k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.emplace_back(rho0.entries());

  for (std::size_t s = 1; s <= steps; ++s)
  {
    apply_liouvillian(L, y, k1);
    tmp = y + (0.5 * h) * k1;
    apply_liouvillian(L, tmp, k2);
    tmp = y + (0.5 * h) * k2;
    apply_liouvillian(L, tmp, k3);
    tmp = y + h * k3;
    apply_liouvillian(L, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double drift = std::abs(vector_trace(y, c) - trace0);
    if (!std::isfinite(drift) || drift > options.trace_tolerance || !y.allFinite())
    {
      throw StepTooLarge("trace drift " + std::to_string(drift) + " at t = " +
                         std::to_string(h * static_cast<double>(s)) + "; reduce dt");
    }
    if (s % stride == 0 || s == steps)
    {
      traj.times.push_back(h * static_cast<double>(s));
      traj.states.emplace_back(unvectorize(y, c));
    }
  }
  return traj;
}

using detail::get_f64;
using detail::get_i64;
using detail::put_f64;
using detail::put_i64;

void write_binary(const Superoperator &L, std::ostream &out)
{
  const auto &m = L.matrix();
  put_i64(out, L.cutoff());
  put_i64(out, L.dim());
  put_i64(out, L.nnz());
  put_i64(out, static_cast<std::int64_t>(L.convention()));
  for (Eigen::Index i = 0; i <= m.outerSize(); ++i)
  {
    put_i64(out, m.outerIndexPtr()[i]);
  }
  for (Eigen::Index k = 0; k < m.nonZeros(); ++k)
  {
    put_i64(out, m.innerIndexPtr()[k]);
  }
  for (Eigen::Index k = 0; k < m.nonZeros(); ++k)
  {
    put_f64(out, m.valuePtr()[k].real());
    put_f64(out, m.valuePtr()[k].imag());
  }
  if (!out)
  {
    throw FormatError("failed to write superoperator dump");
  }
}

Superoperator read_superoperator_binary(std::istream &in)
{
  const std::int64_t cutoff = get_i64(in);
  const std::int64_t dim = get_i64(in);
  const std::int64_t nnz = get_i64(in);
  const std::int64_t tag = get_i64(in);
  if (cutoff < 0 || dim != (cutoff + 1) * (cutoff + 1) || nnz < 0 || nnz > dim * dim)
  {
    throw FormatError("inconsistent superoperator header");
  }
  if (tag != static_cast<std::int64_t>(Vectorization::column_stacking))
  {
    throw ConventionMismatch("dump uses vectorization tag " + std::to_string(tag));
  }
  std::vector<std::int64_t> row_ptr(static_cast<std::size_t>(dim + 1));
  for (auto &p : row_ptr)
  {
    p = get_i64(in);
  }
  if (row_ptr.front() != 0 || row_ptr.back() != nnz)
  {
    throw FormatError("row pointer array inconsistent with nnz");
  }
  std::vector<Eigen::Triplet<Complex, std::int64_t>> trip;
  trip.reserve(static_cast<std::size_t>(nnz));
  std::vector<std::int64_t> cols(static_cast<std::size_t>(nnz));
  for (auto &c : cols)
  {
    c = get_i64(in);
    if (c < 0 || c >= dim)
    {
      throw FormatError("column index out of range");
    }
  }
  std::int64_t row = 0;
  for (std::int64_t k = 0; k < nnz; ++k)
  {
    while (row + 1 <= dim && row_ptr[static_cast<std::size_t>(row + 1)] <= k)
    {
      ++row;
    }
    const double re = get_f64(in);
    const double im = get_f64(in);
    trip.emplace_back(row, cols[static_cast<std::size_t>(k)], Complex(re, im));
  }
  SparseRowMatrix m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return Superoperator(static_cast<int>(cutoff), std::move(m));
}

}  // namespace kerrcrit
