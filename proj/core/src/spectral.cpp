// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "kerrcrit/arnoldi.hpp"
#include "kerrcrit/errors.hpp"

namespace kerrcrit
{

void SolverOptions::validate() const
{
  if (dense_dim_threshold < 0 || krylov_nev < 1 || krylov_subspace < 2 * krylov_nev + 2 ||
      !(tolerance > 0.0) || max_restarts < 1)
  {
    throw InvalidParameter("solver options need nev >= 1, subspace >= 2 nev + 2, tolerance > 0 and "
                           "max_restarts >= 1");
  }
}

std::string_view to_string(GapMethod method)
{
  return method == GapMethod::krylov ? "krylov" : "dense";
}

namespace
{

double zero_tolerance(int cutoff, double gamma)
{
  return 1e-9 * gamma * std::max(cutoff, 1);
}

bool same_re(double a, double b)
{
  return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)) + 1e-13;
}

// Index of the chosen eigenvalue in the list (before reflecting to Im >= 0).
std::size_t select_index(const std::vector<Complex> &ev, double zero_tol)
{
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < ev.size(); ++i)
  {
    if (std::abs(ev[i]) > zero_tol)
    {
      cand.push_back(i);
    }
  }
  if (cand.empty())
  {
    throw NotConverged("no nonzero eigenvalue available for the gap");
  }
  std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
    const Complex x = ev[a];
    const Complex y = ev[b];
    if (!same_re(x.real(), y.real()))
    {
      return x.real() > y.real();
    }
    if (std::abs(x.imag()) != std::abs(y.imag()))
    {
      return std::abs(x.imag()) < std::abs(y.imag());
    }
    return x.imag() > y.imag();
  });

  const Complex first = ev[cand[0]];
  for (std::size_t k = 1; k < cand.size(); ++k)
  {
    const Complex second = ev[cand[k]];
    const bool conjugate_partner =
      std::abs(first.imag()) > 1e-12 && std::abs(second - std::conj(first)) <= 1e-9 * std::max(1.0, std::abs(first));
    if (conjugate_partner)
    {
      continue;
    }
    if (std::abs(second - first) < 1e-12)
    {
      throw GapAmbiguous("two slowest nonzero modes coincide within 1e-12", first.real(), first.imag(),
                         second.real(), second.imag());
    }
    break;
  }
  return cand[0];
}

Complex representative(Complex z)
{
  return {z.real(), std::abs(z.imag())};
}

GapResult finish(const Superoperator &L, Complex lambda, const Eigen::VectorXcd &v, GapMethod method)
{
  GapResult g;
  g.method = method;
  g.cutoff_used = L.cutoff();
  // Report the Im >= 0 member; its eigenvector is the conjugate-transposed
  // partner, so the residual is evaluated before reflecting.
  const Eigen::VectorXcd Lv = L.matrix() * v;
  g.residual = (Lv - lambda * v).norm() / v.norm();
  g.lambda = representative(lambda);
  g.relaxation_time = -1.0 / g.lambda.real();
  return g;
}

// Eigenvector of a known eigenvalue by inverse iteration with a slightly
// displaced shift.
Eigen::VectorXcd inverse_iteration(const Superoperator &L, Complex lambda)
{
  using ColMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>;
  const Eigen::Index n = L.dim();
  const double shift_scale = std::max(1.0, std::abs(lambda));
  const Complex sigma = lambda + Complex(1e-10, 1e-10) * shift_scale;
  ColMatrix A = L.matrix().cast<Complex>();
  ColMatrix I(n, n);
  I.setIdentity();
  A -= sigma * I;
  A.makeCompressed();
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu(A);
  if (lu.info() != Eigen::Success)
  {
    // The shift hit the eigenvalue exactly; any direction in the kernel works.
    throw NotConverged("inverse iteration factorization failed");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n) + Eigen::VectorXcd::LinSpaced(n, 0.0, 1.0) * Complex(0.0, 1.0);
  v.normalize();
  for (int it = 0; it < 3; ++it)
  {
    v = lu.solve(v);
    v.normalize();
  }
  return v;
}

GapResult dense_gap(const Superoperator &L)
{
  const Eigen::MatrixXcd dense = Eigen::MatrixXcd(L.matrix());
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(dense, false);
  if (es.info() != Eigen::Success)
  {
    throw NotConverged("dense eigensolver failed");
  }
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  const std::size_t i = select_index(ev, zero_tolerance(L.cutoff(), 1.0));
  return finish(L, ev[i], inverse_iteration(L, ev[i]), GapMethod::dense);
}

GapResult krylov_gap(const Superoperator &L, const ConstrainedSolver &solver, const SolverOptions &options)
{
  const int c = L.cutoff();
  const Eigen::VectorXcd &rho = solver.steady_vector();
  // A = L^{-1} on the trace-free subspace, composed with the projector
  // I - rho_ss tr(.) that removes the zero mode. Eigenvalues are 1 / lambda.
  LinearOperator op = [&](const Eigen::VectorXcd &in, Eigen::VectorXcd &out) {
    Eigen::VectorXcd b = in - rho * vector_trace(in, c);
    out = solver.solve_traceless(b);
  };

  ArnoldiOptions ao;
  ao.nev = options.krylov_nev;
  ao.ncv = options.krylov_subspace;
  ao.tol = options.tolerance;
  ao.max_restarts = options.max_restarts;
  const ArnoldiResult ar = arnoldi_largest(op, L.dim(), ao);
  if (ar.converged < 1)
  {
    throw NotConverged("Krylov iteration stagnated after " + std::to_string(ar.restarts) + " restarts");
  }

  std::vector<Complex> lambdas;
  for (int i = 0; i < ar.converged; ++i)
  {
    lambdas.push_back(ar.values(i) == Complex(0.0, 0.0) ? Complex(0.0, 0.0) : 1.0 / ar.values(i));
  }
  const std::size_t i = select_index(lambdas, zero_tolerance(c, 1.0));
  GapResult g = finish(L, lambdas[i], ar.vectors.col(static_cast<Eigen::Index>(i)), GapMethod::krylov);
  if (!(g.residual < 1e-8))
  {
    throw NotConverged("Krylov gap residual " + std::to_string(g.residual) + " above 1e-8");
  }
  return g;
}

}  // namespace

Complex select_gap(const std::vector<Complex> &eigenvalues, double zero_tol)
{
  return representative(eigenvalues[select_index(eigenvalues, zero_tol)]);
}

GapResult liouvillian_gap(const Superoperator &L, const ConstrainedSolver &solver, const SolverOptions &options)
{
  options.validate();
  if (L.dim() <= options.dense_dim_threshold)
  {
    return dense_gap(L);
  }
  return krylov_gap(L, solver, options);
}

GapResult liouvillian_gap(const Superoperator &L, const SolverOptions &options)
{
  options.validate();
  if (L.dim() <= options.dense_dim_threshold)
  {
    return dense_gap(L);
  }
  const ConstrainedSolver solver(L);
  return krylov_gap(L, solver, options);
}

GapResult liouvillian_gap(const ModelParams &params, const CutoffChoice &cutoff, const SolverOptions &options)
{
  const int c = resolve_cutoff(params, cutoff);
  const Superoperator L = build_liouvillian(params, c);
  return liouvillian_gap(L, options);
}

PointAnalysis analyze_point(const ModelParams &params, int cutoff, const SolverOptions &options)
{
  const Superoperator L = build_liouvillian(params, cutoff);
  const ConstrainedSolver solver(L);
  PointAnalysis out;
  out.gap = liouvillian_gap(L, solver, options);
  out.steady_state = solver.steady_state();
  out.observables = observables(out.steady_state, params.n_scale);
  return out;
}

std::vector<Complex> full_spectrum(const Superoperator &L)
{
  if (L.dim() > kFullSpectrumMaxDim)
  {
    throw DimensionTooLarge("full_spectrum limited to dimension " + std::to_string(kFullSpectrumMaxDim));
  }
  const Eigen::MatrixXcd dense = Eigen::MatrixXcd(L.matrix());
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(dense, false);
  if (es.info() != Eigen::Success)
  {
    throw NotConverged("dense eigensolver failed");
  }
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

std::vector<Complex> full_spectrum(const ModelParams &params, int cutoff)
{
  return full_spectrum(build_liouvillian(params, cutoff));
}

}  // namespace kerrcrit
