// Preconditioned conjugate gradients, generic over the vector type.
//
// The operator, preconditioner and inner product are callables; the vector
// type needs copy, operator+=, operator-= and operator*=(double).
#pragma once

#include <cmath>
#include <vector>

namespace filament {

struct CgResult {
  int iterations = 0;
  bool converged = false;
  double relative_residual = 0.0;
  std::vector<double> history;  ///< relative residual after each iteration
};

struct CgOptions {
  double tol = 1e-10;
  int max_iter = 1000;
};

/// Solve A x = b starting from the incoming x.
template <class V, class Op, class Prec, class Dot>
CgResult conjugate_gradient(const Op& A, const Prec& M, const Dot& dot, const V& b, V& x, const CgOptions& opt) {
  CgResult res;
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    x *= 0.0;
    res.converged = true;
    return res;
  }
  V r = b;
  r -= A(x);
  double rel = std::sqrt(dot(r, r)) / bnorm;
  res.history.push_back(rel);
  if (rel <= opt.tol) {
    res.converged = true;
    res.relative_residual = rel;
    return res;
  }
  V z = M(r);
  V p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= opt.max_iter; ++it) {
    const V q = A(p);
    const double alpha = rz / dot(p, q);
    V step = p;
    step *= alpha;
    x += step;
    V dq = q;
    dq *= alpha;
    r -= dq;
    rel = std::sqrt(dot(r, r)) / bnorm;
    res.history.push_back(rel);
    res.iterations = it;
    if (rel <= opt.tol) {
      res.converged = true;
      break;
    }
    z = M(r);
    const double rz_new = dot(r, z);
    p *= rz_new / rz;
    p += z;
    rz = rz_new;
  }
  res.relative_residual = rel;
  return res;
}

}  // namespace filament
