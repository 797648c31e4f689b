#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "equilab/lie_derivative.hpp"
#include "equilab/sl2.hpp"

namespace equilab::ode {

using cplx = std::complex<double>;

/// Denominator γ + β + (γ - β)e^{-2t} of the curve-average identities.
double lemma61_denominator(const LieVector& W, double t);
/// Start of the admissible range: positive root of the denominator (or 0) plus 0.1.
double t0_threshold(const LieVector& W);

struct IdentitySides {
  cplx lhs, rhs;
  double relative_residual = 0.0;  // |lhs - rhs| / (1 + |lhs|)
};

struct Lemma61Report {
  // boundary differences and k, k', k'' along the translated curve
  cplx A, B, C, k, dk, d2k;
  // quadrature averages of Uf, U²f, UXf
  cplx Uf, U2f, UXf;
  IdentitySides eq_uf;          // first identity, as printed
  IdentitySides eq_u2f;         // second identity with ΘXf expanded through [Θ,X] = -R
  IdentitySides eq_u2f_printed; // second identity as printed (diagnostic)
  double quad_error = 0.0;
};

struct Lemma61Options {
  int order = 24;
  double panel_length = 0.1;
};

/// Both sides of the Uf and U²f identities for f with Θf = inf, on SL(2,R) with trivial Γ.
Lemma61Report lemma61(const LieVector& W, const GroupFunction& f, int n, const Sl2Element& p, double sigma, double t,
                      const Lemma61Options& opt = {});

/// |central difference in s of p·exp(sZ2)·exp(tZ1) - (same point)·Ad_{exp(-tZ1)}Z2| (max entry).
double lemma62_derivative(const LieVector& Z1, const LieVector& Z2, const Sl2Element& p, double t, double s,
                          double h = 1e-5);

struct GReport {
  cplx assembled;  // from A, B, C, k, k', k''
  cplx direct;     // e^t ((1/σ)∫U²f - in(1/σ)∫Uf) by quadrature
  cplx printed;    // the closed form exactly as printed (diagnostic)
  double relative_residual = 0.0;
};

/// G(t) with k'' + k' + μk = e^{-t}G(t); requires t > t0(W).
GReport assemble_G(const LieVector& W, const GroupFunction& f, int n, const Sl2Element& p, double sigma, double t,
                   const Lemma61Options& opt = {});

enum class CaseTag { Oscillatory, Real, Critical, NonPositive };
std::string to_string(CaseTag c);

/// ν ∈ R≥0 ∪ iR>0 with 1 - ν² = 4μ.
cplx spectral_nu(double mu);

struct OdeProblem {
  double mu = 0.0;
  cplx nu;
  double t0 = 0.0, t1 = 1.0;
  std::function<cplx(double)> G;
  cplx k1, dk1;  // k(t1), k'(t1)

  static OdeProblem make(double mu, double t0, double t1, std::function<cplx(double)> G, cplx k1, cplx dk1);
  void validate() const;
  CaseTag case_tag() const;
  /// |μ - 1/4| < 1e-8 uses the repeated-root formula.
  bool critical() const;
};

/// Closed-form solution with c₁, c₂ fitted to the initial data.
class ClosedForm {
 public:
  explicit ClosedForm(OdeProblem prob);
  cplx c1() const { return c1_; }
  cplx c2() const { return c2_; }
  const OdeProblem& problem() const { return prob_; }
  cplx value(double t) const;
  cplx derivative(double t) const;
  /// Values on an ascending grid ≥ t1, accumulating the inner integrals piecewise.
  std::vector<cplx> values(const std::vector<double>& ts) const;

 private:
  struct Inner {
    cplx first, second;
  };
  Inner inner(double a, double b) const;
  cplx assemble(double t, const Inner& in, bool derivative) const;
  OdeProblem prob_;
  cplx c1_, c2_;
};

cplx solve_closed_form(const OdeProblem& prob, double t);

struct ExpansionCoefficients {
  cplx D_plus, D_minus;
  double remainder_constant = 0.0;  // max |k - leading| / ((t+1)e^{-t}) on the probe grid
  CaseTag tag = CaseTag::Real;
  double tail_end = 0.0;
  double sup_G = 0.0;
};

struct ExtractOptions {
  double probe_span = 60.0;
  std::size_t probe_points = 601;
  double remainder_from = 2.0;  // remainder probed on [t1 + from, t1 + to]
  double remainder_to = 10.0;
  double tail_tolerance = 1e-12;
};

ExpansionCoefficients extract_coefficients(const OdeProblem& prob, const ExtractOptions& opt = {});

/// Leading part of k(t) for the given coefficients.
cplx leading_terms(const ExpansionCoefficients& c, const OdeProblem& prob, double t);

}  // namespace equilab::ode
