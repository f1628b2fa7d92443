#pragma once

// Discrete fields built from coefficient vectors, and the IFE interpolant of an exact solution.

#include "mife/dofmap.hpp"

namespace mife {

template <int Dim>
struct FieldValue {
  Point<Dim> u;
  Tensor<Dim> grad;
  double p = 0.0;
};

/// U = sum_k X_k phi_k + u_J, P = sum_k X_k psi_k + p_J - c - offset on each element piece.
template <int Dim>
class DiscreteField {
 public:
  DiscreteField(const Discretization<Dim>& D, Eigen::VectorXd coefficients, bool with_correction,
                double pressure_constant)
      : D_(&D), dofs_(D.mesh), X_(std::move(coefficients)), correct_(with_correction),
        constant_(pressure_constant) {
    if (X_.size() < dofs_.size()) throw InvalidArgument("coefficient vector too short");
  }

  const Discretization<Dim>& discretization() const { return *D_; }
  const Eigen::VectorXd& coefficients() const { return X_; }

  /// Per-element evaluator; construct once per element, then call at points.
  class OnElement {
   public:
    OnElement(const DiscreteField& F, Index e)
        : F_(F), space_(F.D_->space(e)), g_(F.dofs_.local_to_global(F.D_->mesh, e)) {
      if (F.correct_ && F.D_->is_cut(e) && F.D_->has_correction())
        corr_ = F.D_->corrections[F.D_->cut_id[e]];
    }
    FieldValue<Dim> operator()(const Point<Dim>& x, Side s) const {
      space_.evaluate(x, s, sv_);
      FieldValue<Dim> v{corr_.velocity(s)(x), corr_.velocity(s).gradient,
                        corr_.pressure(s)(x) - F_.constant_};
      for (int k = 0; k < LocalSpace<Dim>::kLocal; ++k) {
        const double c = F_.X_[g_[k]];
        if (c == 0.0) continue;
        v.u += c * sv_.u[k];
        v.grad += c * sv_.grad[k];
        v.p += c * sv_.p[k];
      }
      return v;
    }

   private:
    const DiscreteField& F_;
    LocalSpace<Dim> space_;
    typename DofMap<Dim>::LocalDofs g_;
    PiecewisePair<Dim> corr_;
    mutable ShapeValues<Dim> sv_;
  };

  OnElement on(Index e) const { return OnElement(*this, e); }

  /// Integral of the pressure over the domain.
  double pressure_integral() const {
    double sum = 0.0;
    const auto& rule = simplex_rule<Dim>(DefaultDegrees<Dim>::volume);
    for (Index e = 0; e < D_->mesh.num_elements(); ++e) {
      const auto ev = on(e);
      for (const auto& piece : D_->pieces(e))
        for_each_point<Dim, Dim>(piece.vertices, rule, [&](const Point<Dim>& x, double w) {
          sum += w * ev(x, piece.side).p;
        });
    }
    return sum;
  }

  void shift_pressure(double delta) { constant_ += delta; }
  double pressure_constant() const { return constant_; }

 private:
  const Discretization<Dim>* D_;
  DofMap<Dim> dofs_;
  Eigen::VectorXd X_;
  bool correct_;
  double constant_;
};

/// Coefficients of the IFE interpolant: nodal velocity and pressure of the exact piece on the
/// node's side, zero bubbles. The correction is added when the field is evaluated.
template <int Dim>
Eigen::VectorXd ife_interpolate(const Discretization<Dim>& D) {
  const DofMap<Dim> dofs(D.mesh);
  Eigen::VectorXd X = Eigen::VectorXd::Zero(dofs.size());
  const auto& exact = D.problem->exact;
  for (Index node = 0; node < D.mesh.num_nodes(); ++node) {
    const Side s = side_of_value(D.dls.nodal_value(node));
    const Point<Dim>& x = D.mesh.node(node);
    const Point<Dim> u = exact.u(x, s);
    for (int i = 0; i < Dim; ++i) X[dofs.velocity(i, node)] = u[i];
    X[dofs.pressure(node)] = exact.p(x, s);
  }
  return X;
}

/// Field of the interpolant, including the correction pair (without the constant c_J).
template <int Dim>
DiscreteField<Dim> interpolant_field(const Discretization<Dim>& D) {
  return DiscreteField<Dim>(D, ife_interpolate(D), true, 0.0);
}

}  // namespace mife
