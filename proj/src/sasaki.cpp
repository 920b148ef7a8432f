#include "sasakigeo/sasaki.hpp"

#include <cmath>

namespace sasakigeo {

WeightedSasakiMetric::WeightedSasakiMetric(std::shared_ptr<const ChartedManifold> b,
                                           double f1_, double f2_)
    : base(std::move(b)), f1(f1_), f2(f2_) {
  if (!base) throw ConfigError("weighted Sasaki metric needs a base manifold");
  if (f1 <= 0.0 || f2 <= 0.0) throw ConfigError("f1 and f2 must be positive");
}

SplitTangentVector SplitTangentVector::zero(int m) {
  return {VectorXd::Zero(m), VectorXd::Zero(m)};
}

SplitTangentVector SplitTangentVector::horizontal(const VectorXd& h) {
  return {h, VectorXd::Zero(h.size())};
}

SplitTangentVector SplitTangentVector::vertical(const VectorXd& v) {
  return {VectorXd::Zero(v.size()), v};
}

SplitTangentVector SplitTangentVector::operator+(const SplitTangentVector& o) const {
  return {h + o.h, v + o.v};
}

SplitTangentVector SplitTangentVector::operator-(const SplitTangentVector& o) const {
  return {h - o.h, v - o.v};
}

SplitTangentVector SplitTangentVector::operator*(double s) const {
  return {h * s, v * s};
}

double SplitTangentVector::max_abs() const {
  double a = h.size() ? h.cwiseAbs().maxCoeff() : 0.0;
  double b = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  return std::max(a, b);
}

AdaptedFrame adapted_frame(const MatrixXd& g, const VectorXd& u) {
  const int m = static_cast<int>(g.rows());
  std::vector<VectorXd> seed;
  for (int i = 0; i < m; ++i) seed.push_back(VectorXd::Unit(m, i));
  std::optional<VectorXd> last;
  if (u.size() == m && u.norm() > 1e-14) last = u;
  return {gram_schmidt_frame(g, seed, last)};
}

SasakiPointData::SasakiPointData(const WeightedSasakiMetric& G,
                                 const TangentBundlePoint& P)
    : m_(G.base->dim()), f1_(G.f1), f2_(G.f2), x_(P.x), u_(P.u), base_(G.base) {
  if (u_.size() != m_) throw ShapeError("fiber vector dimension mismatch");
  g_ = base_->metric(x_);
  ginv_ = base_->metric_inverse(x_);
  frame_ = adapted_frame(g_, u_).e;
  CurvaturePair R = base_->riemann(x_);
  Rlow_ = std::move(R.lowered);
  Rmix_ = std::move(R.mixed);

  ric_ = MatrixXd::Zero(m_, m_);
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b) {
      double v = 0.0;
      for (int c = 0; c < m_; ++c)
        for (int dd = 0; dd < m_; ++dd) v += ginv_(c, dd) * Rlow_({a, c, dd, b});
      ric_(a, b) = v;
    }
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b) S_ += ginv_(a, b) * ric_(a, b);
}

VectorXd SasakiPointData::curv_op(const VectorXd& a, const VectorXd& b,
                                  const VectorXd& c) const {
  VectorXd out = VectorXd::Zero(m_);
  for (int i = 0; i < m_; ++i) {
    double ai = a(i);
    if (ai == 0.0) continue;
    for (int j = 0; j < m_; ++j) {
      double bj = b(j);
      if (bj == 0.0) continue;
      for (int k = 0; k < m_; ++k) {
        double ck = c(k);
        if (ck == 0.0) continue;
        double w = ai * bj * ck;
        for (int l = 0; l < m_; ++l) out(l) += w * Rmix_({i, j, k, l});
      }
    }
  }
  return out;
}

const DenseTensor& SasakiPointData::nabla_lowered() const {
  if (!nablaR_) nablaR_ = base_->nabla_riemann(x_);
  return *nablaR_;
}

VectorXd SasakiPointData::nabla_curv_op(const VectorXd& d, const VectorXd& a,
                                        const VectorXd& b, const VectorXd& c) const {
  const DenseTensor& nab = nabla_lowered();
  VectorXd low = VectorXd::Zero(m_);
  for (int p = 0; p < m_; ++p) {
    double dp = d(p);
    if (dp == 0.0) continue;
    for (int i = 0; i < m_; ++i) {
      double ai = a(i);
      if (ai == 0.0) continue;
      for (int j = 0; j < m_; ++j) {
        double bj = b(j);
        if (bj == 0.0) continue;
        double w = dp * ai * bj;
        for (int k = 0; k < m_; ++k) {
          double ck = c(k);
          if (ck == 0.0) continue;
          for (int l = 0; l < m_; ++l) low(l) += w * ck * nab({p, i, j, k, l});
        }
      }
    }
  }
  return ginv_ * low;
}

namespace {

// (nabla_D scriptR)(A,B) as a vertical m-vector, for general split arguments.
VectorXd nabla_script(const SasakiPointData& d, const SplitTangentVector& D,
                      const SplitTangentVector& A, const SplitTangentVector& B) {
  return d.nabla_curv_op(D.h, A.h, B.h, d.u()) + d.curv_op(A.h, B.h, D.v);
}

} // namespace

SplitTangentVector script_R(const SasakiPointData& d, const SplitTangentVector& X,
                            const SplitTangentVector& Y) {
  return SplitTangentVector::vertical(d.curv_op(X.h, Y.h, d.u()));
}

SplitTangentVector tensor_A(const SasakiPointData& d, const SplitTangentVector& X,
                            const SplitTangentVector& Y) {
  const double half_delta = 0.5 * d.delta();
  VectorXd out = VectorXd::Zero(d.dim());
  for (const VectorXd& e : d.frame()) {
    double c = d.inner(d.rr(X.h, e), Y.v) + d.inner(d.rr(Y.h, e), X.v);
    out += half_delta * c * e;
  }
  return SplitTangentVector::horizontal(out);
}

SplitTangentVector tensor_B(const SasakiPointData& d, const VectorXd& grad_phi2,
                            const SplitTangentVector& X, const SplitTangentVector& Y) {
  double Yphi = d.inner(grad_phi2, Y.h);
  VectorXd hor = -d.delta() * d.inner(X.v, Y.v) * grad_phi2;
  VectorXd ver = Yphi * X.v;
  return {hor, ver};
}

SplitTangentVector a_nabla_R(const SasakiPointData& d, const SplitTangentVector& D,
                             const SplitTangentVector& Y, const SplitTangentVector& Z) {
  const double half_delta = 0.5 * d.delta();
  VectorXd out = VectorXd::Zero(d.dim());
  for (const VectorXd& e : d.frame()) {
    SplitTangentVector E = SplitTangentVector::horizontal(e);
    double c = d.inner(nabla_script(d, D, Y, E), Z.v) +
               d.inner(nabla_script(d, D, Z, E), Y.v);
    out += half_delta * c * e;
  }
  return SplitTangentVector::horizontal(out);
}

namespace {

// Block formulas on pure h/v parts (m-vectors). Outputs are split vectors.

SplitTangentVector block_hhh(const SasakiPointData& d, const VectorXd& Xh,
                             const VectorXd& Yh, const VectorXd& Zh) {
  const int m = d.dim();
  const double delta = d.delta();

  VectorXd hor = d.curv_op(Xh, Yh, Zh);
  VectorXd RXY = d.rr(Xh, Yh);
  VectorXd RYZ = d.rr(Yh, Zh);
  VectorXd RXZ = d.rr(Xh, Zh);
  for (const VectorXd& e : d.frame()) {
    // A(scriptR(X,Y), Z) - (1/2) A(X, scriptR(Y,Z)) + (1/2) A(Y, scriptR(X,Z))
    double c = d.inner(d.rr(Zh, e), RXY) - 0.5 * d.inner(d.rr(Xh, e), RYZ) +
               0.5 * d.inner(d.rr(Yh, e), RXZ);
    hor += 0.5 * delta * c * e;
  }

  VectorXd ver = VectorXd::Zero(m);
  ver += -0.5 * d.nabla_curv_op(Xh, Yh, Zh, d.u());
  ver += 0.5 * d.nabla_curv_op(Yh, Xh, Zh, d.u());
  return {hor, ver};
}

SplitTangentVector block_vhh(const SasakiPointData& d, const VectorXd& Xv,
                             const VectorXd& Yh, const VectorXd& Zh) {
  const int m = d.dim();
  const double delta = d.delta();

  VectorXd ver = -0.5 * d.curv_op(Yh, Zh, Xv);
  VectorXd hor = VectorXd::Zero(m);
  for (const VectorXd& e : d.frame()) {
    ver += 0.25 * delta * d.inner(d.rr(Zh, e), Xv) * d.rr(Yh, e);
    hor += -0.5 * delta * d.inner(d.nabla_curv_op(Yh, Zh, e, d.u()), Xv) * e;
  }
  return {hor, ver};
}

SplitTangentVector block_vhv(const SasakiPointData& d, const VectorXd& Xv,
                             const VectorXd& Yh, const VectorXd& Zv) {
  const int m = d.dim();
  const double delta = d.delta();

  VectorXd hor = VectorXd::Zero(m);
  for (const VectorXd& ei : d.frame()) {
    double c = 0.5 * delta * d.inner(d.curv_op(Yh, ei, Xv), Zv);
    for (const VectorXd& ej : d.frame())
      c += 0.25 * delta * delta * d.inner(d.rr(Yh, ej), Zv) *
           d.inner(d.curv_op(ej, ei, d.u()), Xv);
    hor += c * ei;
  }
  return SplitTangentVector::horizontal(hor);
}

SplitTangentVector block_hhv(const SasakiPointData& d, const VectorXd& Xh,
                             const VectorXd& Yh, const VectorXd& Zv) {
  const int m = d.dim();
  const double delta = d.delta();

  VectorXd ver = d.curv_op(Xh, Yh, Zv);
  VectorXd hor = VectorXd::Zero(m);
  for (const VectorXd& e : d.frame()) {
    ver += 0.25 * delta *
           (d.inner(d.rr(Xh, e), Zv) * d.rr(Yh, e) -
            d.inner(d.rr(Yh, e), Zv) * d.rr(Xh, e));
    double c = d.inner(d.nabla_curv_op(Xh, Yh, e, d.u()), Zv) -
               d.inner(d.nabla_curv_op(Yh, Xh, e, d.u()), Zv);
    hor += 0.5 * delta * c * e;
  }
  return {hor, ver};
}

SplitTangentVector block_vvh(const SasakiPointData& d, const VectorXd& Xv,
                             const VectorXd& Yv, const VectorXd& Zh) {
  const int m = d.dim();
  const double delta = d.delta();

  VectorXd hor = VectorXd::Zero(m);
  for (const VectorXd& ei : d.frame()) {
    double c = 0.5 * delta *
               (d.inner(d.curv_op(Zh, ei, Xv), Yv) -
                d.inner(d.curv_op(Zh, ei, Yv), Xv));
    for (const VectorXd& ej : d.frame())
      c += 0.25 * delta * delta *
           (d.inner(d.rr(Zh, ej), Yv) * d.inner(d.curv_op(ej, ei, d.u()), Xv) -
            d.inner(d.rr(Zh, ej), Xv) * d.inner(d.curv_op(ej, ei, d.u()), Yv));
    hor += c * ei;
  }
  return SplitTangentVector::horizontal(hor);
}

} // namespace

SplitTangentVector curvature_RG(const SasakiPointData& d, const SplitTangentVector& X,
                                const SplitTangentVector& Y, const SplitTangentVector& Z) {
  SplitTangentVector out = SplitTangentVector::zero(d.dim());
  out = out + block_hhh(d, X.h, Y.h, Z.h);
  out = out + block_hhv(d, X.h, Y.h, Z.v);
  out = out + block_vhh(d, X.v, Y.h, Z.h);
  out = out - block_vhh(d, Y.v, X.h, Z.h);
  out = out + block_vhv(d, X.v, Y.h, Z.v);
  out = out - block_vhv(d, Y.v, X.h, Z.v);
  out = out + block_vvh(d, X.v, Y.v, Z.h);
  // R^G(X^v, Y^v) Z^v = 0.
  return out;
}

double curvature_RG4(const SasakiPointData& d, const SplitTangentVector& X,
                     const SplitTangentVector& Y, const SplitTangentVector& Z,
                     const SplitTangentVector& W) {
  return d.pair(curvature_RG(d, X, Y, Z), W);
}

SplitTangentVector assemble_RG_from_pieces(const SasakiPointData& d,
                                           const SplitTangentVector& X,
                                           const SplitTangentVector& Y,
                                           const SplitTangentVector& Z) {
  // R(X,Y) acts componentwise on (Z^h, Z^v) through the horizontal parts.
  SplitTangentVector r_nabla{d.curv_op(X.h, Y.h, Z.h), d.curv_op(X.h, Y.h, Z.v)};

  SplitTangentVector d_script =
      SplitTangentVector::vertical(nabla_script(d, X, Y, Z) -
                                   nabla_script(d, Y, X, Z));

  SplitTangentVector d_A = a_nabla_R(d, X, Y, Z) - a_nabla_R(d, Y, X, Z) +
                           tensor_A(d, script_R(d, X, Y), Z);

  SplitTangentVector AYZ = tensor_A(d, Y, Z);
  SplitTangentVector AXZ = tensor_A(d, X, Z);
  SplitTangentVector script_wedge_A =
      script_R(d, X, AYZ) * -0.5 + script_R(d, Y, AXZ) * 0.5;
  SplitTangentVector A_wedge_script =
      tensor_A(d, X, script_R(d, Y, Z)) * -0.5 +
      tensor_A(d, Y, script_R(d, X, Z)) * 0.5;
  SplitTangentVector A_wedge_A = tensor_A(d, X, AYZ) - tensor_A(d, Y, AXZ);

  return r_nabla - d_script * 0.5 + d_A + script_wedge_A + A_wedge_script +
         A_wedge_A;
}

double ricci_G(const SasakiPointData& d, const SplitTangentVector& X,
               const SplitTangentVector& Y) {
  const double delta = d.delta();
  double out = 0.0;

  // hh block: ric(X,Y) - (delta/2) sum_j <scriptR(X,e_j), scriptR(Y,e_j)>.
  out += X.h.dot(d.base_ricci() * Y.h);
  for (const VectorXd& e : d.frame())
    out -= 0.5 * delta * d.inner(d.rr(X.h, e), d.rr(Y.h, e));

  // vv block: (delta^2/4) sum_{ij} <scriptR(e_i,e_j),X^v><scriptR(e_i,e_j),Y^v>.
  for (const VectorXd& ei : d.frame())
    for (const VectorXd& ej : d.frame()) {
      VectorXd r = d.rr(ei, ej);
      out += 0.25 * delta * delta * d.inner(r, X.v) * d.inner(r, Y.v);
    }

  // hv blocks: -(delta/2) sum_i <(nabla_{e_i} scriptR)(e_i, X^h), Y^v>.
  auto hv = [&](const VectorXd& Xh, const VectorXd& Yv) {
    double s = 0.0;
    for (const VectorXd& e : d.frame())
      s += d.inner(d.nabla_curv_op(e, e, Xh, d.u()), Yv);
    return -0.5 * delta * s;
  };
  out += hv(X.h, Y.v);
  out += hv(Y.h, X.v);
  return out;
}

double scalar_G(const SasakiPointData& d) {
  double q = 0.0;
  for (const VectorXd& ei : d.frame())
    for (const VectorXd& ej : d.frame()) {
      VectorXd r = d.rr(ei, ej);
      for (const VectorXd& ek : d.frame()) {
        double c = d.inner(r, ek);
        q += c * c;
      }
    }
  return d.base_scalar() / d.f1() - d.f2() / (4.0 * d.f1() * d.f1()) * q;
}

MatrixXd ricci_G_matrix(const SasakiPointData& d) {
  const int m = d.dim();
  const double s1 = 1.0 / std::sqrt(d.f1());
  const double s2 = 1.0 / std::sqrt(d.f2());
  std::vector<SplitTangentVector> frame;
  for (const VectorXd& e : d.frame())
    frame.push_back(SplitTangentVector::horizontal(s1 * e));
  for (const VectorXd& e : d.frame())
    frame.push_back(SplitTangentVector::vertical(s2 * e));

  MatrixXd out(2 * m, 2 * m);
  for (int a = 0; a < 2 * m; ++a)
    for (int b = a; b < 2 * m; ++b) {
      double v = ricci_G(d, frame[a], frame[b]);
      out(a, b) = v;
      out(b, a) = v;
    }
  return out;
}

// Convenience overloads.

SplitTangentVector script_R(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
                            const SplitTangentVector& X, const SplitTangentVector& Y) {
  return script_R(SasakiPointData(G, P), X, Y);
}

SplitTangentVector tensor_A(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
                            const SplitTangentVector& X, const SplitTangentVector& Y) {
  return tensor_A(SasakiPointData(G, P), X, Y);
}

SplitTangentVector a_nabla_R(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
                             const SplitTangentVector& D, const SplitTangentVector& Y,
                             const SplitTangentVector& Z) {
  return a_nabla_R(SasakiPointData(G, P), D, Y, Z);
}

SplitTangentVector curvature_RG(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
                                const SplitTangentVector& X, const SplitTangentVector& Y,
                                const SplitTangentVector& Z) {
  return curvature_RG(SasakiPointData(G, P), X, Y, Z);
}

double curvature_RG4(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
                     const SplitTangentVector& X, const SplitTangentVector& Y,
                     const SplitTangentVector& Z, const SplitTangentVector& W) {
  return curvature_RG4(SasakiPointData(G, P), X, Y, Z, W);
}

double ricci_G(const WeightedSasakiMetric& G, const TangentBundlePoint& P,
               const SplitTangentVector& X, const SplitTangentVector& Y) {
  return ricci_G(SasakiPointData(G, P), X, Y);
}

double scalar_G(const WeightedSasakiMetric& G, const TangentBundlePoint& P) {
  return scalar_G(SasakiPointData(G, P));
}

namespace rg4_patterns {

double hhhh(const SasakiPointData& d, const VectorXd& Xh, const VectorXd& Yh,
            const VectorXd& Wh) {
  double base = 0.0;
  const DenseTensor& R = d.lowered_curvature();
  const int m = d.dim();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          base += R({i, j, k, l}) * Xh(i) * Yh(j) * Yh(k) * Wh(l);
  return d.f1() * base +
         0.75 * d.f2() * d.inner(d.rr(Yh, Wh), d.rr(Xh, Yh));
}

double hvvh(const SasakiPointData& d, const VectorXd& Xh, const VectorXd& Yv,
            const VectorXd& Wh) {
  const double c = d.f1() * d.delta() * d.delta() / 4.0;
  double s = 0.0;
  for (const VectorXd& e : d.frame())
    s += d.inner(d.rr(Xh, e), Yv) * d.inner(d.rr(Wh, e), Yv);
  return c * s;
}

double vhhh(const SasakiPointData& d, const VectorXd& Xv, const VectorXd& Yh,
            const VectorXd& Wh) {
  return 0.5 * d.f2() * d.inner(d.nabla_curv_op(Yh, Wh, Yh, d.u()), Xv);
}

double vhhv(const SasakiPointData& d, const VectorXd& Xv, const VectorXd& Yh,
            const VectorXd& Wv) {
  const double c = d.f2() * d.delta() / 4.0;
  double s = 0.0;
  for (const VectorXd& e : d.frame())
    s += d.inner(d.rr(Yh, e), Wv) * d.inner(d.rr(Yh, e), Xv);
  return c * s;
}

double hhhv(const SasakiPointData& d, const VectorXd& Xh, const VectorXd& Yh,
            const VectorXd& Wv) {
  return 0.5 * d.f2() * d.inner(d.nabla_curv_op(Yh, Xh, Yh, d.u()), Wv);
}

} // namespace rg4_patterns

} // namespace sasakigeo
