#include "rcs/channel.hpp"

#include <cmath>

namespace rcs {

namespace {

void check_unit_interval(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw ParameterError(std::string(name) + " must lie in [0, 1]");
  }
}

MatXc kron(const MatXc& a, const MatXc& b) {
  MatXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Mat4c superoperator_of(const KrausChannel& k) {
  Mat4c l = Mat4c::Zero();
  for (const auto& op : k.operators()) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) l(2 * a + b, 2 * c + d) += op(a, c) * std::conj(op(b, d));
  }
  return l;
}

double min_hermitian_eigenvalue(const MatXc& m) {
  Eigen::SelfAdjointEigenSolver<MatXc> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::Matrix4d unitary_ptm(const Mat2c& u) {
  Eigen::Matrix4d r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      r(i, j) = 0.5 * (pauli(i) * u * pauli(j) * u.adjoint()).trace().real();
    }
  return r;
}

}  // namespace

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::amp_damp: return "amp_damp";
    case ChannelKind::depolarizing: return "depolarizing";
    case ChannelKind::amp_then_dep: return "amp_then_dep";
    case ChannelKind::dep_then_amp: return "dep_then_amp";
    case ChannelKind::general_ptm: return "general_ptm";
  }
  return "unknown";
}

ChannelKind channel_kind_from_string(const std::string& name) {
  for (auto k : {ChannelKind::amp_damp, ChannelKind::depolarizing, ChannelKind::amp_then_dep,
                 ChannelKind::dep_then_amp, ChannelKind::general_ptm}) {
    if (to_string(k) == name) return k;
  }
  throw ParameterError("unknown channel kind '" + name + "'");
}

void to_json(nlohmann::json& j, const ChannelSpec& spec) {
  j = nlohmann::json{{"kind", to_string(spec.kind)}, {"q", spec.q}, {"p", spec.p}};
  if (spec.t) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
      rows.push_back({(*spec.t)(i, 0), (*spec.t)(i, 1), (*spec.t)(i, 2), (*spec.t)(i, 3)});
    }
    j["t"] = rows;
  }
}

void from_json(const nlohmann::json& j, ChannelSpec& spec) {
  spec = ChannelSpec{};
  spec.kind = channel_kind_from_string(j.at("kind").get<std::string>());
  spec.q = j.value("q", 0.0);
  spec.p = j.value("p", 0.0);
  if (j.contains("t") && !j.at("t").is_null()) {
    const auto& rows = j.at("t");
    if (!rows.is_array() || rows.size() != 4) throw ParameterError("t must be a 4x4 array");
    Eigen::Matrix4d t;
    for (int i = 0; i < 4; ++i) {
      if (!rows[i].is_array() || rows[i].size() != 4) throw ParameterError("t must be a 4x4 array");
      for (int k = 0; k < 4; ++k) t(i, k) = rows[i][k].get<double>();
    }
    spec.t = t;
  }
}

KrausChannel::KrausChannel(std::vector<MatXc> operators) : ops_(std::move(operators)) {
  if (ops_.empty()) throw DimensionError("Kraus set is empty");
  const auto d = ops_.front().rows();
  if (d != 2 && d != 4) throw DimensionError("Kraus operators must be 2x2 or 4x4");
  for (const auto& k : ops_) {
    if (k.rows() != d || k.cols() != d) throw DimensionError("Kraus operators differ in shape");
  }
}

MatXc KrausChannel::apply(const MatXc& x) const {
  if (x.rows() != dim() || x.cols() != dim()) throw DimensionError("operator does not match channel arity");
  MatXc out = MatXc::Zero(dim(), dim());
  for (const auto& k : ops_) out += k * x * k.adjoint();
  return out;
}

MatXc KrausChannel::apply_adjoint(const MatXc& x) const {
  if (x.rows() != dim() || x.cols() != dim()) throw DimensionError("operator does not match channel arity");
  MatXc out = MatXc::Zero(dim(), dim());
  for (const auto& k : ops_) out += k.adjoint() * x * k;
  return out;
}

MatXc KrausChannel::choi() const {
  const auto d = dim();
  MatXc j = MatXc::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      MatXc e = MatXc::Zero(d, d);
      e(i, k) = 1.0;
      j.block(i * d, k * d, d, d) = apply(e);
    }
  }
  return j;
}

double KrausChannel::completeness_error() const {
  MatXc s = MatXc::Zero(dim(), dim());
  for (const auto& k : ops_) s += k.adjoint() * k;
  return (s - MatXc::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

double KrausChannel::min_choi_eigenvalue() const { return min_hermitian_eigenvalue(choi()); }

KrausChannel compose(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim() != b.dim()) throw DimensionError("cannot compose channels of different arity");
  std::vector<MatXc> ops;
  for (const auto& ka : a.operators())
    for (const auto& kb : b.operators()) ops.push_back(ka * kb);
  return KrausChannel(std::move(ops));
}

KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim() != 2 || b.dim() != 2) throw DimensionError("tensor expects single-qubit channels");
  std::vector<MatXc> ops;
  for (const auto& ka : a.operators())
    for (const auto& kb : b.operators()) ops.push_back(kron(ka, kb));
  return KrausChannel(std::move(ops));
}

KrausChannel amplitude_damping_kraus(double q) {
  check_unit_interval(q, "q");
  MatXc k0 = MatXc::Zero(2, 2), k1 = MatXc::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - q);
  k1(0, 1) = std::sqrt(q);
  return KrausChannel({k0, k1});
}

KrausChannel depolarizing_kraus(double p) {
  check_unit_interval(p, "p");
  std::vector<MatXc> ops;
  ops.push_back(std::sqrt(1.0 - 0.75 * p) * MatXc(pauli(0)));
  for (int k = 1; k < 4; ++k) ops.push_back(std::sqrt(0.25 * p) * MatXc(pauli(k)));
  return KrausChannel(std::move(ops));
}

PauliTransferMap::PauliTransferMap(const Eigen::Matrix4d& r) : r_(r) {}

bool PauliTransferMap::trace_preserving(double tol) const {
  return std::abs(r_(0, 0) - 1.0) <= tol && r_.row(0).tail<3>().cwiseAbs().maxCoeff() <= tol;
}

Mat2c PauliTransferMap::apply(const Mat2c& x) const {
  Eigen::Vector4cd in;
  for (int j = 0; j < 4; ++j) in(j) = 0.5 * (pauli(j) * x).trace();
  const Eigen::Vector4cd out = r_.cast<cdouble>() * in;
  Mat2c y = Mat2c::Zero();
  for (int i = 0; i < 4; ++i) y += out(i) * pauli(i);
  return y;
}

Mat2c PauliTransferMap::apply_adjoint(const Mat2c& x) const { return adjoint().apply(x); }

Mat4c PauliTransferMap::superoperator() const {
  Mat4c l = Mat4c::Zero();
  for (int i = 0; i < 4; ++i) {
    const Mat2c si = pauli(i);
    for (int j = 0; j < 4; ++j) {
      if (r_(i, j) == 0.0) continue;
      const Mat2c sj = pauli(j);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d) l(2 * a + b, 2 * c + d) += 0.5 * r_(i, j) * sj(d, c) * si(a, b);
    }
  }
  return l;
}

Mat4c PauliTransferMap::choi() const {
  const Mat4c l = superoperator();
  Mat4c j;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) j(2 * i + a, 2 * k + b) = l(2 * a + b, 2 * i + k);
  return j;
}

PauliTransferMap operator*(const PauliTransferMap& a, const PauliTransferMap& b) {
  return PauliTransferMap(a.matrix() * b.matrix());
}

PauliTransferMap ptm_of(const KrausChannel& k) {
  if (k.dim() != 2) throw DimensionError("Pauli transfer maps are single-qubit only");
  Eigen::Matrix4d r;
  for (int j = 0; j < 4; ++j) {
    const MatXc img = k.apply(pauli(j));
    for (int i = 0; i < 4; ++i) r(i, j) = 0.5 * (MatXc(pauli(i)) * img).trace().real();
  }
  return PauliTransferMap(r);
}

Channel::Channel()
    : spec_(ChannelSpec::amp_damp(0.0)),
      kraus_(KrausChannel({MatXc::Identity(2, 2)})),
      superop_(Mat4c::Identity()) {}

void Channel::require_cptp() const {
  if (!cptp_) {
    throw CptpViolation("map is not completely positive and trace preserving", min_choi_);
  }
}

Channel make_channel(const KrausChannel& kraus) {
  if (kraus.dim() != 2) throw DimensionError("noise channels act on one qubit");
  Channel ch;
  ch.ptm_ = ptm_of(kraus);
  ch.spec_ = ChannelSpec::general(ch.ptm_.matrix());
  ch.superop_ = superoperator_of(kraus);
  ch.min_choi_ = kraus.min_choi_eigenvalue();
  ch.cptp_ = ch.min_choi_ >= -kChoiTolerance && kraus.completeness_error() <= kCompletenessTolerance;
  ch.kraus_ = kraus;
  return ch;
}

Channel make_channel(const ChannelSpec& spec) {
  if (spec.kind == ChannelKind::general_ptm) {
    if (!spec.t) throw ParameterError("general_ptm requires a t matrix");
    if (!spec.t->allFinite()) throw ParameterError("t contains non-finite entries");
    PauliTransferMap ptm(*spec.t);
    if (!ptm.trace_preserving()) throw ParameterError("row 0 of t must be (1, 0, 0, 0)");
    Channel ch;
    ch.spec_ = spec;
    ch.ptm_ = ptm;
    ch.superop_ = ptm.superoperator();
    const Mat4c j = ptm.choi();
    Eigen::SelfAdjointEigenSolver<Mat4c> es(j);
    ch.min_choi_ = es.eigenvalues().minCoeff();
    ch.cptp_ = ch.min_choi_ >= -kChoiTolerance;
    ch.kraus_.reset();
    if (ch.cptp_) {
      // K[a, i] = sqrt(lambda) v[2 i + a] for each Choi eigenpair.
      std::vector<MatXc> ops;
      for (int k = 0; k < 4; ++k) {
        const double lam = es.eigenvalues()(k);
        if (lam <= 1e-14) continue;
        MatXc op(2, 2);
        for (int i = 0; i < 2; ++i)
          for (int a = 0; a < 2; ++a) op(a, i) = std::sqrt(lam) * es.eigenvectors()(2 * i + a, k);
        ops.push_back(op);
      }
      ch.kraus_ = KrausChannel(std::move(ops));
    }
    return ch;
  }

  check_unit_interval(spec.q, "q");
  check_unit_interval(spec.p, "p");
  std::optional<KrausChannel> k;
  switch (spec.kind) {
    case ChannelKind::amp_damp: k = amplitude_damping_kraus(spec.q); break;
    case ChannelKind::depolarizing: k = depolarizing_kraus(spec.p); break;
    case ChannelKind::amp_then_dep:
      k = compose(amplitude_damping_kraus(spec.q), depolarizing_kraus(spec.p));
      break;
    case ChannelKind::dep_then_amp:
      k = compose(depolarizing_kraus(spec.p), amplitude_damping_kraus(spec.q));
      break;
    case ChannelKind::general_ptm: break;
  }
  Channel ch = make_channel(*k);
  ch.spec_ = spec;
  ch.spec_.t.reset();
  return ch;
}

Channel identity_channel() { return Channel(); }

Mat2c apply_adjoint(const Channel& ch, const Mat2c& a) { return ch.apply_adjoint(a); }

double r_value(const Channel& ch) { return ch.coeff(0, 3); }

double r_value(const ChannelSpec& spec) {
  switch (spec.kind) {
    case ChannelKind::amp_damp: check_unit_interval(spec.q, "q"); return spec.q;
    case ChannelKind::depolarizing: check_unit_interval(spec.p, "p"); return 0.0;
    case ChannelKind::amp_then_dep:
      check_unit_interval(spec.q, "q");
      check_unit_interval(spec.p, "p");
      return spec.q;
    case ChannelKind::dep_then_amp:
      check_unit_interval(spec.q, "q");
      check_unit_interval(spec.p, "p");
      return spec.q * (1.0 - spec.p);
    case ChannelKind::general_ptm:
      if (!spec.t) throw ParameterError("general_ptm requires a t matrix");
      return (*spec.t)(3, 0);
  }
  return 0.0;
}

double twirl_strength(const Channel& ch) {
  ch.require_cptp();
  const auto& r = ch.ptm().matrix();
  return 1.0 - (r(1, 1) + r(2, 2) + r(3, 3)) / 3.0;
}

WernerDecomposition werner_twirl(const Mat4c& x) {
  // x_ijkl = <ij|X|kl> with index 2i + j.
  const cdouble diag_same = x(0, 0) + x(3, 3);
  const cdouble diag_mixed = x(1, 1) + x(2, 2);
  const cdouble swapped = x(1, 2) + x(2, 1);
  return {diag_same / 6.0 + diag_mixed / 3.0 - swapped / 6.0,
          diag_same / 6.0 - diag_mixed / 6.0 + swapped / 3.0};
}

WernerDecomposition haar_twirl(const MatXc& x, Eigen::Index dim) {
  if (x.rows() != dim * dim || x.cols() != dim * dim) throw DimensionError("haar_twirl: shape mismatch");
  cdouble tr = x.trace();
  cdouble tr_s = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) tr_s += x(i * dim + j, j * dim + i);
  const double d = static_cast<double>(dim);
  return {(tr - tr_s / d) / (d * d - 1.0), (tr_s - tr / d) / (d * d - 1.0)};
}

Mat4c apply_doubled(const Channel& a, const Channel& b, const Mat4c& x) {
  MatXc m = x;
  apply_local_superoperator(m, 2, 0, a.superoperator());
  apply_local_superoperator(m, 2, 1, b.superoperator());
  return m;
}

PairCoefficients werner_pair_coeffs(const Channel& ch) {
  const Mat4c from_identity = apply_doubled(ch, Mat4c::Identity());
  const Mat4c from_swap = apply_doubled(ch, swap_operator());
  PairCoefficients pc;
  pc.a = werner_twirl(from_identity).beta.real() / 2.0;
  pc.b = werner_twirl(from_swap).alpha.real();
  pc.c = pc.a + 2.0 * pc.b;
  return pc;
}

IteratedOverlap iterated_zero_overlap(const Channel& ch, int d_max) {
  if (d_max < 1) throw ParameterError("d_max must be at least 1");
  const auto& r = ch.ptm().matrix();
  IteratedOverlap out;
  Eigen::Vector4d v(1.0, 0.0, 0.0, 1.0);
  out.sequence.reserve(static_cast<std::size_t>(d_max) + 1);
  for (int d = 0; d <= d_max; ++d) {
    out.sequence.push_back(0.5 * (1.0 + v(3)));
    v = r * v;
  }

  const auto& spec = ch.spec();
  bool have_form = false;
  if (spec.is_standard()) {
    double q = spec.q, p = spec.p;
    if (spec.kind == ChannelKind::amp_damp) p = 0.0;
    if (spec.kind == ChannelKind::depolarizing) q = 0.0;
    out.lambda = (1.0 - p) * (1.0 - q);
    const double num = spec.kind == ChannelKind::dep_then_amp ? 0.5 * p + (1.0 - p) * q
                                                                : q + 0.5 * p * (1.0 - q);
    out.kappa = out.lambda < 1.0 ? num / (1.0 - out.lambda) : 1.0;
    out.tau = 1.0 - out.kappa;
    have_form = true;
  } else if (std::abs(r(3, 1)) < 1e-14 && std::abs(r(3, 2)) < 1e-14) {
    out.lambda = r(3, 3);
    const double fixed = out.lambda < 1.0 ? r(3, 0) / (1.0 - out.lambda) : 1.0;
    out.kappa = 0.5 * (1.0 + fixed);
    out.tau = 0.5 * (1.0 - fixed);
    have_form = out.lambda >= 0.0 && out.lambda <= 1.0;
  }
  if (have_form) {
    out.closed_form_valid = true;
    for (int d = 0; d <= d_max; ++d) {
      const double model = out.kappa + out.tau * std::pow(out.lambda, d);
      if (std::abs(model - out.sequence[d]) > 1e-10) {
        out.closed_form_valid = false;
        break;
      }
    }
  }
  return out;
}

Mat2c rotation_unitary(double theta, double phi) {
  const cdouble e(std::cos(phi), std::sin(phi));
  Mat2c u;
  u << std::cos(theta) * e, std::sin(theta), -std::sin(theta), std::cos(theta) * std::conj(e);
  return u;
}

Channel conjugated(const Channel& ch, const Mat2c& u) {
  return make_channel(ChannelSpec::general(unitary_ptm(u) * ch.ptm().matrix()));
}

Channel effective_rotation_noise(double q, double theta, double phi) {
  return conjugated(make_channel(ChannelSpec::amp_damp(q)), rotation_unitary(theta, phi));
}

void left_multiply_local(MatXc& m, int n, const std::vector<int>& qubits, const MatXc& u) {
  const auto k = static_cast<int>(qubits.size());
  const Eigen::Index block = Eigen::Index(1) << k;
  if (u.rows() != block || u.cols() != block) throw DimensionError("local operator size mismatch");
  const Eigen::Index dim = Eigen::Index(1) << n;
  if (m.rows() != dim) throw DimensionError("operator size does not match qubit count");

  std::vector<Eigen::Index> offset(static_cast<std::size_t>(block), 0);
  Eigen::Index mask = 0;
  for (Eigen::Index s = 0; s < block; ++s) {
    for (int t = 0; t < k; ++t) {
      if ((s >> (k - 1 - t)) & 1) offset[s] |= Eigen::Index(1) << (n - 1 - qubits[t]);
    }
  }
  for (int t = 0; t < k; ++t) mask |= Eigen::Index(1) << (n - 1 - qubits[t]);

  MatXc rows(block, m.cols());
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (Eigen::Index s = 0; s < block; ++s) rows.row(s) = m.row(base | offset[s]);
    rows = (u * rows).eval();
    for (Eigen::Index s = 0; s < block; ++s) m.row(base | offset[s]) = rows.row(s);
  }
}

void apply_local_unitary(MatXc& rho, int n, const std::vector<int>& qubits, const MatXc& u) {
  left_multiply_local(rho, n, qubits, u);
  rho = rho.adjoint().eval();
  left_multiply_local(rho, n, qubits, u);
  rho = rho.adjoint().eval();
}

void apply_local_superoperator(MatXc& rho, int n, int qubit, const Mat4c& superop) {
  const Eigen::Index dim = Eigen::Index(1) << n;
  if (rho.rows() != dim || rho.cols() != dim) throw DimensionError("operator size does not match qubit count");
  const Eigen::Index bit = Eigen::Index(1) << (n - 1 - qubit);
  Eigen::Vector4cd x;
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & bit) continue;
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (c & bit) continue;
      x << rho(r, c), rho(r, c | bit), rho(r | bit, c), rho(r | bit, c | bit);
      const Eigen::Vector4cd y = superop * x;
      rho(r, c) = y(0);
      rho(r, c | bit) = y(1);
      rho(r | bit, c) = y(2);
      rho(r | bit, c | bit) = y(3);
    }
  }
}

}  // namespace rcs
