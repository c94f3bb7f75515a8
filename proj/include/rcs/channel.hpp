#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcs/types.hpp"

namespace rcs {

enum class ChannelKind { amp_damp, depolarizing, amp_then_dep, dep_then_amp, general_ptm };

std::string to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(const std::string& name);

// amp_then_dep is the composition N_amp o N_dep: depolarizing noise hits the
// state first. dep_then_amp is N_dep o N_amp.
struct ChannelSpec {
  ChannelKind kind = ChannelKind::amp_damp;
  double q = 0.0;
  double p = 0.0;
  // Row-major R(i, j) = Tr(s_i N(s_j)) / 2. Only read for general_ptm.
  std::optional<Eigen::Matrix4d> t;

  static ChannelSpec amp_damp(double q) { return {ChannelKind::amp_damp, q, 0.0, {}}; }
  static ChannelSpec depolarizing(double p) { return {ChannelKind::depolarizing, 0.0, p, {}}; }
  static ChannelSpec amp_then_dep(double q, double p) { return {ChannelKind::amp_then_dep, q, p, {}}; }
  static ChannelSpec dep_then_amp(double q, double p) { return {ChannelKind::dep_then_amp, q, p, {}}; }
  static ChannelSpec general(const Eigen::Matrix4d& r) { return {ChannelKind::general_ptm, 0.0, 0.0, r}; }

  bool is_standard() const { return kind != ChannelKind::general_ptm; }
};

void to_json(nlohmann::json& j, const ChannelSpec& spec);
void from_json(const nlohmann::json& j, ChannelSpec& spec);

class KrausChannel {
 public:
  explicit KrausChannel(std::vector<MatXc> operators);

  const std::vector<MatXc>& operators() const { return ops_; }
  Eigen::Index dim() const { return ops_.front().rows(); }

  MatXc apply(const MatXc& x) const;
  MatXc apply_adjoint(const MatXc& x) const;
  // J = sum_ij |i><j| (x) N(|i><j|), input index major.
  MatXc choi() const;
  double completeness_error() const;
  double min_choi_eigenvalue() const;

 private:
  std::vector<MatXc> ops_;
};

// a o b: b acts first.
KrausChannel compose(const KrausChannel& a, const KrausChannel& b);
KrausChannel tensor(const KrausChannel& a, const KrausChannel& b);

KrausChannel amplitude_damping_kraus(double q);
KrausChannel depolarizing_kraus(double p);

// Single-qubit map in the normalized Pauli basis, R(i, j) = Tr(s_i N(s_j)) / 2,
// so R(a o b) = R(a) R(b). The coefficient of s_j in N(s_i) is coeff(i, j).
class PauliTransferMap {
 public:
  PauliTransferMap() : r_(Eigen::Matrix4d::Identity()) {}
  explicit PauliTransferMap(const Eigen::Matrix4d& r);

  const Eigen::Matrix4d& matrix() const { return r_; }
  double coeff(int from, int to) const { return r_(to, from); }
  bool trace_preserving(double tol = 1e-12) const;

  Mat2c apply(const Mat2c& x) const;
  Mat2c apply_adjoint(const Mat2c& x) const;
  PauliTransferMap adjoint() const { return PauliTransferMap(r_.transpose()); }
  // L((a,b),(c,d)) with N(X)_ab = sum_cd L((a,b),(c,d)) X_cd, index 2*row + col.
  Mat4c superoperator() const;
  Mat4c choi() const;

 private:
  Eigen::Matrix4d r_;
};

PauliTransferMap operator*(const PauliTransferMap& a, const PauliTransferMap& b);
PauliTransferMap ptm_of(const KrausChannel& k);

inline constexpr double kChoiTolerance = 1e-9;
inline constexpr double kCompletenessTolerance = 1e-9;

// Validated single-qubit noise channel. Unphysical general PTMs are kept but
// flagged; operations that need complete positivity check the flag.
class Channel {
 public:
  Channel();

  const ChannelSpec& spec() const { return spec_; }
  const PauliTransferMap& ptm() const { return ptm_; }
  const std::optional<KrausChannel>& kraus() const { return kraus_; }
  const Mat4c& superoperator() const { return superop_; }
  bool cptp() const { return cptp_; }
  double min_choi_eigenvalue() const { return min_choi_; }
  void require_cptp() const;

  Mat2c apply(const Mat2c& x) const { return ptm_.apply(x); }
  Mat2c apply_adjoint(const Mat2c& x) const { return ptm_.apply_adjoint(x); }
  double coeff(int from, int to) const { return ptm_.coeff(from, to); }

  friend Channel make_channel(const ChannelSpec& spec);
  friend Channel make_channel(const KrausChannel& kraus);

 private:
  ChannelSpec spec_;
  PauliTransferMap ptm_;
  std::optional<KrausChannel> kraus_;
  Mat4c superop_;
  bool cptp_ = true;
  double min_choi_ = 0.0;
};

Channel make_channel(const ChannelSpec& spec);
Channel make_channel(const KrausChannel& kraus);
Channel identity_channel();

Mat2c apply_adjoint(const Channel& ch, const Mat2c& a);

// The z-bias of N(I): <0|N(I)|0> - 1. Equals q(1-p) or q for the compositions.
double r_value(const Channel& ch);
double r_value(const ChannelSpec& spec);

// 1 - (R11 + R22 + R33) / 3: contraction rate of the Haar-twirled channel.
double twirl_strength(const Channel& ch);

// Coefficients of the doubled map M (N x N) M on span{I, S}:
//   I -> (1 - a) I + 2a S,   S -> b I + (1 - 2b) S,   c = a + 2b.
struct PairCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};
PairCoefficients werner_pair_coeffs(const Channel& ch);

// Two-copy Haar twirl of a 4x4 operator, returned as (alpha, beta) with
// M(X) = alpha I + beta S.
struct WernerDecomposition {
  cdouble alpha;
  cdouble beta;
};
WernerDecomposition werner_twirl(const Mat4c& x);
// Same twirl for 2^k-dimensional blocks via Weingarten calculus.
WernerDecomposition haar_twirl(const MatXc& x, Eigen::Index dim);

// (N x N)(X) on a 4x4 two-copy operator, copy one is the high bit.
Mat4c apply_doubled(const Channel& a, const Channel& b, const Mat4c& x);
inline Mat4c apply_doubled(const Channel& ch, const Mat4c& x) { return apply_doubled(ch, ch, x); }

// s_d = <0|N^d(|0><0|)|0> for d = 0..d_max.
struct IteratedOverlap {
  std::vector<double> sequence;
  // s_d = kappa + tau lambda^d, set when the z-recursion decouples from x, y.
  double kappa = 0.0;
  double tau = 0.0;
  double lambda = 0.0;
  bool closed_form_valid = false;
};
IteratedOverlap iterated_zero_overlap(const Channel& ch, int d_max);

Mat2c rotation_unitary(double theta, double phi);
// rho -> U N(rho) U^dagger.
Channel conjugated(const Channel& ch, const Mat2c& u);
// Amplitude damping followed by U(theta, phi).
Channel effective_rotation_noise(double q, double theta, double phi);

// In-place superoperator / unitary action on qubit subsets of an n-qubit
// operator. Qubit 0 is the most significant bit of the row index.
void apply_local_superoperator(MatXc& rho, int n, int qubit, const Mat4c& superop);
void apply_local_unitary(MatXc& rho, int n, const std::vector<int>& qubits, const MatXc& u);
void left_multiply_local(MatXc& m, int n, const std::vector<int>& qubits, const MatXc& u);

}  // namespace rcs
