#include "rcs/statmech.hpp"

#include <cmath>

#include "rcs/distribution.hpp"
#include "rcs/two_copy.hpp"

namespace rcs {

std::array<double, 4> pair_collapse(int left, int right) {
  if ((left != 0 && left != 1) || (right != 0 && right != 1)) throw ParameterError("labels must be 0 (I) or 1 (S)");
  if (left == right) {
    std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
    out[left == 0 ? 0 : 3] = 1.0;
    return out;
  }
  return {0.4, 0.0, 0.0, 0.4};
}

WernerStateValue werner_state(double a, double b, int m) {
  if (m < 0) throw ParameterError("m must be non-negative");
  const double lam = 1.0 - a - 2.0 * b;
  const double drive = (-2.0 * a + b) / 10.0;
  WernerStateValue v;
  double x = -1.0 / 30.0;
  for (int k = 0; k < m; ++k) x = lam * x + drive;
  v.iterated = x;
  const double c = a + 2.0 * b;
  if (c == 0.0) {
    v.closed_form_valid = false;
    v.closed = v.iterated;
    return v;
  }
  const double fixed = (-2.0 * a + b) / (10.0 * c);
  v.closed = fixed + std::pow(lam, m) * (-1.0 / 30.0 - fixed);
  return v;
}

SequenceCoeffs sequence_coeffs_iterated(double a, double b, int m) {
  if (m < 0) throw ParameterError("m must be non-negative");
  SequenceCoeffs s;
  s.closed_form = false;
  for (int k = 0; k < m; ++k) {
    const double x = (1.0 - a) * s.x + b * s.y;
    const double y = 2.0 * a * s.x + (1.0 - 2.0 * b) * s.y;
    const double z = (1.0 - a) * s.z + b * s.w;
    const double w = 2.0 * a * s.z + (1.0 - 2.0 * b) * s.w;
    s.x = x;
    s.y = y;
    s.z = z;
    s.w = w;
  }
  return s;
}

SequenceCoeffs sequence_coeffs(double a, double b, int m) {
  if (m < 0) throw ParameterError("m must be non-negative");
  if (a == 0.0) return sequence_coeffs_iterated(a, b, m);
  const double lam_m = std::pow(1.0 - a - 2.0 * b, m);
  const double ratio = b / a;
  SequenceCoeffs s;
  s.x = 1.0 - (1.0 - lam_m) / (1.0 + 2.0 * ratio);
  s.y = (1.0 - lam_m) / (0.5 + ratio);
  s.z = 0.5 - (0.5 + ratio * lam_m) / (1.0 + 2.0 * ratio);
  s.w = (0.5 + ratio * lam_m) / (0.5 + ratio);
  return s;
}

SequenceCoeffs sequence_coeffs_from_channel(const Channel& ch, int m) {
  if (m < 0) throw ParameterError("m must be non-negative");
  const Mat4c swap = swap_operator();
  auto iterate = [&](Mat4c x) {
    for (int k = 0; k < m; ++k) {
      const auto wd = werner_twirl(apply_doubled(ch, x));
      x = wd.alpha * Mat4c::Identity() + wd.beta * swap;
    }
    return werner_twirl(x);
  };
  const auto from_i = iterate(Mat4c::Identity());
  const auto from_s = iterate(swap);
  SequenceCoeffs s;
  s.closed_form = false;
  s.x = from_i.alpha.real();
  s.y = from_i.beta.real();
  s.z = from_s.alpha.real();
  s.w = from_s.beta.real();
  return s;
}

double modified_ensemble_second_moment(int n, int d, double a, double b) {
  if (n < 1 || d < 1) throw ParameterError("n and d must be at least 1");
  const double lam = 1.0 - a - 2.0 * b;
  if (!(lam >= -1e-12 && lam <= 1.0 + 1e-12)) throw ParameterError("1 - a - 2b must lie in [0, 1]");
  return std::pow(0.3 - werner_state(a, b, d - 1).value(), n);
}

double last_layer_correction(std::string_view bits, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw ParameterError("r must lie in [0, 1]");
  double out = 1.0;
  for (char c : bits) {
    if (c == '0') {
      out *= (1.0 + r) * (1.0 + r);
    } else if (c == '1') {
      out *= (1.0 - r) * (1.0 - r);
    } else {
      throw ParameterError("bitstring must contain only 0 and 1");
    }
  }
  return out;
}

MonotonicityRecord monotonicity_check(const CircuitShape& shape, const Channel& ch, std::uint64_t x) {
  NoisePlacement placement;
  placement.mode = PlacementMode::no_final_noise_layer;
  placement.channel = ch;
  MonotonicityRecord rec;
  rec.exact = two_copy_moment_propagate(shape, placement).per_string(static_cast<Eigen::Index>(x));
  const auto pc = werner_pair_coeffs(ch);
  rec.closed_form = pc.c != 0.0;
  rec.modified = modified_ensemble_second_moment(shape.n, shape.depth, pc.a, pc.b);
  rec.slack = rec.modified - rec.exact;
  rec.holds = rec.exact <= rec.modified + 1e-10;
  return rec;
}

namespace {

// Apply a 2x2 map to label axis of qubit q: out(l') = sum_l m(l, l') in(l).
void transform_axis(Eigen::VectorXd& v, int n, int q, const Eigen::Matrix2d& m) {
  const std::uint64_t b = std::uint64_t(1) << (n - 1 - q);
  const auto size = static_cast<std::uint64_t>(v.size());
  for (std::uint64_t g = 0; g < size; ++g) {
    if (g & b) continue;
    const double f0 = v(static_cast<Eigen::Index>(g));
    const double f1 = v(static_cast<Eigen::Index>(g | b));
    v(static_cast<Eigen::Index>(g)) = m(0, 0) * f0 + m(1, 0) * f1;
    v(static_cast<Eigen::Index>(g | b)) = m(0, 1) * f0 + m(1, 1) * f1;
  }
}

void collapse_pair(Eigen::VectorXd& v, int n, int j, int k) {
  const std::uint64_t bj = std::uint64_t(1) << (n - 1 - j);
  const std::uint64_t bk = std::uint64_t(1) << (n - 1 - k);
  const auto size = static_cast<std::uint64_t>(v.size());
  for (std::uint64_t g = 0; g < size; ++g) {
    if (g & (bj | bk)) continue;
    const auto ii = static_cast<Eigen::Index>(g), is = static_cast<Eigen::Index>(g | bk),
               si = static_cast<Eigen::Index>(g | bj), ss = static_cast<Eigen::Index>(g | bj | bk);
    const double w[4] = {v(ii), v(is), v(si), v(ss)};
    double out[4] = {0.0, 0.0, 0.0, 0.0};
    for (int l = 0; l < 4; ++l) {
      const auto c = pair_collapse(l >> 1, l & 1);
      for (int t = 0; t < 4; ++t) out[t] += c[t] * w[l];
    }
    v(ii) = out[0];
    v(is) = out[1];
    v(si) = out[2];
    v(ss) = out[3];
  }
}

void apply_gate_layer(Eigen::VectorXd& v, const CircuitShape& shape, int layer) {
  for (const auto& support : shape.layer_supports(layer)) {
    if (support.size() == 2) collapse_pair(v, shape.n, support[0], support[1]);
  }
}

}  // namespace

StatMechState initial_label_state(const CircuitShape& shape) {
  validate_shape(shape, Parity::relaxed);
  const int n = shape.n;
  StatMechState st;
  st.n = n;
  st.weights = Eigen::VectorXd::Zero(Eigen::Index(1) << n);
  st.weights(0) = 1.0;
  // Single-site twirl of |00><00| is (I + S) / 6.
  Eigen::Matrix2d start;
  start << 1.0 / 6.0, 1.0 / 6.0, 0.0, 0.0;
  for (int q = 0; q < n; ++q) transform_axis(st.weights, n, q, start);
  apply_gate_layer(st.weights, shape, 0);
  return st;
}

double trajectory_second_moment(const CircuitShape& shape, const Channel& ch, PlacementMode mode, std::uint64_t x) {
  if (mode == PlacementMode::fixed_final_rotations) {
    throw ParameterError("trajectory sums do not model final rotations");
  }
  NoisePlacement placement;
  placement.mode = mode;
  StatMechState st = initial_label_state(shape);
  const int n = shape.n;
  const auto pc = werner_pair_coeffs(ch);
  Eigen::Matrix2d site;
  site << 1.0 - pc.a, 2.0 * pc.a, pc.b, 1.0 - 2.0 * pc.b;
  for (int l = 1; l < shape.depth; ++l) {
    if (placement.noisy_layer(l - 1, shape.depth)) {
      for (int q = 0; q < n; ++q) transform_axis(st.weights, n, q, site);
    }
    apply_gate_layer(st.weights, shape, l);
  }
  const bool final_noise = placement.noisy_layer(shape.depth - 1, shape.depth);
  const Mat4c img_i = final_noise ? apply_doubled(ch, Mat4c::Identity()) : Mat4c(Mat4c::Identity());
  const Mat4c img_s = final_noise ? apply_doubled(ch, swap_operator()) : Mat4c(swap_operator());
  for (int q = 0; q < n; ++q) {
    const int bit = (x >> (n - 1 - q)) & 1;
    Eigen::Matrix2d readout = Eigen::Matrix2d::Zero();
    readout(0, 0) = img_i(3 * bit, 3 * bit).real();
    readout(1, 0) = img_s(3 * bit, 3 * bit).real();
    transform_axis(st.weights, n, q, readout);
  }
  // Every axis now carries the contracted value in its 0 slot.
  return st.weights(0);
}

}  // namespace rcs
