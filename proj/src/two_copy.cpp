#include "rcs/two_copy.hpp"

#include <array>
#include <cmath>
#include <string>

namespace rcs {

namespace {

void check_size(const CircuitShape& shape) {
  validate_shape(shape, Parity::relaxed);
  if (shape.n > kMaxPropagateQubits) {
    throw DimensionError("exact propagation supports at most " + std::to_string(kMaxPropagateQubits) + " qubits");
  }
}

Mat4c doubled_unitary(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Mat2c final_rotation(const NoisePlacement& placement, int qubit) {
  const auto& r = placement.final_rotations[qubit];
  return rotation_unitary(r.theta, r.phi);
}

}  // namespace

double SecondMoments::scaled_collision() const { return std::ldexp(collision_sum, n) - 1.0; }
double SecondMoments::scaled_cross() const { return std::ldexp(collision_sum, n); }

LabelState label_propagate(const CircuitShape& shape, const NoisePlacement& first, const NoisePlacement& second) {
  check_size(shape);
  validate_placement(first, shape.n);
  validate_placement(second, shape.n);
  const int n = shape.n;
  const std::uint64_t size = std::uint64_t(1) << n;
  const Mat4c swap = swap_operator();
  const Channel identity = identity_channel();

  Mat4c zero_zero = Mat4c::Zero();
  zero_zero(0, 0) = 1.0;
  std::vector<std::array<Mat4c, 2>> ops(static_cast<std::size_t>(n), {zero_zero, Mat4c::Zero()});
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size));
  w(0) = 1.0;

  auto bit = [n](int q) { return std::uint64_t(1) << (n - 1 - q); };

  for (int l = 0; l < shape.depth; ++l) {
    const bool noisy_a = first.noisy_layer(l, shape.depth);
    const bool noisy_b = second.noisy_layer(l, shape.depth);
    for (const auto& support : shape.layer_supports(l)) {
      std::uint64_t mask = 0;
      for (int q : support) mask |= bit(q);
      std::vector<std::array<double, 2>> tr1, trs;
      for (int q : support) {
        tr1.push_back({ops[q][0].trace().real(), ops[q][1].trace().real()});
        trs.push_back({(ops[q][0] * swap).trace().real(), (ops[q][1] * swap).trace().real()});
      }
      const double d = std::ldexp(1.0, static_cast<int>(support.size()));
      Eigen::VectorXd next = Eigen::VectorXd::Zero(w.size());
      for (std::uint64_t g = 0; g < size; ++g) {
        const double wg = w(static_cast<Eigen::Index>(g));
        if (wg == 0.0) continue;
        double t1 = 1.0, ts = 1.0;
        for (std::size_t k = 0; k < support.size(); ++k) {
          const int label = (g & bit(support[k])) ? 1 : 0;
          t1 *= tr1[k][label];
          ts *= trs[k][label];
        }
        const double alpha = (t1 - ts / d) / (d * d - 1.0);
        const double beta = (ts - t1 / d) / (d * d - 1.0);
        next(static_cast<Eigen::Index>(g & ~mask)) += alpha * wg;
        next(static_cast<Eigen::Index>(g | mask)) += beta * wg;
      }
      w.swap(next);
      for (int q : support) {
        ops[q][0] = Mat4c::Identity();
        ops[q][1] = swap;
        if (noisy_a || noisy_b) {
          const Channel& ca = noisy_a ? first.channel : identity;
          const Channel& cb = noisy_b ? second.channel : identity;
          for (auto& o : ops[q]) o = apply_doubled(ca, cb, o);
        }
      }
    }
  }

  const bool rot_a = first.mode == PlacementMode::fixed_final_rotations;
  const bool rot_b = second.mode == PlacementMode::fixed_final_rotations;
  if (rot_a || rot_b) {
    for (int q = 0; q < n; ++q) {
      const Mat2c ua = rot_a ? final_rotation(first, q) : Mat2c::Identity();
      const Mat2c ub = rot_b ? final_rotation(second, q) : Mat2c::Identity();
      const Mat4c u = doubled_unitary(ua, ub);
      for (auto& o : ops[q]) o = u * o * u.adjoint();
    }
  }

  LabelState out;
  out.n = n;
  out.weights = std::move(w);
  for (int q = 0; q < n; ++q) {
    Eigen::Matrix2d m;
    for (int label = 0; label < 2; ++label)
      for (int x = 0; x < 2; ++x) m(label, x) = ops[q][label](3 * x, 3 * x).real();
    out.site_readout.push_back(m);
  }
  return out;
}

SecondMoments cross_moment_propagate(const CircuitShape& shape, const NoisePlacement& first,
                                     const NoisePlacement& second) {
  const LabelState state = label_propagate(shape, first, second);
  const int n = shape.n;
  const std::uint64_t size = std::uint64_t(1) << n;
  Eigen::VectorXd f = state.weights;
  // Contract label axis j against readout j, one qubit at a time.
  for (int q = 0; q < n; ++q) {
    const std::uint64_t b = std::uint64_t(1) << (n - 1 - q);
    const Eigen::Matrix2d& m = state.site_readout[q];
    for (std::uint64_t g = 0; g < size; ++g) {
      if (g & b) continue;
      const double f0 = f(static_cast<Eigen::Index>(g));
      const double f1 = f(static_cast<Eigen::Index>(g | b));
      f(static_cast<Eigen::Index>(g)) = m(0, 0) * f0 + m(1, 0) * f1;
      f(static_cast<Eigen::Index>(g | b)) = m(0, 1) * f0 + m(1, 1) * f1;
    }
  }
  SecondMoments out;
  out.n = n;
  out.collision_sum = f.sum();
  out.per_string = std::move(f);
  return out;
}

SecondMoments two_copy_moment_propagate(const CircuitShape& shape, const NoisePlacement& placement) {
  return cross_moment_propagate(shape, placement, placement);
}

Eigen::VectorXd first_moment_propagate(const CircuitShape& shape, const NoisePlacement& placement) {
  check_size(shape);
  validate_placement(placement, shape.n);
  const int n = shape.n;
  Mat2c zero = Mat2c::Zero();
  zero(0, 0) = 1.0;
  std::vector<Mat2c> site(static_cast<std::size_t>(n), zero);
  double scale = 1.0;
  for (int l = 0; l < shape.depth; ++l) {
    const bool noisy = placement.noisy_layer(l, shape.depth);
    for (const auto& support : shape.layer_supports(l)) {
      for (int q : support) {
        scale *= site[q].trace().real();
        site[q] = 0.5 * Mat2c::Identity();
        if (noisy) site[q] = placement.channel.apply(site[q]);
      }
    }
  }
  if (placement.mode == PlacementMode::fixed_final_rotations) {
    for (int q = 0; q < n; ++q) {
      const Mat2c u = final_rotation(placement, q);
      site[q] = u * site[q] * u.adjoint();
    }
  }
  const std::uint64_t size = std::uint64_t(1) << n;
  Eigen::VectorXd out(static_cast<Eigen::Index>(size));
  for (std::uint64_t x = 0; x < size; ++x) {
    double v = scale;
    for (int q = 0; q < n; ++q) {
      const int b = (x >> (n - 1 - q)) & 1;
      v *= site[q](b, b).real();
    }
    out(static_cast<Eigen::Index>(x)) = v;
  }
  return out;
}

}  // namespace rcs
