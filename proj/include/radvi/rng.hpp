#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace radvi {

// splitmix64 step; used to derive independent stream seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded RNG owned by the caller; all samplers take one explicitly so runs
// are reproducible and concurrent callers can hold independent streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double exponential() { return exp_(engine_); }
  double gamma(double shape, double scale) {
    std::gamma_distribution<double> g(shape, scale);
    return g(engine_);
  }
  double chi_squared(double dof) { return gamma(0.5 * dof, 2.0); }

  Eigen::VectorXd normal_vector(int d) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = normal();
    return v;
  }

  // Norm of a d-dimensional standard normal draw.
  double chi(int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const double z = normal();
      s += z * z;
    }
    return std::sqrt(s);
  }

  Eigen::VectorXd sphere(int d) {
    Eigen::VectorXd v = normal_vector(d);
    const double n = v.norm();
    return n > 0.0 ? Eigen::VectorXd(v / n) : sphere(d);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::exponential_distribution<double> exp_{1.0};
};

}  // namespace radvi
