#include "rtn/rand_gauss.hpp"

#include <cmath>
#include <numbers>

namespace rtn {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::int64_t checked_pow(std::int64_t base, int exp, double budget) {
  if (base < 1 || exp < 0) throw InvalidParameter("checked_pow: bad arguments");
  double approx = std::pow(double(base), exp);
  if (approx > budget) throw ResourceLimit("size " + std::to_string(approx) + " exceeds memory budget");
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

std::uint64_t SeedSpec::derive() const {
  // counter-style: each component goes through a full avalanche round
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ splitmix64(trial_index + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ fnv1a(stream_label));
  return h;
}

SeedSpec SeedSpec::with_label(std::string label) const {
  return SeedSpec{master_seed, trial_index, std::move(label)};
}

double ComplexGaussian::uniform01() {
  return (double(eng_() >> 11) + 0.5) * 0x1.0p-53;
}

cplx ComplexGaussian::operator()(double variance) {
  // |g|^2 = -variance * log(u1) is exponential with mean `variance`
  double u1 = uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-variance * std::log(u1));
  double th = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

Mat sample_complex_gaussian_matrix(const SeedSpec& seed, int rows, int cols, double variance) {
  if (rows < 1 || cols < 1) throw InvalidParameter("matrix shape must be positive");
  if (!(variance >= 0.0)) throw InvalidParameter("variance must be nonnegative");
  ComplexGaussian g(seed);
  Mat m(rows, cols);
  // row-major fill order, independent of Eigen storage
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = g(variance);
  return m;
}

MpsTensor::MpsTensor(int d_, int D_) : d(d_), D(D_) {
  if (d < 1 || D < 1) throw InvalidParameter("MPS tensor needs d, D >= 1");
  entries.assign(std::size_t(d) * D * D, cplx(0));
}

Mat MpsTensor::slice(int x) const {
  Mat s(D, D);
  for (int l = 0; l < D; ++l)
    for (int r = 0; r < D; ++r) s(l, r) = (*this)(x, l, r);
  return s;
}

Mat MpsTensor::bond_by_phys() const {
  Mat m(D * D, d);
  for (int x = 0; x < d; ++x)
    for (int l = 0; l < D; ++l)
      for (int r = 0; r < D; ++r) m(l * D + r, x) = (*this)(x, l, r);
  return m;
}

double MpsTensor::norm2() const {
  double s = 0;
  for (const auto& z : entries) s += std::norm(z);
  return s;
}

void MpsTensor::validate() const {
  if (d < 1 || D < 1 || entries.size() != std::size_t(d) * D * D)
    throw InvalidParameter("MPS tensor shape mismatch");
  for (const auto& z : entries)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidParameter("MPS tensor has non-finite entries");
}

PepsTensor::PepsTensor(int d_, int D_) : d(d_), D(D_) {
  if (d < 1 || D < 1) throw InvalidParameter("PEPS tensor needs d, D >= 1");
  entries.assign(std::size_t(d) * D * D * D * D, cplx(0));
}

Mat PepsTensor::slice(int x, int a, int b) const {
  Mat s(D, D);
  for (int l = 0; l < D; ++l)
    for (int r = 0; r < D; ++r) s(l, r) = (*this)(x, l, r, a, b);
  return s;
}

double PepsTensor::norm2() const {
  double s = 0;
  for (const auto& z : entries) s += std::norm(z);
  return s;
}

void PepsTensor::validate() const {
  std::size_t n = std::size_t(d) * D * D * D * D;
  if (d < 1 || D < 1 || entries.size() != n) throw InvalidParameter("PEPS tensor shape mismatch");
  for (const auto& z : entries)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidParameter("PEPS tensor has non-finite entries");
}

MpsTensor sample_mps_tensor(const SeedSpec& seed, int d, int D) {
  MpsTensor t(d, D);
  ComplexGaussian g(seed);
  const double var = 1.0 / (double(d) * D);
  for (auto& z : t.entries) z = g(var);
  return t;
}

PepsTensor sample_peps_tensor(const SeedSpec& seed, int d, int D) {
  PepsTensor t(d, D);
  ComplexGaussian g(seed);
  const double var = 1.0 / (double(d) * D * D);
  for (auto& z : t.entries) z = g(var);
  return t;
}

}  // namespace rtn
