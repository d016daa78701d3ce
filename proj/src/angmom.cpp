#include "pasim/angmom.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <unordered_map>

namespace pasim::angmom {

namespace {

using boost::multiprecision::cpp_bin_float_50;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr int kMaxJ = 40;
constexpr int kMaxFact = 3 * kMaxJ + 2;

const cpp_int& factorial(int n) {
  static const auto table = [] {
    std::array<cpp_int, kMaxFact + 1> t;
    t[0] = 1;
    for (int i = 1; i <= kMaxFact; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table[n];
}

// Racah single-sum formula, exact rational intermediates. The alternating
// sum cancels many digits at large j; exact arithmetic keeps the final
// double conversion accurate to the last bit.
double wigner3j_exact(int j1, int j2, int j3, int m1, int m2, int m3) {
  cpp_rational sum = 0;
  const int s_min = std::max({0, -(j3 - j2 + m1), -(j3 - j1 - m2)});
  const int s_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  for (int s = s_min; s <= s_max; ++s) {
    cpp_int den = factorial(s) * factorial(j1 + j2 - j3 - s) * factorial(j1 - m1 - s) *
                  factorial(j2 + m2 - s) * factorial(j3 - j2 + m1 + s) *
                  factorial(j3 - j1 - m2 + s);
    cpp_rational term(1, den);
    if (s & 1) term = -term;
    sum += term;
  }
  if (sum == 0) return 0.0;

  cpp_rational prefac2(factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) *
                           factorial(-j1 + j2 + j3),
                       factorial(j1 + j2 + j3 + 1));
  prefac2 *= factorial(j1 + m1);
  prefac2 *= factorial(j1 - m1);
  prefac2 *= factorial(j2 + m2);
  prefac2 *= factorial(j2 - m2);
  prefac2 *= factorial(j3 + m3);
  prefac2 *= factorial(j3 - m3);

  cpp_bin_float_50 value = sqrt(cpp_bin_float_50(prefac2)) * cpp_bin_float_50(sum);
  if ((j1 - j2 - m3) & 1) value = -value;
  return value.convert_to<double>();
}

std::uint64_t pack_key(int j1, int j2, int j3, int m1, int m2, int m3) {
  // all values fit in [-40, 80]; shift into 7-bit fields
  auto f = [](int v) { return static_cast<std::uint64_t>(v + 41) & 0x7f; };
  return f(j1) | f(j2) << 7 | f(j3) << 14 | f(m1) << 21 | f(m2) << 28 |
         f(m3) << 35;
}

// Memo table guarded by a mutex so concurrent callers see identical results.
double wigner3j_cached(int j1, int j2, int j3, int m1, int m2, int m3) {
  static std::mutex mtx;
  static std::unordered_map<std::uint64_t, double> cache;
  const auto key = pack_key(j1, j2, j3, m1, m2, m3);
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double v = wigner3j_exact(j1, j2, j3, m1, m2, m3);
  std::lock_guard<std::mutex> lock(mtx);
  cache.emplace(key, v);
  return v;
}

}  // namespace

double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (j1 < 0 || j2 < 0 || j3 < 0)
    throw std::invalid_argument("wigner3j: negative angular momentum");
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3)
    throw std::invalid_argument("wigner3j: |m| > j");
  if (j1 > kMaxJ || j2 > kMaxJ || j3 > kMaxJ)
    throw std::domain_error("wigner3j: j > 40 out of supported range");
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
  return wigner3j_cached(j1, j2, j3, m1, m2, m3);
}

double dipole_rotational_factor(const AngularState& upper, const AngularState& lower, int q) {
  if (q < -1 || q > 1) throw std::invalid_argument("dipole_rotational_factor: q must be -1, 0 or 1");
  const int Ju = upper.J, Jl = lower.J;
  if (upper.M != lower.M) return 0.0;           // lab component p = 0
  if (upper.Omega != lower.Omega + q) return 0.0;
  if (std::abs(Ju - Jl) > 1) return 0.0;
  const double norm = std::sqrt(double(2 * Jl + 1) * double(2 * Ju + 1));
  const double phase = ((upper.M - upper.Omega) & 1) ? -1.0 : 1.0;
  return norm * phase * wigner3j(Ju, 1, Jl, -upper.M, 0, lower.M) *
         wigner3j(Ju, 1, Jl, -upper.Omega, q, lower.Omega);
}

double cos2theta_element(const AngularState& bra, const AngularState& ket) {
  if (bra.M != ket.M || bra.Omega != ket.Omega) return 0.0;
  if (std::abs(bra.J - ket.J) > 2) return 0.0;
  double value = (bra.J == ket.J) ? 1.0 / 3.0 : 0.0;
  const double norm = std::sqrt(double(2 * ket.J + 1) * double(2 * bra.J + 1));
  const double phase = ((ket.M - ket.Omega) & 1) ? -1.0 : 1.0;
  value += (2.0 / 3.0) * norm * phase * wigner3j(bra.J, 2, ket.J, ket.M, 0, -ket.M) *
           wigner3j(bra.J, 2, ket.J, ket.Omega, 0, -ket.Omega);
  return value;
}

}  // namespace pasim::angmom
