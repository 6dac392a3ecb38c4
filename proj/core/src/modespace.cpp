#include "lgshor/modespace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace lgshor {

Polarization flipped(Polarization p) {
  return p == Polarization::H ? Polarization::V : Polarization::H;
}

char pol_char(Polarization p) { return p == Polarization::H ? 'H' : 'V'; }

ModeState ModeState::single(int l, Polarization pol, Complex amp) {
  ModeState s;
  s.set(l, pol, amp);
  return s;
}

void ModeState::add(int l, Polarization pol, Complex amp) {
  amps_[ModeKey{l, pol}] += amp;
}

void ModeState::set(int l, Polarization pol, Complex amp) {
  amps_[ModeKey{l, pol}] = amp;
}

Complex ModeState::amplitude(int l, Polarization pol) const {
  auto it = amps_.find(ModeKey{l, pol});
  return it == amps_.end() ? Complex{} : it->second;
}

bool ModeState::empty() const {
  return std::all_of(amps_.begin(), amps_.end(),
                     [](const auto& kv) { return kv.second == Complex{}; });
}

double ModeState::norm2() const {
  double sum = 0.0;
  for (const auto& [key, amp] : amps_) sum += std::norm(amp);
  return sum;
}

bool ModeState::is_normalized(double tol) const {
  return std::abs(norm2() - 1.0) <= tol;
}

ModeState ModeState::scaled(Complex factor) const {
  ModeState out = *this;
  for (auto& [key, amp] : out.amps_) amp *= factor;
  return out;
}

ModeState ModeState::conjugated() const {
  ModeState out = *this;
  for (auto& [key, amp] : out.amps_) amp = std::conj(amp);
  return out;
}

ModeState ModeState::pruned(double eps) const {
  ModeState out;
  for (const auto& [key, amp] : amps_) {
    if (std::abs(amp) > eps) out.amps_.emplace(key, amp);
  }
  return out;
}

std::optional<int> ModeState::max_abs_l() const {
  std::optional<int> best;
  for (const auto& [key, amp] : amps_) {
    if (amp == Complex{}) continue;
    int a = std::abs(key.l);
    if (!best || a > *best) best = a;
  }
  return best;
}

ModeState operator+(const ModeState& a, const ModeState& b) {
  ModeState out = a;
  for (const auto& [key, amp] : b.amps_) out.amps_[key] += amp;
  return out;
}

Complex inner_product(const ModeState& a, const ModeState& b) {
  // Iterate over the smaller map.
  const ModeState& small = a.terms().size() <= b.terms().size() ? a : b;
  const ModeState& large = &small == &a ? b : a;
  Complex sum{};
  for (const auto& [key, amp] : small.terms()) {
    auto it = large.terms().find(key);
    if (it == large.terms().end()) continue;
    const Complex& a_amp = (&small == &a) ? amp : it->second;
    const Complex& b_amp = (&small == &a) ? it->second : amp;
    sum += std::conj(a_amp) * b_amp;
  }
  return sum;
}

double state_fidelity(const ModeState& a, const ModeState& b) {
  const double na = a.norm2();
  const double nb = b.norm2();
  if (na == 0.0 && nb == 0.0) {
    throw std::domain_error("state_fidelity: both states are zero");
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::norm(inner_product(a, b)) / (na * nb);
}

bool states_equivalent(const ModeState& a, const ModeState& b, double tol) {
  return state_fidelity(a, b) > 1.0 - tol;
}

BasisMap::BasisMap(std::vector<int> x_to_l) : x_to_l_(std::move(x_to_l)) {
  if (x_to_l_.empty()) throw std::invalid_argument("BasisMap: empty label list");
  for (std::size_t x = 0; x < x_to_l_.size(); ++x) {
    int l = x_to_l_[x];
    if (l == 0) throw std::invalid_argument("BasisMap: OAM label 0 is reserved for the raw beam");
    if (!l_to_x_.emplace(l, x).second) {
      throw std::invalid_argument("BasisMap: duplicate OAM label " + std::to_string(l));
    }
  }
}

BasisMap BasisMap::compiled_default() { return BasisMap({+1, -1, +2, -2}); }

BasisMap BasisMap::alternating(int n) {
  if (n < 0 || (std::size_t{1} << n) > kMaxDftDim) {
    throw std::invalid_argument("BasisMap::alternating: register size out of range");
  }
  std::vector<int> labels(std::size_t{1} << n);
  for (std::size_t x = 0; x < labels.size(); ++x) {
    int magnitude = static_cast<int>(x / 2) + 1;
    labels[x] = (x % 2 == 0) ? magnitude : -magnitude;
  }
  return BasisMap(std::move(labels));
}

int BasisMap::l_of(std::size_t x) const {
  if (x >= x_to_l_.size()) throw std::domain_error("BasisMap: x outside register");
  return x_to_l_[x];
}

std::optional<std::size_t> BasisMap::x_of(int l) const {
  auto it = l_to_x_.find(l);
  if (it == l_to_x_.end()) return std::nullopt;
  return it->second;
}

long long mod_pow(long long base, long long exp, long long mod) {
  if (mod <= 0) throw std::invalid_argument("mod_pow: modulus must be positive");
  if (exp < 0) throw std::invalid_argument("mod_pow: negative exponent");
  long long result = 1 % mod;
  long long b = ((base % mod) + mod) % mod;
  while (exp > 0) {
    if (exp & 1) result = (result * b) % mod;
    b = (b * b) % mod;
    exp >>= 1;
  }
  return result;
}

namespace {

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_prime_power(long long n) {
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    long long m = n;
    while (m % p == 0) m /= p;
    return m == 1;
  }
  return false;  // prime itself is handled separately
}

}  // namespace

ShorProblem::ShorProblem(long long modulus, long long base, int control_bits)
    : modulus_(modulus), base_(base), control_bits_(control_bits) {
  if (modulus < 3) throw std::invalid_argument("ShorProblem: N must be at least 3");
  if (modulus % 2 == 0) throw std::invalid_argument("ShorProblem: N must be odd");
  if (is_prime(modulus)) throw std::invalid_argument("ShorProblem: N must be composite");
  if (is_prime_power(modulus)) {
    throw std::invalid_argument("ShorProblem: N must not be a prime power");
  }
  if (base <= 1 || base >= modulus) {
    throw std::invalid_argument("ShorProblem: base a must satisfy 1 < a < N");
  }
  if (std::gcd(base, modulus) != 1) {
    throw std::invalid_argument("ShorProblem: a not coprime with N");
  }
  if (control_bits < 0 || (std::size_t{1} << control_bits) > kMaxDftDim) {
    throw std::invalid_argument("ShorProblem: control register size out of range");
  }
  // The register must cover every value the MEF can take, i.e. the
  // multiplicative order of a.
  long long order = 1;
  for (long long v = base % modulus; v != 1; v = (v * base) % modulus) ++order;
  if (static_cast<long long>(dim()) < order) {
    throw std::invalid_argument("ShorProblem: register too small for the instance");
  }
}

long long ShorProblem::mef_value(long long x) const {
  return mod_pow(base_, x, modulus_);
}

std::vector<long long> ShorProblem::distinct_mef_values() const {
  std::set<long long> values;
  for (std::size_t x = 0; x < dim(); ++x) values.insert(mef_value(static_cast<long long>(x)));
  return {values.begin(), values.end()};
}

WorkMap default_work_map(const ShorProblem& problem) {
  auto values = problem.distinct_mef_values();
  if (values.size() > 2) {
    throw std::domain_error("default_work_map: instance has more than two MEF values");
  }
  WorkMap map;
  map[values.front()] = Polarization::H;
  if (values.size() == 2) map[values.back()] = Polarization::V;
  return map;
}

ModeState make_input_state(const BasisMap& basis, bool normalized) {
  const Complex amp = normalized ? Complex{1.0 / std::sqrt(static_cast<double>(basis.dim())), 0.0}
                                 : Complex{1.0, 0.0};
  ModeState state;
  for (std::size_t x = 0; x < basis.dim(); ++x) {
    state.set(basis.l_of(x), Polarization::H, amp);
  }
  return state;
}

ModeState make_input_state(const ShorProblem& problem, const BasisMap& basis,
                           bool normalized) {
  if (basis.dim() < problem.dim()) {
    throw std::domain_error("make_input_state: basis does not cover the register");
  }
  const Complex amp = normalized ? Complex{1.0 / std::sqrt(static_cast<double>(problem.dim())), 0.0}
                                 : Complex{1.0, 0.0};
  ModeState state;
  for (std::size_t x = 0; x < problem.dim(); ++x) {
    state.set(basis.l_of(x), Polarization::H, amp);
  }
  return state;
}

ModeState apply_mef(const ModeState& state, const ShorProblem& problem,
                    const BasisMap& basis, const WorkMap& work_map) {
  if (problem.distinct_mef_values().size() > 2) {
    throw std::domain_error(
        "apply_mef: more than two MEF values cannot be stored in two polarizations");
  }
  ModeState out;
  for (const auto& [key, amp] : state.terms()) {
    if (amp == Complex{}) continue;
    if (key.pol != Polarization::H) {
      throw std::invalid_argument("apply_mef: input must have support on H only");
    }
    auto x = basis.x_of(key.l);
    if (!x) throw std::domain_error("apply_mef: OAM value outside basis");
    const long long value = problem.mef_value(static_cast<long long>(*x));
    auto target = work_map.find(value);
    if (target == work_map.end()) {
      throw std::domain_error("apply_mef: work map does not cover MEF value " +
                              std::to_string(value));
    }
    out.add(key.l, target->second, amp);
  }
  return out;
}

ModeState project_work(const ModeState& state, Polarization pol) {
  ModeState out;
  for (const auto& [key, amp] : state.terms()) {
    if (key.pol == pol) out.set(key.l, key.pol, amp);
  }
  return out;
}

namespace {

// exp(i 2 pi m / dim) with quarter-turn arguments made exact.
Complex root_of_unity(std::size_t m, std::size_t dim) {
  m %= dim;
  if (4 * m % dim == 0) {
    switch (4 * m / dim) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(dim);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

DftMatrix dft_matrix(int n) {
  if (n < 1) throw std::invalid_argument("dft_matrix: n must be at least 1");
  const std::size_t dim = std::size_t{1} << n;
  if (dim > kMaxDftDim) throw std::length_error("dft_matrix: dimension cap exceeded");
  DftMatrix m;
  m.dim = dim;
  m.entries.resize(dim * dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t x = 0; x < dim; ++x) {
      m.entries[j * dim + x] = scale * root_of_unity(j * x, dim);
    }
  }
  return m;
}

ModeState apply_dft(const ModeState& state, const BasisMap& basis) {
  const std::size_t dim = basis.dim();
  if (dim > kMaxDftDim) throw std::length_error("apply_dft: dimension cap exceeded");
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));

  // Gather each polarization branch as a dense control-register vector.
  std::map<Polarization, std::vector<Complex>> branches;
  for (const auto& [key, amp] : state.terms()) {
    if (amp == Complex{}) continue;
    auto x = basis.x_of(key.l);
    if (!x) throw std::domain_error("apply_dft: OAM value outside basis");
    auto& vec = branches.try_emplace(key.pol, std::vector<Complex>(dim)).first->second;
    vec[*x] += amp;
  }

  ModeState out;
  for (const auto& [pol, vec] : branches) {
    for (std::size_t j = 0; j < dim; ++j) {
      Complex sum{};
      for (std::size_t x = 0; x < dim; ++x) {
        if (vec[x] == Complex{}) continue;
        sum += vec[x] * root_of_unity(j * x, dim);
      }
      out.add(basis.l_of(j), pol, scale * sum);
    }
  }
  return out;
}

std::vector<std::size_t> basis_support(const ModeState& state, const BasisMap& basis,
                                       double rel_tol) {
  double max_mag = 0.0;
  for (const auto& [key, amp] : state.terms()) max_mag = std::max(max_mag, std::abs(amp));
  std::vector<std::size_t> support;
  if (max_mag == 0.0) return support;
  for (const auto& [key, amp] : state.terms()) {
    if (std::abs(amp) <= rel_tol * max_mag) continue;
    auto x = basis.x_of(key.l);
    if (!x) throw std::domain_error("basis_support: OAM value outside basis");
    support.push_back(*x);
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  return support;
}

}  // namespace lgshor
