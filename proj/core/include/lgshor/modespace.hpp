#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace lgshor {

using Complex = std::complex<double>;

/// Work-register basis: the two linear polarization directions of the beam.
enum class Polarization : std::uint8_t { H = 0, V = 1 };

Polarization flipped(Polarization p);
char pol_char(Polarization p);

/// Basis label of one beam component: OAM topological charge l plus linear
/// polarization. The (l, pol) ordering is the canonical serialization order.
struct ModeKey {
  int l = 0;
  Polarization pol = Polarization::H;

  friend auto operator<=>(const ModeKey&, const ModeKey&) = default;
};

/// Sparse complex amplitude vector over (OAM, polarization) labels.
///
/// Absent keys read as amplitude zero. States are plain immutable-ish values:
/// no operation renormalizes behind the caller's back, since the optical
/// pipeline deliberately works with unnormalized superpositions.
class ModeState {
public:
  ModeState() = default;

  static ModeState single(int l, Polarization pol, Complex amp = {1.0, 0.0});

  /// Accumulates amp onto the (l, pol) component.
  void add(int l, Polarization pol, Complex amp);
  void set(int l, Polarization pol, Complex amp);

  /// Amplitude of the (l, pol) component, zero when absent.
  Complex amplitude(int l, Polarization pol) const;

  std::size_t term_count() const { return amps_.size(); }
  bool empty() const;  // true when every stored amplitude is exactly zero
  double norm2() const;
  bool is_normalized(double tol = 1e-12) const;

  ModeState scaled(Complex factor) const;
  ModeState conjugated() const;

  /// Copy without components of magnitude <= eps.
  ModeState pruned(double eps = 0.0) const;

  /// Smallest and largest |l| with nonzero amplitude; nullopt when empty.
  std::optional<int> max_abs_l() const;

  const std::map<ModeKey, Complex>& terms() const { return amps_; }

  friend ModeState operator+(const ModeState& a, const ModeState& b);

private:
  std::map<ModeKey, Complex> amps_;
};

Complex inner_product(const ModeState& a, const ModeState& b);

/// |<a|b>|^2 / (||a||^2 ||b||^2). Equals 1 iff the states agree up to a
/// global complex scale, 0 for disjoint support. Zero vs nonzero state gives
/// 0; throws std::domain_error when both states are zero.
double state_fidelity(const ModeState& a, const ModeState& b);

/// Scale- and global-phase-insensitive equality: fidelity > 1 - tol.
bool states_equivalent(const ModeState& a, const ModeState& b, double tol = 1e-9);

/// Bijection between computational values x in [0, 2^n) and the OAM labels
/// carrying them. The compiled demonstration uses 0<->+1, 1<->-1, 2<->+2,
/// 3<->-2; `alternating` extends that sign pattern to any register size.
class BasisMap {
public:
  explicit BasisMap(std::vector<int> x_to_l);

  static BasisMap compiled_default();
  static BasisMap alternating(int n);

  std::size_t dim() const { return x_to_l_.size(); }
  int l_of(std::size_t x) const;
  std::optional<std::size_t> x_of(int l) const;
  bool contains_l(int l) const { return x_of(l).has_value(); }
  const std::vector<int>& labels() const { return x_to_l_; }

  friend bool operator==(const BasisMap&, const BasisMap&) = default;

private:
  std::vector<int> x_to_l_;
  std::map<int, std::size_t> l_to_x_;
};

long long mod_pow(long long base, long long exp, long long mod);

/// Compiled order-finding instance: factor N with coprime base a on a 2^n
/// dimensional control register. Construction validates that N is odd,
/// composite and not a prime power, that 1 < a < N with gcd(a, N) = 1, and
/// that 2^n covers the values the instance produces.
class ShorProblem {
public:
  ShorProblem(long long modulus, long long base, int control_bits);

  long long modulus() const { return modulus_; }
  long long base() const { return base_; }
  int control_bits() const { return control_bits_; }
  std::size_t dim() const { return std::size_t{1} << control_bits_; }

  /// a^x mod N.
  long long mef_value(long long x) const;
  /// Distinct values of a^x mod N over x in [0, 2^n), ascending.
  std::vector<long long> distinct_mef_values() const;

private:
  long long modulus_ = 0;
  long long base_ = 0;
  int control_bits_ = 0;
};

/// Assignment of MEF values to work-register polarizations.
using WorkMap = std::map<long long, Polarization>;

/// {1 -> H, other -> V} for a two-valued instance.
WorkMap default_work_map(const ShorProblem& problem);

/// Uniform superposition over the control basis with the work register in H.
/// Amplitudes are 1 per term (the beam superimposes all components at once,
/// so probability amplitudes are optional) unless `normalized` is set, which
/// scales them to 2^{-n/2}.
ModeState make_input_state(const BasisMap& basis, bool normalized = false);
ModeState make_input_state(const ShorProblem& problem, const BasisMap& basis,
                           bool normalized = false);

/// Modular-exponentiation entangler: |l(x), H> -> |l(x), work_map(a^x mod N)>.
/// Amplitudes unchanged, squared norm preserved exactly. Requires an all-H
/// input and a two-valued instance (the work register has two polarizations).
ModeState apply_mef(const ModeState& state, const ShorProblem& problem,
                    const BasisMap& basis, const WorkMap& work_map);

/// Sub-state with the given polarization, amplitudes preserved. Classical
/// beam splitting, not collapse: no renormalization, empty result permitted.
ModeState project_work(const ModeState& state, Polarization pol);

inline constexpr std::size_t kMaxDftDim = 1024;

/// Dense DFT matrix, entry (j, x) = 2^{-n/2} exp(+i 2 pi j x / 2^n),
/// row-major. Entries at quarter-turn phases are exact (+-1, +-i scaled).
struct DftMatrix {
  std::size_t dim = 0;
  std::vector<Complex> entries;

  Complex at(std::size_t j, std::size_t x) const { return entries[j * dim + x]; }
};

/// Throws std::invalid_argument for n < 1 and std::length_error when 2^n
/// exceeds kMaxDftDim.
DftMatrix dft_matrix(int n);

/// DFT on the control register, polarization carried through untouched.
/// Output is expressed on the same OAM labels via the basis map. Every OAM
/// value in the state must be a basis label. Norm preserved.
ModeState apply_dft(const ModeState& state, const BasisMap& basis);

/// Basis values x whose amplitude magnitude exceeds rel_tol times the largest
/// magnitude in the state, ascending. Empty for the zero state.
std::vector<std::size_t> basis_support(const ModeState& state, const BasisMap& basis,
                                       double rel_tol = 1e-9);

}  // namespace lgshor
