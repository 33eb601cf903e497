#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "reslab/arith.hpp"
#include "reslab/dft.hpp"

namespace reslab {

/// One cyclic factor of the unit group mod q.
///
/// Odd prime powers p^e contribute one component generated by a primitive
/// root. The 2-part contributes nothing for 2 || q, one component of order 2
/// for 4 || q, and two components for 8 | q: the sign {+1, -1} and the
/// subgroup generated by 5. In that last case a unit a mod 2^e is written
/// a = (-1)^s 5^k and the two tables hold s and k respectively.
struct CyclicComponent {
  static constexpr std::uint32_t kNotUnit = 0xffffffffu;

  std::uint64_t prime = 0;
  std::uint64_t modulus = 0;  // prime power on which the component lives
  std::uint64_t generator = 0;
  std::uint64_t order = 0;
  std::vector<std::uint32_t> dlog;  // indexed by residue mod modulus
  std::vector<cplx> roots;          // e(k / order)
};

/// The group of Dirichlet characters mod q.
///
/// Characters are indexed by exponent vectors (j_1, ..., j_r), one entry per
/// cyclic component, with chi(a) = e(sum_c j_c * dlog_c(a) / order_c). The
/// flat index is the row-major position of that vector, so lexicographic
/// order on vectors is numeric order on flat indices and flat index 0 is the
/// principal character.
class CharacterGroup {
 public:
  explicit CharacterGroup(std::uint64_t q);
  explicit CharacterGroup(Modulus modulus);

  const Modulus& modulus() const noexcept { return modulus_; }
  std::uint64_t q() const noexcept { return modulus_.q; }
  std::uint64_t size() const noexcept { return modulus_.phi; }
  std::span<const CyclicComponent> components() const noexcept { return components_; }
  /// Component orders, i.e. the shape of the flat character array.
  std::vector<std::size_t> dims() const;

  std::uint64_t flatten(std::span<const std::uint64_t> index) const;
  std::vector<std::uint64_t> unflatten(std::uint64_t flat) const;

  bool is_unit(std::uint64_t n) const { return gcd(n % q(), q()) == 1; }
  /// Per-component discrete logs of n, or nullopt when gcd(n, q) > 1.
  std::optional<std::vector<std::uint64_t>> dlog(std::uint64_t n) const;
  /// Row-major position of dlog(n); units map bijectively onto [0, phi).
  std::optional<std::uint64_t> unit_position(std::uint64_t n) const;

  /// chi(n) as a fraction of a full turn in [0, 1), for the character with
  /// the given index vector and a unit with the given discrete logs.
  double phase(std::span<const std::uint64_t> index, std::span<const std::uint64_t> logs) const;
  cplx value(std::span<const std::uint64_t> index, std::uint64_t n) const;

  std::vector<std::uint64_t> conjugate(std::span<const std::uint64_t> index) const;

 private:
  void build();

  Modulus modulus_;
  std::vector<CyclicComponent> components_;
  std::vector<std::uint64_t> strides_;
};

/// A character of a CharacterGroup. Holds a pointer to the group, which must
/// outlive it.
class DirichletCharacter {
 public:
  DirichletCharacter(const CharacterGroup& group, std::vector<std::uint64_t> index);
  DirichletCharacter(const CharacterGroup& group, std::uint64_t flat);
  static DirichletCharacter principal(const CharacterGroup& group) { return {group, std::uint64_t{0}}; }

  const CharacterGroup& group() const noexcept { return *group_; }
  std::span<const std::uint64_t> index() const noexcept { return index_; }
  std::uint64_t flat_index() const { return group_->flatten(index_); }
  bool is_principal() const;
  DirichletCharacter conj() const { return {*group_, group_->conjugate(index_)}; }

  cplx operator()(std::uint64_t n) const { return group_->value(index_, n); }

 private:
  const CharacterGroup* group_;
  std::vector<std::uint64_t> index_;
};

/// S_chi(x) for every character mod q, indexed by flat character index.
struct CharacterSumProfile {
  std::uint64_t q = 0;
  std::uint64_t x = 0;
  std::vector<std::size_t> dims;
  std::vector<cplx> sums;
  std::uint64_t argmax_nonprincipal = 0;  // meaningful when sums.size() > 1
  double max_nonprincipal = 0.0;
};

struct DeltaMax {
  double value = 0.0;
  std::uint64_t witness_flat = 0;
  std::vector<std::uint64_t> witness_index;
};

CharacterGroup build_group(std::uint64_t q);

cplx evaluate(const DirichletCharacter& chi, std::uint64_t n);

/// S_chi(x) by direct summation. Non-principal sums reduce x mod q first.
cplx char_sum(const DirichletCharacter& chi, std::uint64_t x);

/// Number of 1 <= n <= x coprime to q.
std::uint64_t coprime_count(std::uint64_t x, const Modulus& modulus);

/// Places per-residue weights into the dlog layout: result[unit_position(a)]
/// = weights[a] for every unit a mod q. weights.size() must equal q.
std::vector<cplx> to_dlog_layout(const CharacterGroup& group, std::span<const double> weights);

/// Applies sum_a w(a) chi(a) for every chi to a dlog-layout vector, in
/// place. Groups below 64 elements are transformed directly.
void character_transform(const CharacterGroup& group, std::span<cplx> data, unsigned workers = 0);

/// All S_chi(x) through one group transform of the residue-count vector.
CharacterSumProfile all_char_sums(const CharacterGroup& group, std::uint64_t x, unsigned workers = 0);
CharacterSumProfile all_char_sums(std::uint64_t q, std::uint64_t x, unsigned workers = 0);

/// Largest |S_chi(x)| over non-principal chi from a profile. Values within
/// a relative 1e-12 of the running maximum count as ties and keep the
/// smaller index, so the witness does not depend on rounding noise.
DeltaMax delta_from_profile(const CharacterGroup& group, const CharacterSumProfile& profile);

/// Delta(x, q) by exhaustive search over the character group.
DeltaMax delta_max(const CharacterGroup& group, std::uint64_t x, unsigned workers = 0);
DeltaMax delta_max(std::uint64_t x, std::uint64_t q, unsigned workers = 0);

}  // namespace reslab
