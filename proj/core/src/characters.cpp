#include "reslab/characters.hpp"

#include <cmath>
#include <string>

#include "reslab/budget.hpp"
#include "reslab/error.hpp"

namespace reslab {

CharacterGroup::CharacterGroup(std::uint64_t q) : CharacterGroup(Modulus(q)) {}

CharacterGroup::CharacterGroup(Modulus modulus) : modulus_(std::move(modulus)) { build(); }

void CharacterGroup::build() {
  if (modulus_.q < 1) throw Error(Errc::domain, "modulus must be positive");
  if (modulus_.q > kDefaultFactorTableCapacity) {
    throw Error(Errc::capacity, "modulus " + std::to_string(modulus_.q) +
                                    " too large for discrete-log tables");
  }
  for (const auto& [p, e] : modulus_.factorization.pairs) {
    const std::uint64_t pk = ipow(p, e);
    if (p == 2) {
      if (e == 1) continue;
      if (e == 2) {
        CyclicComponent c{2, 4, 3, 2, std::vector<std::uint32_t>(4, CyclicComponent::kNotUnit), {}};
        c.dlog[1] = 0;
        c.dlog[3] = 1;
        components_.push_back(std::move(c));
        continue;
      }
      CyclicComponent sign{2, pk, pk - 1, 2, std::vector<std::uint32_t>(pk, CyclicComponent::kNotUnit), {}};
      for (std::uint64_t a = 1; a < pk; a += 2) sign.dlog[a] = (a % 4 == 3) ? 1 : 0;
      CyclicComponent five{2, pk, 5, pk / 4, std::vector<std::uint32_t>(pk, CyclicComponent::kNotUnit), {}};
      std::uint64_t v = 1;
      for (std::uint64_t k = 0; k < pk / 4; ++k) {
        five.dlog[v] = static_cast<std::uint32_t>(k);
        five.dlog[pk - v] = static_cast<std::uint32_t>(k);
        v = v * 5 % pk;
      }
      components_.push_back(std::move(sign));
      components_.push_back(std::move(five));
      continue;
    }
    CyclicComponent c{p, pk, primitive_root(pk), pk / p * (p - 1),
                      std::vector<std::uint32_t>(pk, CyclicComponent::kNotUnit), {}};
    std::uint64_t v = 1;
    for (std::uint64_t k = 0; k < c.order; ++k) {
      c.dlog[v] = static_cast<std::uint32_t>(k);
      v = v * c.generator % pk;
    }
    components_.push_back(std::move(c));
  }

  strides_.assign(components_.size(), 1);
  for (std::size_t i = components_.size(); i-- > 1;) {
    strides_[i - 1] = strides_[i] * components_[i].order;
  }
  for (auto& c : components_) {
    c.roots.resize(c.order);
    for (std::uint64_t k = 0; k < c.order; ++k) c.roots[k] = unit_root(k, c.order);
  }
}

std::vector<std::size_t> CharacterGroup::dims() const {
  std::vector<std::size_t> d;
  d.reserve(components_.size());
  for (const auto& c : components_) d.push_back(c.order);
  return d;
}

std::uint64_t CharacterGroup::flatten(std::span<const std::uint64_t> index) const {
  if (index.size() != components_.size()) throw Error(Errc::domain, "index vector has wrong length");
  std::uint64_t flat = 0;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    if (index[c] >= components_[c].order) throw Error(Errc::out_of_range, "character index out of range");
    flat += index[c] * strides_[c];
  }
  return flat;
}

std::vector<std::uint64_t> CharacterGroup::unflatten(std::uint64_t flat) const {
  if (flat >= size()) throw Error(Errc::out_of_range, "flat character index out of range");
  std::vector<std::uint64_t> index(components_.size());
  for (std::size_t c = 0; c < components_.size(); ++c) {
    index[c] = flat / strides_[c];
    flat %= strides_[c];
  }
  return index;
}

std::optional<std::vector<std::uint64_t>> CharacterGroup::dlog(std::uint64_t n) const {
  if (!is_unit(n)) return std::nullopt;
  std::vector<std::uint64_t> logs(components_.size());
  for (std::size_t c = 0; c < components_.size(); ++c) {
    logs[c] = components_[c].dlog[n % components_[c].modulus];
  }
  return logs;
}

std::optional<std::uint64_t> CharacterGroup::unit_position(std::uint64_t n) const {
  if (!is_unit(n)) return std::nullopt;
  std::uint64_t pos = 0;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    pos += components_[c].dlog[n % components_[c].modulus] * strides_[c];
  }
  return pos;
}

double CharacterGroup::phase(std::span<const std::uint64_t> index,
                             std::span<const std::uint64_t> logs) const {
  long double turns = 0.0L;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const std::uint64_t order = components_[c].order;
    turns += static_cast<long double>(mul_mod(index[c], logs[c], order)) / static_cast<long double>(order);
  }
  turns -= std::floor(turns);
  return static_cast<double>(turns);
}

cplx CharacterGroup::value(std::span<const std::uint64_t> index, std::uint64_t n) const {
  if (!is_unit(n)) return {0.0, 0.0};
  cplx v{1.0, 0.0};
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const auto& comp = components_[c];
    const std::uint64_t log = comp.dlog[n % comp.modulus];
    const std::uint64_t k = mul_mod(index[c], log, comp.order);
    if (k != 0) v *= comp.roots[k];
  }
  return v;
}

std::vector<std::uint64_t> CharacterGroup::conjugate(std::span<const std::uint64_t> index) const {
  std::vector<std::uint64_t> out(index.size());
  for (std::size_t c = 0; c < index.size(); ++c) {
    const std::uint64_t order = components_[c].order;
    out[c] = (order - index[c] % order) % order;
  }
  return out;
}

DirichletCharacter::DirichletCharacter(const CharacterGroup& group, std::vector<std::uint64_t> index)
    : group_(&group), index_(std::move(index)) {
  group_->flatten(index_);  // validates
}

DirichletCharacter::DirichletCharacter(const CharacterGroup& group, std::uint64_t flat)
    : group_(&group), index_(group.unflatten(flat)) {}

bool DirichletCharacter::is_principal() const {
  for (auto j : index_) {
    if (j != 0) return false;
  }
  return true;
}

CharacterGroup build_group(std::uint64_t q) { return CharacterGroup(q); }

cplx evaluate(const DirichletCharacter& chi, std::uint64_t n) { return chi(n); }

std::uint64_t coprime_count(std::uint64_t x, const Modulus& modulus) {
  const auto& pairs = modulus.factorization.pairs;
  const std::size_t r = pairs.size();
  std::int64_t total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    std::uint64_t d = 1;
    int sign = 1;
    for (std::size_t i = 0; i < r; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        d *= pairs[i].prime;
        sign = -sign;
      }
    }
    total += sign * static_cast<std::int64_t>(x / d);
  }
  return static_cast<std::uint64_t>(total);
}

cplx char_sum(const DirichletCharacter& chi, std::uint64_t x) {
  const CharacterGroup& g = chi.group();
  if (chi.is_principal()) return {static_cast<double>(coprime_count(x, g.modulus())), 0.0};
  x %= g.q();
  cplx acc{};
  for (std::uint64_t n = 1; n <= x; ++n) acc += chi(n);
  return acc;
}

std::vector<cplx> to_dlog_layout(const CharacterGroup& group, std::span<const double> weights) {
  if (weights.size() != group.q()) throw Error(Errc::domain, "weight vector length must equal q");
  std::vector<cplx> data(group.size());
  for (std::uint64_t a = 0; a < group.q(); ++a) {
    if (auto pos = group.unit_position(a)) data[*pos] = weights[a];
  }
  return data;
}

void character_transform(const CharacterGroup& group, std::span<cplx> data, unsigned workers) {
  if (data.size() != group.size()) throw Error(Errc::domain, "transform buffer must have phi(q) entries");
  constexpr std::uint64_t kDirectBelow = 64;
  if (group.size() >= kDirectBelow) {
    const auto dims = group.dims();
    multi_dft(data, dims, +1, workers);
    return;
  }
  const auto comps = group.components();
  std::vector<cplx> out(data.size());
  for (std::uint64_t j = 0; j < group.size(); ++j) {
    const auto index = group.unflatten(j);
    cplx acc{};
    for (std::uint64_t pos = 0; pos < group.size(); ++pos) {
      if (data[pos] == cplx{}) continue;
      const auto logs = group.unflatten(pos);
      cplx v{1.0, 0.0};
      for (std::size_t c = 0; c < comps.size(); ++c) {
        v *= comps[c].roots[mul_mod(index[c], logs[c], comps[c].order)];
      }
      acc += data[pos] * v;
    }
    out[j] = acc;
  }
  std::copy(out.begin(), out.end(), data.begin());
}

CharacterSumProfile all_char_sums(const CharacterGroup& group, std::uint64_t x, unsigned workers) {
  const std::uint64_t q = group.q();
  std::vector<double> counts(q, 0.0);
  if (x >= q) {
    for (std::uint64_t a = 0; a < q; ++a) {
      counts[a] = a == 0 ? static_cast<double>(x / q) : static_cast<double>((x - a) / q + 1);
    }
  } else {
    for (std::uint64_t a = 1; a <= x; ++a) counts[a] = 1.0;
  }
  CharacterSumProfile profile;
  profile.q = q;
  profile.x = x;
  profile.dims = group.dims();
  profile.sums = to_dlog_layout(group, counts);
  character_transform(group, profile.sums, workers);
  const DeltaMax d = delta_from_profile(group, profile);
  profile.argmax_nonprincipal = d.witness_flat;
  profile.max_nonprincipal = d.value;
  return profile;
}

CharacterSumProfile all_char_sums(std::uint64_t q, std::uint64_t x, unsigned workers) {
  return all_char_sums(CharacterGroup(q), x, workers);
}

DeltaMax delta_from_profile(const CharacterGroup& group, const CharacterSumProfile& profile) {
  DeltaMax best;
  if (profile.sums.size() < 2) return best;
  best.witness_flat = 1;
  best.value = std::abs(profile.sums[1]);
  for (std::uint64_t j = 2; j < profile.sums.size(); ++j) {
    const double v = std::abs(profile.sums[j]);
    if (v > best.value * (1.0 + 1e-12) + 1e-12) {
      best.value = v;
      best.witness_flat = j;
    }
  }
  best.witness_index = group.unflatten(best.witness_flat);
  return best;
}

DeltaMax delta_max(const CharacterGroup& group, std::uint64_t x, unsigned workers) {
  if (group.size() < 2) {
    throw Error(Errc::domain, "modulus " + std::to_string(group.q()) + " has no non-principal character");
  }
  if (group.size() > kDefaultCharacterCap) {
    throw Error(Errc::capacity, "phi(q) exceeds the character evaluation cap");
  }
  if (x < 1) throw Error(Errc::domain, "delta_max needs x >= 1");
  return delta_from_profile(group, all_char_sums(group, x, workers));
}

DeltaMax delta_max(std::uint64_t x, std::uint64_t q, unsigned workers) {
  if (q < 3) throw Error(Errc::domain, "modulus " + std::to_string(q) + " has no non-principal character");
  return delta_max(CharacterGroup(q), x, workers);
}

}  // namespace reslab
