#include "ltwist/characters.hpp"

#include <array>
#include <numeric>
#include <stdexcept>

#include "ltwist/arith.hpp"

namespace ltwist {

namespace {

std::int64_t least_primitive_root(std::int64_t p, int e) {
  const std::int64_t pe = checked_pow(p, e);
  const std::int64_t order = pe / p * (p - 1);
  const auto order_primes = prime_divisors(order);
  for (std::int64_t g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    bool primitive = true;
    for (std::int64_t r : order_primes) {
      if (pow_mod(g, order / r, pe) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return g;
  }
  throw std::logic_error("no primitive root found");
}

// x mod q with x = local (mod pe) and x = 1 (mod q/pe).
std::int64_t crt_lift(std::int64_t local, std::int64_t pe, std::int64_t q) {
  const std::int64_t rest = q / pe;
  for (std::int64_t x = local; x < q + pe; x += pe) {
    if (x % rest == 1 % rest) return x % q;
  }
  throw std::logic_error("crt_lift failed");
}

struct Component {
  std::int64_t prime;
  int exponent;
  std::int64_t modulus;
  std::size_t first_slot;
  std::size_t slot_count;
  std::vector<std::array<std::int64_t, 2>> logs;  // by residue mod modulus; -1 if not a unit
};

}  // namespace

std::shared_ptr<const UnitGroup> UnitGroup::make(std::int64_t q) {
  return std::shared_ptr<const UnitGroup>(new UnitGroup(q));
}

UnitGroup::UnitGroup(std::int64_t q) : q_(q), order_(0), exponent_(1) {
  if (q < 1) throw std::invalid_argument("UnitGroup: modulus must be positive");
  order_ = euler_phi(q);

  std::vector<Component> components;
  for (const auto& [p, e] : factorize(q)) {
    Component c{p, e, checked_pow(p, e), slots_.size(), 0, {}};
    c.logs.assign(static_cast<std::size_t>(c.modulus), {-1, -1});
    auto add_slot = [&](std::int64_t order, std::int64_t local) {
      slots_.push_back({p, e, order, local, crt_lift(local, c.modulus, q)});
      ++c.slot_count;
    };
    if (p != 2) {
      const std::int64_t g = least_primitive_root(p, e);
      const std::int64_t order = c.modulus / p * (p - 1);
      add_slot(order, g);
      std::int64_t x = 1;
      for (std::int64_t k = 0; k < order; ++k) {
        c.logs[x] = {k, 0};
        x = mul_mod(x, g, c.modulus);
      }
    } else if (e == 1) {
      c.logs[1] = {0, 0};
    } else if (e == 2) {
      add_slot(2, 3);
      c.logs[1] = {0, 0};
      c.logs[3] = {1, 0};
    } else {
      const std::int64_t half_order = c.modulus / 4;
      add_slot(2, c.modulus - 1);
      add_slot(half_order, 5);
      std::int64_t x = 1;
      for (std::int64_t b = 0; b < half_order; ++b) {
        c.logs[x] = {0, b};
        c.logs[c.modulus - x] = {1, b};
        x = mul_mod(x, 5, c.modulus);
      }
    }
    components.push_back(std::move(c));
  }

  for (const auto& s : slots_) exponent_ = std::lcm(exponent_, s.order);

  logs_.resize(static_cast<std::size_t>(q));
  for (std::int64_t r = 0; r < q; ++r) {
    if (std::gcd(r, q) != 1) continue;
    std::vector<std::int64_t> entry;
    entry.reserve(slots_.size() + 1);
    for (const auto& c : components) {
      const auto& local = c.logs[r % c.modulus];
      for (std::size_t i = 0; i < c.slot_count; ++i) entry.push_back(local[i]);
    }
    // A trailing marker keeps unit entries non-empty even when there are no slots.
    entry.push_back(0);
    logs_[r] = std::move(entry);
  }

  roots_.reserve(static_cast<std::size_t>(exponent_));
  for (std::int64_t k = 0; k < exponent_; ++k)
    roots_.push_back(RootOfUnity::from_fraction(k, exponent_).to_complex());
}

bool UnitGroup::is_unit(std::int64_t n) const { return !logs_[mod_floor(n, q_)].empty(); }

std::vector<std::int64_t> UnitGroup::log(std::int64_t n) const {
  const auto& entry = logs_[mod_floor(n, q_)];
  if (entry.empty()) throw std::invalid_argument("UnitGroup::log: not a unit");
  return {entry.begin(), entry.end() - 1};
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroup> group,
                                       std::vector<std::int64_t> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
  const auto& slots = group_->slots();
  if (exponents_.size() != slots.size())
    throw std::invalid_argument("DirichletCharacter: exponent count mismatch");
  for (std::size_t i = 0; i < slots.size(); ++i)
    exponents_[i] = mod_floor(exponents_[i], slots[i].order);

  const std::int64_t q = group_->modulus();
  const std::int64_t E = group_->exponent();
  numerators_.assign(static_cast<std::size_t>(q), -1);
  for (std::int64_t r = 0; r < q; ++r) {
    if (!group_->is_unit(r)) continue;
    const auto logs = group_->log(r);
    std::int64_t k = 0;
    for (std::size_t i = 0; i < slots.size(); ++i)
      k = (k + mul_mod(exponents_[i] * (E / slots[i].order), logs[i], E)) % E;
    numerators_[r] = k;
  }
}

DirichletCharacter DirichletCharacter::trivial() { return principal(1); }

DirichletCharacter DirichletCharacter::principal(std::int64_t q) {
  auto group = UnitGroup::make(q);
  std::vector<std::int64_t> zeros(group->slots().size(), 0);
  return DirichletCharacter(std::move(group), std::move(zeros));
}

RootOfUnity DirichletCharacter::operator()(std::int64_t n) const {
  const std::int64_t k = numerators_[mod_floor(n, modulus())];
  if (k < 0) return RootOfUnity::zero();
  return RootOfUnity::from_fraction(k, group_->exponent());
}

std::complex<double> DirichletCharacter::complex_value(std::int64_t n) const {
  const std::int64_t k = numerators_[mod_floor(n, modulus())];
  if (k < 0) return {0.0, 0.0};
  return group_->root(k);
}

bool DirichletCharacter::is_principal() const {
  for (auto x : exponents_)
    if (x != 0) return false;
  return true;
}

std::int64_t DirichletCharacter::conductor() const {
  const auto& slots = group_->slots();
  std::int64_t f = 1;
  std::size_t i = 0;
  while (i < slots.size()) {
    const auto& s = slots[i];
    if (s.prime != 2) {
      if (exponents_[i] != 0)
        f *= checked_pow(s.prime, std::max(1, s.prime_exponent - valuation(exponents_[i], s.prime)));
      ++i;
    } else if (s.prime_exponent == 2) {
      if (exponents_[i] != 0) f *= 4;
      ++i;
    } else {
      const std::int64_t sign_part = exponents_[i];
      const std::int64_t five_part = exponents_[i + 1];
      if (five_part != 0)
        f *= checked_pow(2, s.prime_exponent - valuation(five_part, 2));
      else if (sign_part != 0)
        f *= 4;
      i += 2;
    }
  }
  return f;
}

DirichletCharacter DirichletCharacter::primitive() const {
  const std::int64_t q = modulus();
  const std::int64_t f = conductor();
  if (f == q) return *this;
  auto target = UnitGroup::make(f);
  std::vector<std::int64_t> exps;
  for (const auto& slot : target->slots()) {
    std::int64_t n = slot.generator;
    while (std::gcd(n, q) != 1) n += f;
    const RootOfUnity v = (*this)(n);
    if (slot.order % v.denominator() != 0)
      throw std::logic_error("primitive: value order does not divide slot order");
    exps.push_back(v.numerator() * (slot.order / v.denominator()));
  }
  return DirichletCharacter(std::move(target), std::move(exps));
}

DirichletCharacter DirichletCharacter::conj() const {
  std::vector<std::int64_t> neg(exponents_.size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -exponents_[i];
  return DirichletCharacter(group_, std::move(neg));
}

std::vector<DirichletCharacter> enumerate_characters(std::int64_t q) {
  auto group = UnitGroup::make(q);
  const auto& slots = group->slots();
  std::vector<DirichletCharacter> out;
  out.reserve(static_cast<std::size_t>(group->order()));
  std::vector<std::int64_t> exps(slots.size(), 0);
  while (true) {
    out.emplace_back(group, exps);
    std::size_t i = 0;
    for (; i < slots.size(); ++i) {
      if (++exps[i] < slots[i].order) break;
      exps[i] = 0;
    }
    if (i == slots.size()) break;
  }
  return out;
}

GaussSumValue gauss_sum(const DirichletCharacter& chi) {
  const std::int64_t q = chi.modulus();
  std::complex<double> sum = 0.0;
  for (std::int64_t n = 0; n < q; ++n)
    sum += (chi(n) * RootOfUnity::from_fraction(n, q)).to_complex();
  return {sum, GaussMethod::DirectSum};
}

GaussSumValue gauss_sum_closed_form(const DirichletCharacter& chi) {
  const auto star = chi.primitive();
  const std::int64_t ratio = chi.modulus() / star.modulus();
  const auto tau_star = gauss_sum(star).value;
  return {static_cast<double>(mobius(ratio)) * star(ratio).to_complex() * tau_star,
          GaussMethod::ClosedForm};
}

std::complex<double> c_coefficient(const DirichletCharacter& chi, std::int64_t a,
                                   CoefficientMethod method) {
  const std::int64_t D = chi.modulus();
  if (std::gcd(a, D) != 1)
    throw std::invalid_argument("c_coefficient: a must be coprime to the modulus");
  if (method == CoefficientMethod::DirectSum) {
    std::complex<double> sum = 0.0;
    for (std::int64_t n = 0; n < D; ++n)
      sum += (chi(n).conj() * RootOfUnity::from_fraction(-a * n, D)).to_complex();
    return sum;
  }
  const auto star = chi.primitive();
  const std::int64_t ratio = D / star.modulus();
  const RootOfUnity unit_part = star(a) * star(ratio).conj();
  return static_cast<double>(mobius(ratio)) * unit_part.to_complex() *
         std::conj(gauss_sum(star).value);
}

CharacterExpansion::CharacterExpansion(std::int64_t D, std::int64_t a)
    : D_(D), a_(a), chars_(enumerate_characters(D)) {
  if (std::gcd(a, D) != 1) throw std::invalid_argument("CharacterExpansion: gcd(a, D) > 1");
  coeffs_.reserve(chars_.size());
  for (const auto& chi : chars_) coeffs_.push_back(c_coefficient(chi, a));
}

std::complex<double> CharacterExpansion::lhs(std::int64_t n) const {
  if (std::gcd(n, D_) != 1) return {};
  return RootOfUnity::from_fraction(-a_ * n, D_).to_complex();
}

std::complex<double> CharacterExpansion::rhs(std::int64_t n) const {
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < chars_.size(); ++i) sum += coeffs_[i] * chars_[i].complex_value(n);
  return sum / static_cast<double>(chars_.size());
}

double verify_lemma1(std::int64_t D, std::int64_t a, std::int64_t n) {
  return CharacterExpansion(D, a).residual(n);
}

}  // namespace ltwist
