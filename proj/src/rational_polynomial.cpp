#include "varfactor/rational_polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace varfactor {

RationalPolynomial RationalPolynomial::constant(std::size_t nvars, const Rational& c) {
  RationalPolynomial p(nvars);
  p.add_term(Monomial(nvars), c);
  return p;
}

RationalPolynomial RationalPolynomial::variable(std::size_t nvars, std::size_t var) {
  RationalPolynomial p(nvars);
  p.add_term(Monomial::variable(nvars, var), Rational(1));
  return p;
}

bool RationalPolynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

void RationalPolynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.nvars() != nvars_) throw std::invalid_argument("monomial dimension mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational RationalPolynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

const Monomial& RationalPolynomial::leading_monomial() const {
  if (terms_.empty()) throw std::domain_error("zero polynomial has no leading term");
  return terms_.begin()->first;
}

const Rational& RationalPolynomial::leading_coefficient() const {
  if (terms_.empty()) throw std::domain_error("zero polynomial has no leading term");
  return terms_.begin()->second;
}

std::uint32_t RationalPolynomial::total_degree() const {
  return terms_.empty() ? 0 : terms_.begin()->first.degree();
}

std::uint32_t RationalPolynomial::degree_in(std::size_t var) const {
  if (var >= nvars_) throw std::out_of_range("variable index out of range");
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponents[var]);
  return d;
}

DegreeProfile RationalPolynomial::degree_profile() const {
  DegreeProfile dp;
  dp.per_variable.assign(nvars_, 0);
  for (const auto& [m, c] : terms_) {
    for (std::size_t i = 0; i < nvars_; ++i) {
      dp.per_variable[i] = std::max(dp.per_variable[i], m.exponents[i]);
    }
  }
  dp.total = total_degree();
  return dp;
}

std::vector<RationalPolynomial> RationalPolynomial::coefficients_in(std::size_t var) const {
  std::vector<RationalPolynomial> out(degree_in(var) + 1, RationalPolynomial(nvars_));
  for (const auto& [m, c] : terms_) {
    Monomial rest = m;
    rest.exponents[var] = 0;
    out[m.exponents[var]].add_term(rest, c);
  }
  return out;
}

void RationalPolynomial::check_dims(const RationalPolynomial& o) const {
  if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial dimension mismatch");
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& o) {
  check_dims(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

RationalPolynomial& RationalPolynomial::operator-=(const RationalPolynomial& o) {
  check_dims(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
  a.check_dims(b);
  RationalPolynomial r(a.nvars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  }
  return r;
}

bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) {
  return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
}

bool canonical_less(const RationalPolynomial& a, const RationalPolynomial& b) {
  if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
    if (!(ia->first == ib->first)) return grlex_less(ib->first, ia->first);
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return a.size() < b.size();
}

RationalPolynomial partial_derivative(const RationalPolynomial& p, std::size_t var) {
  if (var >= p.nvars()) throw std::out_of_range("variable index out of range");
  RationalPolynomial d(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    const auto e = m.exponents[var];
    if (e == 0) continue;
    Monomial dm = m;
    dm.exponents[var] = e - 1;
    d.add_term(dm, c * e);
  }
  return d;
}

RationalPolynomial exact_product(std::span<const RationalPolynomial> ps) {
  if (ps.empty()) throw std::invalid_argument("empty product");
  RationalPolynomial acc = RationalPolynomial::constant(ps.front().nvars(), Rational(1));
  for (const auto& p : ps) acc = acc * p;
  return acc;
}

RationalPolynomial make_monic(const RationalPolynomial& p) {
  if (p.is_zero()) throw std::domain_error("zero polynomial cannot be made monic");
  Rational inv = 1 / p.leading_coefficient();
  return p * inv;
}

Integer lcm_denominators(const RationalPolynomial& p) {
  if (p.is_zero()) throw std::domain_error("zero polynomial has no denominators");
  Integer l = 1;
  for (const auto& [m, c] : p.terms()) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  return l;
}

namespace univariate {

void trim(Dense& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

std::size_t degree(const Dense& p) { return p.empty() ? 0 : p.size() - 1; }

Dense derivative(const Dense& p) {
  Dense d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<unsigned long>(k));
  trim(d);
  return d;
}

Dense remainder(Dense a, const Dense& b) {
  if (b.empty()) throw std::domain_error("division by zero polynomial");
  trim(a);
  const std::size_t db = b.size() - 1;
  while (!a.empty() && a.size() - 1 >= db) {
    const Rational q = a.back() / b.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t k = 0; k <= db; ++k) a[shift + k] -= q * b[k];
    trim(a);
  }
  return a;
}

Dense gcd(Dense a, Dense b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Dense r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Rational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

Dense specialize(const RationalPolynomial& p, std::size_t var, std::span<const Rational> values) {
  if (values.size() != p.nvars()) throw std::invalid_argument("specialization dimension mismatch");
  Dense out(p.degree_in(var) + 1);
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (std::size_t i = 0; i < p.nvars(); ++i) {
      if (i == var) continue;
      for (std::uint32_t e = 0; e < m.exponents[i]; ++e) t *= values[i];
    }
    out[m.exponents[var]] += t;
  }
  trim(out);
  return out;
}

}  // namespace univariate

bool squarefree_probe(const RationalPolynomial& p, std::mt19937_64& rng) {
  if (p.is_constant()) throw std::domain_error("square-free probe needs a nonconstant polynomial");
  std::uniform_int_distribution<long> num(-97, 97);
  std::uniform_int_distribution<long> den(1, 13);
  constexpr int kTries = 3;

  for (std::size_t var = 0; var < p.nvars(); ++var) {
    const auto deg = p.degree_in(var);
    if (deg == 0) continue;
    bool coprime = false;
    for (int attempt = 0; attempt < kTries && !coprime; ++attempt) {
      std::vector<Rational> values(p.nvars());
      for (auto& v : values) {
        v = Rational(num(rng), den(rng));
        v.canonicalize();
      }
      auto u = univariate::specialize(p, var, values);
      // A dropped leading coefficient makes the specialization uninformative.
      if (univariate::degree(u) != deg) continue;
      auto g = univariate::gcd(u, univariate::derivative(u));
      coprime = univariate::degree(g) == 0;
    }
    if (!coprime) return false;
  }
  return true;
}

}  // namespace varfactor
