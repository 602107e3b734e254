#include "heavenly/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace heavenly {

Polynomial Polynomial::monomial(std::vector<std::string> vars, double c, std::vector<int> powers) {
  Polynomial p(std::move(vars));
  p.add(c, std::move(powers));
  return p;
}

Polynomial& Polynomial::add(double c, std::vector<int> powers) {
  if (static_cast<int>(powers.size()) != nvars()) {
    throw std::invalid_argument("polynomial term has " + std::to_string(powers.size()) +
                                " exponents, expected " + std::to_string(nvars()));
  }
  for (int e : powers)
    if (e < 0) throw std::invalid_argument("polynomial exponents must be non-negative");
  terms_.push_back({c, std::move(powers)});
  normalize();
  return *this;
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.powers < b.powers; });
  std::vector<Term> merged;
  for (const Term& t : terms_) {
    if (!merged.empty() && merged.back().powers == t.powers) merged.back().coeff += t.coeff;
    else merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Term& t) { return t.coeff == 0.0; }),
               merged.end());
  terms_ = std::move(merged);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.nvars() != nvars()) throw std::invalid_argument("polynomial variable count mismatch");
  Polynomial r = *this;
  for (const Term& t : o.terms_) r.terms_.push_back(t);
  r.normalize();
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r = *this;
  for (Term& t : r.terms_) t.coeff *= s;
  r.normalize();
  return r;
}

int Polynomial::degree_in(int var) const {
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, t.powers[static_cast<std::size_t>(var)]);
  return d;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial r(vars_);
  for (const Term& t : terms_) {
    const int e = t.powers[static_cast<std::size_t>(var)];
    if (e == 0) continue;
    Term d = t;
    d.coeff *= e;
    d.powers[static_cast<std::size_t>(var)] = e - 1;
    r.terms_.push_back(d);
  }
  r.normalize();
  return r;
}

Polynomial Polynomial::antiderivative(int var) const {
  Polynomial r(vars_);
  for (const Term& t : terms_) {
    Term a = t;
    const int e = t.powers[static_cast<std::size_t>(var)];
    a.coeff /= (e + 1);
    a.powers[static_cast<std::size_t>(var)] = e + 1;
    r.terms_.push_back(a);
  }
  r.normalize();
  return r;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const Term& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff;
    for (std::size_t i = 0; i < t.powers.size(); ++i) {
      if (t.powers[i] == 0) continue;
      os << "*" << vars_[i];
      if (t.powers[i] > 1) os << "^" << t.powers[i];
    }
  }
  return os.str();
}

}  // namespace heavenly
