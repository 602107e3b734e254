#pragma once

#include <string>
#include <vector>

#include "heavenly/dual.hpp"

namespace heavenly {

// Polynomial with real coefficients in a fixed number of named variables.
class Polynomial {
 public:
  struct Term {
    double coeff = 0.0;
    std::vector<int> powers;
  };

  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static Polynomial zero(std::vector<std::string> vars) { return Polynomial(std::move(vars)); }
  static Polynomial monomial(std::vector<std::string> vars, double c, std::vector<int> powers);

  Polynomial& add(double c, std::vector<int> powers);
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  int nvars() const { return static_cast<int>(vars_.size()); }
  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree_in(int var) const;

  Polynomial derivative(int var) const;
  // Antiderivative in var vanishing at var = 0.
  Polynomial antiderivative(int var) const;

  template <class S, class Vec>
  S eval(const Vec& x) const {
    S acc(0.0);
    for (const Term& t : terms_) {
      S m(t.coeff);
      for (std::size_t i = 0; i < t.powers.size(); ++i)
        if (t.powers[i] > 0) m = m * ipow(S(x[i]), t.powers[i]);
      acc = acc + m;
    }
    return acc;
  }
  double operator()(const std::vector<double>& x) const { return eval<double>(x); }

  std::string to_string() const;

 private:
  std::vector<std::string> vars_;
  std::vector<Term> terms_;

  void normalize();
};

}  // namespace heavenly
