#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "heavenly/dual.hpp"
#include "heavenly/jet.hpp"
#include "heavenly/quadrature.hpp"

namespace heavenly {

// Sorted list of variable indices: {2, 2, 0} means d^3/(dx2^2 dx0) after sorting.
using MultiIndex = std::vector<int>;
MultiIndex merge_index(const MultiIndex& a, const MultiIndex& b);

using DomainFn = std::function<bool(const Point&)>;

// Node of an immutable field expression. eval returns the jet of the derivative
// d^m f at p, truncated at `order`, in the node's arity.
class FieldNode {
 public:
  virtual ~FieldNode() = default;
  virtual Jet eval(const Point& p, const MultiIndex& m, int order) const = 0;
  virtual bool in_domain(const Point& p) const = 0;
  // Maximum |m| + order the node can deliver exactly.
  virtual int budget() const = 0;

  int arity() const { return static_cast<int>(vars_.size()); }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& variables() const { return vars_; }

 protected:
  FieldNode(std::string name, std::vector<std::string> vars) : name_(std::move(name)), vars_(std::move(vars)) {}

 private:
  std::string name_;
  std::vector<std::string> vars_;
};

std::vector<std::string> default_chart(int arity);

// Handle to a field expression plus a pending derivative multi-index.
class Field {
 public:
  Field() = default;
  explicit Field(std::shared_ptr<const FieldNode> node, MultiIndex m = {});

  // Jet of this field at p. Throws DomainError outside the domain and
  // CapabilityError when the derivative budget is exceeded.
  Jet jet(const Point& p, int order = 2) const;
  double value(const Point& p) const { return jet(p, 0).value(); }
  Field derivative(int var) const;
  Field derivative(const MultiIndex& m) const;

  int arity() const { return node_->arity(); }
  bool in_domain(const Point& p) const { return node_->in_domain(p); }
  int derivative_budget() const { return node_->budget() - static_cast<int>(m_.size()); }
  std::string name() const;
  const MultiIndex& index() const { return m_; }
  const std::shared_ptr<const FieldNode>& node() const { return node_; }
  explicit operator bool() const { return static_cast<bool>(node_); }

  // Raw node evaluation with an additional multi-index (no checks).
  Jet eval_raw(const Point& p, const MultiIndex& extra, int order) const;

 private:
  std::shared_ptr<const FieldNode> node_;
  MultiIndex m_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Field& a, const Field& b);
Field operator*(double c, const Field& a);
Field constant_field(double c, int arity = 4, std::string name = "const");

// Jet-only field: derivatives beyond the jet order are unavailable (budget 3).
using JetFn = std::function<Jet(const std::array<Jet, 4>&)>;
Field make_jet_field(std::string name, int arity, JetFn fn, DomainFn domain = {});

// Reconstructs F from its gradient pair (dF/dx_i, dF/dx_j) = (a, b) by
// quadrature along the straight segment in the (x_i, x_j) plane from the base
// point to the target, other coordinates held fixed. F vanishes on the plane
// through the base point unless a gauge g (independent of x_i, x_j) is added.
Field path_integral_field(std::string name, const Field& a, const Field& b, int var_i, int var_j,
                          const Point& base, const Field& gauge = Field(), const QuadratureOptions& q = {});

namespace detail {

template <int M>
Nested<M> make_seed(double x, int var, int arity, int order, const std::array<int, 3>& dirs) {
  if constexpr (M == 0) {
    return Jet::variable(x, var, arity, order);
  } else {
    using Inner = Nested<M - 1>;
    return Nested<M>(make_seed<M - 1>(x, var, arity, order, dirs), Inner(dirs[M - 1] == var ? 1.0 : 0.0));
  }
}

template <int M>
Jet extract_eps(const Nested<M>& r) {
  if constexpr (M == 0) return r;
  else return extract_eps<M - 1>(r.d);
}

constexpr int kDualDepth = 3;

template <class Fn>
class GenericLeaf final : public FieldNode {
 public:
  GenericLeaf(std::string name, std::vector<std::string> vars, Fn fn, DomainFn domain)
      : FieldNode(std::move(name), std::move(vars)), fn_(std::move(fn)), domain_(std::move(domain)) {}

  bool in_domain(const Point& p) const override { return !domain_ || domain_(p); }
  int budget() const override { return Jet::kMaxOrder + kDualDepth; }

  Jet eval(const Point& p, const MultiIndex& m, int order) const override {
    const int n = static_cast<int>(m.size());
    const int absorb = std::min(n, Jet::kMaxOrder - order);
    const int duals = n - absorb;
    const int jet_order = order + absorb;
    std::array<int, 3> dirs{-1, -1, -1};
    for (int k = 0; k < duals; ++k) dirs[k] = m[static_cast<std::size_t>(k)];
    Jet r;
    switch (duals) {
      case 0: r = run<0>(p, dirs, jet_order); break;
      case 1: r = run<1>(p, dirs, jet_order); break;
      case 2: r = run<2>(p, dirs, jet_order); break;
      case 3: r = run<3>(p, dirs, jet_order); break;
      default: throw CapabilityError(name() + ": derivative budget exceeded");
    }
    for (int k = duals; k < n; ++k) r = shift(r, m[static_cast<std::size_t>(k)]);
    return r;
  }

 private:
  template <int M>
  Jet run(const Point& p, const std::array<int, 3>& dirs, int jet_order) const {
    std::array<Nested<M>, 4> x;
    const int a = arity();
    for (int i = 0; i < 4; ++i)
      x[i] = i < a ? make_seed<M>(p[i], i, a, jet_order, dirs) : Nested<M>(0.0);
    Nested<M> r = fn_(x);
    return promote(extract_eps<M>(r), a, jet_order);
  }

  Fn fn_;
  DomainFn domain_;
};

}  // namespace detail

// Field from a callable generic in its scalar type: fn(std::array<S, 4>) -> S.
// Derivatives up to total order 6 are exact (jet order 3 plus three dual levels).
template <class Fn>
Field make_field(std::string name, int arity, Fn fn, DomainFn domain = {}) {
  return Field(std::make_shared<detail::GenericLeaf<Fn>>(std::move(name), default_chart(arity), std::move(fn),
                                                         std::move(domain)));
}

template <class Fn>
Field make_field(std::string name, std::vector<std::string> chart, Fn fn, DomainFn domain = {}) {
  return Field(
      std::make_shared<detail::GenericLeaf<Fn>>(std::move(name), std::move(chart), std::move(fn), std::move(domain)));
}

}  // namespace heavenly
