#include "heavenly/field.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <tuple>
#include <cmath>

namespace heavenly {

MultiIndex merge_index(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r = a;
  r.insert(r.end(), b.begin(), b.end());
  std::sort(r.begin(), r.end());
  return r;
}

std::vector<std::string> default_chart(int arity) {
  static const std::vector<std::string> names = {"y", "z", "ybar", "zbar"};
  if (arity < 1 || arity > 4) throw std::invalid_argument("field arity must be 1..4");
  return {names.begin(), names.begin() + arity};
}

Field::Field(std::shared_ptr<const FieldNode> node, MultiIndex m) : node_(std::move(node)), m_(std::move(m)) {
  std::sort(m_.begin(), m_.end());
  for (int v : m_)
    if (v < 0 || v >= node_->arity()) throw std::out_of_range("derivative index out of range for " + node_->name());
}

Jet Field::jet(const Point& p, int order) const {
  if (!node_) throw std::logic_error("evaluation of an empty field");
  if (order < 0 || order > Jet::kMaxOrder) throw CapabilityError("jet order must be 0..3");
  for (int i = 0; i < arity(); ++i)
    if (!std::isfinite(p[i])) throw DomainError(name() + ": non-finite coordinate");
  if (!node_->in_domain(p)) throw DomainError(name() + ": point outside the field domain");
  const int need = static_cast<int>(m_.size()) + order;
  if (need > node_->budget()) {
    throw CapabilityError(name() + ": needs " + std::to_string(need) + " derivative orders, budget is " +
                          std::to_string(node_->budget()));
  }
  return promote(node_->eval(p, m_, order), arity(), order);
}

Jet Field::eval_raw(const Point& p, const MultiIndex& extra, int order) const {
  MultiIndex m = merge_index(m_, extra);
  if (static_cast<int>(m.size()) + order > node_->budget()) {
    throw CapabilityError(node_->name() + ": derivative budget " + std::to_string(node_->budget()) + " exceeded");
  }
  return promote(node_->eval(p, m, order), arity(), order);
}

Field Field::derivative(int var) const {
  if (var < 0 || var >= arity()) throw std::out_of_range("derivative variable out of range");
  MultiIndex m = m_;
  m.push_back(var);
  return Field(node_, m);
}

Field Field::derivative(const MultiIndex& extra) const { return Field(node_, merge_index(m_, extra)); }

std::string Field::name() const {
  if (!node_) return "<empty>";
  if (m_.empty()) return node_->name();
  std::string s = node_->name() + "_{";
  for (std::size_t i = 0; i < m_.size(); ++i) s += (i ? "," : "") + node_->variables()[m_[i]];
  return s + "}";
}

namespace {

bool all_in_domain(const std::vector<Field>& fs, const Point& p) {
  for (const Field& f : fs)
    if (!f.in_domain(p)) return false;
  return true;
}

int min_budget(const std::vector<Field>& fs) {
  int b = 1 << 20;
  for (const Field& f : fs) b = std::min(b, f.derivative_budget());
  return b;
}

std::vector<std::string> chart_of(const Field& a, const Field& b) {
  if (a.arity() != b.arity()) throw MismatchError("combining fields of different arity");
  return a.node()->variables();
}

class SumNode final : public FieldNode {
 public:
  SumNode(const Field& a, const Field& b, double sb)
      : FieldNode("(" + a.name() + (sb > 0 ? " + " : " - ") + b.name() + ")", chart_of(a, b)), f_{a, b}, sb_(sb) {}
  Jet eval(const Point& p, const MultiIndex& m, int order) const override {
    Jet r = f_[0].eval_raw(p, m, order);
    Jet s = f_[1].eval_raw(p, m, order);
    return sb_ > 0 ? r + s : r - s;
  }
  bool in_domain(const Point& p) const override { return all_in_domain(f_, p); }
  int budget() const override { return min_budget(f_); }

 private:
  std::vector<Field> f_;
  double sb_;
};

class ScaleNode final : public FieldNode {
 public:
  ScaleNode(double c, const Field& a)
      : FieldNode(std::to_string(c) + "*" + a.name(), a.node()->variables()), c_(c), f_{a} {}
  Jet eval(const Point& p, const MultiIndex& m, int order) const override {
    return Jet(c_) * f_[0].eval_raw(p, m, order);
  }
  bool in_domain(const Point& p) const override { return all_in_domain(f_, p); }
  int budget() const override { return min_budget(f_); }

 private:
  double c_;
  std::vector<Field> f_;
};

// Leibniz rule over the sub-multi-indices of m.
class ProductNode final : public FieldNode {
 public:
  ProductNode(const Field& a, const Field& b) : FieldNode(a.name() + "*" + b.name(), chart_of(a, b)), f_{a, b} {}
  Jet eval(const Point& p, const MultiIndex& m, int order) const override {
    const std::size_t n = m.size();
    Jet acc = Jet::constant(0.0, arity(), order);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      MultiIndex ma, mb;
      for (std::size_t k = 0; k < n; ++k) ((mask >> k) & 1u ? ma : mb).push_back(m[k]);
      acc += f_[0].eval_raw(p, ma, order) * f_[1].eval_raw(p, mb, order);
    }
    return acc;
  }
  bool in_domain(const Point& p) const override { return all_in_domain(f_, p); }
  int budget() const override { return min_budget(f_); }

 private:
  std::vector<Field> f_;
};

class ConstantNode final : public FieldNode {
 public:
  ConstantNode(double c, int arity, std::string name) : FieldNode(std::move(name), default_chart(arity)), c_(c) {}
  Jet eval(const Point&, const MultiIndex& m, int order) const override {
    return Jet::constant(m.empty() ? c_ : 0.0, arity(), order);
  }
  bool in_domain(const Point&) const override { return true; }
  int budget() const override { return 1 << 20; }

 private:
  double c_;
};

class JetLeaf final : public FieldNode {
 public:
  JetLeaf(std::string name, int arity, JetFn fn, DomainFn domain)
      : FieldNode(std::move(name), default_chart(arity)), fn_(std::move(fn)), domain_(std::move(domain)) {}
  Jet eval(const Point& p, const MultiIndex& m, int order) const override {
    const int jet_order = order + static_cast<int>(m.size());
    if (jet_order > Jet::kMaxOrder) throw CapabilityError(name() + ": jet-only field limited to order 3");
    std::array<Jet, 4> x;
    for (int i = 0; i < 4; ++i) x[i] = i < arity() ? Jet::variable(p[i], i, arity(), jet_order) : Jet(0.0);
    Jet r = promote(fn_(x), arity(), jet_order);
    for (int v : m) r = shift(r, v);
    return r;
  }
  bool in_domain(const Point& p) const override { return !domain_ || domain_(p); }
  int budget() const override { return Jet::kMaxOrder; }

 private:
  JetFn fn_;
  DomainFn domain_;
};

class PathIntegralNode final : public FieldNode {
 public:
  PathIntegralNode(std::string name, const Field& a, const Field& b, int vi, int vj, const Point& base,
                   const Field& gauge, const QuadratureOptions& q)
      : FieldNode(std::move(name), chart_of(a, b)), a_(a), b_(b), vi_(vi), vj_(vj), base_(base), gauge_(gauge), q_(q) {
    if (vi == vj || vi < 0 || vj < 0 || vi >= arity() || vj >= arity())
      throw std::invalid_argument("path integral: invalid plane variables");
  }

  bool in_domain(const Point& p) const override {
    return a_.in_domain(p) && b_.in_domain(p) && (!gauge_ || gauge_.in_domain(p));
  }
  int budget() const override {
    // Pure off-plane derivatives of order n need the pair at order n.
    int b = std::min(a_.derivative_budget(), b_.derivative_budget());
    if (gauge_) b = std::min(b, gauge_.derivative_budget());
    return b;
  }

  Jet eval(const Point& p, const MultiIndex& m, int order) const override {
    auto it = std::find(m.begin(), m.end(), vi_);
    if (it != m.end()) {
      MultiIndex rest = m;
      rest.erase(rest.begin() + (it - m.begin()));
      return a_.eval_raw(p, rest, order);
    }
    it = std::find(m.begin(), m.end(), vj_);
    if (it != m.end()) {
      MultiIndex rest = m;
      rest.erase(rest.begin() + (it - m.begin()));
      return b_.eval_raw(p, rest, order);
    }
    if (!m.empty() && static_cast<int>(m.size()) + order <= 3) {
      // Off-plane derivatives within jet reach share one higher-order quadrature.
      Jet r = cached(p, static_cast<int>(m.size()) + order);
      for (int v : m) r = shift(r, v);
      return r;
    }
    if (m.empty()) return cached(p, order);
    return integrate(p, m, order);
  }

 private:
  using Key = std::tuple<std::uint64_t, Point, int>;

  Jet cached(const Point& p, int order) const {
    thread_local std::map<Key, Jet> cache;
    const Key k{id_, p, order};
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    Jet r = integrate(p, {}, order);
    if (cache.size() >= 8192) cache.clear();
    cache.emplace(k, r);
    return r;
  }

  Jet integrate(const Point& p, const MultiIndex& m, int order) const {
    const int n = arity();
    const double di = p[vi_] - base_[vi_], dj = p[vj_] - base_[vj_];
    const Jet xi = Jet::variable(p[vi_], vi_, n, order) - Jet(base_[vi_]);
    const Jet xj = Jet::variable(p[vj_], vj_, n, order) - Jet(base_[vj_]);
    auto integrand = [&](double t) {
      Point q = p;
      q[vi_] = base_[vi_] + t * di;
      q[vj_] = base_[vj_] + t * dj;
      std::array<double, 4> f{1.0, 1.0, 1.0, 1.0};
      f[vi_] = t;
      f[vj_] = t;
      return scale(a_.eval_raw(q, m, order), f) * xi + scale(b_.eval_raw(q, m, order), f) * xj;
    };
    Jet r = adaptive_quadrature(integrand, 0.0, 1.0, q_).value;
    if (order >= 1) {
      // Entries carrying a plane index are the pair itself; take them exactly.
      const Jet ja = a_.eval_raw(p, m, order - 1);
      const Jet jb = b_.eval_raw(p, m, order - 1);
      r.set_grad(vi_, ja.value());
      r.set_grad(vj_, jb.value());
      for (int k = 0; k < n && order >= 2; ++k) {
        r.set_hess(vi_, k, ja.grad(k));
        if (k != vi_) r.set_hess(vj_, k, jb.grad(k));
        for (int l = k; l < n && order >= 3; ++l) {
          r.set_third(vi_, k, l, ja.hess(k, l));
          if (k != vi_ && l != vi_) r.set_third(vj_, k, l, jb.hess(k, l));
        }
      }
    }
    if (gauge_) r += gauge_.eval_raw(p, m, order);
    return promote(r, n, order);
  }

  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
  }

  const std::uint64_t id_ = next_id();
  Field a_, b_;
  int vi_, vj_;
  Point base_;
  Field gauge_;
  QuadratureOptions q_;
};

}  // namespace

Field operator+(const Field& a, const Field& b) { return Field(std::make_shared<SumNode>(a, b, 1.0)); }
Field operator-(const Field& a, const Field& b) { return Field(std::make_shared<SumNode>(a, b, -1.0)); }
Field operator*(const Field& a, const Field& b) { return Field(std::make_shared<ProductNode>(a, b)); }
Field operator*(double c, const Field& a) { return Field(std::make_shared<ScaleNode>(c, a)); }

Field constant_field(double c, int arity, std::string name) {
  return Field(std::make_shared<ConstantNode>(c, arity, std::move(name)));
}

Field make_jet_field(std::string name, int arity, JetFn fn, DomainFn domain) {
  return Field(std::make_shared<JetLeaf>(std::move(name), arity, std::move(fn), std::move(domain)));
}

Field path_integral_field(std::string name, const Field& a, const Field& b, int var_i, int var_j, const Point& base,
                          const Field& gauge, const QuadratureOptions& q) {
  return Field(std::make_shared<PathIntegralNode>(std::move(name), a, b, var_i, var_j, base, gauge, q));
}

}  // namespace heavenly
