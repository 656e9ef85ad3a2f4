#include "depsynt/bdd.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

#include "depsynt/error.hpp"

namespace depsynt {

namespace {
constexpr std::uint32_t kFalse = 0;
constexpr std::uint32_t kTrue = 1;
}  // namespace

Bdd Bdd::operator!() const { return mgr_->negate(*this); }
Bdd Bdd::operator&(const Bdd& other) const { return mgr_->apply(BoolOp::And, *this, other); }
Bdd Bdd::operator|(const Bdd& other) const { return mgr_->apply(BoolOp::Or, *this, other); }
Bdd Bdd::operator^(const Bdd& other) const { return mgr_->apply(BoolOp::Xor, *this, other); }

BddManager::BddManager() {
  nodes_.push_back({kTerminalVar, kFalse, kFalse});
  nodes_.push_back({kTerminalVar, kTrue, kTrue});
}

VarId BddManager::new_var(std::string name) {
  if (by_name_.contains(name)) throw BddError("duplicate variable name '" + name + "'");
  const VarId id{static_cast<std::uint32_t>(names_.size())};
  by_name_.emplace(name, id);
  names_.push_back(std::move(name));
  levels_.push_back(static_cast<std::uint32_t>(order_.size()));
  order_.push_back(id);
  return id;
}

VarId BddManager::new_var_after(std::string name, VarId anchor) {
  check(anchor);
  const VarId id = new_var(std::move(name));
  order_.pop_back();
  const auto pos = levels_[anchor.index] + 1;
  order_.insert(order_.begin() + pos, id);
  for (std::uint32_t l = pos; l < order_.size(); ++l) levels_[order_[l].index] = l;
  return id;
}

std::optional<VarId> BddManager::find_var(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

const std::string& BddManager::var_name(VarId v) const {
  check(v);
  return names_[v.index];
}

std::uint32_t BddManager::level(VarId v) const {
  check(v);
  return levels_[v.index];
}

void BddManager::check(const Bdd& a) const {
  if (a.mgr_ != this) throw BddError("BDD belongs to a different manager");
}

void BddManager::check(VarId v) const {
  if (v.index >= names_.size()) throw BddError("unknown variable #" + std::to_string(v.index));
}

std::uint32_t BddManager::make(std::uint32_t var, std::uint32_t low, std::uint32_t high) {
  if (low == high) return low;
  const Triple key{var, low, high};
  auto [it, inserted] = unique_.try_emplace(key, static_cast<std::uint32_t>(nodes_.size()));
  if (inserted) nodes_.push_back({var, low, high});
  return it->second;
}

void BddManager::ComputedTable::insert(const Triple& key, std::uint32_t value) {
  // grow while the table is busy, keeping live entries
  if (++inserts_ > slots_.size() && slots_.size() < kMaxSlots) {
    std::vector<Entry> old(slots_.size() * 2);
    old.swap(slots_);
    for (const Entry& e : old)
      if (e.value != kEmpty) slots_[slot(e.key)] = e;
    inserts_ = 0;
  }
  slots_[slot(key)] = {key, value};
}


Bdd BddManager::var(VarId v) {
  check(v);
  return {this, make(v.index, kFalse, kTrue)};
}

Bdd BddManager::nvar(VarId v) {
  check(v);
  return {this, make(v.index, kTrue, kFalse)};
}

Bdd BddManager::cube(std::span<const Literal> lits) {
  Bdd result = bdd_true();
  for (const auto& lit : lits) result = apply(BoolOp::And, result, literal(lit));
  return result;
}

Bdd BddManager::apply(BoolOp op, Bdd a, Bdd b) {
  check(a);
  check(b);
  return {this, apply_rec(op, a.id_, b.id_)};
}

Bdd BddManager::negate(Bdd a) {
  check(a);
  return {this, not_rec(a.id_)};
}

Bdd BddManager::ite(Bdd f, Bdd g, Bdd h) {
  check(f);
  check(g);
  check(h);
  return {this, ite_rec(f.id_, g.id_, h.id_)};
}

std::uint32_t BddManager::not_rec(std::uint32_t a) {
  if (a <= kTrue) return a ^ 1u;
  if (std::uint32_t hit; not_cache_.lookup({a, 0, 0}, hit)) return hit;
  const Node n = nodes_[a];
  const auto low = not_rec(n.low);
  const auto high = not_rec(n.high);
  const auto r = make(n.var, low, high);
  not_cache_.insert({a, 0, 0}, r);
  return r;
}

std::uint32_t BddManager::apply_rec(BoolOp op, std::uint32_t a, std::uint32_t b) {
  switch (op) {
    case BoolOp::And:
      if (a == kFalse || b == kFalse) return kFalse;
      if (a == kTrue || a == b) return b;
      if (b == kTrue) return a;
      if (a > b) std::swap(a, b);
      break;
    case BoolOp::Or:
      if (a == kTrue || b == kTrue) return kTrue;
      if (a == kFalse || a == b) return b;
      if (b == kFalse) return a;
      if (a > b) std::swap(a, b);
      break;
    case BoolOp::Xor:
      if (a == b) return kFalse;
      if (a == kFalse) return b;
      if (b == kFalse) return a;
      if (a == kTrue) return not_rec(b);
      if (b == kTrue) return not_rec(a);
      if (a > b) std::swap(a, b);
      break;
    case BoolOp::Implies:
      if (a == kFalse || b == kTrue || a == b) return kTrue;
      if (a == kTrue) return b;
      if (b == kFalse) return not_rec(a);
      break;
    case BoolOp::Iff:
      if (a == b) return kTrue;
      if (a == kTrue) return b;
      if (b == kTrue) return a;
      if (a == kFalse) return not_rec(b);
      if (b == kFalse) return not_rec(a);
      if (a > b) std::swap(a, b);
      break;
  }
  const Triple key{a, b, static_cast<std::uint32_t>(op)};
  if (std::uint32_t hit; apply_cache_.lookup(key, hit)) return hit;

  const auto la = node_level(a);
  const auto lb = node_level(b);
  const auto top = std::min(la, lb);
  const Node na = nodes_[a];
  const Node nb = nodes_[b];
  const auto a0 = la == top ? na.low : a;
  const auto a1 = la == top ? na.high : a;
  const auto b0 = lb == top ? nb.low : b;
  const auto b1 = lb == top ? nb.high : b;
  const auto var = la == top ? na.var : nb.var;
  const auto low = apply_rec(op, a0, b0);
  const auto high = apply_rec(op, a1, b1);
  const auto r = make(var, low, high);
  apply_cache_.insert(key, r);
  return r;
}

std::uint32_t BddManager::ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h) {
  if (f == kTrue) return g;
  if (f == kFalse) return h;
  if (g == h) return g;
  if (g == kTrue && h == kFalse) return f;
  if (g == kFalse && h == kTrue) return not_rec(f);
  if (g == kTrue) return apply_rec(BoolOp::Or, f, h);
  if (h == kFalse) return apply_rec(BoolOp::And, f, g);
  const Triple key{f, g, h};
  if (std::uint32_t hit; ite_cache_.lookup(key, hit)) return hit;

  const auto lf = node_level(f);
  const auto lg = node_level(g);
  const auto lh = node_level(h);
  const auto top = std::min({lf, lg, lh});
  auto cof = [&](std::uint32_t n, std::uint32_t l, bool hi) {
    if (l != top) return n;
    return hi ? nodes_[n].high : nodes_[n].low;
  };
  const auto var = order_[top].index;
  const auto low = ite_rec(cof(f, lf, false), cof(g, lg, false), cof(h, lh, false));
  const auto high = ite_rec(cof(f, lf, true), cof(g, lg, true), cof(h, lh, true));
  const auto r = make(var, low, high);
  ite_cache_.insert(key, r);
  return r;
}

Bdd BddManager::restrict(Bdd a, VarId v, bool value) {
  const Literal lit{v, value};
  return restrict(a, std::span<const Literal>(&lit, 1));
}

std::uint32_t BddManager::intern_set(std::vector<std::int8_t> marks) {
  auto [it, inserted] = set_ids_.try_emplace(marks, static_cast<std::uint32_t>(sets_.size()));
  if (inserted) sets_.push_back(std::move(marks));
  return it->second;
}

std::int8_t BddManager::set_mark(std::uint32_t set, std::uint32_t var) const {
  const auto& marks = sets_[set];
  return var < marks.size() ? marks[var] : kUnmarked;
}

std::uint32_t BddManager::restrict_rec(std::uint32_t n, std::uint32_t set, std::uint32_t max_level) {
  if (n <= kTrue || node_level(n) > max_level) return n;
  const Triple key{n, set, kRestrictTag};
  if (std::uint32_t hit; quant_cache_.lookup(key, hit)) return hit;
  const Node node = nodes_[n];
  const auto mark = set_mark(set, node.var);
  std::uint32_t r;
  if (mark != kUnmarked) {
    r = restrict_rec(mark ? node.high : node.low, set, max_level);
  } else {
    const auto low = restrict_rec(node.low, set, max_level);
    const auto high = restrict_rec(node.high, set, max_level);
    r = make(node.var, low, high);
  }
  quant_cache_.insert(key, r);
  return r;
}

std::uint32_t BddManager::exists_rec(std::uint32_t n, std::uint32_t set, std::uint32_t max_level) {
  if (n <= kTrue || node_level(n) > max_level) return n;
  const Triple key{n, set, kExistsTag};
  if (std::uint32_t hit; quant_cache_.lookup(key, hit)) return hit;
  const Node node = nodes_[n];
  const auto low = exists_rec(node.low, set, max_level);
  const auto high = exists_rec(node.high, set, max_level);
  const auto r = set_mark(set, node.var) != kUnmarked ? apply_rec(BoolOp::Or, low, high) : make(node.var, low, high);
  quant_cache_.insert(key, r);
  return r;
}

std::uint32_t BddManager::restrict1_rec(std::uint32_t n, std::uint32_t var, std::uint32_t level, bool value) {
  const auto l = node_level(n);
  if (n <= kTrue || l > level) return n;
  const Node node = nodes_[n];
  if (l == level) return value ? node.high : node.low;
  const Triple key{n, var, value ? kRestrict1Tag : kRestrict0Tag};
  if (std::uint32_t hit; quant_cache_.lookup(key, hit)) return hit;
  const auto low = restrict1_rec(node.low, var, level, value);
  const auto high = restrict1_rec(node.high, var, level, value);
  const auto r = make(node.var, low, high);
  quant_cache_.insert(key, r);
  return r;
}

std::uint32_t BddManager::exists1_rec(std::uint32_t n, std::uint32_t var, std::uint32_t level) {
  const auto l = node_level(n);
  if (n <= kTrue || l > level) return n;
  const Node node = nodes_[n];
  if (l == level) return apply_rec(BoolOp::Or, node.low, node.high);
  const Triple key{n, var, kExists1Tag};
  if (std::uint32_t hit; quant_cache_.lookup(key, hit)) return hit;
  const auto low = exists1_rec(node.low, var, level);
  const auto high = exists1_rec(node.high, var, level);
  const auto r = make(node.var, low, high);
  quant_cache_.insert(key, r);
  return r;
}

Bdd BddManager::restrict(Bdd a, std::span<const Literal> lits) {
  check(a);
  if (lits.empty()) return a;
  if (lits.size() == 1) {
    const auto v = lits[0].var;
    check(v);
    return {this, restrict1_rec(a.id_, v.index, levels_[v.index], lits[0].value)};
  }
  std::vector<std::int8_t> marks(names_.size(), kUnmarked);
  std::uint32_t max_level = 0;
  for (const auto& lit : lits) {
    check(lit.var);
    marks[lit.var.index] = lit.value ? 1 : 0;
    max_level = std::max(max_level, levels_[lit.var.index]);
  }
  return {this, restrict_rec(a.id_, intern_set(std::move(marks)), max_level)};
}

Bdd BddManager::exists(Bdd a, std::span<const VarId> vars) {
  check(a);
  if (vars.empty()) return a;
  if (vars.size() == 1) {
    check(vars[0]);
    return {this, exists1_rec(a.id_, vars[0].index, levels_[vars[0].index])};
  }
  std::vector<std::int8_t> marks(names_.size(), kUnmarked);
  std::uint32_t max_level = 0;
  for (const auto v : vars) {
    check(v);
    marks[v.index] = 1;
    max_level = std::max(max_level, levels_[v.index]);
  }
  return {this, exists_rec(a.id_, intern_set(std::move(marks)), max_level)};
}

Bdd BddManager::forall(Bdd a, std::span<const VarId> vars) { return negate(exists(negate(a), vars)); }

Bdd BddManager::rename(Bdd a, const std::map<VarId, VarId>& map) {
  check(a);
  std::set<VarId> images;
  for (const auto& [from, to] : map) {
    check(from);
    check(to);
    if (!images.insert(to).second) throw BddError("rename map is not injective");
  }
  std::unordered_map<std::uint32_t, std::uint32_t> memo;
  std::function<std::uint32_t(std::uint32_t)> rec = [&](std::uint32_t n) -> std::uint32_t {
    if (n <= kTrue) return n;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    const Node node = nodes_[n];
    auto target = VarId{node.var};
    if (auto it = map.find(target); it != map.end()) target = it->second;
    const auto low = rec(node.low);
    const auto high = rec(node.high);
    const auto r = ite_rec(make(target.index, kFalse, kTrue), high, low);
    memo.emplace(n, r);
    return r;
  };
  return {this, rec(a.id_)};
}

Bdd BddManager::substitute(Bdd a, VarId v, Bdd f) {
  check(a);
  check(v);
  check(f);
  return ite(f, restrict(a, v, true), restrict(a, v, false));
}

Bdd BddManager::compose(Bdd a, std::span<const VarId> vars, std::span<const Bdd> fs) {
  check(a);
  if (vars.size() != fs.size()) throw BddError("compose needs one function per variable");
  if (vars.empty()) return a;
  constexpr std::uint32_t kKeep = 0xffffffffu;
  std::vector<std::uint32_t> sub(names_.size(), kKeep);
  std::uint32_t max_level = 0;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    check(vars[k]);
    check(fs[k]);
    sub[vars[k].index] = fs[k].id_;
    max_level = std::max(max_level, levels_[vars[k].index]);
  }
  std::unordered_map<std::uint32_t, std::uint32_t> memo;
  auto rec = [&](auto& self, std::uint32_t n) -> std::uint32_t {
    if (n <= kTrue || node_level(n) > max_level) return n;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    const Node node = nodes_[n];
    const auto low = self(self, node.low);
    const auto high = self(self, node.high);
    const auto cond = sub[node.var] == kKeep ? make(node.var, kFalse, kTrue) : sub[node.var];
    const auto r = ite_rec(cond, high, low);
    memo.emplace(n, r);
    return r;
  };
  return {this, rec(rec, a.id_)};
}

bool BddManager::is_sat(Bdd a) const {
  check(a);
  return a.id_ != kFalse;
}

std::size_t BddManager::node_count(Bdd a) const {
  check(a);
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack{a.id_};
  while (!stack.empty()) {
    const auto n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second || n <= kTrue) continue;
    stack.push_back(nodes_[n].low);
    stack.push_back(nodes_[n].high);
  }
  return seen.size();
}

std::size_t BddManager::internal_node_count(Bdd a) const {
  check(a);
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack{a.id_};
  std::size_t count = 0;
  while (!stack.empty()) {
    const auto n = stack.back();
    stack.pop_back();
    if (n <= kTrue || !seen.insert(n).second) continue;
    ++count;
    stack.push_back(nodes_[n].low);
    stack.push_back(nodes_[n].high);
  }
  return count;
}

std::vector<VarId> BddManager::support(Bdd a) const {
  check(a);
  std::unordered_set<std::uint32_t> seen;
  std::set<VarId> vars;
  std::vector<std::uint32_t> stack{a.id_};
  while (!stack.empty()) {
    const auto n = stack.back();
    stack.pop_back();
    if (n <= kTrue || !seen.insert(n).second) continue;
    vars.insert(VarId{nodes_[n].var});
    stack.push_back(nodes_[n].low);
    stack.push_back(nodes_[n].high);
  }
  return {vars.begin(), vars.end()};
}

bool BddManager::eval(Bdd a, const Assignment& assignment) const {
  check(a);
  auto n = a.id_;
  while (n > kTrue) {
    const Node& node = nodes_[n];
    const bool value = node.var < assignment.size() && assignment[node.var];
    n = value ? node.high : node.low;
  }
  return n == kTrue;
}

std::optional<std::vector<Literal>> BddManager::pick_cube(Bdd a) const {
  check(a);
  if (a.id_ == kFalse) return std::nullopt;
  std::vector<Literal> lits;
  auto n = a.id_;
  while (n > kTrue) {
    const Node& node = nodes_[n];
    if (node.low != kFalse) {
      lits.push_back({VarId{node.var}, false});
      n = node.low;
    } else {
      lits.push_back({VarId{node.var}, true});
      n = node.high;
    }
  }
  return lits;
}

std::vector<std::vector<Literal>> BddManager::cubes(Bdd a) const {
  check(a);
  std::vector<std::vector<Literal>> result;
  std::vector<Literal> path;
  std::function<void(std::uint32_t)> rec = [&](std::uint32_t n) {
    if (n == kFalse) return;
    if (n == kTrue) {
      result.push_back(path);
      return;
    }
    const Node node = nodes_[n];
    path.push_back({VarId{node.var}, false});
    rec(node.low);
    path.back().value = true;
    rec(node.high);
    path.pop_back();
  };
  rec(a.id_);
  return result;
}

// When every variable of xs sits below the rest of b's support, each path over
// the other variables ends in a node over xs alone, and any path from that node
// to True is a witness. One pass then yields all functions.
std::optional<std::vector<Bdd>> BddManager::skolem_below(Bdd b, std::span<const VarId> xs) {
  const auto n = xs.size();
  std::vector<std::int32_t> slot(names_.size(), -1);
  std::uint32_t top_x = kTerminalVar;
  for (std::size_t k = 0; k < n; ++k) {
    check(xs[k]);
    slot[xs[k].index] = static_cast<std::int32_t>(k);
    top_x = std::min(top_x, levels_[xs[k].index]);
  }

  // scratch_[id] is the offset of the node's row in `table` once visited
  constexpr std::uint32_t kUnseen = 0xffffffffu;
  constexpr std::uint32_t kChecked = 0xfffffffeu;
  if (scratch_.size() < nodes_.size()) scratch_.resize(nodes_.size(), kUnseen);
  std::vector<std::uint32_t> touched;
  std::vector<std::uint32_t> table;
  bool ok = true;
  auto rec = [&](auto& self, std::uint32_t id) -> std::uint32_t {
    if (scratch_[id] != kUnseen && scratch_[id] != kChecked) return scratch_[id];
    std::uint32_t row[64];
    std::vector<std::uint32_t> big;
    std::uint32_t* r = n <= 64 ? row : (big.resize(n), big.data());
    std::fill(r, r + n, kFalse);
    if (node_level(id) >= top_x) {
      // only xs may occur here
      std::vector<std::uint32_t> stack{id};
      while (ok && !stack.empty()) {
        const auto m = stack.back();
        stack.pop_back();
        if (m <= kTrue || scratch_[m] != kUnseen) continue;
        if (slot[nodes_[m].var] < 0) ok = false;
        scratch_[m] = kChecked;
        touched.push_back(m);
        stack.push_back(nodes_[m].low);
        stack.push_back(nodes_[m].high);
      }
      for (auto m = id; ok && m > kTrue;) {
        const Node node = nodes_[m];
        const bool high = node.high != kFalse;
        if (high) r[slot[node.var]] = kTrue;
        m = high ? node.high : node.low;
      }
    } else {
      const Node node = nodes_[id];
      const auto lo = self(self, node.low);
      const auto hi = self(self, node.high);
      if (ok)
        for (std::size_t k = 0; k < n; ++k) r[k] = make(node.var, table[lo + k], table[hi + k]);
    }
    const auto base = static_cast<std::uint32_t>(table.size());
    table.insert(table.end(), r, r + n);
    scratch_[id] = base;
    touched.push_back(id);
    return base;
  };
  const auto base = rec(rec, b.id_);
  for (const auto id : touched) scratch_[id] = kUnseen;
  if (!ok) return std::nullopt;
  std::vector<Bdd> result;
  result.reserve(n);
  for (std::size_t k = 0; k < n; ++k) result.push_back({this, table[base + k]});
  return result;
}

std::vector<Bdd> BddManager::skolem(Bdd b, std::span<const VarId> xs) {
  check(b);
  const auto n = xs.size();
  if (n == 0) return {};
  if (auto below = skolem_below(b, xs)) return std::move(*below);
  // chain[i] = exists x_{i+1..n-1}. b
  std::vector<Bdd> chain(n);
  chain[n - 1] = b;
  for (std::size_t i = n - 1; i > 0; --i) chain[i - 1] = exists(chain[i], xs.subspan(i, 1));

  std::vector<Bdd> result;
  result.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // result[j] is free of xs, so cofactoring first is equivalent and smaller
    result.push_back(compose(restrict(chain[i], xs[i], true), xs.first(i), result));
  }
  return result;
}

VarId BddManager::top_var(Bdd a) const {
  check(a);
  if (a.id_ <= kTrue) throw BddError("terminal has no variable");
  return VarId{nodes_[a.id_].var};
}

Bdd BddManager::low(Bdd a) const {
  check(a);
  if (a.id_ <= kTrue) throw BddError("terminal has no cofactors");
  return {const_cast<BddManager*>(this), nodes_[a.id_].low};
}

Bdd BddManager::high(Bdd a) const {
  check(a);
  if (a.id_ <= kTrue) throw BddError("terminal has no cofactors");
  return {const_cast<BddManager*>(this), nodes_[a.id_].high};
}

std::string BddManager::to_dot(Bdd a) const {
  check(a);
  std::ostringstream out;
  out << "digraph bdd {\n";
  out << "  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack{a.id_};
  while (!stack.empty()) {
    const auto n = stack.back();
    stack.pop_back();
    if (n <= kTrue || !seen.insert(n).second) continue;
    const Node& node = nodes_[n];
    out << "  n" << n << " [label=\"" << names_[node.var] << "\"];\n";
    out << "  n" << n << " -> n" << node.low << " [style=dashed];\n";
    out << "  n" << n << " -> n" << node.high << ";\n";
    stack.push_back(node.low);
    stack.push_back(node.high);
  }
  out << "}\n";
  return out.str();
}

}  // namespace depsynt
