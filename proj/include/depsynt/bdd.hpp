#pragma once

// Reduced ordered binary decision diagrams.
//
// A BddManager owns a unique table of (var, low, high) nodes plus operation
// caches. There are two terminals, False (id 0) and True (id 1); no complement
// edges. Variables carry a VarId (their creation index) and a level (their
// position in the order). New variables may be inserted anywhere in the order
// at any time: existing nodes stay ordered because the relative order of the
// variables they mention never changes.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace depsynt {

struct VarId {
  std::uint32_t index = 0;

  friend auto operator<=>(const VarId&, const VarId&) = default;
};

struct Literal {
  VarId var;
  bool value = true;

  friend bool operator==(const Literal&, const Literal&) = default;
};

// Truth values indexed by VarId::index.
using Assignment = std::vector<bool>;

enum class BoolOp : std::uint8_t { And, Or, Xor, Implies, Iff };

class BddManager;

// Handle to a node inside one manager. Cheap to copy; equality of handles is
// equality of the represented functions.
class Bdd {
 public:
  Bdd() = default;

  BddManager* manager() const { return mgr_; }
  std::uint32_t id() const { return id_; }
  bool valid() const { return mgr_ != nullptr; }
  bool is_false() const { return id_ == 0; }
  bool is_true() const { return id_ == 1; }
  bool is_const() const { return id_ <= 1; }

  Bdd operator!() const;
  Bdd operator&(const Bdd& other) const;
  Bdd operator|(const Bdd& other) const;
  Bdd operator^(const Bdd& other) const;
  Bdd& operator&=(const Bdd& other) { return *this = *this & other; }
  Bdd& operator|=(const Bdd& other) { return *this = *this | other; }

  friend bool operator==(const Bdd& a, const Bdd& b) { return a.mgr_ == b.mgr_ && a.id_ == b.id_; }
  friend bool operator<(const Bdd& a, const Bdd& b) { return a.id_ < b.id_; }

 private:
  friend class BddManager;
  Bdd(BddManager* mgr, std::uint32_t id) : mgr_(mgr), id_(id) {}

  BddManager* mgr_ = nullptr;
  std::uint32_t id_ = 0;
};

class BddManager {
 public:
  BddManager();
  BddManager(const BddManager&) = delete;
  BddManager& operator=(const BddManager&) = delete;

  // Appends a variable at the end of the order.
  VarId new_var(std::string name);
  // Inserts a variable directly after `anchor` in the order.
  VarId new_var_after(std::string name, VarId anchor);

  std::optional<VarId> find_var(std::string_view name) const;
  const std::string& var_name(VarId v) const;
  std::size_t var_count() const { return names_.size(); }
  std::uint32_t level(VarId v) const;
  // Variables sorted by level.
  const std::vector<VarId>& order() const { return order_; }

  Bdd bdd_true() { return {this, 1}; }
  Bdd bdd_false() { return {this, 0}; }
  Bdd constant(bool value) { return {this, value ? 1u : 0u}; }
  Bdd var(VarId v);
  Bdd nvar(VarId v);
  Bdd literal(Literal lit) { return lit.value ? var(lit.var) : nvar(lit.var); }
  Bdd cube(std::span<const Literal> lits);

  Bdd apply(BoolOp op, Bdd a, Bdd b);
  Bdd negate(Bdd a);
  Bdd ite(Bdd f, Bdd g, Bdd h);

  Bdd restrict(Bdd a, VarId v, bool value);
  Bdd restrict(Bdd a, std::span<const Literal> lits);
  Bdd exists(Bdd a, std::span<const VarId> vars);
  Bdd forall(Bdd a, std::span<const VarId> vars);
  // Simultaneous substitution of variables by variables. The map must be
  // injective.
  Bdd rename(Bdd a, const std::map<VarId, VarId>& map);
  // Functional composition a[v := f].
  Bdd substitute(Bdd a, VarId v, Bdd f);
  // Simultaneous composition a[vars[k] := fs[k]].
  Bdd compose(Bdd a, std::span<const VarId> vars, std::span<const Bdd> fs);

  bool is_sat(Bdd a) const;
  // Reachable nodes, terminals included: node_count(True) == 1.
  std::size_t node_count(Bdd a) const;
  std::size_t internal_node_count(Bdd a) const;
  std::vector<VarId> support(Bdd a) const;
  bool eval(Bdd a, const Assignment& assignment) const;
  // Literals along one path to True, or nothing when `a` is False.
  std::optional<std::vector<Literal>> pick_cube(Bdd a) const;
  // Disjoint cubes covering `a` (one per path to True).
  std::vector<std::vector<Literal>> cubes(Bdd a) const;

  // Skolem functions for `xs` in `b`: F with support disjoint from xs such that
  // (exists xs. b) implies b[xs := F]. Built by self-substitution over the
  // positive cofactors of the existential chain, last variable quantified first,
  // or in one pass when xs sit below the rest of b's support.
  std::vector<Bdd> skolem(Bdd b, std::span<const VarId> xs);

  std::string to_dot(Bdd a) const;

  // Structural access for non-terminal nodes: top variable and cofactors.
  VarId top_var(Bdd a) const;
  Bdd low(Bdd a) const;
  Bdd high(Bdd a) const;

  // Nodes allocated in the unique table, terminals included.
  std::size_t total_nodes() const { return nodes_.size(); }

 private:
  static constexpr std::uint32_t kTerminalVar = 0xffffffffu;

  struct Node {
    std::uint32_t var;
    std::uint32_t low;
    std::uint32_t high;
  };

  struct Triple {
    std::uint32_t a, b, c;
    friend bool operator==(const Triple&, const Triple&) = default;
  };
  struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept {
      std::uint64_t h = t.a;
      h = h * 0x9e3779b97f4a7c15ull + t.b;
      h = h * 0x9e3779b97f4a7c15ull + t.c;
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };
  using TripleMap = std::unordered_map<Triple, std::uint32_t, TripleHash>;
  // Direct-mapped operation cache; a colliding insert overwrites the slot.
  class ComputedTable {
   public:
    bool lookup(const Triple& key, std::uint32_t& out) const {
      const Entry& e = slots_[slot(key)];
      if (e.value == kEmpty || !(e.key == key)) return false;
      out = e.value;
      return true;
    }
    void insert(const Triple& key, std::uint32_t value);
    void clear() { slots_.assign(slots_.size(), Entry{}); }

   private:
    static constexpr std::uint32_t kEmpty = 0xffffffffu;
    static constexpr std::size_t kMaxSlots = std::size_t{1} << 20;
    struct Entry {
      Triple key{};
      std::uint32_t value = kEmpty;
    };
    std::size_t slot(const Triple& key) const { return TripleHash{}(key) & (slots_.size() - 1); }
    std::vector<Entry> slots_ = std::vector<Entry>(std::size_t{1} << 10);
    std::size_t inserts_ = 0;
  };

  void check(const Bdd& a) const;
  void check(VarId v) const;
  std::uint32_t node_level(std::uint32_t id) const {
    const auto var = nodes_[id].var;
    return var == kTerminalVar ? kTerminalVar : levels_[var];
  }
  std::uint32_t make(std::uint32_t var, std::uint32_t low, std::uint32_t high);
  std::uint32_t apply_rec(BoolOp op, std::uint32_t a, std::uint32_t b);
  std::uint32_t not_rec(std::uint32_t a);
  std::uint32_t ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h);
  // Variable sets for quantification and restriction are interned so their
  // results can be cached across calls. A mark is kUnmarked, or the
  // restricted value (0/1), or 1 for a quantified variable.
  static constexpr std::int8_t kUnmarked = -1;
  static constexpr std::uint32_t kRestrictTag = 0;
  static constexpr std::uint32_t kExistsTag = 1;
  // Single-variable variants skip interning; their keys hold the variable.
  static constexpr std::uint32_t kRestrict0Tag = 2;
  static constexpr std::uint32_t kRestrict1Tag = 3;
  static constexpr std::uint32_t kExists1Tag = 4;
  std::uint32_t restrict1_rec(std::uint32_t n, std::uint32_t var, std::uint32_t level, bool value);
  std::optional<std::vector<Bdd>> skolem_below(Bdd b, std::span<const VarId> xs);
  std::uint32_t exists1_rec(std::uint32_t n, std::uint32_t var, std::uint32_t level);
  std::uint32_t intern_set(std::vector<std::int8_t> marks);
  std::int8_t set_mark(std::uint32_t set, std::uint32_t var) const;
  std::uint32_t restrict_rec(std::uint32_t n, std::uint32_t set, std::uint32_t max_level);
  std::uint32_t exists_rec(std::uint32_t n, std::uint32_t set, std::uint32_t max_level);

  std::vector<Node> nodes_;
  TripleMap unique_;
  ComputedTable apply_cache_;
  ComputedTable ite_cache_;
  ComputedTable not_cache_;
  ComputedTable quant_cache_;
  std::map<std::vector<std::int8_t>, std::uint32_t> set_ids_;
  std::vector<std::vector<std::int8_t>> sets_;
  std::vector<std::uint32_t> scratch_;  // per-node marks, reset after use

  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> by_name_;
  std::vector<std::uint32_t> levels_;
  std::vector<VarId> order_;
};

}  // namespace depsynt
