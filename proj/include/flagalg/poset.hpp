#pragma once

// Finite posets on dense element indices 0..m-1, with external names kept in
// a side table.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flagalg/errors.hpp"

namespace flagalg {

using Element = std::size_t;
using Cover = std::pair<Element, Element>;
/// permutation[x] is the image of x.
using Bijection = std::vector<Element>;

/// A weakly increasing tuple x_1 <= ... <= x_n of poset elements.
struct MultiChain {
  std::vector<Element> entries;

  std::size_t size() const { return entries.size(); }
  Element operator[](std::size_t i) const { return entries[i]; }
  Element front() const { return entries.front(); }
  Element back() const { return entries.back(); }
  auto operator<=>(const MultiChain&) const = default;
};

class Poset {
 public:
  Poset() = default;

  /// Builds the poset generated by `covers`; `covers[i] = (x, y)` means x is below y.
  /// Throws DomainError on cycles and out-of-range elements.
  static Poset from_covers(std::vector<std::string> names, const std::vector<Cover>& covers) {
    const std::size_t m = names.size();
    std::vector<char> rel(m * m, 0);
    for (std::size_t x = 0; x < m; ++x) rel[x * m + x] = 1;
    for (auto [x, y] : covers) {
      if (x >= m || y >= m) throw DomainError("cover references an element out of range");
      if (x == y) throw DomainError("cycle detected: element '" + names[x] + "' covers itself");
      rel[x * m + y] = 1;
    }
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t i = 0; i < m; ++i) {
        if (!rel[i * m + k]) continue;
        for (std::size_t j = 0; j < m; ++j) {
          if (rel[k * m + j]) rel[i * m + j] = 1;
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        if (rel[i * m + j] && rel[j * m + i]) {
          throw DomainError("cycle detected between '" + names[i] + "' and '" + names[j] + "'");
        }
      }
    }
    return Poset(std::move(names), std::move(rel));
  }

  /// Builds a poset from a full m x m relation (row-major, leq[x*m+y]); the relation is validated.
  static Poset from_relation(std::size_t m, std::vector<char> leq, std::vector<std::string> names = {}) {
    if (leq.size() != m * m) throw DomainError("relation has the wrong size");
    if (names.empty()) names = default_names(m);
    for (std::size_t x = 0; x < m; ++x) {
      if (!leq[x * m + x]) throw DomainError("relation is not reflexive");
      for (std::size_t y = 0; y < m; ++y) {
        if (x != y && leq[x * m + y] && leq[y * m + x]) throw DomainError("relation is not antisymmetric");
        for (std::size_t z = 0; z < m; ++z) {
          if (leq[x * m + y] && leq[y * m + z] && !leq[x * m + z]) {
            throw DomainError("relation is not transitive");
          }
        }
      }
    }
    for (auto& c : leq) c = c ? 1 : 0;
    return Poset(std::move(names), std::move(leq));
  }

  static Poset chain(std::size_t m) {
    std::vector<Cover> covers;
    for (std::size_t i = 0; i + 1 < m; ++i) covers.emplace_back(i, i + 1);
    return from_covers(default_names(m), covers);
  }

  static Poset antichain(std::size_t m) { return from_covers(default_names(m), {}); }

  static std::vector<std::string> default_names(std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < m; ++i) names.push_back(std::to_string(i));
    return names;
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(Element x) const { return names_.at(x); }

  std::optional<Element> find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return i;
    }
    return std::nullopt;
  }

  bool leq(Element x, Element y) const { return leq_[x * size() + y] != 0; }
  bool less(Element x, Element y) const { return x != y && leq(x, y); }
  bool comparable(Element x, Element y) const { return leq(x, y) || leq(y, x); }

  /// Pairs (x, y) with x < y and no element strictly between, sorted.
  const std::vector<Cover>& covers() const { return covers_; }

  /// {z : x <= z <= y}, ascending. Throws DomainError if x is not below y.
  std::vector<Element> interval(Element x, Element y) const {
    check_interval(x, y);
    std::vector<Element> out;
    for (Element z = 0; z < size(); ++z) {
      if (leq(x, z) && leq(z, y)) out.push_back(z);
    }
    return out;
  }

  /// Length of the longest chain in [x, y]. Throws DomainError if x is not below y.
  std::size_t length(Element x, Element y) const {
    check_interval(x, y);
    return length_[x * size() + y];
  }

  /// Length of the whole poset (0 for the empty poset).
  std::size_t length() const {
    std::size_t best = 0;
    for (std::size_t i = 0; i < length_.size(); ++i) {
      if (leq_[i]) best = std::max(best, length_[i]);
    }
    return best;
  }

  bool is_antichain() const { return covers_.empty(); }

  std::size_t down_degree(Element x) const {
    std::size_t c = 0;
    for (Element z = 0; z < size(); ++z) c += less(z, x);
    return c;
  }

  std::size_t up_degree(Element x) const {
    std::size_t c = 0;
    for (Element z = 0; z < size(); ++z) c += less(x, z);
    return c;
  }

  /// Length of the longest chain ending at x.
  std::size_t height(Element x) const {
    std::size_t h = 0;
    for (Element z = 0; z < size(); ++z) {
      if (leq(z, x)) h = std::max(h, length_[z * size() + x]);
    }
    return h;
  }

  /// The poset with element x renamed to perm[x].
  Poset relabeled(const Bijection& perm) const {
    const std::size_t m = size();
    std::vector<char> rel(m * m, 0);
    std::vector<std::string> names(m);
    for (Element x = 0; x < m; ++x) {
      names[perm[x]] = names_[x];
      for (Element y = 0; y < m; ++y) rel[perm[x] * m + perm[y]] = leq_[x * m + y];
    }
    return Poset(std::move(names), std::move(rel));
  }

  Poset dual() const {
    const std::size_t m = size();
    std::vector<char> rel(m * m, 0);
    for (Element x = 0; x < m; ++x) {
      for (Element y = 0; y < m; ++y) rel[y * m + x] = leq_[x * m + y];
    }
    return Poset(names_, std::move(rel));
  }

  /// Serializes in the line-oriented poset text format.
  std::string to_text() const {
    std::ostringstream out;
    out << "elements:";
    for (const auto& n : names_) out << ' ' << n;
    out << "\ncovers:\n";
    for (auto [x, y] : covers_) out << names_[x] << ' ' << names_[y] << '\n';
    return out.str();
  }

  bool operator==(const Poset& o) const { return names_ == o.names_ && leq_ == o.leq_; }

 private:
  Poset(std::vector<std::string> names, std::vector<char> relation)
      : names_(std::move(names)), leq_(std::move(relation)) {
    const std::size_t m = names_.size();
    for (Element x = 0; x < m; ++x) {
      for (Element y = 0; y < m; ++y) {
        if (!less(x, y)) continue;
        bool cover = true;
        for (Element z = 0; z < m && cover; ++z) cover = !(less(x, z) && less(z, y));
        if (cover) covers_.emplace_back(x, y);
      }
    }
    // longest path in the cover DAG, processed by increasing down-degree (a linear extension)
    std::vector<Element> order(m);
    for (Element x = 0; x < m; ++x) order[x] = x;
    std::vector<std::size_t> below(m);
    for (Element x = 0; x < m; ++x) below[x] = down_degree(x);
    std::stable_sort(order.begin(), order.end(), [&](Element a, Element b) { return below[a] < below[b]; });
    length_.assign(m * m, 0);
    for (Element x = 0; x < m; ++x) {
      for (Element y : order) {
        if (!less(x, y)) continue;
        std::size_t best = 0;
        for (auto [a, b] : covers_) {
          if (b == y && leq(x, a)) best = std::max(best, length_[x * m + a] + 1);
        }
        length_[x * m + y] = best;
      }
    }
  }

  void check_interval(Element x, Element y) const {
    if (x >= size() || y >= size()) throw DomainError("element index out of range");
    if (!leq(x, y)) {
      throw DomainError("invalid interval: '" + names_[x] + "' is not below '" + names_[y] + "'");
    }
  }

  std::vector<std::string> names_;
  std::vector<char> leq_;
  std::vector<Cover> covers_;
  std::vector<std::size_t> length_;
};

/// Parses the line-oriented poset format:
///   elements: <name> <name> ...
///   covers:
///   <lower> <upper>
/// Lines starting with '#' and blank lines are ignored.
inline Poset parse_poset(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      lines.push_back(line.substr(first));
    }
  }
  auto tokens = [](const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
  };
  if (lines.empty() || !lines[0].starts_with("elements:")) throw ParseError("expected 'elements:' header");
  auto names = tokens(lines[0].substr(9));
  std::map<std::string, Element> index;
  for (const auto& n : names) {
    if (!index.emplace(n, index.size()).second) throw ParseError("duplicate element '" + n + "'");
  }
  if (lines.size() < 2 || tokens(lines[1]) != std::vector<std::string>{"covers:"}) {
    throw ParseError("expected 'covers:' header");
  }
  std::vector<Cover> covers;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    auto t = tokens(lines[i]);
    if (t.size() != 2) throw ParseError("cover line must name two elements: '" + lines[i] + "'");
    for (const auto& n : t) {
      if (!index.count(n)) throw ParseError("undeclared element '" + n + "'");
    }
    Cover c{index[t[0]], index[t[1]]};
    if (std::find(covers.begin(), covers.end(), c) != covers.end()) {
      throw ParseError("duplicate cover '" + lines[i] + "'");
    }
    covers.push_back(c);
  }
  try {
    return Poset::from_covers(std::move(names), covers);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

/// All weakly increasing n-tuples in lexicographic order of element indices.
inline std::vector<MultiChain> multichains(const Poset& p, std::size_t n) {
  if (n == 0) throw DomainError("multichains: n must be at least 1");
  std::vector<MultiChain> out;
  std::vector<Element> cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == n) {
      out.push_back(MultiChain{cur});
      return;
    }
    for (Element z = 0; z < p.size(); ++z) {
      if (!cur.empty() && !p.leq(cur.back(), z)) continue;
      cur.push_back(z);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

namespace detail {

struct ElementInvariant {
  std::size_t down, up, height;
  auto operator<=>(const ElementInvariant&) const = default;
};

inline std::vector<ElementInvariant> invariants(const Poset& p) {
  std::vector<ElementInvariant> out;
  for (Element x = 0; x < p.size(); ++x) out.push_back({p.down_degree(x), p.up_degree(x), p.height(x)});
  return out;
}

// Backtracking over invariant-compatible candidates; calls `emit` for every
// isomorphism, stopping early when it returns false.
template <class Emit>
void search_isomorphisms(const Poset& p, const Poset& q, Emit&& emit) {
  const std::size_t m = p.size();
  if (q.size() != m || p.covers().size() != q.covers().size()) return;
  auto ip = invariants(p), iq = invariants(q);
  {
    auto sp = ip, sq = iq;
    std::sort(sp.begin(), sp.end());
    std::sort(sq.begin(), sq.end());
    if (sp != sq) return;
  }
  Bijection phi(m, m);
  std::vector<char> used(m, 0);
  bool stop = false;
  auto rec = [&](auto&& self, Element x) -> void {
    if (stop) return;
    if (x == m) {
      if (!emit(phi)) stop = true;
      return;
    }
    for (Element y = 0; y < m && !stop; ++y) {
      if (used[y] || ip[x] != iq[y]) continue;
      bool ok = true;
      for (Element a = 0; a < x && ok; ++a) {
        ok = p.leq(a, x) == q.leq(phi[a], y) && p.leq(x, a) == q.leq(y, phi[a]);
      }
      if (!ok) continue;
      phi[x] = y;
      used[y] = 1;
      self(self, x + 1);
      used[y] = 0;
    }
  };
  rec(rec, 0);
}

}  // namespace detail

/// An order isomorphism P -> Q, if one exists.
inline std::optional<Bijection> find_isomorphism(const Poset& p, const Poset& q) {
  std::optional<Bijection> found;
  detail::search_isomorphisms(p, q, [&](const Bijection& phi) {
    found = phi;
    return false;
  });
  return found;
}

/// Every order isomorphism P -> Q, in lexicographic order of the image tuples.
inline std::vector<Bijection> isomorphisms(const Poset& p, const Poset& q) {
  std::vector<Bijection> out;
  detail::search_isomorphisms(p, q, [&](const Bijection& phi) {
    out.push_back(phi);
    return true;
  });
  return out;
}

inline std::vector<Bijection> automorphisms(const Poset& p) { return isomorphisms(p, p); }

inline bool is_order_isomorphism(const Poset& p, const Poset& q, const Bijection& phi) {
  const std::size_t m = p.size();
  if (q.size() != m || phi.size() != m) return false;
  std::vector<char> hit(m, 0);
  for (auto y : phi) {
    if (y >= m || hit[y]) return false;
    hit[y] = 1;
  }
  for (Element x = 0; x < m; ++x) {
    for (Element y = 0; y < m; ++y) {
      if (p.leq(x, y) != q.leq(phi[x], phi[y])) return false;
    }
  }
  return true;
}

inline Bijection compose(const Bijection& outer, const Bijection& inner) {
  Bijection out(inner.size());
  for (std::size_t x = 0; x < inner.size(); ++x) out[x] = outer[inner[x]];
  return out;
}

inline Bijection invert(const Bijection& phi) {
  Bijection out(phi.size());
  for (std::size_t x = 0; x < phi.size(); ++x) out[phi[x]] = x;
  return out;
}

/// One representative per isomorphism class of posets on m elements, 1 <= m <= 6.
/// Candidates are naturally labeled relations (x < y implies x < y as indices),
/// visited in increasing bitmask order; the first member of each class is kept.
inline std::vector<Poset> enumerate_posets(std::size_t m) {
  if (m < 1 || m > 6) throw DomainError("enumerate_posets supports 1 <= m <= 6");
  std::vector<std::pair<Element, Element>> slots;
  for (Element i = 0; i < m; ++i) {
    for (Element j = i + 1; j < m; ++j) slots.emplace_back(i, j);
  }
  using Signature = std::pair<std::size_t, std::vector<detail::ElementInvariant>>;
  std::vector<Poset> reps;
  std::map<Signature, std::vector<std::size_t>> by_signature;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << slots.size()); ++mask) {
    std::vector<char> rel(m * m, 0);
    for (Element x = 0; x < m; ++x) rel[x * m + x] = 1;
    for (std::size_t b = 0; b < slots.size(); ++b) {
      if (mask >> b & 1) rel[slots[b].first * m + slots[b].second] = 1;
    }
    bool transitive = true;
    for (Element x = 0; x < m && transitive; ++x) {
      for (Element y = x + 1; y < m && transitive; ++y) {
        if (!rel[x * m + y]) continue;
        for (Element z = y + 1; z < m && transitive; ++z) {
          if (rel[y * m + z] && !rel[x * m + z]) transitive = false;
        }
      }
    }
    if (!transitive) continue;
    Poset p = Poset::from_relation(m, std::move(rel));
    auto inv = detail::invariants(p);
    std::sort(inv.begin(), inv.end());
    auto& bucket = by_signature[{p.covers().size(), std::move(inv)}];
    bool fresh = std::none_of(bucket.begin(), bucket.end(),
                              [&](std::size_t r) { return find_isomorphism(reps[r], p).has_value(); });
    if (fresh) {
      bucket.push_back(reps.size());
      reps.push_back(std::move(p));
    }
  }
  return reps;
}

}  // namespace flagalg
