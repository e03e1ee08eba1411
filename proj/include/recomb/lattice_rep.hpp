#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "recomb/code_core.hpp"
#include "recomb/rational.hpp"

namespace recomb::rep {

// A lattice point of S(m) = {1..m}^d, 1-based coordinates.
using Point = std::vector<uint32_t>;

// Weight assignment recipe. "uniform" is all-ones (beta = 1); "shell" puts 2
// on {1,2}^d and 1 + 1/(M-1) on the shell with max coordinate M >= 3 (beta =
// 2, monotone non-increasing along every axis); "explicit" carries a full
// m x ... x m grid.
struct WeightSpec {
  enum class Kind { Uniform, Shell, Explicit };
  Kind kind = Kind::Uniform;
  // Explicit only: grid dimensions and row-major weights (first coordinate
  // varies fastest), plus the declared upper bound beta.
  uint32_t m = 0;
  uint32_t d = 0;
  std::vector<Rational> weights;
  Rational beta = 1;

  static WeightSpec uniform() { return WeightSpec{}; }
  static WeightSpec shell() {
    WeightSpec s;
    s.kind = Kind::Shell;
    s.beta = 2;
    return s;
  }
  static WeightSpec explicit_grid(uint32_t m, uint32_t d, std::vector<Rational> w, Rational beta) {
    WeightSpec s;
    s.kind = Kind::Explicit;
    s.m = m;
    s.d = d;
    s.weights = std::move(w);
    s.beta = std::move(beta);
    return s;
  }
};

inline uint64_t checked_point_count(uint32_t m, uint32_t d) {
  if (m == 0 || d == 0) throw std::invalid_argument("lattice needs m >= 1 and d >= 1");
  uint64_t n = 1;
  for (uint32_t i = 0; i < d; ++i) {
    if (n > (uint64_t(1) << 40) / m)
      throw std::invalid_argument("lattice m^d too large to materialize");
    n *= m;
  }
  return n;
}

// S(m) with one rational weight per point, 1 <= w(v) <= beta. Linear index:
// idx = sum_i (v_i - 1) * m^i, i.e. the first coordinate varies fastest.
class WeightedLattice {
 public:
  WeightedLattice(uint32_t m, uint32_t d, std::vector<Rational> weights, Rational beta)
      : m_(m), d_(d), w_(std::move(weights)), beta_(std::move(beta)) {
    const uint64_t count = checked_point_count(m_, d_);
    if (w_.size() != count)
      throw std::invalid_argument("weight grid size does not match m^d");
    if (beta_ < 1) throw std::invalid_argument("beta must be >= 1");
    for (const Rational& w : w_) {
      if (w < 1) throw std::invalid_argument("all weights must be >= 1");
      if (w > beta_) throw std::invalid_argument("a weight exceeds the declared beta");
    }
  }

  static WeightedLattice from_spec(const WeightSpec& spec, uint32_t m, uint32_t d) {
    const uint64_t count = checked_point_count(m, d);
    std::vector<Rational> w(count);
    switch (spec.kind) {
      case WeightSpec::Kind::Uniform: {
        std::fill(w.begin(), w.end(), Rational(1));
        return WeightedLattice(m, d, std::move(w), 1);
      }
      case WeightSpec::Kind::Shell: {
        WeightedLattice tmp(m, d, std::vector<Rational>(count, Rational(1)), 2);
        for (uint64_t i = 0; i < count; ++i) {
          Point p = tmp.point_at(i);
          uint32_t mx = *std::max_element(p.begin(), p.end());
          w[i] = (mx <= 2) ? Rational(2) : Rational(1) + Rational(1, mx - 1);
        }
        return WeightedLattice(m, d, std::move(w), 2);
      }
      case WeightSpec::Kind::Explicit: {
        if (spec.d != d)
          throw std::invalid_argument("explicit weight spec dimension mismatch");
        if (spec.m < m)
          throw std::invalid_argument("explicit weight spec grid smaller than requested m");
        WeightedLattice probe(m, d, std::vector<Rational>(count, Rational(1)), spec.beta);
        for (uint64_t i = 0; i < count; ++i) {
          Point p = probe.point_at(i);
          uint64_t src = 0;
          for (uint32_t a = d; a-- > 0;) src = src * spec.m + (p[a] - 1);
          w[i] = spec.weights.at(src);
        }
        return WeightedLattice(m, d, std::move(w), spec.beta);
      }
    }
    throw std::logic_error("unknown weight spec kind");
  }

  uint32_t m() const { return m_; }
  uint32_t d() const { return d_; }
  uint64_t point_count() const { return w_.size(); }
  const Rational& beta() const { return beta_; }
  const Rational& weight_at(uint64_t idx) const { return w_.at(idx); }

  Point point_at(uint64_t idx) const {
    Point p(d_);
    for (uint32_t i = 0; i < d_; ++i) {
      p[i] = uint32_t(idx % m_) + 1;
      idx /= m_;
    }
    return p;
  }

  uint64_t index_of(const Point& p) const {
    if (p.size() != d_) throw std::invalid_argument("point dimension mismatch");
    uint64_t idx = 0;
    for (uint32_t i = d_; i-- > 0;) {
      if (p[i] < 1 || p[i] > m_) throw std::invalid_argument("point coordinate out of range");
      idx = idx * m_ + (p[i] - 1);
    }
    return idx;
  }

  const Rational& weight_of(const Point& p) const { return w_[index_of(p)]; }

  Rational total_weight() const {
    Rational t = 0;
    for (const Rational& w : w_) t += w;
    return t;
  }

 private:
  uint32_t m_, d_;
  std::vector<Rational> w_;
  Rational beta_;
};

// Monotone means non-increasing along every axis: bumping one coordinate up
// never raises the weight. Checked via axis neighbors, which suffices.
inline bool is_monotone(const WeightedLattice& lat) {
  const uint32_t m = lat.m(), d = lat.d();
  uint64_t stride = 1;
  for (uint32_t axis = 0; axis < d; ++axis) {
    for (uint64_t i = 0; i < lat.point_count(); ++i) {
      uint32_t coord = lat.point_at(i)[axis];
      if (coord < m && lat.weight_at(i + stride) > lat.weight_at(i)) return false;
    }
    stride *= m;
  }
  return true;
}

// A candidate representative set with its epsilon threshold attached.
struct RepCode {
  std::vector<Point> points;
  Rational epsilon;
};

inline bool point_lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline void sort_points(std::vector<Point>& pts) {
  std::sort(pts.begin(), pts.end(), point_lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// B is representative iff no subset disjoint from B is heavy, i.e. iff the
// complement's total weight falls strictly below eps * m^d.
inline bool is_representative(const WeightedLattice& lat, const RepCode& code) {
  if (code.epsilon <= 0 || code.epsilon >= 1)
    throw std::invalid_argument("epsilon must lie strictly between 0 and 1");
  std::set<uint64_t> members;
  for (const Point& p : code.points) members.insert(lat.index_of(p));
  Rational complement = 0;
  for (uint64_t i = 0; i < lat.point_count(); ++i)
    if (!members.count(i)) complement += lat.weight_at(i);
  const Rational threshold = code.epsilon * Rational(lat.point_count());
  return complement < threshold;
}

// Indices ordered by (weight ascending, point-lex ascending); the greedy
// drop order for building a minimum representative set.
inline std::vector<uint64_t> greedy_order(const WeightedLattice& lat) {
  std::vector<uint64_t> order(lat.point_count());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Point> pts(lat.point_count());
  for (uint64_t i = 0; i < lat.point_count(); ++i) pts[i] = lat.point_at(i);
  std::sort(order.begin(), order.end(), [&](uint64_t a, uint64_t b) {
    if (lat.weight_at(a) != lat.weight_at(b)) return lat.weight_at(a) < lat.weight_at(b);
    return point_lex_less(pts[a], pts[b]);
  });
  return order;
}

struct MinRepResult {
  uint64_t size = 0;
  RepCode witness;
};

// Minimum representative-set size: drop the lightest points while the dropped
// total stays strictly below eps * m^d; the kept complement is a witness and
// no smaller set works (any smaller set's complement weighs at least as much
// as the greedy-dropped prefix plus one more point, crossing the threshold).
inline MinRepResult min_rep_size(const WeightedLattice& lat, const Rational& eps) {
  if (eps <= 0 || eps >= 1)
    throw std::invalid_argument("epsilon must lie strictly between 0 and 1");
  const Rational threshold = eps * Rational(lat.point_count());
  std::vector<uint64_t> order = greedy_order(lat);
  Rational dropped = 0;
  size_t t = 0;
  while (t < order.size() && dropped + lat.weight_at(order[t]) < threshold) {
    dropped += lat.weight_at(order[t]);
    ++t;
  }
  MinRepResult out;
  out.size = lat.point_count() - t;
  out.witness.epsilon = eps;
  out.witness.points.reserve(out.size);
  std::set<uint64_t> droppedset(order.begin(), order.begin() + t);
  for (uint64_t i = 0; i < lat.point_count(); ++i)
    if (!droppedset.count(i)) out.witness.points.push_back(lat.point_at(i));
  sort_points(out.witness.points);
  return out;
}

// Exhaustive oracle over all 2^(m^d) candidate sets; the inner subset walk
// terminates at the first heavy miss. Limited to m^d <= 20 points.
inline uint64_t brute_force_min_rep(const WeightedLattice& lat, const Rational& eps) {
  if (eps <= 0 || eps >= 1)
    throw std::invalid_argument("epsilon must lie strictly between 0 and 1");
  const uint64_t n64 = lat.point_count();
  if (n64 > 20)
    throw std::invalid_argument("brute_force_min_rep: m^d = " + std::to_string(n64) +
                                " exceeds the 20-point exhaustive budget");
  const uint32_t n = uint32_t(n64);
  const Rational threshold = eps * Rational(n64);

  // subset weights via shared-denominator integers when they fit, else exact
  // rational DP; either way `heavy` is a plain bitmap afterwards
  std::vector<bool> heavy(size_t(1) << n, false);
  BigInt lcm = denominator(threshold);
  for (uint32_t i = 0; i < n; ++i)
    lcm = boost::multiprecision::lcm(lcm, denominator(lat.weight_at(i)));
  bool scaled_ok = lcm <= BigInt(1) << 30;
  if (scaled_ok) {
    std::vector<int64_t> w(n);
    BigInt total = 0;
    for (uint32_t i = 0; i < n; ++i) {
      BigInt scaled = numerator(lat.weight_at(i)) * (lcm / denominator(lat.weight_at(i)));
      total += scaled;
      if (scaled > (BigInt(1) << 60)) scaled_ok = false;
      w[i] = scaled.convert_to<int64_t>();
    }
    if (total > (BigInt(1) << 60)) scaled_ok = false;
    if (scaled_ok) {
      const int64_t th = (numerator(threshold) * (lcm / denominator(threshold)))
                             .convert_to<int64_t>();
      std::vector<int64_t> sum(size_t(1) << n, 0);
      for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
        uint64_t low = mask & (~mask + 1);
        sum[mask] = sum[mask ^ low] + w[uint32_t(__builtin_ctzll(low))];
        heavy[mask] = sum[mask] >= th;
      }
    }
  }
  if (!scaled_ok) {
    std::vector<Rational> sum(size_t(1) << n, Rational(0));
    for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
      uint64_t low = mask & (~mask + 1);
      sum[mask] = sum[mask ^ low] + lat.weight_at(uint32_t(__builtin_ctzll(low)));
      heavy[mask] = sum[mask] >= threshold;
    }
  }

  const uint64_t full = (n == 64) ? ~uint64_t(0) : (uint64_t(1) << n) - 1;
  uint32_t best = n;
  for (uint64_t b = 0; b <= full; ++b) {
    const uint32_t sz = uint32_t(__builtin_popcountll(b));
    if (sz >= best) continue;
    const uint64_t t = full & ~b;
    bool rep = true;
    uint64_t u = t;
    while (true) {
      if (heavy[u]) {
        rep = false;
        break;
      }
      if (u == 0) break;
      u = (u - 1) & t;
    }
    if (rep) best = sz;
  }
  return best;
}

// Maximal set of points whose total weight stays strictly below eps * m^d;
// adding any further point reaches the threshold. Greedy by (weight, lex).
inline std::vector<Point> critical_set(const WeightedLattice& lat, const Rational& eps) {
  if (eps <= 0 || eps >= 1)
    throw std::invalid_argument("epsilon must lie strictly between 0 and 1");
  const Rational threshold = eps * Rational(lat.point_count());
  if (threshold < 1)
    throw std::invalid_argument(
        "critical_set: threshold eps*m^d is below the minimum point weight 1");
  std::vector<uint64_t> order = greedy_order(lat);
  Rational total = 0;
  std::vector<Point> out;
  for (uint64_t idx : order) {
    if (total + lat.weight_at(idx) < threshold) {
      total += lat.weight_at(idx);
      out.push_back(lat.point_at(idx));
    } else {
      break;  // order is weight-ascending: nothing later fits either
    }
  }
  sort_points(out);
  return out;
}

// A rectangular sub-block of S(m), d = 2 only: global coordinates
// {x_off+1..x_off+width} x {y_off+1..y_off+height}.
struct BlockSpan {
  uint32_t x_off = 0, y_off = 0, width = 0, height = 0;
};

// Minimum representative set for a block against threshold eps*width*height,
// weights taken from the ambient lattice, points in block-local coordinates.
inline MinRepResult block_min_code(const WeightedLattice& lat, const BlockSpan& b,
                                   const Rational& eps) {
  if (lat.d() != 2) throw std::invalid_argument("block_min_code requires d = 2");
  if (b.x_off + b.width > lat.m() || b.y_off + b.height > lat.m())
    throw std::invalid_argument("block does not fit inside the lattice");
  MinRepResult out;
  out.witness.epsilon = eps;
  if (b.width == 0 || b.height == 0) return out;

  struct Entry {
    Rational w;
    Point local;
  };
  std::vector<Entry> entries;
  entries.reserve(uint64_t(b.width) * b.height);
  for (uint32_t x = 1; x <= b.width; ++x)
    for (uint32_t y = 1; y <= b.height; ++y)
      entries.push_back({lat.weight_of({b.x_off + x, b.y_off + y}), {x, y}});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& c) {
    if (a.w != c.w) return a.w < c.w;
    return point_lex_less(a.local, c.local);
  });
  const Rational threshold = eps * Rational(uint64_t(b.width) * b.height);
  Rational dropped = 0;
  size_t t = 0;
  while (t < entries.size() && dropped + entries[t].w < threshold) {
    dropped += entries[t].w;
    ++t;
  }
  for (size_t i = t; i < entries.size(); ++i) out.witness.points.push_back(entries[i].local);
  sort_points(out.witness.points);
  out.size = out.witness.points.size();
  return out;
}

// Four-block composition for d = 2: S(m) splits at m = k*r + s (k = m/r,
// s = m mod r) into blocks of sizes kr x kr, kr x s, s x kr, s x s; block
// codes in block-local coordinates translate into a representative set for
// the whole square. Every code must carry the same epsilon.
inline RepCode compose(uint32_t m, uint32_t r, const RepCode& s1, const RepCode& s2,
                       const RepCode& s3, const RepCode& s4) {
  if (r == 0 || r > m) throw std::invalid_argument("compose needs 1 <= r <= m");
  const uint32_t k = m / r;
  const uint32_t kr = k * r;
  const uint32_t s = m - kr;

  auto check = [&](const RepCode& c, uint32_t w, uint32_t h, const char* name) {
    for (const Point& p : c.points) {
      if (p.size() != 2) throw std::invalid_argument("compose requires d = 2 points");
      if (w == 0 || h == 0)
        throw std::invalid_argument(std::string(name) + " must be empty for this split");
      if (p[0] < 1 || p[0] > w || p[1] < 1 || p[1] > h)
        throw std::invalid_argument(std::string(name) + " point outside its block");
    }
  };
  check(s1, kr, kr, "block 1");
  check(s2, kr, s, "block 2");
  check(s3, s, kr, "block 3");
  check(s4, s, s, "block 4");
  if (s1.epsilon != s2.epsilon || s1.epsilon != s3.epsilon || s1.epsilon != s4.epsilon)
    throw std::invalid_argument("compose: all four blocks must share one epsilon");

  RepCode out;
  out.epsilon = s1.epsilon;
  auto add = [&](const RepCode& c, uint32_t dx, uint32_t dy) {
    for (const Point& p : c.points) out.points.push_back({p[0] + dx, p[1] + dy});
  };
  add(s1, 0, 0);
  add(s2, 0, kr);
  add(s3, kr, 0);
  add(s4, kr, kr);
  sort_points(out.points);
  return out;
}

struct SweepRow {
  uint32_t m = 0;
  uint64_t b = 0;
  Rational ratio;       // b / m^d
  bool lower_ok = false;  // (1 - eps) <= ratio
  bool upper_ok = false;  // ratio <= (1 - eps/beta) + 1/m^d
};

struct MultipleCheck {
  uint32_t m_small = 0, m_large = 0;
  bool ok = false;  // ratio(m_large) <= ratio(m_small)
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<MultipleCheck> multiple_checks;
  bool monotone = false;
  Rational beta;
  Rational eps;
  uint32_t d = 0;
};

// b_m across a list of sizes, with the two-sided size bounds per row and the
// ratio monotonicity check on exact multiples (valid only for monotone
// weights, where an m1-tiling of the m2-grid gives subadditivity).
inline SweepResult subadditive_sweep(const WeightSpec& spec, const Rational& eps, uint32_t d,
                                     std::vector<uint32_t> m_list,
                                     bool check_subadditivity = true) {
  if (eps <= 0 || eps >= 1)
    throw std::invalid_argument("epsilon must lie strictly between 0 and 1");
  if (m_list.empty()) throw std::invalid_argument("sweep needs at least one m");
  std::sort(m_list.begin(), m_list.end());
  m_list.erase(std::unique(m_list.begin(), m_list.end()), m_list.end());
  if (m_list.front() < 1) throw std::invalid_argument("sweep sizes must be >= 1");

  SweepResult out;
  out.eps = eps;
  out.d = d;

  const WeightedLattice largest = WeightedLattice::from_spec(spec, m_list.back(), d);
  out.beta = largest.beta();
  out.monotone = is_monotone(largest);
  if (check_subadditivity && !out.monotone) {
    throw std::invalid_argument(
        "subadditivity checks require monotone weights; disable them for this spec");
  }

  for (uint32_t m : m_list) {
    const WeightedLattice lat = WeightedLattice::from_spec(spec, m, d);
    SweepRow row;
    row.m = m;
    row.b = min_rep_size(lat, eps).size;
    row.ratio = Rational(row.b) / Rational(lat.point_count());
    row.lower_ok = Rational(1) - eps <= row.ratio;
    row.upper_ok = row.ratio <= Rational(1) - eps / lat.beta() + Rational(1, lat.point_count());
    out.rows.push_back(row);
  }
  if (check_subadditivity) {
    for (size_t i = 0; i < out.rows.size(); ++i) {
      for (size_t j = i + 1; j < out.rows.size(); ++j) {
        if (out.rows[j].m % out.rows[i].m != 0) continue;
        MultipleCheck chk;
        chk.m_small = out.rows[i].m;
        chk.m_large = out.rows[j].m;
        chk.ok = out.rows[j].ratio <= out.rows[i].ratio;
        out.multiple_checks.push_back(chk);
      }
    }
  }
  return out;
}

}  // namespace recomb::rep
