/*
 * Copyright 2026 The Carnot Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "carnot/schema.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace carnot {
namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = std::abs(a);
  b = std::abs(b);
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? 1 : a;
}

// Exact rational arithmetic for the Jacobi / antisymmetry checks.
// Magnitudes here are presentation constants, far from overflow.
Rational rat_add(const Rational& a, const Rational& b) {
  Rational r;
  r.num = a.num * b.den + b.num * a.den;
  r.den = a.den * b.den;
  return r.normalized();
}

Rational rat_mul(const Rational& a, const Rational& b) {
  Rational r;
  r.num = a.num * b.num;
  r.den = a.den * b.den;
  return r.normalized();
}

bool rat_zero(const Rational& a) { return a.num == 0; }

int column_rank(std::vector<std::vector<double>> cols, int rows) {
  // Row-echelon rank with a fixed pivot threshold; inputs are exact
  // small rationals in double, so the threshold is uncritical.
  const double tol = 1e-9;
  int rank = 0;
  const int ncols = static_cast<int>(cols.size());
  for (int r = 0; r < rows && rank < ncols; ++r) {
    int piv = -1;
    double best = tol;
    for (int c = rank; c < ncols; ++c) {
      const double v = std::abs(cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)]);
      if (v > best) {
        best = v;
        piv = c;
      }
    }
    if (piv < 0) continue;
    std::swap(cols[static_cast<std::size_t>(rank)], cols[static_cast<std::size_t>(piv)]);
    auto& pc = cols[static_cast<std::size_t>(rank)];
    for (int c = rank + 1; c < ncols; ++c) {
      auto& cc = cols[static_cast<std::size_t>(c)];
      const double f = cc[static_cast<std::size_t>(r)] / pc[static_cast<std::size_t>(r)];
      if (f == 0.0) continue;
      for (int rr = 0; rr < rows; ++rr) cc[static_cast<std::size_t>(rr)] -= f * pc[static_cast<std::size_t>(rr)];
    }
    ++rank;
  }
  return rank;
}

std::string idx3(int i, int j, int k) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << "," << k + 1 << ")";
  return os.str();
}

}  // namespace

std::string Rational::str() const {
  std::ostringstream os;
  os << num;
  if (den != 1) os << "/" << den;
  return os.str();
}

Rational Rational::normalized() const {
  Rational r = *this;
  if (r.den < 0) {
    r.num = -r.num;
    r.den = -r.den;
  }
  const std::int64_t g = gcd64(r.num, r.den);
  r.num /= g;
  r.den /= g;
  return r;
}

Rational Rational::parse(const std::string& text) {
  Rational r;
  const auto slash = text.find('/');
  std::size_t pos = 0;
  try {
    if (slash == std::string::npos) {
      r.num = std::stoll(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(text);
      r.den = 1;
    } else {
      r.num = std::stoll(text.substr(0, slash), &pos);
      if (pos != slash) throw std::invalid_argument(text);
      r.den = std::stoll(text.substr(slash + 1), &pos);
      if (pos != text.size() - slash - 1) throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw std::runtime_error("bad rational literal '" + text + "'");
  }
  if (r.den == 0) throw std::runtime_error("zero denominator in '" + text + "'");
  return r.normalized();
}

std::shared_ptr<const GroupSchema> GroupSchema::create(std::string name,
                                                       std::vector<int> degrees,
                                                       std::vector<StructEntry> constants,
                                                       std::vector<BracketExpr> bracket_table) {
  auto schema = std::shared_ptr<GroupSchema>(new GroupSchema());
  GroupSchema& s = *schema;
  s.name_ = std::move(name);
  s.degrees_ = std::move(degrees);
  s.dim_ = static_cast<int>(s.degrees_.size());
  if (s.dim_ == 0) throw SchemaError("degrees", "empty basis");

  for (int i = 0; i < s.dim_; ++i) {
    if (s.degrees_[static_cast<std::size_t>(i)] < 1)
      throw SchemaError("degrees", "degree of X_" + std::to_string(i + 1) + " must be >= 1");
    if (i > 0 && s.degrees_[static_cast<std::size_t>(i)] < s.degrees_[static_cast<std::size_t>(i - 1)])
      throw SchemaError("degrees", "degrees must be nondecreasing (basis ordered by stratum)");
  }
  s.step_ = s.degrees_.back();
  if (s.step_ > 4)
    throw SchemaError("step", "step " + std::to_string(s.step_) + " exceeds the supported maximum of 4");
  for (int k = 1; k <= s.step_; ++k) {
    const int count = static_cast<int>(std::count(s.degrees_.begin(), s.degrees_.end(), k));
    if (count == 0) throw SchemaError("degrees", "stratum " + std::to_string(k) + " is empty");
    s.strata_dims_.push_back(count);
  }
  s.stratum_begin_.resize(static_cast<std::size_t>(s.step_));
  {
    int at = 0;
    for (int k = 1; k <= s.step_; ++k) {
      s.stratum_begin_[static_cast<std::size_t>(k - 1)] = at;
      at += s.strata_dims_[static_cast<std::size_t>(k - 1)];
    }
  }
  s.hdim_ = std::accumulate(s.degrees_.begin(), s.degrees_.end(), 0);

  // Exact-rational table for the structural checks.
  std::map<std::tuple<int, int, int>, Rational> exact;
  for (const auto& e : constants) {
    if (e.i < 0 || e.i >= s.dim_ || e.j < 0 || e.j >= s.dim_ || e.k < 0 || e.k >= s.dim_)
      throw SchemaError("structure_constants", "index out of range at " + idx3(e.i, e.j, e.k));
    auto key = std::make_tuple(e.i, e.j, e.k);
    if (exact.count(key))
      throw SchemaError("structure_constants", "duplicate entry at " + idx3(e.i, e.j, e.k));
    exact[key] = e.c.normalized();
  }
  auto lookup = [&](int i, int j, int k) -> Rational {
    auto it = exact.find(std::make_tuple(i, j, k));
    return it == exact.end() ? Rational{0, 1} : it->second;
  };

  // Antisymmetry. An entry may be given one-sided (its mirror is
  // derived) but explicit contradictory pairs are a violation.
  for (const auto& [key, c] : exact) {
    const auto [i, j, k] = key;
    auto mirror = exact.find(std::make_tuple(j, i, k));
    if (mirror != exact.end()) {
      if (!rat_zero(rat_add(c, mirror->second)))
        throw SchemaError("antisymmetry",
                          "c" + idx3(i, j, k) + " != -c" + idx3(j, i, k));
    }
    if (i == j && !rat_zero(c))
      throw SchemaError("antisymmetry", "c" + idx3(i, j, k) + " must vanish ([X,X] = 0)");
  }
  {
    std::vector<std::pair<std::tuple<int, int, int>, Rational>> mirrors;
    for (const auto& [key, c] : exact) {
      const auto [i, j, k] = key;
      if (!exact.count(std::make_tuple(j, i, k))) mirrors.push_back({std::make_tuple(j, i, k), {-c.num, c.den}});
    }
    for (auto& m : mirrors) exact[m.first] = m.second;
  }

  // Grading: c_{ij}^k = 0 unless sigma_k = sigma_i + sigma_j.
  for (const auto& [key, c] : exact) {
    const auto [i, j, k] = key;
    if (rat_zero(c)) continue;
    if (s.degrees_[static_cast<std::size_t>(k)] !=
        s.degrees_[static_cast<std::size_t>(i)] + s.degrees_[static_cast<std::size_t>(j)])
      throw SchemaError("grading", "c" + idx3(i, j, k) + " violates the stratum grading");
  }

  // Jacobi identity, exact on all basis triples.
  for (int i = 0; i < s.dim_; ++i)
    for (int j = i + 1; j < s.dim_; ++j)
      for (int l = j + 1; l < s.dim_; ++l)
        for (int k = 0; k < s.dim_; ++k) {
          Rational acc{0, 1};
          for (int m = 0; m < s.dim_; ++m) {
            acc = rat_add(acc, rat_mul(lookup(j, l, m), lookup(i, m, k)));
            acc = rat_add(acc, rat_mul(lookup(l, i, m), lookup(j, m, k)));
            acc = rat_add(acc, rat_mul(lookup(i, j, m), lookup(l, m, k)));
          }
          if (!rat_zero(acc))
            throw SchemaError("jacobi", "Jacobi identity fails on triple " + idx3(i, j, l));
        }

  // Dense caches.
  s.table_.assign(static_cast<std::size_t>(s.dim_) * s.dim_ * s.dim_, 0.0);
  s.pair_results_.assign(static_cast<std::size_t>(s.dim_) * s.dim_, {});
  for (const auto& [key, c] : exact) {
    const auto [i, j, k] = key;
    if (rat_zero(c)) continue;
    s.table_[static_cast<std::size_t>((i * s.dim_ + j) * s.dim_ + k)] = c.value();
    s.pair_results_[static_cast<std::size_t>(i * s.dim_ + j)].push_back({k, c.value()});
    StructEntry e;
    e.i = i;
    e.j = j;
    e.k = k;
    e.c = c;
    s.entries_.push_back(e);
  }
  std::sort(s.entries_.begin(), s.entries_.end(), [](const StructEntry& a, const StructEntry& b) {
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
  });

  // Stratified generation: brackets of V_1 with V_k must span V_{k+1}.
  for (int k = 1; k < s.step_; ++k) {
    const int out_begin = s.stratum_begin(k + 1);
    const int out_dim = s.strata_dims_[static_cast<std::size_t>(k)];
    std::vector<std::vector<double>> cols;
    for (int a = s.stratum_begin(1); a < s.stratum_end(1); ++a)
      for (int b = s.stratum_begin(k); b < s.stratum_end(k); ++b) {
        std::vector<double> col(static_cast<std::size_t>(out_dim), 0.0);
        bool nonzero = false;
        for (const auto& [idx, c] : s.bracket_of_pair(a, b)) {
          if (idx >= out_begin && idx < out_begin + out_dim) {
            col[static_cast<std::size_t>(idx - out_begin)] = c;
            nonzero = true;
          }
        }
        if (nonzero) cols.push_back(std::move(col));
      }
    if (column_rank(std::move(cols), out_dim) != out_dim)
      throw SchemaError("generation",
                        "brackets [V_1, V_" + std::to_string(k) + "] do not span V_" + std::to_string(k + 1));
  }

  // Bracket table: exactly one designated expression per higher basis
  // vector, consistent with the structure constants.
  std::vector<bool> covered(static_cast<std::size_t>(s.dim_), false);
  for (const auto& be : bracket_table) {
    if (be.target < 0 || be.target >= s.dim_ || be.left < 0 || be.left >= s.dim_ || be.right < 0 ||
        be.right >= s.dim_)
      throw SchemaError("bracket_table", "index out of range");
    if (s.degrees_[static_cast<std::size_t>(be.target)] == 1)
      throw SchemaError("bracket_table", "entry for a stratum-1 vector");
    if (s.degrees_[static_cast<std::size_t>(be.left)] + s.degrees_[static_cast<std::size_t>(be.right)] !=
        s.degrees_[static_cast<std::size_t>(be.target)])
      throw SchemaError("bracket_table", "degrees of the bracket expression do not add up");
    if (covered[static_cast<std::size_t>(be.target)])
      throw SchemaError("bracket_table", "duplicate expression for X_" + std::to_string(be.target + 1));
    covered[static_cast<std::size_t>(be.target)] = true;
    // coeff * [X_left, X_right] must equal X_target exactly.
    for (int k = 0; k < s.dim_; ++k) {
      Rational want{k == be.target ? 1 : 0, 1};
      const Rational got = rat_mul(be.coeff, lookup(be.left, be.right, k));
      if (rat_add(got, Rational{-want.num, want.den}).num != 0)
        throw SchemaError("bracket_table",
                          "expression for X_" + std::to_string(be.target + 1) +
                              " does not reproduce the basis vector");
    }
  }
  for (int i = 0; i < s.dim_; ++i)
    if (s.degrees_[static_cast<std::size_t>(i)] > 1 && !covered[static_cast<std::size_t>(i)])
      throw SchemaError("bracket_table", "missing expression for X_" + std::to_string(i + 1));
  s.bracket_table_ = std::move(bracket_table);
  std::sort(s.bracket_table_.begin(), s.bracket_table_.end(),
            [](const BracketExpr& a, const BracketExpr& b) { return a.target < b.target; });

  return schema;
}

bool GroupSchema::structurally_equal(const GroupSchema& other) const {
  if (dim_ != other.dim_ || degrees_ != other.degrees_) return false;
  return table_ == other.table_;
}

namespace {

SchemaPtr make_abelian(int n) {
  return GroupSchema::create("abelian(" + std::to_string(n) + ")", std::vector<int>(static_cast<std::size_t>(n), 1),
                             {}, {});
}

SchemaPtr make_heisenberg(int n) {
  // Basis X_1..X_n, Y_1..Y_n, Z; [X_i, Y_i] = Z.
  std::vector<int> degrees(static_cast<std::size_t>(2 * n), 1);
  degrees.push_back(2);
  std::vector<StructEntry> cs;
  const int z = 2 * n;
  for (int i = 0; i < n; ++i) {
    cs.push_back({i, n + i, z, {1, 1}});
    cs.push_back({n + i, i, z, {-1, 1}});
  }
  std::vector<BracketExpr> bt = {{z, 0, n, {1, 1}}};
  return GroupSchema::create("heisenberg(" + std::to_string(n) + ")", std::move(degrees), std::move(cs),
                             std::move(bt));
}

SchemaPtr make_free_step2(int n) {
  // Basis X_1..X_n plus Z_(a,b) = [X_a, X_b] for a < b, lexicographic.
  std::vector<int> degrees(static_cast<std::size_t>(n), 1);
  std::vector<StructEntry> cs;
  std::vector<BracketExpr> bt;
  int at = n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      degrees.push_back(2);
      cs.push_back({a, b, at, {1, 1}});
      cs.push_back({b, a, at, {-1, 1}});
      bt.push_back({at, a, b, {1, 1}});
      ++at;
    }
  return GroupSchema::create("free_step2(" + std::to_string(n) + ")", std::move(degrees), std::move(cs),
                             std::move(bt));
}

bool parse_arg(const std::string& name, const std::string& prefix, int& arg) {
  if (name.size() < prefix.size() + 3) return false;
  if (name.compare(0, prefix.size(), prefix) != 0) return false;
  if (name[prefix.size()] != '(' || name.back() != ')') return false;
  const std::string inner = name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
  try {
    std::size_t pos = 0;
    arg = std::stoi(inner, &pos);
    return pos == inner.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

SchemaPtr builtin_schema(const std::string& name) {
  int n = 0;
  if (parse_arg(name, "abelian", n) && n >= 1) return make_abelian(n);
  if (parse_arg(name, "heisenberg", n) && n >= 1) return make_heisenberg(n);
  if (parse_arg(name, "free_step2", n) && n >= 2) return make_free_step2(n);
  throw std::invalid_argument("unknown builtin schema '" + name +
                              "' (expected abelian(n), heisenberg(n), free_step2(n))");
}

SchemaPtr parse_schema_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  std::string name = "unnamed";
  int dim = -1;
  std::vector<int> degrees;
  std::vector<int> strata;
  std::vector<StructEntry> constants;
  std::vector<BracketExpr> brackets;

  auto fail = [&](const std::string& what) -> void {
    throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "name") {
      std::string rest;
      std::getline(ls, rest);
      const auto first = rest.find_first_not_of(" \t");
      name = first == std::string::npos ? "" : rest.substr(first);
      if (name.empty()) fail("empty name");
    } else if (key == "dim") {
      if (!(ls >> dim) || dim < 1) fail("bad dim");
    } else if (key == "degrees") {
      int d;
      while (ls >> d) degrees.push_back(d);
      if (degrees.empty()) fail("empty degrees");
    } else if (key == "strata") {
      int d;
      while (ls >> d) strata.push_back(d);
    } else if (key == "sc") {
      StructEntry e;
      std::string value;
      if (!(ls >> e.i >> e.j >> e.k >> value)) fail("sc expects: i j k value");
      e.i -= 1;
      e.j -= 1;
      e.k -= 1;
      try {
        e.c = Rational::parse(value);
      } catch (const std::exception& ex) {
        fail(ex.what());
      }
      constants.push_back(e);
    } else if (key == "bracket") {
      BracketExpr b;
      std::string eq, value;
      if (!(ls >> b.target >> eq >> b.left >> b.right >> value) || eq != "=")
        fail("bracket expects: target = left right coeff");
      b.target -= 1;
      b.left -= 1;
      b.right -= 1;
      try {
        b.coeff = Rational::parse(value);
      } catch (const std::exception& ex) {
        fail(ex.what());
      }
      brackets.push_back(b);
    } else {
      fail("unknown directive '" + key + "'");
    }
  }

  if (dim >= 1 && static_cast<int>(degrees.size()) != dim)
    throw SchemaError("degrees", "dim is " + std::to_string(dim) + " but " +
                                     std::to_string(degrees.size()) + " degrees were given");
  auto schema = GroupSchema::create(name, degrees, constants, brackets);
  if (!strata.empty() && strata != schema->strata_dims())
    throw SchemaError("strata", "declared strata dims do not match the degrees");
  return schema;
}

SchemaPtr parse_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_schema_text(buf.str(), path);
}

std::string dump_schema(const GroupSchema& schema) {
  std::ostringstream os;
  os << "name " << schema.name() << "\n";
  os << "dim " << schema.dim() << "\n";
  os << "degrees";
  for (int d : schema.degrees()) os << " " << d;
  os << "\n";
  os << "strata";
  for (int d : schema.strata_dims()) os << " " << d;
  os << "\n";
  for (const auto& e : schema.entries())
    os << "sc " << e.i + 1 << " " << e.j + 1 << " " << e.k + 1 << " " << e.c.str() << "\n";
  for (const auto& b : schema.bracket_table())
    os << "bracket " << b.target + 1 << " = " << b.left + 1 << " " << b.right + 1 << " " << b.coeff.str() << "\n";
  return os.str();
}

}  // namespace carnot
