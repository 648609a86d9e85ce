#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "workbench/carrier.hpp"

namespace workbench::schema {

// The diagonal square over finite carriers: a table f: B x B -> D together
// with an endomap alpha: D -> D. g = alpha . f . diag is computed from it;
// if alpha is fixed-point free, g cannot coincide with any column of f.
struct DiagonalInstance {
  FiniteCarrier carrier_b;
  FiniteCarrier values_d;
  std::vector<int> f;     // |B|^2 entries, row-major: f[x*|B| + y], values are D indices
  std::vector<int> alpha; // |D| entries, values are D indices

  DiagonalInstance(FiniteCarrier b, FiniteCarrier d, std::vector<int> f_table,
                   std::vector<int> alpha_table)
      : carrier_b(std::move(b)), values_d(std::move(d)), f(std::move(f_table)),
        alpha(std::move(alpha_table)) {
    const std::size_t nb = carrier_b.size(), nd = values_d.size();
    if (f.size() != nb * nb)
      throw std::invalid_argument("f table must have |B|^2 entries");
    if (alpha.size() != nd)
      throw std::invalid_argument("alpha table must have |D| entries");
    for (int v : f)
      if (v < 0 || static_cast<std::size_t>(v) >= nd)
        throw std::invalid_argument("f entry is not a D value");
    for (int v : alpha)
      if (v < 0 || static_cast<std::size_t>(v) >= nd)
        throw std::invalid_argument("alpha entry is not a D value");
  }

  int f_at(int x, int y) const { return f[static_cast<std::size_t>(x) * carrier_b.size() + y]; }
  int alpha_at(int d) const { return alpha[static_cast<std::size_t>(d)]; }
};

// g(x) = alpha(f(x,x))
inline std::vector<int> diagonalize(const DiagonalInstance& inst) {
  std::vector<int> g(inst.carrier_b.size());
  for (std::size_t x = 0; x < g.size(); ++x)
    g[x] = inst.alpha_at(inst.f_at(static_cast<int>(x), static_cast<int>(x)));
  return g;
}

inline std::vector<int> fixed_points(const std::vector<int>& alpha) {
  std::vector<int> out;
  for (std::size_t d = 0; d < alpha.size(); ++d)
    if (alpha[d] == static_cast<int>(d)) out.push_back(static_cast<int>(d));
  return out;
}

// all b with g(.) == f(., b); empty means g is not representable by f
inline std::vector<int> find_representing_indices(const DiagonalInstance& inst,
                                                  const std::vector<int>& g) {
  if (g.size() != inst.carrier_b.size())
    throw std::invalid_argument("g must be total on B");
  std::vector<int> out;
  const int nb = static_cast<int>(inst.carrier_b.size());
  for (int b = 0; b < nb; ++b) {
    bool all = true;
    for (int x = 0; x < nb && all; ++x) all = g[static_cast<std::size_t>(x)] == inst.f_at(x, b);
    if (all) out.push_back(b);
  }
  return out;
}

struct SchemaReport {
  std::vector<int> g;
  std::vector<int> alpha_fixed_points;
  std::vector<int> representing_indices;
  bool consistent = false; // fixed-point-free alpha implies no representing index
};

inline SchemaReport schema_report(const DiagonalInstance& inst) {
  SchemaReport r;
  r.g = diagonalize(inst);
  r.alpha_fixed_points = fixed_points(inst.alpha);
  r.representing_indices = find_representing_indices(inst, r.g);
  r.consistent = !(r.alpha_fixed_points.empty() && !r.representing_indices.empty());
  return r;
}

// ---- exhaustive sweeps -----------------------------------------------------

struct SweepResult {
  std::uint64_t instances = 0;
  std::uint64_t consistent = 0;
  std::uint64_t with_representing_index = 0;
};

// Every f table for the given carriers and a fixed alpha. Caps keep this in
// the millions at most (|D|^(|B|^2) tables).
inline SweepResult sweep_all_f_tables(std::size_t nb, std::size_t nd,
                                      const std::vector<int>& alpha) {
  if (nb > 4 || nd > 4) throw std::invalid_argument("sweep carriers capped at 4 elements");
  FiniteCarrier b = FiniteCarrier::numbered(nb);
  FiniteCarrier d = FiniteCarrier::numbered(nd);
  const std::size_t cells = nb * nb;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) total *= nd;

  SweepResult res;
  std::vector<int> f(cells, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t t = idx;
    for (std::size_t i = 0; i < cells; ++i) {
      f[i] = static_cast<int>(t % nd);
      t /= nd;
    }
    DiagonalInstance inst(b, d, f, alpha);
    SchemaReport r = schema_report(inst);
    ++res.instances;
    if (r.consistent) ++res.consistent;
    if (!r.representing_indices.empty()) ++res.with_representing_index;
  }
  return res;
}

// all fixed-point-free endomaps of a carrier of size nd
inline std::vector<std::vector<int>> fixed_point_free_endomaps(std::size_t nd) {
  std::vector<std::vector<int>> out;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < nd; ++i) total *= nd;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t t = idx;
    std::vector<int> a(nd);
    bool fpf = true;
    for (std::size_t i = 0; i < nd; ++i) {
      a[i] = static_cast<int>(t % nd);
      t /= nd;
      if (a[i] == static_cast<int>(i)) fpf = false;
    }
    if (fpf) out.push_back(std::move(a));
  }
  return out;
}

// ---- instance text format --------------------------------------------------
//
//   B = a b c
//   D = 0 1
//   f a b = 1
//   alpha 0 = 1
//
// '#' starts a comment; every f cell and every alpha entry must be given
// exactly once.

inline std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) toks.push_back(std::move(cur)), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) toks.push_back(std::move(cur));
  return toks;
}

inline DiagonalInstance parse_instance(std::string_view text) {
  std::vector<std::string> b_labels, d_labels;
  struct Entry { std::vector<std::string> toks; int line; };
  std::vector<Entry> f_lines, alpha_lines;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  auto fail = [](int line, const std::string& msg) -> void {
    throw std::invalid_argument("instance line " + std::to_string(line) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::vector<std::string> toks = split_tokens(raw);
    if (toks.empty()) continue;
    if (toks[0] == "B" || toks[0] == "D") {
      if (toks.size() < 3 || toks[1] != "=") fail(lineno, "expected '" + toks[0] + " = <labels>'");
      auto& dst = toks[0] == "B" ? b_labels : d_labels;
      if (!dst.empty()) fail(lineno, "duplicate " + toks[0] + " definition");
      dst.assign(toks.begin() + 2, toks.end());
    } else if (toks[0] == "f") {
      if (toks.size() != 5 || toks[3] != "=") fail(lineno, "expected 'f <x> <y> = <d>'");
      f_lines.push_back({toks, lineno});
    } else if (toks[0] == "alpha") {
      if (toks.size() != 4 || toks[2] != "=") fail(lineno, "expected 'alpha <d> = <d>'");
      alpha_lines.push_back({toks, lineno});
    } else {
      fail(lineno, "unknown directive '" + toks[0] + "'");
    }
  }
  if (b_labels.empty()) throw std::invalid_argument("instance: missing 'B = ...' line");
  if (d_labels.empty()) throw std::invalid_argument("instance: missing 'D = ...' line");

  FiniteCarrier b{b_labels}, d{d_labels};
  const std::size_t nb = b.size(), nd = d.size();
  std::vector<int> f(nb * nb, -1), alpha(nd, -1);

  for (const Entry& e : f_lines) {
    auto x = b.find(e.toks[1]), y = b.find(e.toks[2]);
    auto v = d.find(e.toks[4]);
    if (!x) fail(e.line, "'" + e.toks[1] + "' is not a B label");
    if (!y) fail(e.line, "'" + e.toks[2] + "' is not a B label");
    if (!v) fail(e.line, "'" + e.toks[4] + "' is not a D label");
    int& cell = f[static_cast<std::size_t>(*x) * nb + static_cast<std::size_t>(*y)];
    if (cell != -1) fail(e.line, "duplicate f entry for (" + e.toks[1] + "," + e.toks[2] + ")");
    cell = *v;
  }
  for (const Entry& e : alpha_lines) {
    auto s = d.find(e.toks[1]);
    auto v = d.find(e.toks[3]);
    if (!s) fail(e.line, "'" + e.toks[1] + "' is not a D label");
    if (!v) fail(e.line, "'" + e.toks[3] + "' is not a D label");
    if (alpha[static_cast<std::size_t>(*s)] != -1) fail(e.line, "duplicate alpha entry for " + e.toks[1]);
    alpha[static_cast<std::size_t>(*s)] = *v;
  }
  for (std::size_t x = 0; x < nb; ++x)
    for (std::size_t y = 0; y < nb; ++y)
      if (f[x * nb + y] == -1)
        throw std::invalid_argument("instance: missing f entry for (" + b.label(static_cast<int>(x)) +
                                    "," + b.label(static_cast<int>(y)) + ")");
  for (std::size_t s = 0; s < nd; ++s)
    if (alpha[s] == -1)
      throw std::invalid_argument("instance: missing alpha entry for " + d.label(static_cast<int>(s)));

  return DiagonalInstance(std::move(b), std::move(d), std::move(f), std::move(alpha));
}

} // namespace workbench::schema
