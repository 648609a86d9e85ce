#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "workbench/rng.hpp"

namespace workbench::primrec {

using GodelCode = mpz_class;

// ---- terms -----------------------------------------------------------------

// Immutable AST of a primitive recursive function term. Proj bounds
// (1 <= i <= n) are enforced at construction; arity consistency is not — it
// is a separate predicate so that decoding can represent and then reject
// arity-broken terms.
class Term {
public:
  enum class Kind { zero, succ, proj, comp, prim_rec };

  static Term zero() { return Term(std::make_shared<Node>(Node{Kind::zero, 0, 0, {}})); }
  static Term succ() { return Term(std::make_shared<Node>(Node{Kind::succ, 0, 0, {}})); }

  static Term proj(int i, int n) {
    if (i < 1 || n < 1 || i > n)
      throw std::invalid_argument("projection requires 1 <= i <= n");
    return Term(std::make_shared<Node>(Node{Kind::proj, i, n, {}}));
  }

  static Term comp(Term f, std::vector<Term> args) {
    if (args.empty())
      throw std::invalid_argument("composition requires at least one argument function");
    std::vector<Term> children;
    children.reserve(args.size() + 1);
    children.push_back(std::move(f));
    for (Term& a : args) children.push_back(std::move(a));
    return Term(std::make_shared<Node>(Node{Kind::comp, 0, 0, std::move(children)}));
  }

  static Term prim_rec(Term g, Term h) {
    return Term(std::make_shared<Node>(Node{Kind::prim_rec, 0, 0, {std::move(g), std::move(h)}}));
  }

  Kind kind() const { return node_->kind; }
  int proj_i() const { return node_->i; }
  int proj_n() const { return node_->n; }

  // comp: child(0) is the outer function, child(1..) the argument list
  // prim_rec: child(0) = g, child(1) = h
  std::size_t child_count() const { return node_->children.size(); }
  const Term& child(std::size_t k) const { return node_->children[k]; }

  bool operator==(const Term& o) const {
    if (node_ == o.node_) return true;
    if (node_->kind != o.node_->kind || node_->i != o.node_->i || node_->n != o.node_->n ||
        node_->children.size() != o.node_->children.size())
      return false;
    for (std::size_t k = 0; k < node_->children.size(); ++k)
      if (!(node_->children[k] == o.node_->children[k])) return false;
    return true;
  }

private:
  struct Node {
    Kind kind;
    int i, n;
    std::vector<Term> children;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// nullopt = arity-invalid term
inline std::optional<int> arity(const Term& t) {
  switch (t.kind()) {
  case Term::Kind::zero:
  case Term::Kind::succ:
    return 1;
  case Term::Kind::proj:
    return t.proj_n();
  case Term::Kind::comp: {
    auto af = arity(t.child(0));
    const std::size_t k = t.child_count() - 1;
    if (!af || static_cast<std::size_t>(*af) != k) return std::nullopt;
    std::optional<int> m;
    for (std::size_t j = 1; j < t.child_count(); ++j) {
      auto aj = arity(t.child(j));
      if (!aj) return std::nullopt;
      if (!m) m = aj;
      else if (*m != *aj) return std::nullopt;
    }
    return m;
  }
  case Term::Kind::prim_rec: {
    auto ag = arity(t.child(0)), ah = arity(t.child(1));
    if (!ag || !ah || *ah != *ag + 2) return std::nullopt;
    return *ag + 1;
  }
  }
  return std::nullopt;
}

// ---- Goedel coding ----------------------------------------------------------
//
//   #(z) = 1                      #(s) = 2
//   #(p_i^n) = 2^i * 3^n          #(rec(g,h)) = 3^#(g) * 5^#(h)
//   #(comp(f; f1..fk)) = 5^#(f) * 7^#(f1) * ... * p_{k+2}^#(fk)
//
// where p_0 = 2, p_1 = 3, ... Encoding a term whose sub-codes no longer fit
// a machine word cannot be materialized (the code would be doubly
// exponential); encode throws overflow_error in that case.

namespace detail {
inline const mpz_class& nth_prime(std::size_t j) {
  static std::vector<mpz_class> primes = {2, 3, 5, 7, 11, 13};
  while (primes.size() <= j) {
    mpz_class next;
    mpz_nextprime(next.get_mpz_t(), primes.back().get_mpz_t());
    primes.push_back(next);
  }
  return primes[j];
}

inline unsigned long to_exponent(const GodelCode& c, const char* what) {
  if (!c.fits_ulong_p())
    throw std::overflow_error(std::string("code of ") + what + " is too large to exponentiate");
  return c.get_ui();
}
} // namespace detail

inline GodelCode encode(const Term& t) {
  switch (t.kind()) {
  case Term::Kind::zero: return 1;
  case Term::Kind::succ: return 2;
  case Term::Kind::proj: {
    mpz_class a, b;
    mpz_ui_pow_ui(a.get_mpz_t(), 2, static_cast<unsigned long>(t.proj_i()));
    mpz_ui_pow_ui(b.get_mpz_t(), 3, static_cast<unsigned long>(t.proj_n()));
    return a * b;
  }
  case Term::Kind::prim_rec: {
    mpz_class a, b;
    mpz_pow_ui(a.get_mpz_t(), mpz_class(3).get_mpz_t(),
               detail::to_exponent(encode(t.child(0)), "g"));
    mpz_pow_ui(b.get_mpz_t(), mpz_class(5).get_mpz_t(),
               detail::to_exponent(encode(t.child(1)), "h"));
    return a * b;
  }
  case Term::Kind::comp: {
    mpz_class out = 1, pw;
    for (std::size_t j = 0; j < t.child_count(); ++j) {
      const mpz_class& base = detail::nth_prime(j + 2); // f at p_2 = 5, args from p_3 = 7
      mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(),
                 detail::to_exponent(encode(t.child(j)), "composition part"));
      out *= pw;
    }
    return out;
  }
  }
  throw std::logic_error("unreachable");
}

namespace detail {
// factorization of n over consecutive primes p_0, p_1, ...; stops at the
// first non-dividing prime. Returns exponents; sets clean=true iff the
// remainder is 1 (the support really is an initial run of primes).
struct SupportRun {
  std::vector<GodelCode> exps; // exps[j] = exponent of p_j, may be 0 only for leading primes
  bool clean = false;
};

inline SupportRun factor_support_run(const GodelCode& n) {
  SupportRun run;
  mpz_class rest = n;
  std::size_t j = 0;
  while (rest > 1) {
    mpz_class reduced;
    const mpz_class& p = nth_prime(j);
    mp_bitcnt_t e = mpz_remove(reduced.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    if (e == 0) {
      if (run.exps.empty() || run.exps.back() == 0) {
        // still scanning for the first prime of the support
        run.exps.emplace_back(0);
        ++j;
        // a gap before any support started can only go so far: the smallest
        // prime factor of rest is <= rest, so stop once p^2 > rest
        if (p * p > rest) { run.clean = false; return run; }
        continue;
      }
      run.clean = false; // gap after the support started, or a large stray prime
      return run;
    }
    run.exps.emplace_back(static_cast<unsigned long>(e));
    rest = reduced;
    ++j;
  }
  run.clean = true;
  return run;
}

inline std::optional<Term> decode_strict(const GodelCode& n) {
  if (n <= 0) return std::nullopt;
  if (n == 1) return Term::zero();
  if (n == 2) return Term::succ();
  SupportRun run = factor_support_run(n);
  if (!run.clean) return std::nullopt;
  // trim to the first nonzero exponent to identify where the support starts
  std::size_t first = 0;
  while (first < run.exps.size() && run.exps[first] == 0) ++first;
  const std::size_t last = run.exps.size(); // exclusive; all of [first,last) nonzero

  if (first == 0 && last == 2) { // 2^i * 3^n
    const GodelCode &gi = run.exps[0], &gn = run.exps[1];
    if (!gi.fits_sint_p() || !gn.fits_sint_p()) return std::nullopt;
    int i = static_cast<int>(gi.get_si()), nn = static_cast<int>(gn.get_si());
    if (i > nn) return std::nullopt; // out-of-bounds projection
    return Term::proj(i, nn);
  }
  if (first == 1 && last == 3) { // 3^a * 5^b
    auto g = decode_strict(run.exps[1]);
    auto h = decode_strict(run.exps[2]);
    if (!g || !h) return std::nullopt;
    return Term::prim_rec(std::move(*g), std::move(*h));
  }
  if (first == 2 && last >= 4) { // 5^a * 7^b1 * ... consecutive
    auto f = decode_strict(run.exps[2]);
    if (!f) return std::nullopt;
    std::vector<Term> args;
    for (std::size_t j = 3; j < last; ++j) {
      auto a = decode_strict(run.exps[j]);
      if (!a) return std::nullopt;
      args.push_back(std::move(*a));
    }
    return Term::comp(std::move(*f), std::move(args));
  }
  return std::nullopt;
}
} // namespace detail

// Total: every non-code falls back to the constant zero function, including
// pattern-valid terms whose arity does not work out.
inline Term decode(const GodelCode& n) {
  auto t = detail::decode_strict(n);
  if (!t || !arity(*t)) return Term::zero();
  return *t;
}

// nth function of the enumeration (0 is not a code, so nu(0) = z)
inline Term nu(const GodelCode& n) { return decode(n); }

// ---- evaluation ------------------------------------------------------------

struct EvalBudget {
  std::uint64_t max_steps = 1'000'000; // one step per operator application
  explicit EvalBudget(std::uint64_t s = 1'000'000) : max_steps(s) {
    if (s == 0) throw std::invalid_argument("budget must be at least 1");
  }
};

namespace detail {
struct BudgetGas {
  std::uint64_t left;
  bool tick() {
    if (left == 0) return false;
    --left;
    return true;
  }
};

inline std::optional<std::uint64_t> eval_node(const Term& t,
                                              std::span<const std::uint64_t> args,
                                              BudgetGas& gas) {
  if (!gas.tick()) return std::nullopt;
  switch (t.kind()) {
  case Term::Kind::zero:
    return 0;
  case Term::Kind::succ:
    if (args[0] == std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("successor overflows 64-bit value range");
    return args[0] + 1;
  case Term::Kind::proj:
    return args[static_cast<std::size_t>(t.proj_i()) - 1];
  case Term::Kind::comp: {
    std::vector<std::uint64_t> vals(t.child_count() - 1);
    for (std::size_t j = 1; j < t.child_count(); ++j) {
      auto v = eval_node(t.child(j), args, gas);
      if (!v) return std::nullopt;
      vals[j - 1] = *v;
    }
    return eval_node(t.child(0), vals, gas);
  }
  case Term::Kind::prim_rec: {
    // recursion on the last argument; h sees (previous value, x1..xn, step)
    const std::uint64_t x = args.back();
    std::vector<std::uint64_t> xs(args.begin(), args.end() - 1);
    auto acc = eval_node(t.child(0), xs, gas);
    if (!acc) return std::nullopt;
    std::vector<std::uint64_t> hargs(xs.size() + 2);
    std::copy(xs.begin(), xs.end(), hargs.begin() + 1);
    for (std::uint64_t y = 0; y < x; ++y) {
      hargs[0] = *acc;
      hargs.back() = y;
      acc = eval_node(t.child(1), hargs, gas);
      if (!acc) return std::nullopt;
    }
    return acc;
  }
  }
  throw std::logic_error("unreachable");
}
} // namespace detail

// nullopt = budget exceeded
inline std::optional<std::uint64_t> eval(const Term& t, std::span<const std::uint64_t> args,
                                         EvalBudget budget = EvalBudget{}) {
  auto a = arity(t);
  if (!a) throw std::invalid_argument("cannot evaluate an arity-invalid term");
  if (static_cast<std::size_t>(*a) != args.size())
    throw std::invalid_argument("argument count does not match term arity");
  detail::BudgetGas gas{budget.max_steps};
  return detail::eval_node(t, args, gas);
}

// unarization: nu(i) applied to (x, ..., x)
inline std::optional<std::uint64_t> rho(const GodelCode& i, std::uint64_t x,
                                        EvalBudget budget = EvalBudget{}) {
  Term t = nu(i);
  const int a = *arity(t); // decode output is always arity-valid
  std::vector<std::uint64_t> args(static_cast<std::size_t>(a), x);
  return eval(t, args, budget);
}

// g(x) = max_{i<=x} rho_i(x) + 1; fresh budget per rho call
inline std::optional<std::uint64_t> dominator(std::uint64_t x, EvalBudget budget = EvalBudget{}) {
  std::uint64_t best = 0;
  for (std::uint64_t i = 0; i <= x; ++i) {
    auto v = rho(GodelCode(static_cast<unsigned long>(i)), x, budget);
    if (!v) return std::nullopt;
    if (*v > best) best = *v;
  }
  if (best == std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("dominator overflows 64-bit value range");
  return best + 1;
}

struct DominationReport {
  GodelCode m;
  std::uint64_t x_from = 0, x_to = 0; // inclusive
  std::vector<std::uint64_t> violations;          // x with dominator(x) <= rho_m(x)
  std::vector<std::uint64_t> budget_exhausted_at; // x where either side ran out
};

inline DominationReport check_domination(const GodelCode& m, std::uint64_t x_from,
                                         std::uint64_t x_to, EvalBudget budget = EvalBudget{}) {
  if (x_from > x_to) throw std::invalid_argument("empty x range");
  DominationReport rep;
  rep.m = m;
  rep.x_from = x_from;
  rep.x_to = x_to;
  for (std::uint64_t x = x_from;; ++x) {
    if (mpz_class(static_cast<unsigned long>(x)) >= m) { // domination is claimed for x >= m only
      auto d = dominator(x, budget);
      auto r = rho(m, x, budget);
      if (!d || !r) rep.budget_exhausted_at.push_back(x);
      else if (*d <= *r) rep.violations.push_back(x);
    }
    if (x == x_to) break;
  }
  return rep;
}

// ---- diagonalizing out -----------------------------------------------------

// fs[n] is a total table of a unary function on [0, n_max]; indices past the
// end of the list behave as the constant zero function. Returns the bit
// table of the two-valued diagonal complement.
inline std::vector<int> diagonal_out(const std::vector<std::vector<std::uint64_t>>& fs,
                                     std::size_t n_max) {
  for (const auto& table : fs)
    if (table.size() < n_max + 1)
      throw std::invalid_argument("function table is not total on [0, n_max]");
  std::vector<int> g(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const std::uint64_t v = n < fs.size() ? fs[n][n] : 0;
    g[n] = v != 0 ? 0 : 1;
  }
  return g;
}

// ---- concrete syntax ---------------------------------------------------------
//
//   (Z)  (S)  (P i n)  (COMP f a1 ... ak)  (REC g h)

inline std::string print_term(const Term& t) {
  switch (t.kind()) {
  case Term::Kind::zero: return "(Z)";
  case Term::Kind::succ: return "(S)";
  case Term::Kind::proj:
    return "(P " + std::to_string(t.proj_i()) + " " + std::to_string(t.proj_n()) + ")";
  case Term::Kind::comp: {
    std::string out = "(COMP";
    for (std::size_t j = 0; j < t.child_count(); ++j) out += " " + print_term(t.child(j));
    return out + ")";
  }
  case Term::Kind::prim_rec:
    return "(REC " + print_term(t.child(0)) + " " + print_term(t.child(1)) + ")";
  }
  throw std::logic_error("unreachable");
}

namespace detail {
struct TermParser {
  std::string_view src;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("term syntax error at offset " + std::to_string(pos) + ": " + msg);
  }
  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  void expect(char c) {
    skip_ws();
    if (pos >= src.size() || src[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  std::string word() {
    skip_ws();
    std::size_t s = pos;
    while (pos < src.size() && !std::isspace(static_cast<unsigned char>(src[pos])) &&
           src[pos] != '(' && src[pos] != ')')
      ++pos;
    if (s == pos) fail("expected a symbol");
    return std::string(src.substr(s, pos - s));
  }
  int number() {
    std::string w = word();
    for (char c : w)
      if (!std::isdigit(static_cast<unsigned char>(c))) fail("expected a number, got '" + w + "'");
    long v = 0;
    try { v = std::stol(w); } catch (...) { fail("number out of range"); }
    if (v < 1 || v > 1'000'000) fail("projection index out of range");
    return static_cast<int>(v);
  }
  bool at_close() {
    skip_ws();
    return pos < src.size() && src[pos] == ')';
  }

  Term term() {
    expect('(');
    std::string head = word();
    if (head == "Z") { expect(')'); return Term::zero(); }
    if (head == "S") { expect(')'); return Term::succ(); }
    if (head == "P") {
      int i = number(), n = number();
      expect(')');
      if (i > n) fail("projection requires i <= n");
      return Term::proj(i, n);
    }
    if (head == "COMP") {
      Term f = term();
      std::vector<Term> args;
      while (!at_close()) args.push_back(term());
      expect(')');
      if (args.empty()) fail("COMP requires at least one argument function");
      return Term::comp(std::move(f), std::move(args));
    }
    if (head == "REC") {
      Term g = term(), h = term();
      expect(')');
      return Term::prim_rec(std::move(g), std::move(h));
    }
    fail("unknown constructor '" + head + "'");
  }
};
} // namespace detail

inline Term parse_term(std::string_view text) {
  detail::TermParser p{text};
  Term t = p.term();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input after term");
  return t;
}

// ---- random arity-valid terms ----------------------------------------------
//
// Worst-case codes are doubly exponential in depth, so the generator
// estimates the encoded size as it builds and rejects anything whose code
// would not fit in size_cap_bits. Rejected draws are resampled; the leaf-
// heavy distribution keeps the acceptance rate high.

namespace detail {
// log2 of the code, saturating; +inf-ish values reject at the caller
inline double code_bits(const Term& t) {
  constexpr double kHuge = 1e18;
  switch (t.kind()) {
  case Term::Kind::zero: return 0.0;
  case Term::Kind::succ: return 1.0;
  case Term::Kind::proj: return t.proj_i() + t.proj_n() * 1.5849625007211562;
  case Term::Kind::prim_rec: {
    double g = code_bits(t.child(0)), h = code_bits(t.child(1));
    if (g > 62 || h > 62) return kHuge;
    return std::exp2(g) * 1.5849625007211562 + std::exp2(h) * 2.321928094887362;
  }
  case Term::Kind::comp: {
    double total = 0;
    for (std::size_t j = 0; j < t.child_count(); ++j) {
      double c = code_bits(t.child(j));
      if (c > 62) return kHuge;
      // log2 of p_{j+2} upper bound: primes 5,7,11,13,17,19 cover k <= 4
      static constexpr double lg[] = {2.33, 2.81, 3.46, 3.71, 4.09, 4.25, 4.53, 4.86};
      total += std::exp2(c) * lg[j < 8 ? j : 7];
      if (total > 1e15) return kHuge;
    }
    return total;
  }
  }
  return kHuge;
}

inline Term random_term_depth(SplitMix64& rng, int depth) {
  // leaf-heavy: half of all draws stop at a leaf even when depth remains
  const std::uint64_t pick = rng.below(depth <= 0 ? 3 : 6);
  switch (pick) {
  case 0: return Term::zero();
  case 1: return Term::succ();
  case 2: {
    int n = static_cast<int>(rng.below(3)) + 1;
    int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
    return Term::proj(i, n);
  }
  case 3:
  case 4: { // composition with a consistent arity
    Term f = random_term_depth(rng, depth - 1);
    auto af = arity(f);
    if (!af) return Term::zero(); // cannot happen; children built valid
    const int m = static_cast<int>(rng.below(3)) + 1;
    std::vector<Term> args;
    for (int j = 0; j < *af; ++j) {
      // each argument must have arity m
      Term a = [&]() -> Term {
        for (int tries = 0; tries < 16; ++tries) {
          Term cand = random_term_depth(rng, depth - 1);
          if (auto aa = arity(cand); aa && *aa == m) return cand;
        }
        return Term::proj(1, m); // always has arity m
      }();
      args.push_back(std::move(a));
    }
    return Term::comp(std::move(f), std::move(args));
  }
  default: { // primitive recursion: g of arity n, h of arity n+2
    Term g = random_term_depth(rng, depth - 1);
    const int n = *arity(g);
    Term h = [&]() -> Term {
      for (int tries = 0; tries < 16; ++tries) {
        Term cand = random_term_depth(rng, depth - 1);
        if (auto ah = arity(cand); ah && *ah == n + 2) return cand;
      }
      return Term::proj(1, n + 2);
    }();
    return Term::prim_rec(std::move(g), std::move(h));
  }
  }
}
} // namespace detail

inline Term random_arity_valid_term(SplitMix64& rng, int max_depth = 4,
                                    double size_cap_bits = 65536.0) {
  for (;;) {
    Term t = detail::random_term_depth(rng, max_depth);
    if (!arity(t)) continue;
    if (detail::code_bits(t) <= size_cap_bits) return t;
  }
}

} // namespace workbench::primrec
