#include "oddform/ring.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace oddform {

CommRing::CommRing(std::string name, std::size_t size, std::vector<Elt> add,
                   std::vector<Elt> mul, Elt zero, Elt one)
    : name_(std::move(name)),
      size_(size),
      add_(std::move(add)),
      mul_(std::move(mul)),
      zero_(zero),
      one_(one) {
  if (size_ == 0 || size_ >= kNone)
    throw InvalidInput("ring size out of range");
  if (add_.size() != size_ * size_ || mul_.size() != size_ * size_)
    throw InvalidInput("ring tables have wrong shape");
  neg_.assign(size_, kNone);
  inv_.assign(size_, kNone);
  for (Elt a = 0; a < size_; ++a)
    for (Elt b = 0; b < size_; ++b) {
      if (this->add(a, b) == zero_) neg_[a] = b;
      if (this->mul(a, b) == one_) inv_[a] = b;
    }
  for (Elt a = 0; a < size_; ++a)
    if (neg_[a] == kNone) throw InvalidInput("ring addition is not a group");
}

std::optional<Elt> CommRing::inverse(Elt a) const {
  if (inv_[a] == kNone) return std::nullopt;
  return inv_[a];
}

Elt CommRing::from_int(long long n) const {
  Elt r = zero_;
  Elt step = n >= 0 ? one_ : neg(one_);
  long long m = n >= 0 ? n : -n;
  m %= static_cast<long long>(size_) * 1;  // additive order divides |K|
  for (long long i = 0; i < m; ++i) r = add(r, step);
  return r;
}

bool CommRing::is_field() const {
  if (size_ < 2) return false;
  for (Elt a = 0; a < size_; ++a)
    if (a != zero_ && !is_unit(a)) return false;
  return true;
}

std::vector<Elt> CommRing::units() const {
  std::vector<Elt> out;
  for (Elt a = 0; a < size_; ++a)
    if (is_unit(a)) out.push_back(a);
  return out;
}

std::string CommRing::str(Elt a) const { return std::to_string(a); }

bool CommRing::operator==(const CommRing& o) const {
  return size_ == o.size_ && add_ == o.add_ && mul_ == o.mul_ &&
         zero_ == o.zero_ && one_ == o.one_;
}

CommRing build_zmod(unsigned n) {
  if (n < 1 || n > 4096) throw InvalidInput("z:N requires 1 <= N <= 4096");
  std::vector<Elt> add(n * n), mul(n * n);
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) {
      add[a * n + b] = static_cast<Elt>((a + b) % n);
      mul[a * n + b] = static_cast<Elt>((a * b) % n);
    }
  CommRing r("Z/" + std::to_string(n), n, std::move(add), std::move(mul), 0,
             static_cast<Elt>(1 % n));
  r.modulus_ = n;
  return r;
}

namespace {

bool is_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

using Poly = std::vector<unsigned>;  // coefficients, low degree first

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, unsigned p) {
  std::size_t e = m.size() - 1;
  std::vector<unsigned> prod(2 * e, 0);
  for (std::size_t i = 0; i < e; ++i)
    for (std::size_t j = 0; j < e; ++j)
      prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  for (std::size_t d = prod.size(); d-- > e;) {
    unsigned c = prod[d];
    if (!c) continue;
    for (std::size_t i = 0; i <= e; ++i)
      prod[d - e + i] = (prod[d - e + i] + p * p - c * m[i] % p) % p;
  }
  prod.resize(e);
  return prod;
}

Poly digits(unsigned x, unsigned p, std::size_t e) {
  Poly d(e);
  for (std::size_t i = 0; i < e; ++i) {
    d[i] = x % p;
    x /= p;
  }
  return d;
}

unsigned undigits(const Poly& d, unsigned p) {
  unsigned x = 0;
  for (std::size_t i = d.size(); i-- > 0;) x = x * p + d[i];
  return x;
}

}  // namespace

CommRing build_gf(unsigned p, unsigned e, std::size_t bound) {
  if (!is_prime(p)) throw InvalidInput("gf:P requires P prime");
  if (e < 1) throw InvalidInput("gf:P:E requires E >= 1");
  std::size_t q = 1;
  for (unsigned i = 0; i < e; ++i) {
    q *= p;
    if (q > bound) throw BoundExceeded("field size exceeds bound");
  }
  if (e == 1) {
    CommRing r = build_zmod(p);
    r.name_ = "GF(" + std::to_string(p) + ")";
    return r;
  }
  // First monic polynomial of degree e without roots in any proper
  // extension: test irreducibility by checking the multiplication table has
  // no zero divisors.
  for (unsigned low = 0; low < q; ++low) {
    Poly m = digits(low, p, e);
    m.push_back(1);
    if (m[0] == 0) continue;
    std::vector<Elt> add(q * q), mul(q * q);
    bool ok = true;
    for (unsigned a = 0; a < q && ok; ++a) {
      Poly da = digits(a, p, e);
      for (unsigned b = 0; b < q; ++b) {
        Poly db = digits(b, p, e), s(e);
        for (unsigned i = 0; i < e; ++i) s[i] = (da[i] + db[i]) % p;
        add[a * q + b] = static_cast<Elt>(undigits(s, p));
        unsigned pr = undigits(poly_mulmod(da, db, m, p), p);
        mul[a * q + b] = static_cast<Elt>(pr);
        if (a && b && pr == 0) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    return CommRing("GF(" + std::to_string(p) + "^" + std::to_string(e) + ")",
                    q, std::move(add), std::move(mul), 0, 1);
  }
  throw InvalidInput("no irreducible polynomial found");
}

CommRing parse_base(const std::string& spec) {
  auto fail = [&] { throw InvalidInput("bad base ring spec: " + spec); };
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string t; std::getline(ss, t, ':');) parts.push_back(t);
  auto num = [&](const std::string& t) {
    if (t.empty() || t.size() > 9 || t.find_first_not_of("0123456789") != std::string::npos) fail();
    return static_cast<unsigned>(std::stoul(t));
  };
  try {
    if (parts.size() == 2 && parts[0] == "z") return build_zmod(num(parts[1]));
    if (parts.size() == 2 && parts[0] == "gf") return build_gf(num(parts[1]), 1);
    if (parts.size() == 3 && parts[0] == "gf") return build_gf(num(parts[1]), num(parts[2]));
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const InvalidInput*>(&e)) throw;
    fail();
  }
  fail();
  return {};
}

std::vector<std::string> check_ring_axioms(const CommRing& k) {
  std::vector<std::string> out;
  const std::size_t n = k.size();
  for (Elt a = 0; a < n; ++a) {
    if (k.add(a, k.zero()) != a) out.push_back("additive identity at " + k.str(a));
    if (k.mul(a, k.one()) != a) out.push_back("multiplicative identity at " + k.str(a));
    for (Elt b = 0; b < n; ++b) {
      if (k.add(a, b) != k.add(b, a)) out.push_back("a+b=b+a");
      if (k.mul(a, b) != k.mul(b, a)) out.push_back("ab=ba");
      for (Elt c = 0; c < n; ++c) {
        if (k.add(k.add(a, b), c) != k.add(a, k.add(b, c)))
          out.push_back("(a+b)+c");
        if (k.mul(k.mul(a, b), c) != k.mul(a, k.mul(b, c)))
          out.push_back("(ab)c");
        if (k.mul(a, k.add(b, c)) != k.add(k.mul(a, b), k.mul(a, c)))
          out.push_back("a(b+c)");
        if (out.size() > 16) return out;
      }
    }
  }
  return out;
}

std::vector<Elt> multiplicative_closure(const CommRing& k,
                                        const std::vector<Elt>& gens) {
  std::set<Elt> seen{k.one()};
  std::vector<Elt> todo{k.one()};
  while (!todo.empty()) {
    Elt x = todo.back();
    todo.pop_back();
    for (Elt g : gens) {
      Elt y = k.mul(x, g);
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  return {seen.begin(), seen.end()};
}

RingQuotient quotient_ring(const CommRing& k, const std::vector<Elt>& ideal) {
  const std::size_t n = k.size();
  std::vector<bool> in(n, false);
  for (Elt x : ideal) in[x] = true;
  for (Elt x : ideal)
    for (Elt a = 0; a < n; ++a) {
      if (!in[k.mul(a, x)]) throw InvalidInput("not an ideal");
      for (Elt y : ideal)
        if (!in[k.add(x, y)]) throw InvalidInput("not an ideal");
    }
  if (!in[k.zero()]) throw InvalidInput("not an ideal");
  std::vector<Elt> map(n, 0xFFFF), reps;
  for (Elt a = 0; a < n; ++a) {
    if (map[a] != 0xFFFF) continue;
    Elt id = static_cast<Elt>(reps.size());
    reps.push_back(a);
    for (Elt x : ideal) map[k.add(a, x)] = id;
  }
  const std::size_t m = reps.size();
  std::vector<Elt> add(m * m), mul(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      add[i * m + j] = map[k.add(reps[i], reps[j])];
      mul[i * m + j] = map[k.mul(reps[i], reps[j])];
    }
  return {CommRing(k.name() + "/I", m, std::move(add), std::move(mul),
                   map[k.zero()], map[k.one()]),
          std::move(map)};
}

Localization localize_finite(const CommRing& k, const std::vector<Elt>& s) {
  std::set<Elt> sset(s.begin(), s.end());
  if (!sset.count(k.one())) throw InvalidInput("S must contain 1");
  for (Elt a : s)
    for (Elt b : s)
      if (!sset.count(k.mul(a, b)))
        throw InvalidInput("S is not multiplicatively closed");
  std::vector<Elt> kernel;
  for (Elt x = 0; x < k.size(); ++x)
    for (Elt t : s)
      if (k.mul(t, x) == k.zero()) {
        kernel.push_back(x);
        break;
      }
  auto q = quotient_ring(k, kernel);
  for (Elt t : s)
    if (!q.ring.is_unit(q.map[t]))
      throw InvalidInput("element of S is not invertible in the quotient");
  return {std::move(q.ring), std::move(q.map), std::move(kernel),
          {sset.begin(), sset.end()}};
}

std::vector<Elt> ring_radical(const CommRing& k) {
  std::vector<Elt> out;
  for (Elt a = 0; a < k.size(); ++a) {
    bool ok = true;
    for (Elt x = 0; x < k.size() && ok; ++x)
      ok = k.is_unit(k.add(k.one(), k.mul(x, a)));
    if (ok) out.push_back(a);
  }
  return out;
}

FiniteAlgebra::FiniteAlgebra(RingPtr base, std::size_t size,
                             std::vector<Idx> add, std::vector<Idx> mul,
                             std::vector<Idx> bar, std::vector<Idx> scal,
                             Idx zero, std::optional<Idx> one,
                             std::vector<std::string> names)
    : base_(std::move(base)),
      size_(size),
      add_(std::move(add)),
      mul_(std::move(mul)),
      bar_(std::move(bar)),
      scal_(std::move(scal)),
      zero_(zero),
      one_(one),
      names_(std::move(names)) {
  if (add_.size() != size_ * size_ || mul_.size() != size_ * size_ ||
      bar_.size() != size_ || scal_.size() != base_->size() * size_)
    throw InvalidInput("algebra tables have wrong shape");
  neg_.assign(size_, 0);
  for (Idx a = 0; a < size_; ++a)
    for (Idx b = 0; b < size_; ++b)
      if (this->add(a, b) == zero_) neg_[a] = b;
}

std::string FiniteAlgebra::str(Idx a) const {
  if (a < names_.size()) return names_[a];
  return "#" + std::to_string(a);
}

std::vector<FiniteAlgebra::Idx> FiniteAlgebra::units() const {
  std::vector<Idx> out;
  if (!one_) return out;
  for (Idx a = 0; a < size_; ++a)
    if (inverse(a)) out.push_back(a);
  return out;
}

std::optional<FiniteAlgebra::Idx> FiniteAlgebra::inverse(Idx a) const {
  if (!one_) return std::nullopt;
  for (Idx b = 0; b < size_; ++b)
    if (mul(a, b) == *one_ && mul(b, a) == *one_) return b;
  return std::nullopt;
}

FiniteAlgebra FiniteAlgebra::from_ring(RingPtr k) {
  const std::size_t n = k->size();
  std::vector<Idx> add(n * n), mul(n * n), bar(n), scal(n * n);
  std::vector<std::string> names(n);
  for (Idx a = 0; a < n; ++a) {
    bar[a] = a;
    names[a] = k->str(static_cast<Elt>(a));
    for (Idx b = 0; b < n; ++b) {
      add[a * n + b] = k->add(static_cast<Elt>(a), static_cast<Elt>(b));
      mul[a * n + b] = k->mul(static_cast<Elt>(a), static_cast<Elt>(b));
      scal[a * n + b] = mul[a * n + b];
    }
  }
  Idx zero = k->zero(), one = k->one();
  return FiniteAlgebra(std::move(k), n, std::move(add), std::move(mul),
                       std::move(bar), std::move(scal), zero, one,
                       std::move(names));
}

FiniteAlgebra FiniteAlgebra::matrix_algebra(RingPtr k, int n,
                                            std::size_t bound) {
  const std::size_t q = k->size();
  const int n2 = n * n;
  std::size_t size = 1;
  for (int i = 0; i < n2; ++i) {
    size *= q;
    if (size > bound) throw BoundExceeded("matrix algebra exceeds bound");
  }
  auto decode = [&](Idx x) {
    std::vector<Elt> e(n2);
    for (int i = 0; i < n2; ++i) {
      e[i] = static_cast<Elt>(x % q);
      x /= static_cast<Idx>(q);
    }
    return e;
  };
  auto encode = [&](const std::vector<Elt>& e) {
    Idx x = 0;
    for (int i = n2; i-- > 0;) x = static_cast<Idx>(x * q + e[i]);
    return x;
  };
  std::vector<std::vector<Elt>> dec(size);
  for (Idx x = 0; x < size; ++x) dec[x] = decode(x);
  std::vector<Idx> add(size * size), mul(size * size), bar(size),
      scal(q * size);
  std::vector<std::string> names(size);
  std::vector<Elt> t(n2);
  for (Idx a = 0; a < size; ++a) {
    const auto& A = dec[a];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t[i * n + j] = A[j * n + i];
    bar[a] = encode(t);
    std::string s = "[";
    for (int i = 0; i < n2; ++i) s += (i ? "," : "") + k->str(A[i]);
    names[a] = s + "]";
    for (Elt c = 0; c < q; ++c) {
      for (int i = 0; i < n2; ++i) t[i] = k->mul(c, A[i]);
      scal[c * size + a] = encode(t);
    }
    for (Idx b = 0; b < size; ++b) {
      const auto& B = dec[b];
      for (int i = 0; i < n2; ++i) t[i] = k->add(A[i], B[i]);
      add[a * size + b] = encode(t);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Elt acc = k->zero();
          for (int l = 0; l < n; ++l)
            acc = k->add(acc, k->mul(A[i * n + l], B[l * n + j]));
          t[i * n + j] = acc;
        }
      mul[a * size + b] = encode(t);
    }
  }
  std::vector<Elt> id(n2, k->zero());
  for (int i = 0; i < n; ++i) id[i * n + i] = k->one();
  Idx one = encode(id);
  return FiniteAlgebra(std::move(k), size, std::move(add), std::move(mul),
                       std::move(bar), std::move(scal), 0, one,
                       std::move(names));
}

std::vector<std::string> check_algebra_axioms(const FiniteAlgebra& a) {
  std::vector<std::string> out;
  const auto n = static_cast<FiniteAlgebra::Idx>(a.size());
  const CommRing& k = a.base();
  auto note = [&](const std::string& s) {
    if (out.size() < 32) out.push_back(s);
  };
  for (FiniteAlgebra::Idx x = 0; x < n; ++x) {
    if (a.bar(a.bar(x)) != x) note("involution is not an involution at " + a.str(x));
    if (a.one() && (a.mul(x, *a.one()) != x || a.mul(*a.one(), x) != x))
      note("unit law at " + a.str(x));
    for (Elt c = 0; c < k.size(); ++c)
      if (a.bar(a.scale(c, x)) != a.scale(c, a.bar(x)))
        note("involution is not K-linear at " + a.str(x));
    for (FiniteAlgebra::Idx y = 0; y < n; ++y) {
      if (a.add(x, y) != a.add(y, x)) note("addition is not commutative");
      if (a.bar(a.mul(x, y)) != a.mul(a.bar(y), a.bar(x)))
        note("involution does not reverse products at " + a.str(x) + "," + a.str(y));
      if (a.bar(a.add(x, y)) != a.add(a.bar(x), a.bar(y)))
        note("involution is not additive");
      for (FiniteAlgebra::Idx z = 0; z < n; ++z) {
        if (a.mul(a.mul(x, y), z) != a.mul(x, a.mul(y, z)))
          note("associativity at " + a.str(x) + "," + a.str(y) + "," + a.str(z));
        if (a.mul(x, a.add(y, z)) != a.add(a.mul(x, y), a.mul(x, z)) ||
            a.mul(a.add(y, z), x) != a.add(a.mul(y, x), a.mul(z, x)))
          note("distributivity");
      }
    }
  }
  return out;
}

std::optional<FiniteAlgebra::Idx> quasi_inverse(const FiniteAlgebra& a,
                                                FiniteAlgebra::Idx x) {
  for (FiniteAlgebra::Idx b = 0; b < a.size(); ++b) {
    auto s = a.add(x, b);
    if (a.add(s, a.mul(x, b)) == a.zero() && a.add(s, a.mul(b, x)) == a.zero())
      return b;
  }
  return std::nullopt;
}

std::vector<FiniteAlgebra::Idx> jacobson_radical(const FiniteAlgebra& a) {
  using Idx = FiniteAlgebra::Idx;
  const auto n = static_cast<Idx>(a.size());
  std::vector<char> qi(n);
  for (Idx x = 0; x < n; ++x) qi[x] = quasi_inverse(a, x).has_value();
  std::vector<Idx> out;
  std::vector<char> seen(n);
  for (Idx x = 0; x < n; ++x) {
    if (!qi[x]) continue;
    // Close {x} under addition, K-scaling and two-sided multiplication.
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<Idx> members{a.zero()}, todo{x};
    seen[a.zero()] = 1;
    bool ok = true;
    while (!todo.empty() && ok) {
      Idx y = todo.back();
      todo.pop_back();
      if (seen[y]) continue;
      if (!qi[y]) {
        ok = false;
        break;
      }
      seen[y] = 1;
      std::size_t cur = members.size();
      members.push_back(y);
      for (std::size_t i = 0; i < cur; ++i) todo.push_back(a.add(members[i], y));
      for (Idx r = 0; r < n; ++r) {
        todo.push_back(a.mul(r, y));
        todo.push_back(a.mul(y, r));
      }
      for (Elt c = 0; c < a.base().size(); ++c) todo.push_back(a.scale(c, y));
    }
    if (ok) out.push_back(x);
  }
  return out;
}

}  // namespace oddform
