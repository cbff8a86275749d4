#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

namespace lmdp {

using Int = mpz_class;

// Arbitrary-precision rational, always kept in lowest terms with positive
// denominator.  All arithmetic is exact; division by zero throws.
class Rat {
 public:
  Rat() : q_(0) {}
  Rat(long n) : q_(n) {}  // NOLINT: implicit on purpose, lets integer literals mix in
  explicit Rat(const Int& n) : q_(n) {}
  Rat(long n, long d);
  Rat(const Int& n, const Int& d);

  // Accepts "12", "-12", "3/4", "-3/4".  Decimal notation is rejected.
  static Rat parse(const std::string& text);

  Int num() const { return q_.get_num(); }
  Int den() const { return q_.get_den(); }
  int sgn() const { return mpq_sgn(q_.get_mpq_t()); }
  bool is_zero() const { return sgn() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  std::string str() const;

  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
  Rat operator-() const;

  friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.q_ >= b.q_; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r);

 private:
  mpq_class q_;
};

Rat abs(const Rat& r);

}  // namespace lmdp
