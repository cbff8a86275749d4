#include "lmdp/rat.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace lmdp {

Rat::Rat(long n, long d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(n, d);
  q_.canonicalize();
}

Rat::Rat(const Int& n, const Int& d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(n) / mpq_class(d);  // mpq division canonicalizes
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  q_ /= o.q_;
  return *this;
}

Rat Rat::operator-() const {
  Rat r;
  r.q_ = -q_;
  return r;
}

Rat Rat::parse(const std::string& text) {
  auto fail = [&]() -> Rat {
    throw std::invalid_argument("bad rational literal '" + text + "' (expected n or n/d)");
  };
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && text[i] == '-') {
    neg = true;
    ++i;
  }
  std::size_t num_begin = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == num_begin) return fail();
  Int num(text.substr(num_begin, i - num_begin));
  Int den(1);
  if (i < text.size()) {
    if (text[i] != '/') return fail();
    ++i;
    std::size_t den_begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == den_begin || i != text.size()) return fail();
    den = Int(text.substr(den_begin));
    if (den == 0) throw std::invalid_argument("bad rational literal '" + text + "' (zero denominator)");
  }
  Rat r(num, den);
  return neg ? -r : r;
}

std::string Rat::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

Rat abs(const Rat& r) { return r.sgn() < 0 ? -r : r; }

}  // namespace lmdp
