#include "hyperdyn/rational.hpp"

#include "hyperdyn/errors.hpp"

#include <cctype>

namespace hyperdyn {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return ParseError("malformed rational '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto digits_ok = [](std::string_view d, bool allow_sign) {
    if (d.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (d[0] == '-' || d[0] == '+')) ++i;
    if (i == d.size()) return false;
    for (; i < d.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
    return true;
  };
  Rational r;
  if (slash == std::string::npos) {
    if (!digits_ok(s, true)) throw bad();
    std::string body = s[0] == '+' ? s.substr(1) : s;
    r = Rational(mpz_class(body));
  } else {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
    if (num[0] == '+') num.erase(0, 1);
    mpz_class d(den);
    if (d == 0) throw bad();
    r = Rational(mpz_class(num), d);
    r.canonicalize();
  }
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

std::size_t hash_value(const Rational& q) {
  const auto* num = q.get_num_mpz_t();
  const auto* den = q.get_den_mpz_t();
  std::size_t h = static_cast<std::size_t>(mpz_sgn(num)) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](const __mpz_struct* z) {
    std::size_t n = mpz_size(z);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<std::size_t>(mpz_getlimbn(z, i)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    h ^= n;
  };
  mix(num);
  mix(den);
  return h;
}

}  // namespace hyperdyn
