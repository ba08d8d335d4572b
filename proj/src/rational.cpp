#include "wks/rational.hpp"

#include <cctype>

namespace wks {

std::string to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rat parse_rational(const std::string& text) {
  if (text.empty()) throw invalid_input("empty rational");
  // Validate by hand: mpq_class's string constructor accepts some junk silently.
  auto is_int = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  std::string num = text, den = "1";
  if (auto pos = text.find('/'); pos != std::string::npos) {
    num = text.substr(0, pos);
    den = text.substr(pos + 1);
  }
  if (!is_int(num) || !is_int(den)) throw invalid_input("bad rational: '" + text + "'");
  Int nd(num), dd(den);
  if (dd == 0) throw invalid_input("zero denominator: '" + text + "'");
  Rat q{nd, dd};
  q.canonicalize();
  return q;
}

Rat ceil_to_multiple(const Rat& value, const Rat& unit) {
  if (unit <= 0) throw invalid_input("ceil_to_multiple: unit must be positive");
  Rat ratio = value / unit;
  return Rat(ceil_int(ratio)) * unit;
}

Int floor_int(const Rat& q) {
  Int d;
  mpz_fdiv_q(d.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return d;
}

Int ceil_int(const Rat& q) {
  Int d;
  mpz_cdiv_q(d.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return d;
}

Int pow2(unsigned long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

std::string to_decimal(const Rat& q, int digits) {
  Rat a = abs(q);
  Int scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Int scaled = floor_int(Rat(scale) * a);
  std::string s = scaled.get_str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
  std::string out = s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  if (q < 0 && scaled != 0) out.insert(0, 1, '-');
  return out;
}

}  // namespace wks
