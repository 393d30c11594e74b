#include "splh/real.hpp"

#include <cstdlib>
#include <stdexcept>

namespace splh {

Real Real::from_string(const std::string& s, mpfr_prec_t prec) {
  Real r(prec);
  if (mpfr_set_str(r.x_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  }
  return r;
}

std::string Real::to_string(std::size_t digits) const {
  if (digits == 0) digits = 1;
  if (!is_finite()) return mpfr_nan_p(x_) ? "nan" : (sign() < 0 ? "-inf" : "inf");
  if (is_zero()) {
    std::string out = "0.";
    out.append(digits - 1, '0');
    out += "e+0";
    return out;
  }
  mpfr_exp_t e;
  char* s = mpfr_get_str(nullptr, &e, 10, digits, x_, MPFR_RNDN);
  std::string d(s);
  mpfr_free_str(s);
  std::string out;
  std::size_t first = 0;
  if (!d.empty() && d[0] == '-') {
    out += '-';
    first = 1;
  }
  out += d[first];
  out += '.';
  out += d.substr(first + 1);
  long ee = static_cast<long>(e) - 1;  // value = d1.d2... * 10^ee
  out += 'e';
  out += (ee < 0 ? '-' : '+');
  out += std::to_string(std::labs(ee));
  return out;
}

}  // namespace splh
