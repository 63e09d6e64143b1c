#include "isingclt/rational.hpp"

#include <stdexcept>

namespace isingclt {

std::string to_fraction_string(const ExactRational& q) {
    ExactRational c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

ExactRational parse_fraction(const std::string& s) {
    ExactRational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) {
        throw std::invalid_argument("not a fraction: '" + s + "'");
    }
    q.canonicalize();
    return q;
}

BigInt factorial(unsigned n) {
    BigInt out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

}  // namespace isingclt
