#include "rmx/symbolic.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <sstream>

namespace rmx {

namespace {

using bigfloat = boost::multiprecision::cpp_bin_float_100;

// floor(log10(a/b)) for positive integers a, b.
long floor_log10(const mpz_class& a, const mpz_class& b) {
    long la = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 10));
    long lb = static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 10));
    for (long e = la - lb + 1; ; --e) {
        // test 10^e * b <= a
        mpz_class scaled;
        if (e >= 0) {
            mpz_class p;
            mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e));
            scaled = p * b;
            if (scaled <= a) return e;
        } else {
            mpz_class p;
            mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(-e));
            if (b <= a * p) return e;
        }
    }
}

std::string render_signif(const BigRational& v, int prec) {
    if (v.is_zero()) return "0";
    bool neg = v.sign() < 0;
    mpz_class a = neg ? mpz_class(-v.num()) : v.num();
    mpz_class b = v.den();
    long e = floor_log10(a, b);

    long shift = prec - 1 - e;
    mpz_class num2 = a, den2 = b, p;
    if (shift >= 0) {
        mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(shift));
        num2 *= p;
    } else {
        mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
        den2 *= p;
    }
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num2.get_mpz_t(), den2.get_mpz_t());
    // round half to even
    mpz_class twice = 2 * r;
    int cmp = mpz_cmp(twice.get_mpz_t(), den2.get_mpz_t());
    if (cmp > 0 || (cmp == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;

    std::string digits = q.get_str();
    if (static_cast<long>(digits.size()) > prec) {  // carry: 999.. -> 1000..
        digits = digits.substr(0, prec);
        e += 1;
    }

    std::string out;
    if (e >= prec - 1) {
        out = digits + std::string(static_cast<size_t>(e - prec + 1), '0');
    } else if (e >= 0) {
        out = digits.substr(0, static_cast<size_t>(e + 1)) + "." +
              digits.substr(static_cast<size_t>(e + 1));
    } else {
        out = "0." + std::string(static_cast<size_t>(-e - 1), '0') + digits;
    }
    if (out.find('.') != std::string::npos) {
        size_t last = out.find_last_not_of('0');
        if (out[last] == '.') last -= 1;
        out.erase(last + 1);
    }
    return neg ? "-" + out : out;
}

BigRational parse_decimal(const std::string& s) {
    // Accepts the scientific form produced by boost multiprecision streams.
    size_t epos = s.find_first_of("eE");
    std::string mant = epos == std::string::npos ? s : s.substr(0, epos);
    long ex = epos == std::string::npos ? 0 : std::stol(s.substr(epos + 1));
    bool neg = false;
    size_t i = 0;
    if (i < mant.size() && (mant[i] == '+' || mant[i] == '-')) neg = mant[i++] == '-';
    std::string digits;
    long frac = 0;
    bool in_frac = false;
    for (; i < mant.size(); ++i) {
        if (mant[i] == '.') {
            in_frac = true;
            continue;
        }
        digits.push_back(mant[i]);
        if (in_frac) ++frac;
    }
    mpz_class n(digits.empty() ? "0" : digits);
    if (neg) n = -n;
    long net = ex - frac;
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(net >= 0 ? net : -net));
    return net >= 0 ? BigRational(n * p) : BigRational(n, p);
}

bigfloat term_value(const BasisKey& k) {
    using namespace boost::math::constants;
    bigfloat v = 1;
    if (k.pi2 != 0) {
        bigfloat spi = sqrt(pi<bigfloat>());
        v *= k.pi2 >= 0 ? pow(spi, k.pi2) : 1 / pow(spi, -k.pi2);
    }
    if (k.rad != 1) v *= sqrt(bigfloat(k.rad));
    if (k.ln2) v *= ln_two<bigfloat>();
    if (k.gam) v *= euler<bigfloat>();
    return v;
}

}  // namespace

std::pair<mpz_class, unsigned long> SymbolicValue::split_square(const mpz_class& n) {
    if (n <= 0) fail(errc::domain_error, "radicand must be positive");
    mpz_class square = 1;
    mpz_class rest = n;
    for (unsigned long d = 2; d <= 65536; ++d) {
        mpz_class dd = mpz_class(static_cast<long>(d)) * static_cast<long>(d);
        if (dd > rest) break;
        while (mpz_divisible_p(rest.get_mpz_t(), dd.get_mpz_t())) {
            rest /= dd;
            square *= static_cast<long>(d);
        }
    }
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
        mpz_class rt;
        mpz_sqrt(rt.get_mpz_t(), rest.get_mpz_t());
        square *= rt;
        rest = 1;
    }
    if (!rest.fits_ulong_p())
        fail(errc::basis_violation, "radicand too large for the basis: " + n.get_str());
    return {square, rest.get_ui()};
}

double SymbolicValue::to_double() const {
    static const double eg = 0.57721566490153286060651209008240243;
    double total = 0;
    for (const auto& [k, c] : terms_) {
        double v = c.to_double();
        if (k.pi2 != 0) v *= std::pow(std::sqrt(M_PI), k.pi2);
        if (k.rad != 1) v *= std::sqrt(static_cast<double>(k.rad));
        if (k.ln2) v *= std::log(2.0);
        if (k.gam) v *= eg;
        total += v;
    }
    return total;
}

std::string SymbolicValue::decimal(int sig_digits) const {
    if (sig_digits < 1) fail(errc::bad_arguments, "precision must be positive");
    if (terms_.empty()) return "0";
    if (is_rational()) return render_signif(rational_part(), sig_digits);

    bigfloat total = 0;
    for (const auto& [k, c] : terms_) {
        bigfloat coef = bigfloat(c.num().get_str()) / bigfloat(c.den().get_str());
        total += coef * term_value(k);
    }
    std::ostringstream os;
    os << std::scientific << std::setprecision(90) << total;
    return render_signif(parse_decimal(os.str()), sig_digits);
}

std::string SymbolicValue::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        std::string piece = c.to_string();
        if (k.pi2 != 0) {
            if (k.pi2 == 2) piece += "*pi";
            else if (k.pi2 == 1) piece += "*sqrt(pi)";
            else if (k.pi2 % 2 == 0) piece += "*pi^" + std::to_string(k.pi2 / 2);
            else piece += "*pi^(" + std::to_string(k.pi2) + "/2)";
        }
        if (k.rad != 1) piece += "*sqrt(" + std::to_string(k.rad) + ")";
        if (k.ln2) piece += "*ln2";
        if (k.gam) piece += "*eulergamma";
        if (first) {
            out = piece;
            first = false;
        } else {
            out += (piece[0] == '-') ? " - " + piece.substr(1) : " + " + piece;
        }
    }
    return out;
}

}  // namespace rmx
