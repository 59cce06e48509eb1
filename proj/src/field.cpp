#include "x0p/field.hpp"

namespace x0p {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DomainMismatch: return "domain-mismatch";
        case Errc::Degenerate: return "degenerate-input";
        case Errc::NotPIntegral: return "not-p-integral";
        case Errc::InvalidDiscriminant: return "invalid-discriminant";
        case Errc::OutOfDomain: return "out-of-domain";
        case Errc::Internal: return "internal-inconsistency";
        case Errc::Schema: return "schema-violation";
        case Errc::Invariant: return "invariant-failure";
        case Errc::NotOnCurve: return "not-on-curve";
        case Errc::NotFound: return "not-found";
        case Errc::Fetch: return "fetch-error";
        case Errc::Parse: return "parse-error";
        case Errc::InsufficientData: return "insufficient-data";
        case Errc::BadPrime: return "bad-prime";
        case Errc::NonConvergent: return "non-convergent";
        case Errc::NoHeegnerForm: return "no-heegner-form";
    }
    return "unknown";
}

Rat make_rat(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw Error(Errc::Degenerate, "zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat parse_rat(const std::string& s) {
    Rat r;
    if (s.empty() || r.set_str(s, 10) != 0) throw Error(Errc::Parse, "bad rational '" + s + "'");
    if (r.get_den() == 0) throw Error(Errc::Parse, "zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

std::string to_string(const Rat& r) { return r.get_str(); }

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

QQ::E QQ::inv(const E& a) const {
    if (sgn(a) == 0) throw Error(Errc::Degenerate, "division by zero");
    return 1 / a;
}

Fp::Fp(std::uint32_t prime) : p(prime) {
    if (!is_prime(prime)) throw Error(Errc::OutOfDomain, std::to_string(prime) + " is not prime");
}

Fp::E Fp::from_rat(const Rat& r) const {
    mpz_class den = r.get_den();
    if (mpz_divisible_ui_p(den.get_mpz_t(), p))
        throw Error(Errc::NotPIntegral, r.get_str() + " is not " + std::to_string(p) + "-integral");
    E n = static_cast<E>(mpz_fdiv_ui(r.get_num_mpz_t(), p));
    E d = static_cast<E>(mpz_fdiv_ui(den.get_mpz_t(), p));
    return mul(n, inv(d));
}

Fp::E Fp::pow(E a, std::uint64_t e) const {
    E r = 1 % p;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

Fp::E Fp::inv(E a) const {
    if (a == 0) throw Error(Errc::Degenerate, "division by zero mod " + std::to_string(p));
    return pow(a, p - 2);
}

}  // namespace x0p
