#pragma once
// Exact rational ground truth at desk scale: Katz's count of connected
// mappings, the cycle-length law on connected mappings, and full enumeration
// of all n^n mappings for n <= 8.  Everything is carried as arbitrary
// precision rationals so identities can be checked with equality rather than
// tolerance.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mapstat::exact {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// A_n = sum_{k=0}^{n-1} n^k/k! as an exact rational.
BigRat katz_A(std::int64_t n);

/// log A_n via log-sum-exp; usable far beyond big-rational comfort.
double katz_log_A(std::int64_t n);

/// |T'_n| = (n-1)! A_n, the number of connected mappings of [n].
BigInt connected_count(std::int64_t n);

/// e^{-n} A_n, computed in log space; tends to 1/2 from below.
double indec_ratio(std::int64_t n);

/// Law of the cycle length nu' of a uniform connected mapping on m vertices:
/// P(nu' = k) = m^{m-k} / ((m-k)! A_m).
struct ConnectedLaw {
    std::int64_t m = 0;
    std::vector<BigRat> pmf;  // pmf[k-1] = P(nu' = k), k = 1..m
    BigRat a;                 // A_m
    BigRat e_nu;              // = m^m / ((m-1)! A_m)
    BigRat e_nu2;             // = m (checked by the tests)
};
ConnectedLaw connected_law(std::int64_t m);

/// Exact distributions and moments over all n^n mappings.
struct ExactTable {
    std::int64_t n = 0;
    // Index k-1 holds P(stat = k); denominators divide n^n.
    std::vector<BigRat> nu_pmf, mu_pmf, lambda_pmf, kappa_pmf;
    BigRat e_nu, e_nu2, e_mu, e_kappa;
    BigInt connected;  // mappings with a single component

    bool identity_holds() const { return e_nu2 == e_mu; }
};

/// Enumerates every mapping via a mixed-radix counter and tallies exact
/// distributions.  Also re-derives E(nu) and E(nu^2) by conditioning on the
/// largest component (weighted sums of the connected-law moments) and throws
/// std::logic_error if the recombination disagrees.  Guard: 1 <= n <= 8.
ExactTable enumerate_all(std::int64_t n);

/// "num/den" form, lossless for JSON transport.
std::string rational_string(const BigRat& r);

/// Parses the "num/den" form back; throws std::invalid_argument on garbage.
BigRat parse_rational(const std::string& s);

/// Pinned export schema: {"n":..., "nu_pmf":[[k,"num/den"],...], "mu_pmf":...,
/// "lambda_pmf":..., "kappa_pmf":..., "E_nu":"num/den", "E_nu2":"num/den",
/// "E_mu":"num/den", "connected_count":"int"}.
std::string to_json_string(const ExactTable& table);

}  // namespace mapstat::exact
