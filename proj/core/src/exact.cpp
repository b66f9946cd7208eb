#include "mapstat/exact.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapstat/mapping.hpp"

namespace mapstat::exact {

namespace {

BigInt factorial(std::int64_t k) {
    BigInt f = 1;
    for (std::int64_t i = 2; i <= k; ++i) f *= i;
    return f;
}

BigInt int_pow(std::int64_t base, std::int64_t exp) {
    BigInt p = 1;
    for (std::int64_t i = 0; i < exp; ++i) p *= base;
    return p;
}

}  // namespace

BigRat katz_A(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("katz_A: n must be >= 1");
    BigRat a = 0;
    BigInt nk = 1;  // n^k
    BigInt kf = 1;  // k!
    for (std::int64_t k = 0; k < n; ++k) {
        a += BigRat(nk, kf);
        nk *= n;
        kf *= (k + 1);
    }
    return a;
}

double katz_log_A(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("katz_log_A: n must be >= 1");
    const double ln_n = std::log(static_cast<double>(n));
    double max_lw = -1e300;
    for (std::int64_t k = 0; k < n; ++k) {
        const double lw = k * ln_n - std::lgamma(static_cast<double>(k + 1));
        if (lw > max_lw) max_lw = lw;
    }
    double sum = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        const double lw = k * ln_n - std::lgamma(static_cast<double>(k + 1));
        sum += std::exp(lw - max_lw);
    }
    return max_lw + std::log(sum);
}

BigInt connected_count(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("connected_count: n must be >= 1");
    // sum_k n^k (n-1)!/k!; each term is integral and follows from the last.
    BigInt acc = 0;
    BigInt term = factorial(n - 1);
    for (std::int64_t k = 0; k < n; ++k) {
        acc += term;
        term = term * n / (k + 1);
    }
    return acc;
}

double indec_ratio(std::int64_t n) {
    return std::exp(katz_log_A(n) - static_cast<double>(n));
}

ConnectedLaw connected_law(std::int64_t m) {
    if (m < 1) throw std::invalid_argument("connected_law: m must be >= 1");
    ConnectedLaw law;
    law.m = m;
    law.a = katz_A(m);
    const BigInt count = connected_count(m);  // (m-1)! A_m
    const BigInt fact_m1 = factorial(m - 1);
    law.pmf.resize(m);
    law.e_nu = 0;
    law.e_nu2 = 0;
    for (std::int64_t k = 1; k <= m; ++k) {
        const BigRat p(int_pow(m, m - k) * fact_m1, factorial(m - k) * count);
        law.pmf[k - 1] = p;
        law.e_nu += k * p;
        law.e_nu2 += k * k * p;
    }
    return law;
}

ExactTable enumerate_all(std::int64_t n) {
    if (n < 1 || n > 8)
        throw std::invalid_argument("enumerate_all: n must lie in [1,8] (n^n guard)");

    Mapping m;
    m.next.assign(n, 0);
    Decomposition d;
    DecomposeBuffers buf;

    std::vector<std::uint64_t> cnt_nu(n + 1, 0), cnt_mu(n + 1, 0), cnt_lambda(n + 1, 0),
        cnt_kappa(n + 1, 0);

    for (;;) {
        decompose(m, d, buf);
        const MappingStats s = stats(d);
        ++cnt_nu[s.nu];
        ++cnt_mu[s.mu];
        ++cnt_lambda[s.lambda];
        ++cnt_kappa[s.kappa];
        // mixed-radix odometer, big-endian in the first coordinate
        std::int64_t i = 0;
        while (i < n && ++m.next[i] == n) m.next[i++] = 0;
        if (i == n) break;
    }

    const BigInt denom = int_pow(n, n);
    ExactTable table;
    table.n = n;
    table.nu_pmf.resize(n);
    table.mu_pmf.resize(n);
    table.lambda_pmf.resize(n);
    table.kappa_pmf.resize(n);
    table.e_nu = 0;
    table.e_nu2 = 0;
    table.e_mu = 0;
    table.e_kappa = 0;
    for (std::int64_t k = 1; k <= n; ++k) {
        table.nu_pmf[k - 1] = BigRat(cnt_nu[k], denom);
        table.mu_pmf[k - 1] = BigRat(cnt_mu[k], denom);
        table.lambda_pmf[k - 1] = BigRat(cnt_lambda[k], denom);
        table.kappa_pmf[k - 1] = BigRat(cnt_kappa[k], denom);
        table.e_nu += k * table.nu_pmf[k - 1];
        table.e_nu2 += k * k * table.nu_pmf[k - 1];
        table.e_mu += k * table.mu_pmf[k - 1];
        table.e_kappa += k * table.kappa_pmf[k - 1];
    }
    table.connected = cnt_mu[n];

    // Conditioning on the largest component must reproduce the moments:
    // E(nu^j) = sum_m E(nu'_m^j) P(mu = m).
    BigRat recomb1 = 0, recomb2 = 0;
    for (std::int64_t mm = 1; mm <= n; ++mm) {
        const ConnectedLaw law = connected_law(mm);
        recomb1 += law.e_nu * table.mu_pmf[mm - 1];
        recomb2 += law.e_nu2 * table.mu_pmf[mm - 1];
    }
    if (recomb1 != table.e_nu || recomb2 != table.e_nu2)
        throw std::logic_error("enumerate_all: conditional recombination failed");
    return table;
}

std::string rational_string(const BigRat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

BigRat parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return BigRat(BigInt(s));
        return BigRat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_rational: bad rational '" + s + "'");
    }
}

namespace {

nlohmann::ordered_json pmf_json(const std::vector<BigRat>& pmf) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        if (pmf[i] == 0) continue;
        arr.push_back({i + 1, rational_string(pmf[i])});
    }
    return arr;
}

}  // namespace

std::string to_json_string(const ExactTable& table) {
    nlohmann::ordered_json j;
    j["n"] = table.n;
    j["nu_pmf"] = pmf_json(table.nu_pmf);
    j["mu_pmf"] = pmf_json(table.mu_pmf);
    j["lambda_pmf"] = pmf_json(table.lambda_pmf);
    j["kappa_pmf"] = pmf_json(table.kappa_pmf);
    j["E_nu"] = rational_string(table.e_nu);
    j["E_nu2"] = rational_string(table.e_nu2);
    j["E_mu"] = rational_string(table.e_mu);
    j["connected_count"] = table.connected.str();
    return j.dump(2) + "\n";
}

}  // namespace mapstat::exact
