#include "pnpair/arith.hpp"

#include "pnpair/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace pnp {

const char* errc_name(Errc e) noexcept {
    switch (e) {
    case Errc::InputError: return "InputError";
    case Errc::NotPrime: return "NotPrime";
    case Errc::DegreeZero: return "DegreeZero";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::IncompleteFactorization: return "IncompleteFactorization";
    case Errc::NotDividing: return "NotDividing";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::NotReduced: return "NotReduced";
    case Errc::TowerTooLarge: return "TowerTooLarge";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::InvalidSubset: return "InvalidSubset";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    }
    return "Unknown";
}

std::string to_string(const BigInt& n) { return n.get_str(); }

std::string to_string(const Rational& r) { return r.get_str(); }

BigInt parse_bigint(const std::string& text) {
    BigInt n;
    std::string t;
    for (char c : text)
        if (c != ' ' && c != '_') t.push_back(c);
    if (t.empty() || n.set_str(t, 10) != 0) fail(Errc::InputError, "not an integer: '" + text + "'");
    return n;
}

BigInt ipow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

std::uint64_t to_u64(const BigInt& n) {
    if (n < 0 || mpz_sizeinbase(n.get_mpz_t(), 2) > 64) fail(Errc::InputError, "value does not fit 64 bits: " + n.get_str());
    std::uint64_t r = 0;
    mpz_export(&r, nullptr, -1, sizeof r, 0, 0, n.get_mpz_t());
    return r;
}

namespace {

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> table = [] {
        const std::uint32_t limit = 1u << 16;
        std::vector<bool> comp(limit + 1, false);
        std::vector<std::uint32_t> ps;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (comp[i]) continue;
            ps.push_back(i);
            for (std::uint64_t j = std::uint64_t(i) * i; j <= limit; j += i) comp[j] = true;
        }
        return ps;
    }();
    return table;
}

bool miller_rabin_round(const BigInt& n, const BigInt& nm1, const BigInt& d, unsigned s, const BigInt& a) {
    BigInt x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) return true;
    for (unsigned r = 1; r < s; ++r) {
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
        if (x == nm1) return true;
        if (x == 1) return false;
    }
    return false;
}

} // namespace

Primality primality(const BigInt& n) {
    if (n < 2) return Primality::Composite;
    for (std::uint32_t p : small_primes()) {
        if (BigInt(p) * p > n) return Primality::Prime;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return n == p ? Primality::Prime : Primality::Composite;
    }
    BigInt nm1 = n - 1, d = nm1;
    unsigned s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d >>= 1;
        ++s;
    }
    static const BigInt det_limit("3317044064679887385961981");
    if (n < det_limit) {
        for (unsigned a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u})
            if (!miller_rabin_round(n, nm1, d, s, BigInt(a))) return Primality::Composite;
        return Primality::Prime;
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    const std::size_t words = mpz_sizeinbase(n.get_mpz_t(), 2) / 64 + 1;
    BigInt span = n - 3;
    for (int round = 0; round < 64; ++round) {
        std::vector<std::uint64_t> w(words);
        for (auto& x : w) x = rng();
        BigInt a;
        mpz_import(a.get_mpz_t(), w.size(), -1, sizeof(std::uint64_t), 0, 0, w.data());
        a = a % span + 2;
        if (!miller_rabin_round(n, nm1, d, s, a)) return Primality::Composite;
    }
    return Primality::ProbablePrime;
}

// ---------------------------------------------------------------- Factorization

std::vector<BigInt> Factorization::primes() const {
    std::vector<BigInt> r;
    for (auto& f : factors) r.push_back(f.prime);
    return r;
}

bool Factorization::has_prime(const BigInt& p) const { return exponent_of(p) > 0; }

unsigned Factorization::exponent_of(const BigInt& p) const {
    for (auto& f : factors)
        if (f.prime == p) return f.exponent;
    return 0;
}

BigInt Factorization::reassemble() const {
    BigInt r = cofactor;
    for (auto& f : factors) r *= ipow(f.prime, f.exponent);
    return r;
}

std::string Factorization::to_line() const {
    std::ostringstream os;
    os << value.get_str() << '=';
    bool first = true;
    for (auto& f : factors) {
        if (!first) os << '*';
        first = false;
        os << f.prime.get_str();
        if (f.exponent > 1) os << '^' << f.exponent;
    }
    if (cofactor != 1) os << (first ? "" : "*") << 'C' << cofactor.get_str();
    else if (first) os << '1';
    return os.str();
}

Factorization make_factorization(const std::map<BigInt, unsigned>& table, const BigInt& cofactor) {
    Factorization f;
    f.cofactor = cofactor;
    for (auto& [p, e] : table) {
        if (e == 0) continue;
        PrimePower pp{p, e, primality(p) == Primality::ProbablePrime};
        f.factors.push_back(pp);
    }
    f.value = f.reassemble();
    return f;
}

// ---------------------------------------------------------------- cache

FactorCache::FactorCache(const FactorCache& other) {
    std::lock_guard<std::mutex> lk(other.mu_);
    entries_ = other.entries_;
}

FactorCache& FactorCache::operator=(const FactorCache& other) {
    if (this == &other) return *this;
    std::map<BigInt, Factorization> copy;
    {
        std::lock_guard<std::mutex> lk(other.mu_);
        copy = other.entries_;
    }
    std::lock_guard<std::mutex> lk(mu_);
    entries_ = std::move(copy);
    return *this;
}

Factorization FactorCache::parse_line(const std::string& raw) {
    std::string line;
    for (char c : raw)
        if (!isspace(static_cast<unsigned char>(c))) line.push_back(c);
    auto eq = line.find('=');
    if (eq == std::string::npos) fail(Errc::InputError, "cache line without '=': " + raw);
    BigInt n = parse_bigint(line.substr(0, eq));
    std::map<BigInt, unsigned> table;
    std::stringstream rest(line.substr(eq + 1));
    std::string term;
    while (std::getline(rest, term, '*')) {
        if (term.empty()) fail(Errc::InputError, "empty factor in cache line: " + raw);
        auto caret = term.find('^');
        BigInt p = parse_bigint(term.substr(0, caret));
        unsigned e = caret == std::string::npos ? 1 : static_cast<unsigned>(std::stoul(term.substr(caret + 1)));
        if (p == 1 && e == 1 && table.empty()) continue;
        if (!is_prime(p)) fail(Errc::InputError, "cache factor is not prime: " + p.get_str());
        table[p] += e;
    }
    Factorization f = make_factorization(table);
    if (f.value != n) fail(Errc::InputError, "cache entry does not multiply out: " + raw);
    return f;
}

void FactorCache::load_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        insert(parse_line(line));
    }
}

void FactorCache::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::InputError, "cannot open factor cache: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    load_text(ss.str());
}

void FactorCache::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) fail(Errc::InputError, "cannot write factor cache: " + path);
    out << dump();
}

std::string FactorCache::dump() const {
    std::lock_guard<std::mutex> lk(mu_);
    std::string s;
    for (auto& [n, f] : entries_) s += f.to_line() + "\n";
    return s;
}

std::optional<Factorization> FactorCache::lookup(const BigInt& n) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = entries_.find(n);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void FactorCache::insert(const Factorization& f) {
    if (!f.complete() || f.value < 2) return;
    std::lock_guard<std::mutex> lk(mu_);
    entries_.emplace(f.value, f);
}

std::size_t FactorCache::size() const {
    std::lock_guard<std::mutex> lk(mu_);
    return entries_.size();
}

std::string FactorCache::digest() const {
    // FNV-1a over the canonical dump; identifies the cache contents in reports
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------- factoring

namespace {

// Brent's cycle finding on x^2 + c. Returns a nontrivial factor or 0 if the budget ran out.
BigInt brent_rho(const BigInt& n, std::uint64_t budget) {
    std::uint64_t spent = 0;
    for (unsigned long c = 1;; ++c) {
        BigInt y = 2, x, ys, q = 1, g = 1, t;
        const std::uint64_t batch = 128;
        std::uint64_t r = 1;
        auto step = [&](BigInt& v) {
            mpz_mul(v.get_mpz_t(), v.get_mpz_t(), v.get_mpz_t());
            mpz_add_ui(v.get_mpz_t(), v.get_mpz_t(), c);
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
            ++spent;
        };
        while (g == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) step(y);
            std::uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                std::uint64_t lim = std::min(batch, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    step(y);
                    t = x - y;
                    mpz_abs(t.get_mpz_t(), t.get_mpz_t());
                    mpz_mul(q.get_mpz_t(), q.get_mpz_t(), t.get_mpz_t());
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += lim;
                if (spent > budget) return 0;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                step(ys);
                t = x - ys;
                mpz_abs(t.get_mpz_t(), t.get_mpz_t());
                mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
        if (spent > budget) return 0;
    }
}

} // namespace

Factorization factor(const BigInt& n_in, const FactorOptions& opt) {
    if (n_in < 1) fail(Errc::InputError, "factor requires n >= 1");
    if (opt.cache)
        if (auto hit = opt.cache->lookup(n_in)) return *hit;

    std::map<BigInt, unsigned> table;
    BigInt cofactor = 1;
    BigInt n = n_in;
    for (std::uint32_t p : small_primes()) {
        if (BigInt(p) * p > n) break;
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++e;
        }
        if (e) table[BigInt(p)] += e;
    }

    std::vector<std::pair<BigInt, unsigned>> work;
    if (n > 1) work.push_back({n, 1});
    while (!work.empty()) {
        auto [r, mult] = work.back();
        work.pop_back();
        if (r == 1) continue;
        if (is_prime(r)) {
            table[r] += mult;
            continue;
        }
        if (opt.cache)
            if (auto hit = opt.cache->lookup(r)) {
                for (auto& f : hit->factors) table[f.prime] += f.exponent * mult;
                continue;
            }
        if (mpz_perfect_power_p(r.get_mpz_t())) {
            bool split = false;
            for (unsigned long e = mpz_sizeinbase(r.get_mpz_t(), 2); e >= 2; --e) {
                BigInt root;
                if (mpz_root(root.get_mpz_t(), r.get_mpz_t(), e)) {
                    work.push_back({root, mult * static_cast<unsigned>(e)});
                    split = true;
                    break;
                }
            }
            if (split) continue;
        }
        BigInt g = brent_rho(r, opt.budget);
        if (g == 0) {
            for (unsigned i = 0; i < mult; ++i) cofactor *= r;
            continue;
        }
        BigInt h = r / g;
        work.push_back({g, mult});
        work.push_back({h, mult});
    }

    // Composite cofactors from separate branches multiply together; primes still merged.
    Factorization f = make_factorization(table, cofactor);
    f.value = n_in;
    if (opt.cache && f.complete()) opt.cache->insert(f);
    return f;
}

std::optional<std::pair<BigInt, unsigned>> prime_power_parts(const BigInt& q) {
    if (q < 2) return std::nullopt;
    for (unsigned long k = mpz_sizeinbase(q.get_mpz_t(), 2); k >= 1; --k) {
        BigInt root;
        if (mpz_root(root.get_mpz_t(), q.get_mpz_t(), k) && is_prime(root)) return std::make_pair(root, unsigned(k));
    }
    return std::nullopt;
}

static int mobius_u64(std::uint64_t n) {
    int mu = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

BigInt cyclotomic_value(unsigned long d, const BigInt& x) {
    if (d == 0) fail(Errc::InputError, "cyclotomic index must be positive");
    BigInt num = 1, den = 1;
    for (std::uint64_t e : divisors_u64(d)) {
        int mu = mobius_u64(d / e);
        if (mu == 0) continue;
        BigInt t = ipow(x, e) - 1;
        (mu > 0 ? num : den) *= t;
    }
    BigInt r;
    mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return r;
}

std::vector<CyclotomicPiece> cyclotomic_pieces(const BigInt& q, unsigned long m, const FactorOptions& opt) {
    auto pk = prime_power_parts(q);
    if (!pk) fail(Errc::InputError, "q must be a prime power: " + q.get_str());
    if (m == 0) fail(Errc::DegreeZero, "m must be positive");
    const BigInt& p = pk->first;
    std::vector<CyclotomicPiece> out;
    for (std::uint64_t d : divisors_u64(std::uint64_t(pk->second) * m)) {
        BigInt v = cyclotomic_value(d, p);
        out.push_back({d, v, factor(v, opt)});
    }
    return out;
}

Factorization factor_qm_minus_1(const BigInt& q, unsigned long m, const FactorOptions& opt) {
    BigInt target = ipow(q, m) - 1;
    if (opt.cache)
        if (auto hit = opt.cache->lookup(target)) return *hit;
    std::map<BigInt, unsigned> table;
    BigInt cofactor = 1;
    for (auto& piece : cyclotomic_pieces(q, m, opt)) {
        for (auto& f : piece.fac.factors) table[f.prime] += f.exponent;
        cofactor *= piece.fac.cofactor;
    }
    Factorization f = make_factorization(table, cofactor);
    if (f.value != target) fail(Errc::PreconditionViolated, "cyclotomic pieces do not multiply to q^m-1");
    if (opt.cache && f.complete()) opt.cache->insert(f);
    return f;
}

// ---------------------------------------------------------------- multiplicative functions

MultiplicativeValues multiplicative_functions(const Factorization& f) {
    if (!f.complete()) fail(Errc::IncompleteFactorization, "factorization of " + f.value.get_str() + " is incomplete");
    MultiplicativeValues v;
    v.omega = f.factors.size();
    v.W = ipow(2, v.omega);
    v.phi = 1;
    v.radical = 1;
    v.mu = 1;
    for (auto& pp : f.factors) {
        v.phi *= ipow(pp.prime, pp.exponent - 1) * (pp.prime - 1);
        v.radical *= pp.prime;
        v.mu = -v.mu;
    }
    if (std::any_of(f.factors.begin(), f.factors.end(), [](auto& x) { return x.exponent > 1; })) v.mu = 0;
    v.theta = Rational(v.phi, f.value);
    v.theta.canonicalize();
    return v;
}

BigInt w_lower_bound(const Factorization& f) { return ipow(2, f.factors.size() + (f.complete() ? 0 : 1)); }

BigInt p_free_part(BigInt r, const BigInt& p) {
    if (p < 2) fail(Errc::NotPrime, "p-free part needs a prime");
    if (r < 1) fail(Errc::InputError, "p-free part needs r >= 1");
    while (mpz_divisible_p(r.get_mpz_t(), p.get_mpz_t())) r /= p;
    return r;
}

std::uint64_t p_free_part(std::uint64_t r, std::uint64_t p) {
    if (p < 2) fail(Errc::NotPrime, "p-free part needs a prime");
    if (r == 0) fail(Errc::InputError, "p-free part needs r >= 1");
    while (r % p == 0) r /= p;
    return r;
}

Factorization largest_coprime_divisor(const Factorization& e, const BigInt& sigma) {
    if (!e.complete()) fail(Errc::IncompleteFactorization, "largest coprime divisor needs a complete factorization");
    std::map<BigInt, unsigned> table;
    for (auto& pp : e.factors)
        if (!mpz_divisible_p(sigma.get_mpz_t(), pp.prime.get_mpz_t())) table[pp.prime] = pp.exponent;
    return make_factorization(table);
}

Factorization restrict_to(const Factorization& e, const std::vector<BigInt>& primes) {
    std::map<BigInt, unsigned> table;
    for (auto& p : primes) {
        unsigned x = e.exponent_of(p);
        if (x == 0) fail(Errc::NotDividing, p.get_str() + " does not divide " + e.value.get_str());
        table[p] = x;
    }
    return make_factorization(table);
}

Factorization times(const Factorization& a, const Factorization& b) {
    std::map<BigInt, unsigned> t;
    for (auto& pp : a.factors) t[pp.prime] += pp.exponent;
    for (auto& pp : b.factors) t[pp.prime] += pp.exponent;
    return make_factorization(t, a.cofactor * b.cofactor);
}

Factorization divide_exact(const Factorization& n, const Factorization& d) {
    if (!n.complete() || !d.complete()) fail(Errc::IncompleteFactorization, "exact division needs complete factorizations");
    std::map<BigInt, unsigned> t;
    for (auto& pp : n.factors) t[pp.prime] = pp.exponent;
    for (auto& pp : d.factors) {
        auto it = t.find(pp.prime);
        if (it == t.end() || it->second < pp.exponent)
            fail(Errc::NotDividing, d.value.get_str() + " does not divide " + n.value.get_str());
        it->second -= pp.exponent;
    }
    return make_factorization(t);
}

Factorization norm_cofactor(const BigInt& q, unsigned long m, const Factorization& qm1) {
    BigInt g;
    BigInt qm = q - 1;
    mpz_gcd_ui(g.get_mpz_t(), qm.get_mpz_t(), m);
    Factorization den = factor(qm * g);
    Factorization r = divide_exact(qm1, den);
    return r;
}

std::vector<BigInt> squarefree_divisors(const Factorization& f) {
    if (!f.complete()) fail(Errc::IncompleteFactorization, "divisor enumeration needs a complete factorization");
    std::vector<BigInt> out{1};
    for (auto& pp : f.factors) {
        std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * pp.prime);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<BigInt> divisors(const Factorization& f) {
    if (!f.complete()) fail(Errc::IncompleteFactorization, "divisor enumeration needs a complete factorization");
    std::vector<BigInt> out{1};
    for (auto& pp : f.factors) {
        std::size_t n = out.size();
        BigInt pe = 1;
        for (unsigned e = 1; e <= pp.exponent; ++e) {
            pe *= pp.prime;
            for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * pe);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int mobius(const Factorization& f) { return multiplicative_functions(f).mu; }

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

std::vector<std::uint64_t> divisors_u64(std::uint64_t n) {
    std::vector<std::uint64_t> lo, hi;
    for (std::uint64_t i = 1; i * i <= n; ++i) {
        if (n % i) continue;
        lo.push_back(i);
        if (i != n / i) hi.push_back(n / i);
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

std::uint64_t multiplicative_order(std::uint64_t q, std::uint64_t n) {
    if (n == 1) return 1;
    if (gcd_u64(q % n, n) != 1) fail(Errc::NotCoprime, "order undefined: gcd(q, n) > 1");
    std::uint64_t x = q % n, k = 1;
    while (x != 1) {
        x = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * q) % n);
        ++k;
    }
    return k;
}

} // namespace pnp

namespace pnp {

std::string shared_factor_cache_path() {
    if (const char* env = std::getenv("PNPAIR_FACTOR_CACHE"); env && *env) return env;
#ifdef PNPAIR_DATA_DIR
    return std::string(PNPAIR_DATA_DIR) + "/factor_cache.txt";
#else
    return "data/factor_cache.txt";
#endif
}

FactorCache& shared_factor_cache() {
    static FactorCache cache = [] {
        FactorCache c;
        std::ifstream probe(shared_factor_cache_path());
        if (probe) c.load(shared_factor_cache_path());
        return c;
    }();
    return cache;
}

FactorOptions default_factor_options() {
    FactorOptions o;
    o.cache = &shared_factor_cache();
    return o;
}

} // namespace pnp
