#include "pnpair/gf.hpp"

#include "expr.hpp"

#include <algorithm>
#include <limits>

namespace pnp {

namespace {

// Arithmetic on F_p used only while choosing the base modulus.
class PrimeField {
public:
    using Elem = std::uint32_t;
    explicit PrimeField(std::uint32_t p) : p_(p) {}
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    Elem add(Elem a, Elem b) const { return (a + b) % p_; }
    Elem sub(Elem a, Elem b) const { return (a + p_ - b) % p_; }
    Elem neg(Elem a) const { return a ? p_ - a : 0; }
    Elem mul(Elem a, Elem b) const { return static_cast<Elem>(std::uint64_t(a) * b % p_); }
    Elem inv(Elem a) const {
        if (a == 0) fail(Errc::DivisionByZero, "inverse of zero");
        return powu(a, p_ - 2);
    }
    Elem powu(Elem a, std::uint64_t e) const {
        Elem r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    Elem from_int(long v) const { return static_cast<Elem>(((v % long(p_)) + p_) % p_); }
    Elem pth_root(Elem a) const { return a; }
    Elem random(std::mt19937_64& rng) const { return static_cast<Elem>(rng() % p_); }
    BigInt order() const { return BigInt(p_); }
    std::uint32_t characteristic() const { return p_; }
    BigInt encode(Elem a) const { return BigInt(a); }
    std::string format(Elem a) const { return std::to_string(a); }

private:
    std::uint32_t p_;
};

std::vector<std::uint64_t> prime_factors_u64(std::uint64_t n) {
    std::vector<std::uint64_t> r;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        r.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) r.push_back(n);
    return r;
}

} // namespace

// ---------------------------------------------------------------- MidField

MidField::MidField(std::uint32_t p, unsigned k) : p_(p), k_(k) {
    if (!is_prime(BigInt(p))) fail(Errc::NotPrime, std::to_string(p) + " is not prime");
    if (k == 0) fail(Errc::DegreeZero, "base extension degree must be positive");
    BigInt qb = ipow(BigInt(p), k);
    if (qb > BigInt(1u << 24)) fail(Errc::TowerTooLarge, "F_q with q = " + qb.get_str() + " exceeds the 2^24 table limit");
    q_ = static_cast<std::uint32_t>(qb.get_ui());
    pow_p_.resize(k + 1);
    pow_p_[0] = 1;
    for (unsigned i = 1; i <= k; ++i) pow_p_[i] = pow_p_[i - 1] * p;

    if (k == 1) {
        modulus_ = {0, 1};
    } else {
        PrimeField fp(p);
        PolyRing<PrimeField> ring(fp);
        for (std::uint32_t e = 0;; ++e) {
            std::vector<std::uint32_t> c(k + 1, 0);
            std::uint32_t v = e;
            for (unsigned i = 0; i < k; ++i) {
                c[i] = v % p;
                v /= p;
            }
            c[k] = 1;
            if (ring.is_irreducible(ring.from_coeffs(c))) {
                modulus_ = c;
                break;
            }
        }
    }

    // Multiplication of codes by polynomial arithmetic mod the base modulus, used to build tables.
    auto slow_mul = [&](std::uint32_t a, std::uint32_t b) -> std::uint32_t {
        if (k_ == 1) return static_cast<std::uint32_t>(std::uint64_t(a) * b % p_);
        std::vector<std::uint64_t> da(k_), db(k_), prod(2 * k_ - 1, 0);
        for (unsigned i = 0; i < k_; ++i) {
            da[i] = a % p_;
            a /= p_;
            db[i] = b % p_;
            b /= p_;
        }
        for (unsigned i = 0; i < k_; ++i)
            for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        for (unsigned i = 2 * k_ - 2; i >= k_; --i) {
            std::uint64_t c = prod[i];
            if (!c) continue;
            prod[i] = 0;
            for (unsigned j = 0; j < k_; ++j) prod[i - k_ + j] = (prod[i - k_ + j] + (p_ - c) * modulus_[j]) % p_;
        }
        std::uint32_t r = 0;
        for (unsigned i = 0; i < k_; ++i) r += static_cast<std::uint32_t>(prod[i]) * pow_p_[i];
        return r;
    };
    auto slow_pow = [&](std::uint32_t a, std::uint64_t e) {
        std::uint32_t r = 1;
        while (e) {
            if (e & 1) r = slow_mul(r, a);
            a = slow_mul(a, a);
            e >>= 1;
        }
        return r;
    };

    const std::uint64_t n = q_ - 1;
    auto primes = prime_factors_u64(n);
    std::uint32_t g = 0;
    for (std::uint32_t cand = 1; cand < q_ && !g; ++cand) {
        bool ok = true;
        for (auto r : primes)
            if (slow_pow(cand, n / r) == 1) {
                ok = false;
                break;
            }
        if (ok) g = cand;
    }
    if (q_ == 2) g = 1;
    exp_.assign(2 * n, 0);
    log_.assign(q_, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t x = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
        exp_[i] = exp_[i + n] = x;
        log_[x] = static_cast<std::uint32_t>(i);
        x = slow_mul(x, g);
    }

    // Tr_{F_q/F_p} is F_p-linear; tabulate it from the traces of the powers of u.
    std::vector<std::uint32_t> tr_basis(k_);
    for (unsigned i = 0; i < k_; ++i) {
        std::uint32_t b = pow_p_[i], s = 0, y = b;
        for (unsigned j = 0; j < k_; ++j) {
            s = add(s, y);
            y = slow_pow(y, p_);
        }
        tr_basis[i] = s;  // lies in F_p, so the code is below p
    }
    abs_trace_.resize(q_);
    for (std::uint32_t a = 0; a < q_; ++a) {
        std::uint64_t s = 0;
        std::uint32_t v = a;
        for (unsigned i = 0; i < k_; ++i) {
            s += std::uint64_t(v % p_) * tr_basis[i];
            v /= p_;
        }
        abs_trace_[a] = static_cast<std::uint32_t>(s % p_);
    }
}

MidField::Elem MidField::add(Elem a, Elem b) const {
    if (k_ == 1) {
        Elem s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem r = 0;
    for (unsigned i = 0; i < k_; ++i) {
        Elem s = a % p_ + b % p_;
        if (s >= p_) s -= p_;
        r += s * pow_p_[i];
        a /= p_;
        b /= p_;
    }
    return r;
}

MidField::Elem MidField::neg(Elem a) const {
    if (k_ == 1) return a ? p_ - a : 0;
    Elem r = 0;
    for (unsigned i = 0; i < k_; ++i) {
        Elem d = a % p_;
        r += (d ? p_ - d : 0) * pow_p_[i];
        a /= p_;
    }
    return r;
}

MidField::Elem MidField::sub(Elem a, Elem b) const { return add(a, neg(b)); }

MidField::Elem MidField::inv(Elem a) const {
    if (a == 0) fail(Errc::DivisionByZero, "inverse of zero in F_q");
    const std::uint32_t n = q_ - 1;
    return exp_[(n - log_[a]) % n];
}

MidField::Elem MidField::pow(Elem a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const std::uint64_t n = q_ - 1;
    return exp_[static_cast<std::uint64_t>((static_cast<unsigned __int128>(log_[a]) * (e % n)) % n)];
}

MidField::Elem MidField::pow(Elem a, const BigInt& e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    BigInt r = e % BigInt(q_ - 1);
    return pow(a, static_cast<std::uint64_t>(r.get_ui()));
}

MidField::Elem MidField::from_int(long v) const {
    long m = v % long(p_);
    if (m < 0) m += p_;
    return static_cast<Elem>(m);
}

std::uint32_t MidField::digit(Elem a, unsigned i) const { return (a / pow_p_[i]) % p_; }

MidField::Elem MidField::generator_u() const {
    if (k_ == 1) fail(Errc::InputError, "symbol u is only defined when q is not prime");
    return p_;
}

bool MidField::is_primitive(Elem a) const {
    if (a == 0) return false;
    return gcd_u64(log_[a], q_ - 1) == 1;
}

std::string MidField::format(Elem a) const {
    if (k_ == 1) return std::to_string(a);
    if (a == 0) return "0";
    std::string out;
    for (int i = static_cast<int>(k_) - 1; i >= 0; --i) {
        std::uint32_t d = digit(a, i);
        if (!d) continue;
        std::string term;
        if (i == 0) term = std::to_string(d);
        else {
            term = (d == 1 ? "" : std::to_string(d) + "*") + "u";
            if (i > 1) term += "^" + std::to_string(i);
        }
        if (!out.empty()) out += "+";
        out += term;
    }
    return out;
}

// ---------------------------------------------------------------- FieldTower

FieldTower::FieldTower(std::uint32_t p, unsigned k, unsigned m)
    : mid_(std::make_shared<MidField>(p, k)), m_(m), qm1_once_(std::make_shared<std::once_flag>()) {
    if (m == 0) fail(Errc::DegreeZero, "extension degree m must be positive");
    order_ = ipow(BigInt(mid_->q()), m);
    const MidField& F = *mid_;
    PolyRing<MidField> ring(F);
    const BigInt qb(F.q());
    for (BigInt e = 0;; ++e) {
        std::vector<std::uint32_t> c(m + 1, 0);
        BigInt v = e;
        for (unsigned i = 0; i < m; ++i) {
            c[i] = static_cast<std::uint32_t>(BigInt(v % qb).get_ui());
            v /= qb;
        }
        c[m] = 1;
        if (ring.is_irreducible(ring.from_coeffs(c))) {
            ext_modulus_ = c;
            break;
        }
    }
    TopElem tq = pow(t(), qb);
    frob_cols_.resize(m);
    frob_cols_[0] = one();
    for (unsigned j = 1; j < m; ++j) frob_cols_[j] = mul(frob_cols_[j - 1], tq);
}

std::uint64_t FieldTower::size() const {
    if (!enumerable()) fail(Errc::TowerTooLarge, "tower of order " + order_.get_str() + " is not enumerable");
    return order_.get_ui();
}

const Factorization& FieldTower::qm1() const {
    std::call_once(*qm1_once_, [&] {
        if (!qm1_) qm1_ = std::make_shared<Factorization>(factor_qm_minus_1(BigInt(q()), m_, default_factor_options()));
    });
    return *qm1_;
}

void FieldTower::set_qm1(const Factorization& f) {
    if (f.value != order_ - 1) fail(Errc::InputError, "supplied factorization is not of q^m-1");
    qm1_ = std::make_shared<Factorization>(f);
}

void FieldTower::compute_qm1(const FactorOptions& opt) const {
    std::call_once(*qm1_once_, [&] {
        if (!qm1_) qm1_ = std::make_shared<Factorization>(factor_qm_minus_1(BigInt(q()), m_, opt));
    });
}

TopElem FieldTower::one() const {
    TopElem r = zero();
    r.c[0] = 1;
    return r;
}

TopElem FieldTower::t() const {
    TopElem r = zero();
    if (m_ == 1) {
        r.c[0] = mid_->neg(ext_modulus_[0]);
        return r;
    }
    r.c[1] = 1;
    return r;
}

TopElem FieldTower::embed(std::uint32_t a) const {
    TopElem r = zero();
    r.c[0] = a;
    return r;
}

bool FieldTower::is_zero(const TopElem& a) const {
    return std::all_of(a.c.begin(), a.c.end(), [](std::uint32_t x) { return x == 0; });
}

bool FieldTower::in_mid(const TopElem& a) const {
    return std::all_of(a.c.begin() + 1, a.c.end(), [](std::uint32_t x) { return x == 0; });
}

std::uint32_t FieldTower::to_mid(const TopElem& a) const {
    if (!in_mid(a)) fail(Errc::PreconditionViolated, "element does not lie in F_q");
    return a.c[0];
}

TopElem FieldTower::add(const TopElem& a, const TopElem& b) const {
    TopElem r = a;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = mid_->add(r.c[i], b.c[i]);
    return r;
}

TopElem FieldTower::sub(const TopElem& a, const TopElem& b) const {
    TopElem r = a;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = mid_->sub(r.c[i], b.c[i]);
    return r;
}

TopElem FieldTower::neg(const TopElem& a) const {
    TopElem r = a;
    for (auto& x : r.c) x = mid_->neg(x);
    return r;
}

TopElem FieldTower::scale(const TopElem& a, std::uint32_t s) const {
    TopElem r = a;
    for (auto& x : r.c) x = mid_->mul(x, s);
    return r;
}

TopElem FieldTower::mul(const TopElem& a, const TopElem& b) const {
    const MidField& F = *mid_;
    std::vector<std::uint32_t> prod(2 * m_ - 1, 0);
    for (unsigned i = 0; i < m_; ++i) {
        if (!a.c[i]) continue;
        for (unsigned j = 0; j < m_; ++j)
            if (b.c[j]) prod[i + j] = F.add(prod[i + j], F.mul(a.c[i], b.c[j]));
    }
    for (unsigned i = 2 * m_ - 2; i >= m_; --i) {
        std::uint32_t c = prod[i];
        if (!c) continue;
        prod[i] = 0;
        for (unsigned j = 0; j < m_; ++j)
            if (ext_modulus_[j]) prod[i - m_ + j] = F.sub(prod[i - m_ + j], F.mul(c, ext_modulus_[j]));
    }
    prod.resize(m_);
    return TopElem{std::move(prod)};
}

TopElem FieldTower::pow(const TopElem& a, const BigInt& e) const {
    if (e < 0) return pow(inv(a), -e);
    TopElem r = one();
    for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
        r = mul(r, r);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, a);
    }
    return r;
}

TopElem FieldTower::inv(const TopElem& a) const {
    if (is_zero(a)) fail(Errc::DivisionByZero, "inverse of zero");
    return pow(a, order_ - 2);
}

TopElem FieldTower::pth_root(const TopElem& a) const { return pow(a, order_ / p()); }

TopElem FieldTower::random(std::mt19937_64& rng) const {
    TopElem r = zero();
    for (auto& x : r.c) x = mid_->random(rng);
    return r;
}

TopElem FieldTower::frobenius(const TopElem& a) const {
    TopElem r = zero();
    for (unsigned j = 0; j < m_; ++j) {
        std::uint32_t s = a.c[j];
        if (!s) continue;
        const TopElem& col = frob_cols_[j];
        for (unsigned i = 0; i < m_; ++i)
            if (col.c[i]) r.c[i] = mid_->add(r.c[i], mid_->mul(s, col.c[i]));
    }
    return r;
}

TopElem FieldTower::frobenius_power(const TopElem& a, unsigned i) const {
    TopElem r = a;
    for (unsigned j = 0; j < i % m_; ++j) r = frobenius(r);
    return r;
}

std::uint32_t FieldTower::trace_to_mid(const TopElem& a) const {
    TopElem acc = a, s = a;
    for (unsigned i = 1; i < m_; ++i) {
        s = frobenius(s);
        acc = add(acc, s);
    }
    if (!in_mid(acc)) fail(Errc::PreconditionViolated, "trace is not Frobenius-fixed");
    return acc.c[0];
}

std::uint32_t FieldTower::norm_to_mid(const TopElem& a) const {
    if (is_zero(a)) return 0;
    TopElem n = pow(a, (order_ - 1) / (q() - 1));
    if (!in_mid(n)) fail(Errc::PreconditionViolated, "norm is not Frobenius-fixed");
    return n.c[0];
}

bool FieldTower::is_primitive(const TopElem& a) const {
    const Factorization& f = qm1();
    if (!f.complete()) fail(Errc::IncompleteFactorization, "factorization of q^m-1 is incomplete");
    if (is_zero(a)) return false;
    const BigInt n = order_ - 1;
    const TopElem e = one();
    for (auto& pp : f.factors)
        if (pow(a, n / pp.prime) == e) return false;
    return true;
}

std::uint64_t FieldTower::index(const TopElem& a) const {
    std::uint64_t r = 0;
    for (unsigned i = m_; i-- > 0;) r = r * q() + a.c[i];
    return r;
}

TopElem FieldTower::element(std::uint64_t i) const {
    if (!enumerable() || BigInt(static_cast<unsigned long>(i)) >= order_)
        fail(Errc::IndexOutOfRange, "element index " + std::to_string(i) + " out of range");
    TopElem r = zero();
    for (unsigned j = 0; j < m_; ++j) {
        r.c[j] = static_cast<std::uint32_t>(i % q());
        i /= q();
    }
    return r;
}

BigInt FieldTower::index_big(const TopElem& a) const {
    BigInt r = 0;
    for (unsigned i = m_; i-- > 0;) r = r * q() + a.c[i];
    return r;
}

TopElem FieldTower::element_big(const BigInt& i) const {
    if (i < 0 || i >= order_) fail(Errc::IndexOutOfRange, "element index " + i.get_str() + " out of range");
    TopElem r = zero();
    BigInt v = i;
    const BigInt qb(q());
    for (unsigned j = 0; j < m_; ++j) {
        r.c[j] = static_cast<std::uint32_t>(BigInt(v % qb).get_ui());
        v /= qb;
    }
    return r;
}

std::string FieldTower::format(const TopElem& a) const {
    if (is_zero(a)) return "0";
    std::string out;
    for (int i = static_cast<int>(m_) - 1; i >= 0; --i) {
        std::uint32_t c = a.c[i];
        if (!c) continue;
        std::string cs = mid_->format(c), term;
        if (i == 0) term = cs;
        else {
            std::string mono = "t" + (i > 1 ? "^" + std::to_string(i) : std::string());
            if (c == 1) term = mono;
            else if (cs.find('+') != std::string::npos) term = "(" + cs + ")*" + mono;
            else term = cs + "*" + mono;
        }
        if (!out.empty()) out += " + ";
        out += term;
    }
    return out;
}

namespace {

struct MidAlg {
    using Value = std::uint32_t;
    const MidField& f;
    Value integer(const BigInt& n) const { return static_cast<Value>(BigInt(n % f.p()).get_ui()); }
    std::optional<Value> symbol(const std::string& s) const {
        if (s == "u" && f.k() > 1) return f.generator_u();
        return std::nullopt;
    }
    Value add(Value a, Value b) const { return f.add(a, b); }
    Value sub(Value a, Value b) const { return f.sub(a, b); }
    Value mul(Value a, Value b) const { return f.mul(a, b); }
    Value neg(Value a) const { return f.neg(a); }
    Value pow(Value a, unsigned long e) const { return f.pow(a, static_cast<std::uint64_t>(e)); }
};

struct TopAlg {
    using Value = TopElem;
    const FieldTower& t;
    Value integer(const BigInt& n) const { return t.embed(static_cast<std::uint32_t>(BigInt(n % t.p()).get_ui())); }
    std::optional<Value> symbol(const std::string& s) const {
        if (s == "t") return t.t();
        if (s == "u" && t.k() > 1) return t.embed(t.mid().generator_u());
        return std::nullopt;
    }
    Value add(const Value& a, const Value& b) const { return t.add(a, b); }
    Value sub(const Value& a, const Value& b) const { return t.sub(a, b); }
    Value mul(const Value& a, const Value& b) const { return t.mul(a, b); }
    Value neg(const Value& a) const { return t.neg(a); }
    Value pow(const Value& a, unsigned long e) const { return t.pow(a, BigInt(e)); }
};

template <class F, class Coef>
struct PolyAlg {
    using Value = Poly<F>;
    PolyRing<F> ring;
    Coef coef;
    Value integer(const BigInt& n) const { return ring.constant(coef.integer(n)); }
    std::optional<Value> symbol(const std::string& s) const {
        if (s == "x") return ring.x();
        if (auto c = coef.symbol(s)) return ring.constant(*c);
        return std::nullopt;
    }
    Value add(const Value& a, const Value& b) const { return ring.add(a, b); }
    Value sub(const Value& a, const Value& b) const { return ring.sub(a, b); }
    Value mul(const Value& a, const Value& b) const { return ring.mul(a, b); }
    Value neg(const Value& a) const { return ring.neg(a); }
    Value pow(const Value& a, unsigned long e) const { return ring.pow(a, e); }
};

bool all_digits(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        ++n;
    }
    return n > 0;
}

} // namespace

TopElem FieldTower::parse(const std::string& text) const {
    if (all_digits(text)) return element_big(parse_bigint(text));
    return detail::parse_with(TopAlg{*this}, text);
}

std::uint32_t parse_mid_elem(const MidField& f, const std::string& text) {
    if (all_digits(text)) {
        BigInt i = parse_bigint(text);
        if (i >= f.q()) fail(Errc::IndexOutOfRange, "F_q index out of range: " + text);
        return static_cast<std::uint32_t>(i.get_ui());
    }
    return detail::parse_with(MidAlg{f}, text);
}

MidPoly parse_mid_poly(const MidField& f, const std::string& text) {
    PolyAlg<MidField, MidAlg> alg{PolyRing<MidField>(f), MidAlg{f}};
    return detail::parse_with(alg, text);
}

TopPoly parse_top_poly(const FieldTower& t, const std::string& text) {
    PolyAlg<FieldTower, TopAlg> alg{PolyRing<FieldTower>(t), TopAlg{t}};
    return detail::parse_with(alg, text);
}

// ---------------------------------------------------------------- DiscreteLogTable

DiscreteLogTable::DiscreteLogTable(const FieldTower& tower) {
    if (!tower.enumerable() || tower.size() - 1 > kLimit)
        fail(Errc::TowerTooLarge, "discrete log table limited to 2^26 elements");
    const std::uint64_t size = tower.size();
    n_ = size - 1;
    std::uint64_t g = 1;
    while (!tower.is_primitive(tower.element(g))) ++g;
    exp_.resize(n_);
    log_.assign(size, std::numeric_limits<std::uint32_t>::max());
    const TopElem gen = tower.element(g);
    TopElem x = tower.one();
    for (std::uint64_t i = 0; i < n_; ++i) {
        std::uint64_t idx = tower.index(x);
        exp_[i] = static_cast<std::uint32_t>(idx);
        log_[idx] = static_cast<std::uint32_t>(i);
        x = tower.mul(x, gen);
    }
}

} // namespace pnp
