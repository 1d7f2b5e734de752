#pragma once

// Numerics for Γ, ζ and the completed zeta ξ(s) = π^{-s/2} Γ(s/2) ζ(s), its
// derivatives and Laurent constants at s = 1, and evaluation of SymExpr
// values. Everything is templated on the real type: double for fast oracles,
// MPFR (runtime precision) for verification.

#include "gpzeta/symexpr.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpzeta {

using Mp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                         boost::multiprecision::et_off>;

struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Sets the MPFR working precision for the lifetime of the guard.
class PrecisionGuard {
public:
    explicit PrecisionGuard(int digits) : saved_(Mp::default_precision()) {
        Mp::default_precision(static_cast<unsigned>(digits));
    }
    ~PrecisionGuard() { Mp::default_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned saved_;
};

template <class R>
struct Cx {
    R re{0};
    R im{0};
    Cx() = default;
    Cx(R r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
    Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}
    Cx(int r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)

    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cx operator/(const Cx& a, const Cx& b) {
        R d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    friend Cx operator*(const Cx& a, const R& k) { return {a.re * k, a.im * k}; }
    friend Cx operator*(const R& k, const Cx& a) { return {a.re * k, a.im * k}; }
    friend Cx operator/(const Cx& a, const R& k) { return {a.re / k, a.im / k}; }
    Cx operator-() const { return {-re, -im}; }
    Cx& operator+=(const Cx& o) { return *this = *this + o; }
    Cx& operator-=(const Cx& o) { return *this = *this - o; }
    Cx& operator*=(const Cx& o) { return *this = *this * o; }
    Cx& operator/=(const Cx& o) { return *this = *this / o; }
    Cx conj() const { return {re, -im}; }
    bool operator==(const Cx& o) const { return re == o.re && im == o.im; }
};

template <class R>
R cabs(const Cx<R>& z) {
    using std::sqrt;
    using std::abs;
    if (z.im == 0) return abs(z.re);
    if (z.re == 0) return abs(z.im);
    return sqrt(z.re * z.re + z.im * z.im);
}

template <class R>
R carg(const Cx<R>& z) {
    using std::atan2;
    return atan2(z.im, z.re);
}

template <class R>
Cx<R> cexp(const Cx<R>& z) {
    using std::exp;
    using std::cos;
    using std::sin;
    R m = exp(z.re);
    if (z.im == 0) return Cx<R>(m);
    return {m * cos(z.im), m * sin(z.im)};
}

template <class R>
Cx<R> clog(const Cx<R>& z) {
    using std::log;
    return {log(cabs(z)), carg(z)};
}

template <class R>
Cx<R> csin(const Cx<R>& z) {
    using std::sin;
    using std::cos;
    using std::sinh;
    using std::cosh;
    return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}

template <class R>
Cx<R> csqrt(const Cx<R>& z) {
    using std::sqrt;
    R r = cabs(z);
    R a = sqrt((r + z.re) / 2);
    R b = sqrt((r - z.re) / 2);
    if (z.im < 0) b = -b;
    return {a, b};
}

template <class R>
R real_from_rational(const Rational& q) {
    if constexpr (std::is_same_v<R, double>) {
        return to_double(q);
    } else {
        R out;
        out.backend() = q.backend();
        return out;
    }
}

template <class R>
double to_dbl(const R& x) {
    if constexpr (std::is_same_v<R, double>)
        return x;
    else
        return x.template convert_to<double>();
}

template <class R>
std::string real_str(const R& x, int digits = 20) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

struct EvalConfig {
    int digits = 30;           // decimal working precision of the verification layer
    double delta = 1e-6;       // pole-proximity threshold
    double max_im = 200;       // supported height before a degradation warning
    void validate() const {
        if (digits < 15) throw std::invalid_argument("precision must be at least 15 digits");
        if (!(delta > 0)) throw std::invalid_argument("pole-proximity threshold must be positive");
    }
};

namespace detail {

/// B_{2k} for k = 0..n-1 as exact rationals (Akiyama-Tanigawa).
inline const std::vector<Rational>& bernoulli_even(int n) {
    static std::mutex mu;
    static std::vector<Rational> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (static_cast<int>(cache.size()) >= n) return cache;
    const int m_max = 2 * n;
    std::vector<Rational> a(m_max + 1);
    std::vector<Rational> b(m_max + 1);
    for (int m = 0; m <= m_max; ++m) {
        a[m] = Rational(1, m + 1);
        for (int j = m; j >= 1; --j) a[j - 1] = Rational(j) * (a[j - 1] - a[j]);
        b[m] = a[0];  // B_m with B_1 = +1/2
    }
    cache.clear();
    for (int k = 0; k < n; ++k) cache.push_back(b[2 * k]);
    return cache;
}

}  // namespace detail

/// ξ numerics at a fixed precision (digits is ignored for double).
template <class R>
class XiNumerics {
public:
    /// For MPFR the global default precision is set to digits plus guard digits.
    explicit XiNumerics(int digits = 30) : digits_(std::is_same_v<R, double> ? 16 : digits) {
        if constexpr (!std::is_same_v<R, double>) Mp::default_precision(static_cast<unsigned>(digits_ + 10));
        using std::pow;
        eps_ = pow(R(10), -R(digits_ + 2));
        pi_ = boost::math::constants::pi<R>();
        log_pi_ = log_of(pi_);
        half_log_2pi_ = log_of(2 * pi_) / 2;
        auto bern = detail::bernoulli_even(kBernoulli);
        for (const auto& q : bern) b2n_.push_back(real_from_rational<R>(q));
    }

    int digits() const { return digits_; }
    const R& pi() const { return pi_; }
    R eps() const { return eps_; }

    Cx<R> gamma(const Cx<R>& z) const {
        if (z.im == 0 && z.re <= 0 && is_int(z.re))
            throw PoleError("gamma has a pole at " + real_str(z.re));
        if (z.re < R(0.5)) {
            Cx<R> one_minus = Cx<R>(R(1)) - z;
            return Cx<R>(pi_) / (csin(z * pi_) * gamma(one_minus));
        }
        const R threshold = R(0.45 * digits_ + 8);
        Cx<R> w = z;
        Cx<R> prod(R(1));
        while (cabs(w) < threshold) {
            prod *= w;
            w.re += 1;
        }
        Cx<R> lg = (w - Cx<R>(R(0.5))) * clog(w) - w + Cx<R>(half_log_2pi_);
        Cx<R> winv = Cx<R>(R(1)) / w;
        Cx<R> w2inv = winv * winv;
        Cx<R> wp = winv;
        for (int k = 1; k < kBernoulli; ++k) {
            Cx<R> term = wp * (b2n_[k] / R((2 * k) * (2 * k - 1)));
            lg += term;
            if (cabs(term) < eps_) break;
            wp *= w2inv;
        }
        return cexp(lg) / prod;
    }

    Cx<R> zeta(const Cx<R>& s) const {
        if (s.im == 0 && s.re == 1) throw PoleError("zeta has a pole at s=1");
        if (s.re < 0) {
            // ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)
            Cx<R> one_minus = Cx<R>(R(1)) - s;
            Cx<R> f = cexp(s * log_of(R(2))) * cexp((s - Cx<R>(R(1))) * log_pi_) * csin(s * (pi_ / 2));
            return f * gamma(one_minus) * zeta(one_minus);
        }
        using std::abs;
        using std::ceil;
        const int n = static_cast<int>(to_dbl(abs(s.im)) / (2 * M_PI) + to_dbl(abs(s.re)) / 4) +
                      static_cast<int>(0.6 * digits_) + 10;
        const auto& logs = logs_upto(n);
        Cx<R> sum(R(0));
        for (int k = 1; k < n; ++k) sum += npow(logs[k], s);
        Cx<R> nps = npow(logs[n], s);  // N^{-s}
        R nr(n);
        sum += nps * nr / (s - Cx<R>(R(1)));
        sum += nps / R(2);
        // Euler-Maclaurin tail: B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
        Cx<R> poch = s;
        Cx<R> npow_k = nps / nr;  // N^{-s-1}
        R fact(2);                // (2k)!
        for (int k = 1; k < kBernoulli; ++k) {
            Cx<R> term = poch * npow_k * (b2n_[k] / fact);
            sum += term;
            if (cabs(term) < eps_ * cabs(sum)) break;
            poch *= (s + Cx<R>(R(2 * k - 1))) * (s + Cx<R>(R(2 * k)));
            npow_k = npow_k / (nr * nr);
            fact *= R((2 * k + 1) * (2 * k + 2));
        }
        return sum;
    }

    Cx<R> xi(const Cx<R>& s) const {
        if (s.im == 0 && (s.re == 0 || s.re == 1))
            throw PoleError("xi has a pole at s=" + real_str(s.re));
        if (s.re < R(0.5)) return xi(Cx<R>(R(1)) - s);
        Cx<R> half = s / R(2);
        return cexp(-(half * log_pi_)) * gamma(half) * zeta(s);
    }

    /// pi^{-s/2} Gamma(s/2) zeta(s) without the s -> 1-s symmetrization of xi();
    /// an independent route for checking the functional equation.
    Cx<R> xi_direct(const Cx<R>& s) const {
        if (s.im == 0 && (s.re == 0 || s.re == 1))
            throw PoleError("xi has a pole at s=" + real_str(s.re));
        Cx<R> half = s / R(2);
        return cexp(-(half * log_pi_)) * gamma(half) * zeta(s);
    }

    /// k-th derivative by a Cauchy integral on a circle avoiding the poles.
    Cx<R> xi_deriv(const Cx<R>& s, int k) const {
        if (k == 0) return xi(s);
        R dist = std::min(cabs(s), cabs(s - Cx<R>(R(1))));
        if (dist == 0) throw PoleError("xi derivative requested at a pole");
        R r = dist / 2;
        if (r > R(0.5)) r = R(0.5);
        return cauchy_coeff([&](const Cx<R>& z) { return xi(z); }, s, r, k) * factorial(k);
    }

    /// a_k in ξ(1+ε) = 1/ε + Σ a_k ε^k, through the entire function ξ(s) - 1/(s-1) + 1/s.
    Cx<R> laurent_constant(int k) const {
        std::lock_guard<std::recursive_mutex> lock(cache_mu_);
        auto it = laurent_cache_.find(k);
        if (it != laurent_cache_.end()) return it->second;
        Cx<R> one(R(1));
        auto h = [&](const Cx<R>& z) { return xi(z) - one / (z - one) + one / z; };
        Cx<R> hk = cauchy_coeff(h, one, R(0.5), k);
        Cx<R> a = hk - Cx<R>(R(k % 2 ? -1 : 1));
        a.im = 0;
        laurent_cache_[k] = a;
        return a;
    }

    /// Second route: Cauchy coefficients of ξ(s) - 1/(s-1) alone (pole at 0 limits the radius).
    Cx<R> laurent_constant_direct(int k) const {
        Cx<R> one(R(1));
        auto h = [&](const Cx<R>& z) { return xi(z) - one / (z - one); };
        Cx<R> a = cauchy_coeff(h, one, R(0.25), k);
        a.im = 0;
        return a;
    }

    /// ξ^{(d)}(q) at a rational point, cached.
    Cx<R> xi_value(const Rational& q, int d) const {
        {
            std::lock_guard<std::recursive_mutex> lock(cache_mu_);
            auto it = value_cache_.find({q, d});
            if (it != value_cache_.end()) return it->second;
        }
        Cx<R> v = xi_deriv(Cx<R>(real_from_rational<R>(q)), d);
        v.im = 0;
        std::lock_guard<std::recursive_mutex> lock(cache_mu_);
        value_cache_[{q, d}] = v;
        return v;
    }

    /// Taylor coefficient c_k of f at center on a circle of radius r.
    template <class F>
    Cx<R> cauchy_coeff(F&& f, const Cx<R>& center, const R& r, int k) const {
        const int n = static_cast<int>(3.5 * digits_) + 24 + 4 * k;
        Cx<R> acc(R(0));
        for (int j = 0; j < n; ++j) {
            R theta = 2 * pi_ * R(j) / R(n);
            Cx<R> e = cexp(Cx<R>(R(0), theta));
            Cx<R> z = center + e * r;
            Cx<R> ek = cexp(Cx<R>(R(0), -theta * R(k)));
            acc += f(z) * ek;
        }
        using std::pow;
        return acc / (R(n) * pow(r, R(k)));
    }

private:
    static constexpr int kBernoulli = 120;

    static R log_of(const R& x) {
        using std::log;
        return log(x);
    }
    static bool is_int(const R& x) {
        using std::floor;
        return floor(x) == x;
    }
    static R factorial(int k) {
        R f(1);
        for (int i = 2; i <= k; ++i) f *= R(i);
        return f;
    }

    /// n^{-s} from log n.
    static Cx<R> npow(const R& logn, const Cx<R>& s) { return cexp(-(s * logn)); }

    const std::vector<R>& logs_upto(int n) const {
        std::lock_guard<std::recursive_mutex> lock(cache_mu_);
        while (static_cast<int>(logs_.size()) <= n) logs_.push_back(logs_.empty() ? R(0) : log_of(R(logs_.size())));
        return logs_;
    }

    int digits_;
    R eps_, pi_, log_pi_, half_log_2pi_;
    std::vector<R> b2n_;
    mutable std::recursive_mutex cache_mu_;
    mutable std::vector<R> logs_;
    mutable std::map<int, Cx<R>> laurent_cache_;
    mutable std::map<std::pair<Rational, int>, Cx<R>> value_cache_;
};

template <class R>
struct EvalResult {
    Cx<R> value;
    bool near_singular = false;
    std::vector<std::string> offending;
};

/// Numeric evaluation of a SymExpr. Terms are summed in their stored order.
template <class R>
class Evaluator {
public:
    Evaluator(const XiNumerics<R>& num, EvalConfig cfg = {}) : num_(num), cfg_(cfg) {}

    using Point = std::map<std::string, Cx<R>>;

    Cx<R> linear(const LinForm& f, const Point& p) const {
        Cx<R> out(real_from_rational<R>(f.constant()));
        for (const auto& [v, c] : f.coeffs()) out += lookup(p, v) * real_from_rational<R>(c);
        return out;
    }

    Cx<R> poly(const Poly& f, const Point& p) const {
        Cx<R> out(R(0));
        for (const auto& [m, c] : f.terms()) {
            Cx<R> t(real_from_rational<R>(c));
            for (const auto& [v, e] : m)
                for (int k = 0; k < e; ++k) t *= lookup(p, v);
            out += t;
        }
        return out;
    }

    Cx<R> atom(const XiAtom& a, const Point& p, EvalResult<R>* diag = nullptr) const {
        switch (a.kind) {
            case XiAtom::Kind::Laurent:
                return num_.laurent_constant(a.index);
            case XiAtom::Kind::Value:
                return num_.xi_value(a.arg.constant(), a.deriv);
            case XiAtom::Kind::Form: {
                Cx<R> z = linear(a.arg, p);
                R d0 = cabs(z), d1 = cabs(z - Cx<R>(R(1)));
                if (d0 == 0 || d1 == 0)
                    throw PoleError("pole of " + a.str() + " at the evaluation point");
                if (diag && (to_dbl(d0) < cfg_.delta || to_dbl(d1) < cfg_.delta)) {
                    diag->near_singular = true;
                    diag->offending.push_back(a.str());
                }
                return num_.xi_deriv(z, a.deriv);
            }
        }
        return Cx<R>(R(0));
    }

    EvalResult<R> evaluate(const SymExpr& e, const Point& p) const {
        EvalResult<R> res;
        std::map<XiAtom, Cx<R>> cache;
        Cx<R> total(R(0));
        for (const auto& t : e.terms) {
            Cx<R> v(real_from_rational<R>(t.scalar));
            if (!t.num.is_one()) v *= poly(t.num, p);
            for (const auto& [f, x] : t.lin) {
                Cx<R> l = linear(f, p);
                if (x < 0) {
                    if (cabs(l) == 0) throw PoleError("pole of 1/(" + f.str() + ") at the evaluation point");
                    if (to_dbl(cabs(l)) < cfg_.delta) {
                        res.near_singular = true;
                        res.offending.push_back("1/(" + f.str() + ")");
                    }
                }
                v *= ipow(l, x);
            }
            for (const auto& [a, x] : t.xi) {
                auto it = cache.find(a);
                if (it == cache.end()) it = cache.emplace(a, atom(a, p, &res)).first;
                v *= ipow(it->second, x);
            }
            if (!t.expo.is_zero()) v *= cexp(poly(t.expo, p));
            total += v;
        }
        res.value = total;
        return res;
    }

    Cx<R> operator()(const SymExpr& e, const Point& p) const { return evaluate(e, p).value; }

    /// Single-variable convenience.
    Cx<R> at(const SymExpr& e, const std::string& var, const Cx<R>& z) const {
        return evaluate(e, Point{{var, z}}).value;
    }

    const XiNumerics<R>& numerics() const { return num_; }
    const EvalConfig& config() const { return cfg_; }

private:
    static Cx<R> lookup(const Point& p, const std::string& v) {
        auto it = p.find(v);
        if (it == p.end()) throw std::invalid_argument("no value for variable '" + v + "'");
        return it->second;
    }
    static Cx<R> ipow(Cx<R> b, int e) {
        if (e < 0) {
            b = Cx<R>(R(1)) / b;
            e = -e;
        }
        Cx<R> out(R(1));
        while (e > 0) {
            if (e & 1) out *= b;
            e >>= 1;
            if (e) b *= b;
        }
        return out;
    }

    const XiNumerics<R>& num_;
    EvalConfig cfg_;
};

}  // namespace gpzeta
