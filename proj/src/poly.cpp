#include "hlat/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace hlat {

QPoly::QPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) { trim(); }

QPoly QPoly::constant(mpq_class c) { return QPoly(std::vector<mpq_class>{std::move(c)}); }

QPoly QPoly::x() { return QPoly(std::vector<mpq_class>{0, 1}); }

void QPoly::trim()
{
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

mpq_class QPoly::operator()(mpq_class const& t) const
{
    mpq_class r = 0;
    for (std::size_t i = c_.size(); i-- > 0;)
        r = r * t + c_[i];
    return r;
}

QPoly QPoly::derivative() const
{
    std::vector<mpq_class> d;
    for (std::size_t i = 1; i < c_.size(); ++i)
        d.push_back(c_[i] * static_cast<unsigned long>(i));
    return QPoly(std::move(d));
}

QPoly QPoly::monic() const
{
    if (is_zero()) return *this;
    std::vector<mpq_class> m = c_;
    mpq_class const l = lead();
    for (auto& v : m)
        v /= l;
    return QPoly(std::move(m));
}

QPoly operator+(QPoly const& a, QPoly const& b)
{
    std::vector<mpq_class> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = a.coeff(i) + b.coeff(i);
    return QPoly(std::move(r));
}

QPoly operator-(QPoly const& a, QPoly const& b)
{
    std::vector<mpq_class> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = a.coeff(i) - b.coeff(i);
    return QPoly(std::move(r));
}

QPoly operator*(QPoly const& a, QPoly const& b)
{
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpq_class> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            r[i + j] += a.c_[i] * b.c_[j];
    return QPoly(std::move(r));
}

QPoly operator*(mpq_class const& s, QPoly const& a)
{
    std::vector<mpq_class> r = a.c_;
    for (auto& v : r)
        v *= s;
    return QPoly(std::move(r));
}

std::string QPoly::str() const
{
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[i];
        if (i >= 1) os << "*X";
        if (i >= 2) os << '^' << i;
    }
    return os.str();
}

std::pair<QPoly, QPoly> divmod(QPoly const& a, QPoly const& b)
{
    if (b.is_zero()) throw std::domain_error("QPoly division by zero");
    std::vector<mpq_class> rem = a.coeffs();
    int const db = b.degree();
    if (a.degree() < db) return {QPoly(), a};
    std::vector<mpq_class> q(static_cast<std::size_t>(a.degree() - db + 1));
    for (int i = a.degree(); i >= db; --i) {
        mpq_class const f = rem[static_cast<std::size_t>(i)] / b.lead();
        q[static_cast<std::size_t>(i - db)] = f;
        if (f == 0) continue;
        for (int j = 0; j <= db; ++j)
            rem[static_cast<std::size_t>(i - db + j)] -= f * b.coeff(static_cast<std::size_t>(j));
    }
    rem.resize(static_cast<std::size_t>(db));
    return {QPoly(std::move(q)), QPoly(std::move(rem))};
}

QPoly gcd(QPoly const& a, QPoly const& b)
{
    QPoly x = a, y = b;
    while (!y.is_zero()) {
        QPoly r = divmod(x, y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

std::optional<QPoly> monic_sqrt(QPoly const& a)
{
    if (a.is_zero() || a.degree() % 2 != 0 || a.lead() != 1) return std::nullopt;
    int const d = a.degree() / 2;
    std::vector<mpq_class> q(static_cast<std::size_t>(d + 1));
    q[static_cast<std::size_t>(d)] = 1;
    // coefficient of X^(d+k) in q^2 determines q[k] from the top down
    for (int k = d - 1; k >= 0; --k) {
        mpq_class s = a.coeff(static_cast<std::size_t>(d + k));
        for (int i = k + 1; i <= d; ++i) {
            int const j = d + k - i;
            if (j > k && j <= d) s -= q[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(j)];
        }
        q[static_cast<std::size_t>(k)] = s / 2;
    }
    QPoly r(std::move(q));
    if (r * r != a) return std::nullopt;
    return r;
}

QPoly cyclotomic_prime(unsigned long p)
{
    return QPoly(std::vector<mpq_class>(p, mpq_class(1)));
}

QPoly charpoly(RatMatrix const& a)
{
    if (!a.is_square()) throw std::invalid_argument("charpoly: matrix is not square");
    std::size_t const n = a.rows();
    std::vector<mpq_class> c(n + 1);
    c[n] = 1;
    RatMatrix m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        RatMatrix am = a * m;
        for (std::size_t i = 0; i < n; ++i)
            am(i, i) += c[n - k + 1];
        m = std::move(am);
        RatMatrix prod = a * m;
        mpq_class tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            tr += prod(i, i);
        c[n - k] = -tr / static_cast<unsigned long>(k);
    }
    return QPoly(std::move(c));
}

namespace {

int sign_at(QPoly const& f, std::optional<mpq_class> const& t, int infinity_dir)
{
    if (f.is_zero()) return 0;
    if (t) return sgn(f(*t));
    int s = sgn(f.lead());
    if (infinity_dir < 0 && f.degree() % 2 == 1) s = -s;
    return s;
}

int variations(std::vector<QPoly> const& seq, std::optional<mpq_class> const& t, int infinity_dir)
{
    int v = 0, last = 0;
    for (auto const& f : seq) {
        int const s = sign_at(f, t, infinity_dir);
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

}  // namespace

int sturm_count(QPoly const& f, std::optional<mpq_class> const& a, std::optional<mpq_class> const& b)
{
    if (f.is_zero()) throw std::invalid_argument("sturm_count: zero polynomial");
    // square-free part keeps the count of distinct roots
    QPoly g = divmod(f, gcd(f, f.derivative())).first;
    std::vector<QPoly> seq{g, g.derivative()};
    while (!seq.back().is_zero()) {
        QPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
        seq.push_back(mpq_class(-1) * r);
    }
    seq.pop_back();
    return variations(seq, a, -1) - variations(seq, b, +1);
}

}  // namespace hlat
