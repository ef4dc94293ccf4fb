#include "hlat/ball.hpp"

namespace hlat {

namespace {

constexpr mpfr_prec_t kRadPrec = 64;

/* r += |x| * 2^shift, rounded up. */
void add_scaled_abs(BigFloat& r, mpfr_srcptr x, long shift)
{
    BigFloat t(kRadPrec);
    mpfr_abs(t.get(), x, MPFR_RNDU);
    mpfr_mul_2si(t.get(), t.get(), shift, MPFR_RNDU);
    mpfr_add(r.get(), r.get(), t.get(), MPFR_RNDU);
}

}  // namespace

Ball::Ball(mpfr_prec_t prec) : mid_(prec), rad_(kRadPrec) {}

void Ball::add_rounding_error()
{
    // round-to-nearest error is at most |mid| 2^-prec; doubled for the stored value
    add_scaled_abs(rad_, mid_.get(), 1 - static_cast<long>(prec()));
}

Ball Ball::exact(mpq_class const& q, mpfr_prec_t prec)
{
    Ball b(prec);
    int const inexact = mpfr_set_q(b.mid_.get(), q.get_mpq_t(), MPFR_RNDN);
    if (inexact != 0) b.add_rounding_error();
    return b;
}

Ball Ball::trig_2pi(unsigned long num, unsigned long den, mpfr_prec_t prec, bool cosine)
{
    mpfr_prec_t const work = prec + 16;
    BigFloat angle(work);
    mpfr_const_pi(angle.get(), MPFR_RNDN);
    mpfr_mul_ui(angle.get(), angle.get(), 2 * num, MPFR_RNDN);
    mpfr_div_ui(angle.get(), angle.get(), den, MPFR_RNDN);
    BigFloat val(work);
    if (cosine)
        mpfr_cos(val.get(), angle.get(), MPFR_RNDN);
    else
        mpfr_sin(val.get(), angle.get(), MPFR_RNDN);
    Ball out(prec);
    mpfr_set(out.mid_.get(), val.get(), MPFR_RNDN);
    out.add_rounding_error();
    // angle carries at most 4 roundings at the working precision, |trig'| <= 1
    BigFloat err(64);
    mpfr_set_ui(err.get(), 1, MPFR_RNDU);
    mpfr_add_ui(err.get(), err.get(), 2 * num / den + 8, MPFR_RNDU);
    mpfr_mul_2si(err.get(), err.get(), 3 - static_cast<long>(prec), MPFR_RNDU);
    mpfr_add(out.rad_.get(), out.rad_.get(), err.get(), MPFR_RNDU);
    return out;
}

Ball Ball::cos_2pi(unsigned long num, unsigned long den, mpfr_prec_t prec) { return trig_2pi(num, den, prec, true); }

Ball Ball::sin_2pi(unsigned long num, unsigned long den, mpfr_prec_t prec) { return trig_2pi(num, den, prec, false); }

Ball Ball::sqrt(unsigned long n, mpfr_prec_t prec)
{
    Ball b(prec);
    int const inexact = mpfr_sqrt_ui(b.mid_.get(), n, MPFR_RNDN);
    if (inexact != 0) b.add_rounding_error();
    return b;
}

int Ball::certified_sign() const
{
    BigFloat lo(prec() + 8);
    mpfr_abs(lo.get(), mid_.get(), MPFR_RNDD);
    if (mpfr_cmp(lo.get(), rad_.get()) <= 0) return 0;
    return mpfr_sgn(mid_.get()) > 0 ? 1 : -1;
}

Ball operator+(Ball const& a, Ball const& b)
{
    Ball r(std::max(a.prec(), b.prec()));
    int const inexact = mpfr_add(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
    mpfr_add(r.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
    if (inexact != 0) r.add_rounding_error();
    return r;
}

Ball Ball::operator-() const
{
    Ball r = *this;
    mpfr_neg(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
    return r;
}

Ball operator-(Ball const& a, Ball const& b) { return a + (-b); }

Ball operator*(Ball const& a, Ball const& b)
{
    Ball r(std::max(a.prec(), b.prec()));
    int const inexact = mpfr_mul(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
    BigFloat t(kRadPrec);
    BigFloat u(kRadPrec);
    // |a.mid| b.rad + |b.mid| a.rad + a.rad b.rad
    mpfr_abs(t.get(), a.mid_.get(), MPFR_RNDU);
    mpfr_mul(t.get(), t.get(), b.rad_.get(), MPFR_RNDU);
    mpfr_abs(u.get(), b.mid_.get(), MPFR_RNDU);
    mpfr_mul(u.get(), u.get(), a.rad_.get(), MPFR_RNDU);
    mpfr_add(t.get(), t.get(), u.get(), MPFR_RNDU);
    mpfr_mul(u.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
    mpfr_add(t.get(), t.get(), u.get(), MPFR_RNDU);
    mpfr_add(r.rad_.get(), r.rad_.get(), t.get(), MPFR_RNDU);
    if (inexact != 0) r.add_rounding_error();
    return r;
}

}  // namespace hlat
