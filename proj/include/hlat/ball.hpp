#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <utility>

namespace hlat {

/* Owning wrapper around an mpfr_t. */
class BigFloat {
  public:
    explicit BigFloat(mpfr_prec_t prec)
    {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(BigFloat const& o)
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept : BigFloat(MPFR_PREC_MIN) { mpfr_swap(v_, o.v_); }
    BigFloat& operator=(BigFloat o) noexcept
    {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  private:
    mpfr_t v_;
};

/* Midpoint-radius real ball. Every operation returns a ball that contains
 * the exact result of the operation applied to any points of the inputs. */
class Ball {
  public:
    explicit Ball(mpfr_prec_t prec);
    static Ball exact(mpq_class const& q, mpfr_prec_t prec);
    static Ball cos_2pi(unsigned long num, unsigned long den, mpfr_prec_t prec);
    static Ball sin_2pi(unsigned long num, unsigned long den, mpfr_prec_t prec);
    static Ball sqrt(unsigned long n, mpfr_prec_t prec);

    BigFloat const& mid() const { return mid_; }
    BigFloat const& rad() const { return rad_; }
    mpfr_prec_t prec() const { return mid_.prec(); }

    /* +1 or -1 when the sign is certain, 0 otherwise. */
    int certified_sign() const;
    bool contains_zero() const { return certified_sign() == 0; }

    friend Ball operator+(Ball const& a, Ball const& b);
    friend Ball operator-(Ball const& a, Ball const& b);
    friend Ball operator*(Ball const& a, Ball const& b);
    Ball operator-() const;

  private:
    static Ball trig_2pi(unsigned long num, unsigned long den, mpfr_prec_t prec, bool cosine);
    void add_rounding_error();

    BigFloat mid_;
    BigFloat rad_;
};

}  // namespace hlat
