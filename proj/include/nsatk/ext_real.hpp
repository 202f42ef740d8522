#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nsatk {

// Extended real value: a finite double, +infinity or -infinity.
// NaN is rejected at construction so arithmetic faults surface immediately
// instead of propagating. (+inf) + (-inf) throws rather than yielding NaN.
class ExtReal {
public:
    constexpr ExtReal() noexcept : v_(0.0) {}
    ExtReal(double v) : v_(v) {
        if (std::isnan(v)) throw std::domain_error("ExtReal: NaN is not a value");
    }

    static ExtReal pos_inf() noexcept { return ExtReal(tag{}, std::numeric_limits<double>::infinity()); }
    static ExtReal neg_inf() noexcept { return ExtReal(tag{}, -std::numeric_limits<double>::infinity()); }

    double raw() const noexcept { return v_; }
    bool finite() const noexcept { return std::isfinite(v_); }
    bool is_pos_inf() const noexcept { return std::isinf(v_) && v_ > 0; }
    bool is_neg_inf() const noexcept { return std::isinf(v_) && v_ < 0; }

    ExtReal operator-() const noexcept { return ExtReal(tag{}, -v_); }

    ExtReal operator+(ExtReal o) const {
        if ((is_pos_inf() && o.is_neg_inf()) || (is_neg_inf() && o.is_pos_inf()))
            throw std::domain_error("ExtReal: (+inf) + (-inf)");
        return ExtReal(tag{}, v_ + o.v_);
    }
    ExtReal operator-(ExtReal o) const { return *this + (-o); }

    // Scaling by a finite real. 0 * inf is indeterminate and throws.
    ExtReal scaled(double c) const {
        if (std::isnan(c) || std::isinf(c)) throw std::domain_error("ExtReal: non-finite scale factor");
        if (c == 0.0 && !finite()) throw std::domain_error("ExtReal: 0 * inf");
        return ExtReal(tag{}, c * v_);
    }
    // Division by a nonzero finite real.
    ExtReal divided(double c) const {
        if (!(c != 0.0) || std::isnan(c) || std::isinf(c))
            throw std::domain_error("ExtReal: bad divisor");
        return ExtReal(tag{}, v_ / c);
    }

    // The usual total order -inf < finite < +inf.
    friend bool operator<(ExtReal a, ExtReal b) noexcept { return a.v_ < b.v_; }
    friend bool operator>(ExtReal a, ExtReal b) noexcept { return a.v_ > b.v_; }
    friend bool operator<=(ExtReal a, ExtReal b) noexcept { return a.v_ <= b.v_; }
    friend bool operator>=(ExtReal a, ExtReal b) noexcept { return a.v_ >= b.v_; }
    friend bool operator==(ExtReal a, ExtReal b) noexcept { return a.v_ == b.v_; }
    friend bool operator!=(ExtReal a, ExtReal b) noexcept { return a.v_ != b.v_; }

    friend ExtReal min(ExtReal a, ExtReal b) noexcept { return a < b ? a : b; }
    friend ExtReal max(ExtReal a, ExtReal b) noexcept { return a > b ? a : b; }

    std::string str() const {
        if (is_pos_inf()) return "inf";
        if (is_neg_inf()) return "-inf";
        return std::to_string(v_);
    }

private:
    struct tag {};
    constexpr ExtReal(tag, double v) noexcept : v_(v) {}
    double v_;
};

// |a - b| treating equal infinities as distance 0 and mixed as +inf.
inline double ext_distance(ExtReal a, ExtReal b) noexcept {
    if (a == b) return 0.0;
    if (!a.finite() || !b.finite()) return std::numeric_limits<double>::infinity();
    return std::fabs(a.raw() - b.raw());
}

// a <= b + slack with the slack applied only between finite values.
inline bool leq_with_slack(ExtReal a, ExtReal b, double slack) noexcept {
    if (a.is_neg_inf() || b.is_pos_inf()) return true;
    if (a.is_pos_inf() || b.is_neg_inf()) return false;
    return a.raw() <= b.raw() + slack;
}

} // namespace nsatk
