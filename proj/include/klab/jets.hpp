// Forward-mode dual numbers over complex scalars, used for exact Wirtinger
// derivatives of metric coefficient functions. z and z-bar are treated as
// independent inputs, so evaluators never call conj(); the conjugate
// coordinates are passed explicitly.
//
// Nesting Dual<Dual<...>> gives mixed partials: each nesting level carries one
// independent infinitesimal direction. Depth 4 (16 complex components) covers
// the deepest consumer, the (2,2)-jets of a Kahler potential.

#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <type_traits>

namespace klab {

using Cx = std::complex<double>;

template <typename T>
struct Dual {
    using Inner = T;

    T a{};  // value
    T b{};  // derivative along this level's direction

    constexpr Dual() = default;
    constexpr Dual(const T& value) : a(value) {}
    constexpr Dual(const T& value, const T& deriv) : a(value), b(deriv) {}

    // broadcast: scalars (double, Cx, shallower duals) promote through all
    // levels, so mixed arithmetic like D3{} * Cx{} resolves
    template <typename S>
        requires(!std::same_as<std::remove_cvref_t<S>, Dual> &&
                 !std::same_as<std::remove_cvref_t<S>, T> && std::constructible_from<T, const S&>)
    constexpr Dual(const S& s) : a(s) {}

    friend constexpr Dual operator+(const Dual& x, const Dual& y) { return {x.a + y.a, x.b + y.b}; }
    friend constexpr Dual operator-(const Dual& x, const Dual& y) { return {x.a - y.a, x.b - y.b}; }
    friend constexpr Dual operator-(const Dual& x) { return {-x.a, -x.b}; }
    friend constexpr Dual operator+(const Dual& x) { return x; }

    friend constexpr Dual operator*(const Dual& x, const Dual& y)
    {
        return {x.a * y.a, x.a * y.b + x.b * y.a};
    }

    friend constexpr Dual operator/(const Dual& x, const Dual& y)
    {
        const T q = x.a / y.a;
        return {q, (x.b - q * y.b) / y.a};
    }

    Dual& operator+=(const Dual& y) { return *this = *this + y; }
    Dual& operator-=(const Dual& y) { return *this = *this - y; }
    Dual& operator*=(const Dual& y) { return *this = *this * y; }
    Dual& operator/=(const Dual& y) { return *this = *this / y; }

    friend Dual exp(const Dual& x)
    {
        using std::exp;
        const T e = exp(x.a);
        return {e, e * x.b};
    }

    friend Dual log(const Dual& x)
    {
        using std::log;
        return {log(x.a), x.b / x.a};
    }

    friend Dual sqrt(const Dual& x)
    {
        using std::sqrt;
        const T r = sqrt(x.a);
        return {r, x.b / (2.0 * r)};
    }

    friend Dual cos(const Dual& x)
    {
        using std::cos;
        using std::sin;
        return {cos(x.a), -sin(x.a) * x.b};
    }

    friend Dual sin(const Dual& x)
    {
        using std::cos;
        using std::sin;
        return {sin(x.a), cos(x.a) * x.b};
    }

    // integer power by repeated squaring is overkill here; metric models use
    // small fixed exponents
    friend Dual pow_int(const Dual& x, int k)
    {
        if (k == 0) return Dual{1.0};
        if (k < 0) return Dual{1.0} / pow_int(x, -k);
        Dual r = x;
        for (int i = 1; i < k; ++i) r = r * x;
        return r;
    }
};

inline Cx pow_int(const Cx& x, int k)
{
    if (k == 0) return Cx{1.0};
    if (k < 0) return Cx{1.0} / pow_int(x, -k);
    Cx r = x;
    for (int i = 1; i < k; ++i) r *= x;
    return r;
}

using D1 = Dual<Cx>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;

// leaf value of an arbitrarily nested dual
inline const Cx& value(const Cx& x) { return x; }
template <typename T>
const Cx& value(const Dual<T>& x) { return value(x.a); }

template <typename T>
struct dual_depth { static constexpr int depth = 0; };
template <typename T>
struct dual_depth<Dual<T>> { static constexpr int depth = 1 + dual_depth<T>::depth; };

}  // namespace klab
