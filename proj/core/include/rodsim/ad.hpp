#pragma once

// Forward-mode dual numbers used to differentiate element kernels.
// Dual<double, N> carries a gradient, Dual<Dual<double, N>, N> a Hessian.

#include <array>
#include <cmath>
#include <type_traits>

#include <Eigen/Core>

namespace rodsim::ad {

template <typename T, int N>
struct Dual {
    T v;
    std::array<T, N> d;

    Dual() : v(0.0) { d.fill(T(0.0)); }
    Dual(double x) : v(x) { d.fill(T(0.0)); }
    template <typename U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
    Dual(const T& x) : v(x) {
        d.fill(T(0.0));
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (int i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (int i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        const T inv = T(1.0) / o.v;
        const T q = v * inv;
        for (int i = 0; i < N; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
        v = q;
        return *this;
    }
};

inline double value(double x) { return x; }
template <typename T, int N>
double value(const Dual<T, N>& x) {
    return value(x.v);
}

template <typename T, int N>
Dual<T, N> operator-(const Dual<T, N>& a) {
    Dual<T, N> r;
    r.v = -a.v;
    for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
    return r;
}
template <typename T, int N>
Dual<T, N> operator+(const Dual<T, N>& a) {
    return a;
}

template <typename T, int N>
Dual<T, N> operator+(Dual<T, N> a, const Dual<T, N>& b) {
    return a += b;
}
template <typename T, int N>
Dual<T, N> operator-(Dual<T, N> a, const Dual<T, N>& b) {
    return a -= b;
}
template <typename T, int N>
Dual<T, N> operator*(Dual<T, N> a, const Dual<T, N>& b) {
    return a *= b;
}
template <typename T, int N>
Dual<T, N> operator/(Dual<T, N> a, const Dual<T, N>& b) {
    return a /= b;
}

template <typename T, int N>
Dual<T, N> operator+(Dual<T, N> a, double b) {
    a.v += b;
    return a;
}
template <typename T, int N>
Dual<T, N> operator+(double b, Dual<T, N> a) {
    a.v += b;
    return a;
}
template <typename T, int N>
Dual<T, N> operator-(Dual<T, N> a, double b) {
    a.v -= b;
    return a;
}
template <typename T, int N>
Dual<T, N> operator-(double b, const Dual<T, N>& a) {
    Dual<T, N> r = -a;
    r.v += b;
    return r;
}
template <typename T, int N>
Dual<T, N> operator*(Dual<T, N> a, double b) {
    a.v *= b;
    for (int i = 0; i < N; ++i) a.d[i] *= b;
    return a;
}
template <typename T, int N>
Dual<T, N> operator*(double b, Dual<T, N> a) {
    return a * b;
}
template <typename T, int N>
Dual<T, N> operator/(Dual<T, N> a, double b) {
    return a * (1.0 / b);
}
template <typename T, int N>
Dual<T, N> operator/(double a, const Dual<T, N>& b) {
    return Dual<T, N>(a) / b;
}

#define RODSIM_DUAL_COMPARE(op)                                          \
    template <typename T, int N>                                         \
    bool operator op(const Dual<T, N>& a, const Dual<T, N>& b) {         \
        return value(a) op value(b);                                     \
    }                                                                    \
    template <typename T, int N>                                         \
    bool operator op(const Dual<T, N>& a, double b) {                    \
        return value(a) op b;                                            \
    }                                                                    \
    template <typename T, int N>                                         \
    bool operator op(double a, const Dual<T, N>& b) {                    \
        return a op value(b);                                            \
    }
RODSIM_DUAL_COMPARE(<)
RODSIM_DUAL_COMPARE(<=)
RODSIM_DUAL_COMPARE(>)
RODSIM_DUAL_COMPARE(>=)
RODSIM_DUAL_COMPARE(==)
RODSIM_DUAL_COMPARE(!=)
#undef RODSIM_DUAL_COMPARE

// Applies the chain rule for a unary function with value f and slope df.
template <typename T, int N>
Dual<T, N> chain(const Dual<T, N>& a, const T& f, const T& df) {
    Dual<T, N> r;
    r.v = f;
    for (int i = 0; i < N; ++i) r.d[i] = df * a.d[i];
    return r;
}

template <typename T, int N>
Dual<T, N> sqrt(const Dual<T, N>& a) {
    using std::sqrt;
    const T s = sqrt(a.v);
    return chain(a, s, T(0.5) / s);
}
template <typename T, int N>
Dual<T, N> sin(const Dual<T, N>& a) {
    using std::cos;
    using std::sin;
    return chain(a, T(sin(a.v)), T(cos(a.v)));
}
template <typename T, int N>
Dual<T, N> cos(const Dual<T, N>& a) {
    using std::cos;
    using std::sin;
    return chain(a, T(cos(a.v)), T(-sin(a.v)));
}
template <typename T, int N>
Dual<T, N> exp(const Dual<T, N>& a) {
    using std::exp;
    const T e = exp(a.v);
    return chain(a, e, e);
}
template <typename T, int N>
Dual<T, N> log(const Dual<T, N>& a) {
    using std::log;
    return chain(a, T(log(a.v)), T(1.0) / a.v);
}
template <typename T, int N>
Dual<T, N> abs(const Dual<T, N>& a) {
    return value(a) < 0.0 ? -a : a;
}
template <typename T, int N>
Dual<T, N> atan2(const Dual<T, N>& y, const Dual<T, N>& x) {
    using std::atan2;
    Dual<T, N> r;
    r.v = atan2(y.v, x.v);
    const T inv = T(1.0) / (x.v * x.v + y.v * y.v);
    for (int i = 0; i < N; ++i) r.d[i] = (x.v * y.d[i] - y.v * x.d[i]) * inv;
    return r;
}
template <typename T, int N>
bool isfinite(const Dual<T, N>& a) {
    return std::isfinite(value(a));
}

template <int N>
using Grad = Dual<double, N>;
template <int N>
using Hess = Dual<Dual<double, N>, N>;

// Value, gradient and Hessian of a scalar function f: R^N -> R.
// f must be callable with Eigen::Matrix<Hess<N>, N, 1>.
template <int N, typename F>
double gradient_hessian(F&& f, const Eigen::Matrix<double, N, 1>& x,
                        Eigen::Matrix<double, N, 1>& grad,
                        Eigen::Matrix<double, N, N>& hess) {
    Eigen::Matrix<Hess<N>, N, 1> xs;
    for (int i = 0; i < N; ++i) {
        xs[i] = Hess<N>(x[i]);
        xs[i].v.d[i] = 1.0;
        xs[i].d[i] = Grad<N>(1.0);
    }
    const Hess<N> y = f(xs);
    for (int i = 0; i < N; ++i) {
        grad[i] = y.d[i].v;
        for (int j = 0; j < N; ++j) hess(i, j) = y.d[i].d[j];
    }
    return y.v.v;
}

// Value and Jacobian of a vector function f: R^N -> R^M.
template <int N, int M, typename F>
Eigen::Matrix<double, M, 1> jacobian(F&& f, const Eigen::Matrix<double, N, 1>& x,
                                     Eigen::Matrix<double, M, N>& jac) {
    Eigen::Matrix<Grad<N>, N, 1> xs;
    for (int i = 0; i < N; ++i) {
        xs[i] = Grad<N>(x[i]);
        xs[i].d[i] = 1.0;
    }
    const Eigen::Matrix<Grad<N>, M, 1> y = f(xs);
    Eigen::Matrix<double, M, 1> out;
    for (int k = 0; k < M; ++k) {
        out[k] = y[k].v;
        for (int i = 0; i < N; ++i) jac(k, i) = y[k].d[i];
    }
    return out;
}

}  // namespace rodsim::ad

namespace Eigen {

template <typename T, int N>
struct NumTraits<rodsim::ad::Dual<T, N>> : NumTraits<double> {
    using Real = rodsim::ad::Dual<T, N>;
    using NonInteger = rodsim::ad::Dual<T, N>;
    using Literal = rodsim::ad::Dual<T, N>;
    using Nested = rodsim::ad::Dual<T, N>;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 3,
        MulCost = 3
    };
};

template <typename T, int N, typename BinaryOp>
struct ScalarBinaryOpTraits<rodsim::ad::Dual<T, N>, double, BinaryOp> {
    using ReturnType = rodsim::ad::Dual<T, N>;
};
template <typename T, int N, typename BinaryOp>
struct ScalarBinaryOpTraits<double, rodsim::ad::Dual<T, N>, BinaryOp> {
    using ReturnType = rodsim::ad::Dual<T, N>;
};

}  // namespace Eigen
