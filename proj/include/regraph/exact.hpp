#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <vector>

#include "regraph/errors.hpp"

namespace regraph {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <typename T>
inline bool exact_is_zero(const T& v) {
    return v == T(0);
}

// Dense row-major matrix with exact entries. Small sizes only (2E <= ~60 for
// certification runs), so the quadratic storage is fine.
template <typename T>
class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols, T init = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, init) {}

    static ExactMatrix identity(std::size_t n) {
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    ExactMatrix operator*(const ExactMatrix& o) const {
        ExactMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (exact_is_zero(a)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    if (exact_is_zero(o(k, j))) continue;
                    r(i, j) += a * o(k, j);
                }
            }
        return r;
    }

    T trace() const {
        T t(0);
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
        return t;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

// Bareiss fraction-free elimination: exact determinant of an integer matrix
// with single-division steps, keeping intermediate entries small.
inline BigInt bareiss_determinant(ExactMatrix<BigInt> m) {
    const std::size_t n = m.rows();
    if (n == 0) return BigInt(1);
    BigInt prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return BigInt(0);
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                BigInt t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                m(i, j) = t / prev;  // exact by Sylvester's identity
            }
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

// Determinant of a rational matrix: clear denominators row by row, then run
// Bareiss on the integer matrix.
inline Rational rational_determinant(const ExactMatrix<Rational>& m) {
    const std::size_t n = m.rows();
    ExactMatrix<BigInt> im(n, n);
    Rational scale(1);
    for (std::size_t i = 0; i < n; ++i) {
        BigInt lcm(1);
        for (std::size_t j = 0; j < n; ++j) {
            BigInt den = boost::multiprecision::denominator(m(i, j));
            lcm = boost::multiprecision::lcm(lcm, den);
        }
        for (std::size_t j = 0; j < n; ++j) {
            Rational v = m(i, j) * Rational(lcm);
            im(i, j) = boost::multiprecision::numerator(v);
        }
        scale /= Rational(lcm);
    }
    return Rational(bareiss_determinant(std::move(im))) * scale;
}

// Characteristic polynomial of a rational matrix by Faddeev-LeVerrier:
// det(x I - A) = sum_k c[k] x^(n-k) with c[0] = 1. Exact, O(n^4) products.
inline std::vector<Rational> char_poly(const ExactMatrix<Rational>& a) {
    const std::size_t n = a.rows();
    std::vector<Rational> c(n + 1);
    c[0] = 1;
    ExactMatrix<Rational> m = ExactMatrix<Rational>::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        if (k > 1) {
            // m = a * m_prev + c[k-1] I
            for (std::size_t i = 0; i < n; ++i) m(i, i) += c[k - 1];
        }
        ExactMatrix<Rational> am = a * m;
        c[k] = -am.trace() / Rational(static_cast<long>(k));
        m = std::move(am);
    }
    return c;
}

// Dense polynomial with exact coefficients, lowest degree first.
template <typename T>
struct Poly {
    std::vector<T> c;

    Poly() = default;
    explicit Poly(T constant) : c{std::move(constant)} {}
    static Poly monomial(T coeff, std::size_t deg) {
        Poly p;
        p.c.assign(deg + 1, T(0));
        p.c[deg] = std::move(coeff);
        return p;
    }

    std::size_t degree() const { return c.empty() ? 0 : c.size() - 1; }
    T coeff(std::size_t k) const { return k < c.size() ? c[k] : T(0); }

    void trim() {
        while (!c.empty() && c.back() == T(0)) c.pop_back();
    }

    Poly& operator+=(const Poly& o) {
        if (o.c.size() > c.size()) c.resize(o.c.size(), T(0));
        for (std::size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
    Poly operator+(const Poly& o) const {
        Poly r = *this;
        r += o;
        return r;
    }
    Poly operator-(const Poly& o) const {
        Poly r = *this;
        if (o.c.size() > r.c.size()) r.c.resize(o.c.size(), T(0));
        for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] -= o.c[i];
        return r;
    }
    Poly operator*(const Poly& o) const {
        if (c.empty() || o.c.empty()) return Poly();
        Poly r;
        r.c.assign(c.size() + o.c.size() - 1, T(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == T(0)) continue;
            for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        }
        return r;
    }

    Poly pow(std::size_t e) const {
        Poly r(T(1));
        Poly base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    template <typename X>
    X eval(const X& x) const {
        X acc(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + X(c[i]);
        return acc;
    }

    // Derivative evaluated at x.
    template <typename X>
    X eval_derivative(const X& x) const {
        X acc(0);
        for (std::size_t i = c.size(); i-- > 1;) acc = acc * x + X(c[i]) * X(static_cast<long>(i));
        return acc;
    }

    bool is_zero() const {
        for (const T& v : c)
            if (v != T(0)) return false;
        return true;
    }

    bool operator==(const Poly& o) const {
        Poly a = *this, b = o;
        a.trim();
        b.trim();
        return a.c == b.c;
    }
};

template <typename T>
inline bool exact_is_zero(const Poly<T>& p) {
    return p.is_zero();
}

using IPoly = Poly<BigInt>;
using QPoly = Poly<Rational>;

// Element of the quadratic extension Q[sqrt(D)] for a fixed non-square D.
// Used where half-integer powers of (d-1) appear in exact identities.
struct QuadExt {
    Rational a, b;  // value = a + b sqrt(D)
    long D = 0;

    QuadExt() = default;
    QuadExt(Rational a_, Rational b_, long D_) : a(std::move(a_)), b(std::move(b_)), D(D_) {}
    static QuadExt rational(Rational v, long D_) { return QuadExt(std::move(v), 0, D_); }
    static QuadExt sqrtD(long D_) { return QuadExt(0, 1, D_); }

    QuadExt operator+(const QuadExt& o) const { return {a + o.a, b + o.b, D}; }
    QuadExt operator-(const QuadExt& o) const { return {a - o.a, b - o.b, D}; }
    QuadExt operator*(const QuadExt& o) const {
        return {a * o.a + Rational(D) * b * o.b, a * o.b + b * o.a, D};
    }
    QuadExt operator*(const Rational& r) const { return {a * r, b * r, D}; }
    QuadExt inverse() const {
        Rational n = a * a - Rational(D) * b * b;
        if (n == 0) throw Error(errc::bad_input, "division by zero in Q[sqrt(D)]");
        return {a / n, -b / n, D};
    }
    QuadExt operator/(const QuadExt& o) const { return *this * o.inverse(); }
    bool is_zero() const { return a == 0 && b == 0; }
    bool operator==(const QuadExt& o) const { return a == o.a && b == o.b; }

    // (a + b sqrt(D))^k by repeated squaring; k >= 0.
    QuadExt pow(long k) const {
        QuadExt r = rational(1, D);
        QuadExt base = *this;
        for (; k > 0; k >>= 1) {
            if (k & 1) r = r * base;
            base = base * base;
        }
        return r;
    }
};

}  // namespace regraph
