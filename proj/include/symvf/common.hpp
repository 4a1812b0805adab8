#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace symvf {

// Fixed-capacity vector for states and inputs. All benchmark systems have
// dimension <= 4; the extra slots are headroom.
inline constexpr int kMaxDim = 6;

class Vec {
public:
    Vec() = default;
    explicit Vec(int n, double fill = 0.0) : n_(n) {
        check_size(n);
        for (int i = 0; i < n; ++i) v_[i] = fill;
    }
    Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
        check_size(n_);
        int i = 0;
        for (double x : xs) v_[i++] = x;
    }
    static Vec from(std::span<const double> xs) {
        Vec out;
        out.n_ = static_cast<int>(xs.size());
        check_size(out.n_);
        for (int i = 0; i < out.n_; ++i) out.v_[i] = xs[i];
        return out;
    }

    int size() const { return n_; }
    double& operator[](int i) { return v_[i]; }
    double operator[](int i) const { return v_[i]; }
    const double* data() const { return v_; }
    double* data() { return v_; }
    const double* begin() const { return v_; }
    const double* end() const { return v_ + n_; }
    void push_back(double x) {
        check_size(n_ + 1);
        v_[n_++] = x;
    }
    std::span<const double> span() const { return {v_, static_cast<size_t>(n_)}; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.n_ != b.n_) return false;
        return std::equal(a.begin(), a.end(), b.begin());
    }

private:
    static void check_size(int n) {
        if (n < 0 || n > kMaxDim) throw std::length_error("Vec: dimension out of range");
    }
    double v_[kMaxDim] = {};
    int n_ = 0;
};

inline bool all_finite(const Vec& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

inline std::vector<double> linspace(double lo, double hi, int count, bool include_hi = true) {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    if (count == 1) {
        out.push_back(0.5 * (lo + hi));
        return out;
    }
    const double step = (hi - lo) / (include_hi ? count - 1 : count);
    for (int i = 0; i < count; ++i) out.push_back(lo + step * i);
    return out;
}

// 17 significant digits: enough for exact double round trips.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// FNV-1a over raw bytes; used for dataset/config fingerprints.
inline std::uint64_t fnv1a(const void* data, size_t len, std::uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a(const std::vector<double>& xs, std::uint64_t h = 1469598103934665603ull) {
    return fnv1a(xs.data(), xs.size() * sizeof(double), h);
}

} // namespace symvf
