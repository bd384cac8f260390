// Analytic CNOT-count estimate for a Schmidt compressor with blocks of n_a
// and n_b qubits (n_b <= n_a) and Schmidt measure m.
//
//   isometry m -> s qubits : 2^{m+s} - 2^s / 24   (O(s^2) 2^m term omitted)
//   unitary on s qubits    : 23/48 4^s - 3/2 2^s + 4/3
//
// Values are kept as exact rationals (denominator 48) so the ceilings in
// total_ceil do not pick up floating-point noise.

#pragma once

#include "sqc/compressor.hpp"
#include "sqc/core/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace sqc {

enum class CostCase { iso_iso, iso_uni, uni_uni };

inline std::string_view to_string(CostCase c) {
    switch (c) {
        case CostCase::iso_iso: return "iso-iso";
        case CostCase::iso_uni: return "iso-uni";
        case CostCase::uni_uni: return "uni-uni";
    }
    return "iso-iso";
}

struct CostReport {
    CostCase cost_case = CostCase::iso_iso;
    int n_a = 0;
    int n_b = 0;
    int m = 0;
    double cnot_a = 0.0;
    double cnot_b = 0.0;
    int cnot_entangle = 0;
    std::int64_t total_ceil = 0;
};

namespace detail {

// value / 48 with value an exact integer.
struct Per48 {
    std::int64_t num = 0;
    double value() const { return static_cast<double>(num) / 48.0; }
    std::int64_t ceil() const { return num >= 0 ? (num + 47) / 48 : -((-num) / 48); }
};

inline Per48 isometry_cost(int m, int s) {
    return {48 * (std::int64_t{1} << (m + s)) - 2 * (std::int64_t{1} << s)};
}

inline Per48 unitary_cost(int s) {
    return {23 * (std::int64_t{1} << (2 * s)) - 72 * (std::int64_t{1} << s) + 64};
}

}  // namespace detail

inline CostReport cnot_count(int n_a, int n_b, int m) {
    if (n_b < 1 || n_b > n_a) {
        throw InvalidArgument("cost model needs 1 <= n_b <= n_a (got n_a=" + std::to_string(n_a) +
                              ", n_b=" + std::to_string(n_b) + ")");
    }
    if (m < 0 || m > n_b) {
        throw InvalidArgument("Schmidt measure must lie in [0, n_b]");
    }
    if (n_a + n_b > 30) {
        throw SizeError("cost model limited to 30 qubits");
    }
    CostReport r;
    r.n_a = n_a;
    r.n_b = n_b;
    r.m = m;
    detail::Per48 a, b;
    if (m < n_b) {
        r.cost_case = CostCase::iso_iso;
        a = detail::isometry_cost(m, n_a);
        b = detail::isometry_cost(m, n_b);
        r.cnot_entangle = m;
    } else if (n_b < n_a) {
        r.cost_case = CostCase::iso_uni;
        // A: isometry from n_b to n_a qubits, 2^{n} - 2^{n_a}/24
        a = detail::isometry_cost(n_b, n_a);
        b = detail::unitary_cost(n_b);
        r.cnot_entangle = n_b;
    } else {
        r.cost_case = CostCase::uni_uni;
        a = detail::unitary_cost(n_a);
        b = detail::unitary_cost(n_b);
        r.cnot_entangle = n_b;
    }
    r.cnot_a = a.value();
    r.cnot_b = b.value();
    r.total_ceil = a.ceil() + b.ceil() + r.cnot_entangle;
    return r;
}

/// Cost of a built compressor, using block sizes ordered so n_a >= n_b.
inline CostReport cost_of_model(const CompressorModel& model) {
    const auto [canon, swapped] = model.bipartition.canonicalized();
    (void)swapped;
    return cnot_count(canon.n_a(), canon.n_b(), model.schmidt.measure);
}

}  // namespace sqc
