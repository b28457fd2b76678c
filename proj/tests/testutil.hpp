#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "portnet/elements.hpp"
#include "portnet/rng.hpp"
#include "portnet/twoport.hpp"

namespace portnet::testutil {

inline bool complex_near(const Complex& a, const Complex& b, double tol = 1e-9) {
    return std::abs(a - b) <= tol;
}

inline bool s_near(const SMatrix& a, const SMatrix& b, double tol = 1e-9) {
    return complex_near(a.s11, b.s11, tol) && complex_near(a.s12, b.s12, tol) &&
           complex_near(a.s21, b.s21, tol) && complex_near(a.s22, b.s22, tol);
}

/// Random series/shunt ladder plus its exact ABCD factor recipe.
struct Ladder {
    Subcircuit circuit;
    struct Factor {
        bool series;
        ElementKind kind;
        double value;
    };
    std::vector<Factor> factors;

    AbcdMatrix abcd(Frequency f) const {
        std::vector<AbcdMatrix> stages;
        for (const Factor& fac : factors) {
            Element e;
            e.kind = fac.kind;
            e.value = fac.value;
            e.name = "x";
            const Complex y = element_admittance(e, f);
            stages.push_back(fac.series ? series_impedance(1.0 / y) : shunt_admittance(y));
        }
        if (stages.empty()) stages.push_back(abcd_identity());
        return cascade(stages);
    }

    /// Closed-form S via the chain product. The chain is reciprocal by
    /// construction, so s12 is pinned to s21: the determinant route for s12
    /// cancels catastrophically for DC-blocked chains (|det| products reach
    /// 1e35 while det == 1 algebraically).
    SMatrix s(Frequency f, ReferenceImpedance z0) const {
        SMatrix out = abcd_to_s(abcd(f), z0);
        out.s12 = out.s21;
        return out;
    }
};

/// 1..max_elements elements, series or shunt at random. lc_only restricts
/// kinds to L and C (lossless).
inline Ladder random_ladder(Rng& rng, int max_elements = 6, bool lc_only = false) {
    Ladder out;
    const int n = 1 + static_cast<int>(rng.integer(max_elements));
    int node = 0;
    out.circuit.port1 = Port{"n0", "0"};
    for (int i = 0; i < n; ++i) {
        Element e;
        e.name = "e" + std::to_string(i);
        const int kind_pick = static_cast<int>(rng.integer(lc_only ? 2 : 3));
        switch (kind_pick) {
            case 0:
                e.kind = ElementKind::Inductor;
                e.value = std::exp(rng.uniform(std::log(0.1e-9), std::log(50e-9)));
                break;
            case 1:
                e.kind = ElementKind::Capacitor;
                e.value = std::exp(rng.uniform(std::log(0.05e-12), std::log(10e-12)));
                break;
            default:
                e.kind = ElementKind::Resistor;
                e.value = std::exp(rng.uniform(std::log(5.0), std::log(500.0)));
                break;
        }
        const bool series = rng.bernoulli(0.5);
        if (series) {
            e.node1 = "n" + std::to_string(node);
            ++node;
            e.node2 = "n" + std::to_string(node);
        } else {
            e.node1 = "n" + std::to_string(node);
            e.node2 = "0";
        }
        out.circuit.elements.push_back(e);
        out.factors.push_back({series, e.kind, e.value});
    }
    out.circuit.port2 = Port{"n" + std::to_string(node), "0"};
    return out;
}

/// Unique scratch directory under the system temp dir; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("portnet-" + tag + "-" + std::to_string(++counter) + "-" +
                 std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace portnet::testutil
