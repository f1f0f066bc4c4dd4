#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace c2l {

using Scalar = double;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Index = Eigen::Index;

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// splitmix64 mix, used to derive independent substream seeds.
inline uint64_t derive_seed(uint64_t base, uint64_t idx) {
    uint64_t z = base + 0x9e3779b97f4a7c15ULL * (idx + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a, for seeding from strings (stable across platforms, unlike std::hash).
inline uint64_t hash_string(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Deterministic Gaussian/uniform stream. Normal variates use Box-Muller on
// top of mt19937_64 so sequences do not depend on the standard library's
// distribution implementation.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // inclusive range
    int64_t uniform_int(int64_t lo, int64_t hi) {
        const uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int64_t>(gen_() % range);
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * M_PI * u2;
        spare_ = r * std::sin(th);
        has_spare_ = true;
        return r * std::cos(th);
    }

    VecX normal_vec(Index n) {
        VecX v(n);
        for (Index i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    std::string serialize_state() const {
        std::ostringstream os;
        os << gen_ << ' ' << has_spare_ << ' ' << spare_;
        return os.str();
    }

    void restore_state(const std::string& s) {
        std::istringstream is(s);
        is >> gen_ >> has_spare_ >> spare_;
        if (is.fail()) throw IoError("corrupt rng state");
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace c2l
