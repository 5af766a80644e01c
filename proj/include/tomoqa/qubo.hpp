#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tomoqa/geometry.hpp"

namespace tomoqa {

struct QuadTerm {
    int i;
    int j;  // i < j always
    double value;
};

// minimize  sum_i linear[i] x_i + sum_{i<j} q_ij x_i x_j + offset  over
// binary x. Quadratic terms are stored once in the upper triangle, sorted
// by (i, j).
struct QuboModel {
    int n = 0;
    std::vector<double> linear;
    std::vector<QuadTerm> quadratic;
    double offset = 0.0;
};

// Spin form: sum h_i s_i + sum_{i<j} J_ij s_i s_j + offset over s in {-1,1}.
struct IsingModel {
    int n = 0;
    std::vector<double> h;
    std::vector<QuadTerm> couplings;
    double offset = 0.0;
};

// Maps pixel i to binary variables b_{i*bits + r} with weights 2^r.
struct IntegerEncoding {
    int num_values = 0;
    int bits = 1;

    int num_binary() const { return num_values * bits; }
    std::vector<int> decode(std::span<const std::uint8_t> assignment) const;
    std::vector<std::uint8_t> encode(std::span<const int> values) const;
};

// Coefficients with magnitude below drop_threshold are discarded during
// construction to keep the models sparse.
inline constexpr double kDefaultDropThreshold = 1e-12;

// QUBO whose energy at any binary x equals ||Mx - y||^2. The diagonal of
// M^T M folds into the linear terms (x_i^2 = x_i) and symmetric
// off-diagonal pairs fold into the single upper-triangular slot.
QuboModel build_binary_qubo(const SystemMatrix& m, std::span<const double> y,
                            double drop_threshold = kDefaultDropThreshold);

// R-bit integer variables expanded into binary via x_i = sum_r 2^r b_{i,r}.
std::pair<QuboModel, IntegerEncoding> build_integer_qubo(
    const SystemMatrix& m, std::span<const double> y, int bits,
    double drop_threshold = kDefaultDropThreshold);

double qubo_energy(const QuboModel& q, std::span<const std::uint8_t> x);
double ising_energy(const IsingModel& m, std::span<const std::int8_t> s);

// x = (s + 1)/2 substitution; energies match for corresponding assignments.
IsingModel qubo_to_ising(const QuboModel& q);
QuboModel ising_to_qubo(const IsingModel& m);

// Text format: first line "n offset", then "i i value" linear terms and
// "i j value" (i < j) quadratic terms, 17-significant-digit decimals.
void export_qubo(const QuboModel& q, const std::string& path);
QuboModel import_qubo(const std::string& path);

}  // namespace tomoqa
