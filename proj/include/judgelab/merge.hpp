#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "judgelab/common.hpp"

namespace judgelab::merge {

struct MergeConfig {
    double t = 0.5;                            // interpolation ratio in [0,1]
    double parallel_threshold = 1.0 - 1e-7;    // |cos| at or above this falls back to lerp
};

/// Spherical linear interpolation between two same-length vectors. The angle
/// comes from the unit-normalized directions; the sine weights apply to the
/// raw vectors, so magnitudes interpolate along with direction. Nearly
/// (anti)parallel directions fall back to linear interpolation, and the
/// endpoints t=0 and t=1 reproduce the inputs exactly.
template <typename DerivedA, typename DerivedB>
Eigen::Vector<typename DerivedA::Scalar, Eigen::Dynamic> slerp(
    const Eigen::MatrixBase<DerivedA>& a_expr, const Eigen::MatrixBase<DerivedB>& b_expr,
    typename DerivedA::Scalar t,
    typename DerivedA::Scalar parallel_threshold =
        typename DerivedA::Scalar(1) - typename DerivedA::Scalar(1e-7)) {
    using Scalar = typename DerivedA::Scalar;
    using Vec = Eigen::Vector<Scalar, Eigen::Dynamic>;

    Vec a = a_expr;
    Vec b = b_expr;
    if (a.size() != b.size())
        throw DataError("slerp: length mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
    if (a.size() == 0) throw DataError("slerp: empty vectors");

    const Scalar norm_a = a.norm();
    const Scalar norm_b = b.norm();
    if (!(norm_a > Scalar(0)) || !(norm_b > Scalar(0)))
        throw DataError("slerp: zero vector");

    if (t == Scalar(0)) return a;
    if (t == Scalar(1)) return b;

    Scalar cos_omega = (a / norm_a).dot(b / norm_b);
    cos_omega = std::clamp(cos_omega, Scalar(-1), Scalar(1));
    if (std::abs(cos_omega) >= parallel_threshold)
        return ((Scalar(1) - t) * a + t * b).eval();

    const Scalar omega = std::acos(cos_omega);
    const Scalar sin_omega = std::sin(omega);
    const Scalar wa = std::sin((Scalar(1) - t) * omega) / sin_omega;
    const Scalar wb = std::sin(t * omega) / sin_omega;
    return (wa * a + wb * b).eval();
}

/// A named parameter tensor: row-major flattened float32 values.
struct Tensor {
    std::vector<std::int64_t> shape;
    std::vector<float> values;

    std::int64_t element_count() const;
};

struct WeightMap {
    std::map<std::string, Tensor> tensors;  // canonical (sorted) key order
};

/// Per-tensor slerp over flattened values, computed in double precision.
/// Requires identical key sets (error lists the symmetric difference) and
/// identical shapes (error names the tensor).
WeightMap merge_checkpoints(const WeightMap& a, const WeightMap& b,
                            const MergeConfig& cfg = {});

/// Checkpoint I/O. Two layouts:
///   - directory: manifest.json mapping tensor name -> shape + data file,
///     each data file a flat little-endian float32 dump;
///   - single "*.json" file with inline value arrays, for small fixtures.
/// Values must be finite and match the shape's element count.
WeightMap load_weights(const std::string& path);
void save_weights(const WeightMap& weights, const std::string& path);

}  // namespace judgelab::merge
