#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pfedgame {

/// Shape of one named tensor inside a flat parameter vector.
struct TensorShape {
    std::string name;
    std::vector<std::size_t> dims;

    std::size_t element_count() const;
    bool operator==(const TensorShape&) const = default;
};

/// Flat model parameters plus the layout describing how the values map to
/// tensors. All arithmetic on parameters happens on `values`; `layout` only
/// carries shape metadata for compatibility checks and serialization.
struct ParamVector {
    std::vector<double> values;
    std::vector<TensorShape> layout;

    std::size_t size() const { return values.size(); }

    /// Throws std::invalid_argument if the layout does not cover the values
    /// exactly or any value is NaN/Inf.
    void validate() const;

    /// Offset of the named tensor's first element in `values`.
    std::size_t offset_of(const std::string& name) const;

    bool same_layout(const ParamVector& other) const { return layout == other.layout; }
};

std::size_t layout_element_count(const std::vector<TensorShape>& layout);

// Checkpoint format: layout header (names + dimensions) followed by the raw
// values as little-endian IEEE-754 doubles.
void write_param_vector(std::ostream& os, const ParamVector& pv);
ParamVector read_param_vector(std::istream& is);

void save_param_vector(const std::string& path, const ParamVector& pv);
ParamVector load_param_vector(const std::string& path);

}  // namespace pfedgame
