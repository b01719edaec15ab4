#ifndef RELUCX_ERRORS_HPP
#define RELUCX_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relucx {

/// Input of the wrong shape (point dimension, sequence length, layer sizes).
class DimensionMismatch : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Architecture the builder cannot handle, e.g. fewer first-layer units than inputs.
class ArchitectureUnsupported : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// A region prefix passed to region_affine_maps contains a zero.
class NotTopDimensional : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/**
 * The network failed a detectable genericity/supertransversality condition
 * during vertex enumeration.  Carries enough context to emit a diagnostic.
 */
class DegenerateNetwork : public std::runtime_error
{
  public:
    enum class Kind
    {
        IllConditioned,
        NearZeroEvaluation,
        NoIncidentVertex
    };

    DegenerateNetwork(Kind kind, int layer, long node, double value, const std::string& detail)
        : std::runtime_error(detail), kind_(kind), layer_(layer), node_(node), value_(value)
    {
    }

    Kind kind() const { return kind_; }
    int layer() const { return layer_; }
    /// Flat node index involved, or -1 when not applicable.
    long node() const { return node_; }
    double value() const { return value_; }

    static const char* kind_name(Kind k)
    {
        switch (k) {
            case Kind::IllConditioned: return "ill_conditioned";
            case Kind::NearZeroEvaluation: return "near_zero_evaluation";
            case Kind::NoIncidentVertex: return "no_incident_vertex";
        }
        return "unknown";
    }

  private:
    Kind kind_;
    int layer_;
    long node_;
    double value_;
};

/// Two discoveries of the same sign sequence landed at different points.
class DuplicateMismatch : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A cell list is not closed under faces or not pure.
class ClosureViolation : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Boundary maps do not compose to zero.
class BoundaryInconsistent : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed model/complex file; the message names the offending field.
class FormatError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}   // namespace relucx

#endif
