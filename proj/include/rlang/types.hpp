#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace rlang {

enum class TypeKind { Real, Boolean, Action, State, Object, List, Any };

/// Static type of an expression. Real and State carry a dimension where
/// dim == 0 means "not known statically".
struct ValueType {
    TypeKind kind = TypeKind::Any;
    std::size_t dim = 0;
    std::string class_name;
    std::shared_ptr<const ValueType> element;

    static ValueType real(std::size_t dim = 1);
    static ValueType boolean();
    static ValueType action();
    static ValueType state(std::size_t dim = 0);
    static ValueType object(std::string class_name);
    static ValueType list_of(ValueType element);
    static ValueType any();

    bool is_real() const { return kind == TypeKind::Real; }
    bool is_scalar() const { return kind == TypeKind::Real && dim == 1; }
    // Real vectors and states both behave as numeric vectors in arithmetic.
    bool is_numeric() const { return kind == TypeKind::Real || kind == TypeKind::State; }

    std::string str() const;
    friend bool operator==(const ValueType& a, const ValueType& b);
};

/// Parses a vocabulary type annotation: "real", "real[n]", "bool", "action", "state".
/// Returns false on unrecognized text.
bool parse_type_annotation(std::string_view text, ValueType& out);

/// Subset of {S, A, S'} an expression depends on.
class DomainSignature {
public:
    static constexpr std::uint8_t kS = 1;
    static constexpr std::uint8_t kA = 2;
    static constexpr std::uint8_t kSNext = 4;

    constexpr DomainSignature() = default;
    constexpr explicit DomainSignature(std::uint8_t bits) : bits_(bits) {}

    static constexpr DomainSignature none() { return DomainSignature(0); }
    static constexpr DomainSignature state() { return DomainSignature(kS); }
    static constexpr DomainSignature state_action() { return DomainSignature(kS | kA); }
    static constexpr DomainSignature all() { return DomainSignature(kS | kA | kSNext); }

    constexpr bool has_state() const { return bits_ & kS; }
    constexpr bool has_action() const { return bits_ & kA; }
    constexpr bool has_next_state() const { return bits_ & kSNext; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool subset_of(DomainSignature other) const { return (bits_ & ~other.bits_) == 0; }
    constexpr std::uint8_t bits() const { return bits_; }

    constexpr DomainSignature operator|(DomainSignature o) const { return DomainSignature(bits_ | o.bits_); }
    DomainSignature& operator|=(DomainSignature o) {
        bits_ |= o.bits_;
        return *this;
    }
    constexpr bool operator==(const DomainSignature&) const = default;

    std::string str() const;

private:
    std::uint8_t bits_ = 0;
};

}  // namespace rlang
