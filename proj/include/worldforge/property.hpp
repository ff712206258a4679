#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace worldforge {

// Alternative order matches PropertyType below.
using PropertyValue = std::variant<bool, std::int64_t, double, std::string>;

enum class PropertyType { Boolean, Integer, Real, Text };

PropertyType typeOf(const PropertyValue& v);
std::string_view propertyTypeName(PropertyType t);

// Engine-reserved keys carry a fixed type; everything else is game-defined.
//   isContainer/isMoveable/isOpenable/isOpen/isActivatable/isOn/isRoom -> Boolean
//   temperature/meltingPoint/boilingPoint                              -> Real
//   solidName/liquidName/gasName                                       -> Text
std::optional<PropertyType> reservedPropertyType(std::string_view key);

// Canonical text form shared by the pretty-printer and the state serializer.
// Reals print in shortest round-trip form and always keep a decimal point.
std::string formatPropertyValue(const PropertyValue& v);
std::string formatReal(double d);

} // namespace worldforge
