#include "worldforge/property.hpp"

#include <array>
#include <charconv>
#include <string>

namespace worldforge {

PropertyType typeOf(const PropertyValue& v) {
  return static_cast<PropertyType>(v.index());
}

std::string_view propertyTypeName(PropertyType t) {
  switch (t) {
    case PropertyType::Boolean: return "boolean";
    case PropertyType::Integer: return "integer";
    case PropertyType::Real: return "real";
    case PropertyType::Text: return "text";
  }
  return "?";
}

std::optional<PropertyType> reservedPropertyType(std::string_view key) {
  static constexpr std::array<std::string_view, 7> booleans = {
      "isContainer", "isMoveable", "isOpenable", "isOpen",
      "isActivatable", "isOn", "isRoom"};
  static constexpr std::array<std::string_view, 3> reals = {
      "temperature", "meltingPoint", "boilingPoint"};
  static constexpr std::array<std::string_view, 3> texts = {
      "solidName", "liquidName", "gasName"};
  for (auto b : booleans)
    if (key == b) return PropertyType::Boolean;
  for (auto r : reals)
    if (key == r) return PropertyType::Real;
  for (auto t : texts)
    if (key == t) return PropertyType::Text;
  return std::nullopt;
}

std::string formatReal(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  std::string out(buf, res.ptr);
  // Keep reals lexically distinct from integers.
  if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
  return out;
}

std::string formatPropertyValue(const PropertyValue& v) {
  switch (typeOf(v)) {
    case PropertyType::Boolean:
      return std::get<bool>(v) ? "true" : "false";
    case PropertyType::Integer:
      return std::to_string(std::get<std::int64_t>(v));
    case PropertyType::Real:
      return formatReal(std::get<double>(v));
    case PropertyType::Text: {
      std::string out = "\"";
      for (char c : std::get<std::string>(v)) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\t': out += "\\t"; break;
          default: out += c;
        }
      }
      out += '"';
      return out;
    }
  }
  return "";
}

} // namespace worldforge
