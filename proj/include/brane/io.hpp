#ifndef BRANE_IO_HPP
#define BRANE_IO_HPP

// JSON form and class files.
//
//   {"version":1, "kind":"constant2", "coeffs":{"12":c, "13":c, ..., "34":c}}
//   {"version":1, "kind":"trigpoly2", "coeffs":{"12":[{"k":[k1,k2,k3,k4],"cos":a,"sin":b}, ...], ...}}
//   {"version":1, "kind":"class", "space":"t4"|"k3", "coeffs":[c1, ..., cn]}
//
// Missing slots are zero. Coordinates are (x1, y1, x2, y2).

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "brane/cohomology.hpp"
#include "brane/exterior4.hpp"
#include "brane/torus_forms.hpp"

namespace brane::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Schema violation or unreadable input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FileKind { Constant2, TrigPoly2, Class };

struct InputFile {
  std::string path;
  Json raw;
  FileKind kind = FileKind::Constant2;
  TrigPolyForm2<double> field;  // forms only
  SpaceName space = SpaceName::T4;
  std::vector<double> classCoeffs;  // classes only

  bool isForm() const { return kind != FileKind::Class; }
  bool isConstant() const { return kind == FileKind::Constant2 || (isForm() && field.isConstant()); }
};

inline const char* slotKey(std::size_t s) {
  static const char* keys[6] = {"12", "13", "14", "23", "24", "34"};
  return keys[s];
}

namespace detail {

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

inline int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<int>();
}

inline void rejectUnknownKeys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InputError(where + ": unknown key \"" + key + "\"");
  }
}

inline TrigPolyFn<double> parseModes(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected a list of modes");
  TrigPolyFn<double> fn;
  for (std::size_t m = 0; m < j.size(); ++m) {
    const std::string at = where + "[" + std::to_string(m) + "]";
    const Json& mode = j[m];
    if (!mode.is_object()) throw InputError(at + ": expected an object");
    rejectUnknownKeys(mode, {"k", "cos", "sin"}, at);
    if (!mode.contains("k") || !mode["k"].is_array() || mode["k"].size() != 4)
      throw InputError(at + ": \"k\" must be a list of 4 integers");
    Wave k{};
    for (std::size_t a = 0; a < 4; ++a) k[a] = integer(mode["k"][a], at + ".k");
    double c = mode.contains("cos") ? number(mode["cos"], at + ".cos") : 0.0;
    double s = mode.contains("sin") ? number(mode["sin"], at + ".sin") : 0.0;
    fn.add(k, c, s);
  }
  return fn;
}

}  // namespace detail

inline InputFile parseInput(const Json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path + ": top level must be an object");
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kFormatVersion)
    throw InputError(path + ": unsupported or missing \"version\" (expected 1)");
  if (!j.contains("kind") || !j["kind"].is_string()) throw InputError(path + ": missing \"kind\"");
  if (!j.contains("coeffs")) throw InputError(path + ": missing \"coeffs\"");

  InputFile in;
  in.path = path;
  in.raw = j;
  const std::string kind = j["kind"].get<std::string>();
  const Json& coeffs = j["coeffs"];

  if (kind == "constant2" || kind == "trigpoly2") {
    detail::rejectUnknownKeys(j, {"version", "kind", "coeffs"}, path);
    if (!coeffs.is_object()) throw InputError(path + ": \"coeffs\" must be an object keyed by 12..34");
    detail::rejectUnknownKeys(coeffs, {"12", "13", "14", "23", "24", "34"}, path + ".coeffs");
    in.kind = kind == "constant2" ? FileKind::Constant2 : FileKind::TrigPoly2;
    for (std::size_t s = 0; s < 6; ++s) {
      if (!coeffs.contains(slotKey(s))) continue;
      const std::string at = path + ".coeffs." + slotKey(s);
      if (in.kind == FileKind::Constant2) {
        double v = detail::number(coeffs[slotKey(s)], at);
        if (v != 0.0) in.field.c[s] = TrigPolyFn<double>::constant(v);
      } else {
        in.field.c[s] = detail::parseModes(coeffs[slotKey(s)], at);
      }
    }
    return in;
  }
  if (kind == "class") {
    detail::rejectUnknownKeys(j, {"version", "kind", "space", "coeffs"}, path);
    if (!j.contains("space") || !j["space"].is_string()) throw InputError(path + ": class files need \"space\"");
    const std::string sp = j["space"].get<std::string>();
    if (sp == "t4") in.space = SpaceName::T4;
    else if (sp == "k3") in.space = SpaceName::K3;
    else throw InputError(path + ": \"space\" must be t4 or k3");
    const std::size_t dim = in.space == SpaceName::T4 ? 6 : 22;
    if (!coeffs.is_array() || coeffs.size() != dim)
      throw InputError(path + ": \"coeffs\" must hold " + std::to_string(dim) + " numbers");
    in.kind = FileKind::Class;
    for (std::size_t i = 0; i < dim; ++i)
      in.classCoeffs.push_back(detail::number(coeffs[i], path + ".coeffs[" + std::to_string(i) + "]"));
    return in;
  }
  throw InputError(path + ": unknown kind \"" + kind + "\"");
}

inline InputFile readInput(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError(path + ": cannot open");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  return parseInput(j, path);
}

/// The constant form of a file; trigpoly files must have no oscillating modes.
inline Form2<double> constantForm(const InputFile& in) {
  if (!in.isForm()) throw InputError(in.path + ": expected a form file, got a class file");
  if (!in.field.isConstant()) throw InputError(in.path + ": expected a constant form");
  return in.field.constantPart();
}

/// The cohomology class of a file in the requested space. Form files are
/// accepted for the torus and mapped to their constant class.
template <class T = double>
CohClass<T> cohomologyClass(const InputFile& in, const SpacePtr<T>& space) {
  if (in.isForm()) {
    if (space->name != SpaceName::T4) throw InputError(in.path + ": form files describe the torus only");
    Form2<double> f = constantForm(in);
    Form2<T> ft;
    for (std::size_t s = 0; s < 6; ++s) ft.c[s] = from_double<T>(f.c[s]);
    return classOfConstantForm(ft, space);
  }
  if (in.space != space->name)
    throw InputError(in.path + ": class belongs to " + std::string(to_string(in.space)) + ", expected " +
                     std::string(to_string(space->name)));
  linalg::Vector<T> c;
  for (double x : in.classCoeffs) c.push_back(from_double<T>(x));
  return CohClass<T>(space, c);
}

template <class T>
Json formJson(const Form2<T>& f) {
  Json coeffs = Json::object();
  for (std::size_t s = 0; s < 6; ++s) coeffs[slotKey(s)] = to_double(f.c[s]);
  return Json{{"version", kFormatVersion}, {"kind", "constant2"}, {"coeffs", coeffs}};
}

inline Json formJson(const TrigPolyForm2<double>& f) {
  Json coeffs = Json::object();
  for (std::size_t s = 0; s < 6; ++s) {
    Json modes = Json::array();
    for (const auto& [k, m] : f.c[s].modes())
      modes.push_back(Json{{"k", k}, {"cos", m.cos_coef}, {"sin", m.sin_coef}});
    coeffs[slotKey(s)] = modes;
  }
  return Json{{"version", kFormatVersion}, {"kind", "trigpoly2"}, {"coeffs", coeffs}};
}

template <class T>
Json classJson(const CohClass<T>& c) {
  Json coeffs = Json::array();
  for (const auto& x : c.c) coeffs.push_back(to_double(x));
  return Json{{"version", kFormatVersion}, {"kind", "class"}, {"space", std::string(to_string(c.space->name))}, {"coeffs", coeffs}};
}

}  // namespace brane::io

#endif  // BRANE_IO_HPP
