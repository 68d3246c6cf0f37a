#include "plap/domain_io.hpp"

#include <fstream>
#include <sstream>

namespace plap {

namespace {

double number(const nlohmann::json& v, const std::string& field) {
  if (!v.is_number()) throw InputError(field + ": expected a number");
  return v.get<double>();
}

Point point(const nlohmann::json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) throw InputError(field + ": expected [x, y]");
  return {number(v[0], field), number(v[1], field)};
}

const nlohmann::json& require(const nlohmann::json& j, const std::string& field) {
  if (!j.contains(field)) throw InputError(field + ": missing");
  return j.at(field);
}

}  // namespace

Domain domain_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("domain: expected a JSON object");
  const auto& kind_field = require(j, "kind");
  if (!kind_field.is_string()) throw InputError("kind: expected a string");
  const DomainKind kind = domain_kind_from_string(kind_field.get<std::string>());
  switch (kind) {
    case DomainKind::Interval: {
      const auto& iv = require(j, "interval");
      if (!iv.is_array() || iv.size() != 2) throw InputError("interval: expected [a, b]");
      return Domain::interval(number(iv[0], "interval"), number(iv[1], "interval"));
    }
    case DomainKind::ConvexPolygon:
    case DomainKind::SimplePolygon: {
      const auto& vs = require(j, "vertices");
      if (!vs.is_array()) throw InputError("vertices: expected an array of [x, y] pairs");
      std::vector<Point> pts;
      for (const auto& v : vs) pts.push_back(point(v, "vertices"));
      return kind == DomainKind::ConvexPolygon ? Domain::convex_polygon(std::move(pts))
                                               : Domain::simple_polygon(std::move(pts));
    }
    case DomainKind::Disk:
      return Domain::disk(point(require(j, "center"), "center"), number(require(j, "radius"), "radius"));
  }
  throw InputError("kind: unsupported");
}

nlohmann::json domain_to_json(const Domain& domain) {
  nlohmann::json j;
  j["kind"] = to_string(domain.kind());
  switch (domain.kind()) {
    case DomainKind::Interval:
      j["interval"] = {domain.a(), domain.b()};
      break;
    case DomainKind::ConvexPolygon:
    case DomainKind::SimplePolygon:
      j["vertices"] = nlohmann::json::array();
      for (const Point& v : domain.vertices()) j["vertices"].push_back({v.x, v.y});
      break;
    case DomainKind::Disk:
      j["center"] = {domain.center().x, domain.center().y};
      j["radius"] = domain.radius();
      break;
  }
  return j;
}

Domain load_domain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!std::filesystem::is_regular_file(path) || !in) throw InputError("domain spec not found: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("domain spec " + path.string() + ": invalid JSON (" + e.what() + ")");
  }
  return domain_from_json(j);
}

}  // namespace plap
