#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "fovexp/expmv.hpp"
#include "fovexp/fem.hpp"

namespace fovexp::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kBoundSchema = "fovexp.bound/1";
inline constexpr const char* kApproximantSchema = "fovexp.approximant/1";
inline constexpr const char* kCertificateSchema = "fovexp.certificate/1";
inline constexpr const char* kParamsSchema = "fovexp.params/1";

Json rectangle_json(const Rectangle& r);
Rectangle rectangle_from_json(const Json& j);

/// {schema, raw, region, rel_margin, lhp_certified, kappa_tilde, delta, kappa_safe}
Json bound_json(const BoundingRectangle& rect, const CondEstimate& cond);

/// Poles, weights and gamma as [re, im] pairs, plus scaling, rectangle,
/// estimate, target, method and degree. Doubles round-trip exactly.
Json approximant_json(const CertifiedApproximant& a);
CertifiedApproximant approximant_from_json(const Json& j);

Json certificate_json(const ExpmvCertificate& c);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

/// Text mesh format:
///   fovexp-mesh 1
///   domain <square|star>
///   h_bar <value>
///   vertices <nv>        followed by nv lines "x y boundary(0|1)"
///   triangles <nt>       followed by nt lines "i j k" (0-based, counterclockwise)
///   outline <no>         followed by no lines "x y"
/// Lines starting with '#' are comments.
void write_mesh(std::ostream& out, const TriMesh& mesh);
void write_mesh(const std::filesystem::path& path, const TriMesh& mesh);
TriMesh read_mesh(std::istream& in);
TriMesh read_mesh(const std::filesystem::path& path);

}  // namespace fovexp::io
